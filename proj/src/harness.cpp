#include "tunedp/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "csv_util.hpp"
#include "tunedp/datagen.hpp"
#include "tunedp/learners.hpp"
#include "tunedp/stats.hpp"

namespace tunedp {

namespace {

using detail::csv_escape;
using detail::format_double;
using detail::split_csv_line;

std::uint64_t fnv1a(std::uint64_t h, const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001B3ULL;
    }
    return h;
}

std::vector<bool> labels_of(const Release& release) {
    std::vector<bool> labels;
    labels.reserve(release.size());
    for (const Instance& inst : release.instances) labels.push_back(inst.label);
    return labels;
}

void fill_test_scores(RunRecord& record, const Model& model,
                      const Release& test) {
    const ConfusionMatrix cm = confusion(labels_of(test), predict_all(model, test));
    record.pd = score(Goal::PD, cm);
    record.pf = score(Goal::PF, cm);
    record.prec = score(Goal::PREC, cm);
    record.f_measure = score(Goal::F, cm);
}

std::string config_values_json(const Config& config) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [name, value] : config.values) j[name] = value;
    return j.dump();
}

} // namespace

std::uint64_t record_seed(std::uint64_t plan_seed, const std::string& triple,
                          Learner learner, std::optional<Goal> goal, bool tuned,
                          int repeat) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    h = fnv1a(h, triple.data(), triple.size());
    const unsigned char tag[4] = {
        static_cast<unsigned char>(learner),
        static_cast<unsigned char>(goal ? static_cast<int>(*goal) : 0xEE),
        static_cast<unsigned char>(tuned ? 1 : 0),
        static_cast<unsigned char>(repeat & 0xFF)};
    h = fnv1a(h, tag, sizeof(tag));
    return derive_seed(plan_seed ^ h, static_cast<std::uint64_t>(repeat));
}

RunRecord run_tuned(const ExperimentTriple& triple, Learner learner, Goal goal,
                    const ExperimentPlan& plan, int repeat) {
    const auto started = std::chrono::steady_clock::now();

    RunRecord record;
    record.triple = triple.name;
    record.learner = learner;
    record.goal = goal;
    record.tuned = true;
    record.repeat = repeat;
    record.seed = record_seed(plan.seed, triple.name, learner, goal, true, repeat);
    record.np = plan.np;
    record.life = plan.life;
    record.de_f = plan.f;
    record.de_cr = plan.cr;

    DEConfig de;
    de.np = plan.np;
    de.life = plan.life;
    de.f = plan.f;
    de.cr = plan.cr;
    de.goal = goal;
    de.seed = record.seed;
    de.threads = 1;

    const TuneResult tuned = de_tune(learner, triple.train, triple.tune, de);
    record.evaluations = tuned.evaluations;
    record.generations = tuned.generations;
    record.tuning_best = tuned.best.score;
    // The default config entered the initial population as candidate 0.
    record.tuning_default =
        tuning_score(default_config(learner), triple.train, triple.tune, goal,
                     derive_seed(de.seed, 0));

    // Rebuild the winning model with the learner seed it was scored under.
    const Model model =
        train(tuned.best.config, triple.train,
              derive_seed(de.seed, tuned.best.evaluated_at));
    fill_test_scores(record, model, triple.test);
    record.config_json = config_values_json(tuned.best.config);
    record.features = features_used(model);

    record.walltime_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
            .count();
    return record;
}

RunRecord run_untuned(const ExperimentTriple& triple, Learner learner,
                      const ExperimentPlan& plan, int repeat) {
    const auto started = std::chrono::steady_clock::now();

    RunRecord record;
    record.triple = triple.name;
    record.learner = learner;
    record.goal = std::nullopt;
    record.tuned = false;
    record.repeat = repeat;
    record.seed =
        record_seed(plan.seed, triple.name, learner, std::nullopt, false, repeat);
    record.np = plan.np;
    record.life = plan.life;
    record.de_f = plan.f;
    record.de_cr = plan.cr;
    record.evaluations = 0;
    record.generations = 0;

    const Release merged = merge_releases(triple.train, triple.tune);
    const Config config = default_config(learner);
    const Model model = train(config, merged, derive_seed(record.seed, 0));
    fill_test_scores(record, model, triple.test);
    record.config_json = config_values_json(config);
    record.features = features_used(model);

    record.walltime_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
            .count();
    return record;
}

std::vector<RunRecord> run_plan(const std::vector<ExperimentTriple>& triples,
                                const ExperimentPlan& plan) {
    if (plan.repeats < 1) {
        throw std::invalid_argument("run_plan: repeats must be >= 1");
    }
    std::vector<const ExperimentTriple*> selected;
    if (plan.triples.empty()) {
        for (const auto& t : triples) selected.push_back(&t);
    } else {
        for (const std::string& name : plan.triples) {
            const auto it =
                std::find_if(triples.begin(), triples.end(),
                             [&](const ExperimentTriple& t) {
                                 return t.name == name;
                             });
            if (it == triples.end()) {
                throw std::invalid_argument("run_plan: unknown triple " + name);
            }
            selected.push_back(&*it);
        }
    }

    struct Cell {
        const ExperimentTriple* triple;
        Learner learner;
        std::optional<Goal> goal; // nullopt = untuned cell
        int repeat;
    };
    std::vector<Cell> cells;
    for (const ExperimentTriple* triple : selected) {
        for (Learner learner : plan.learners) {
            const bool tunable = !param_space(learner).empty();
            for (int repeat = 0; repeat < plan.repeats; ++repeat) {
                cells.push_back({triple, learner, std::nullopt, repeat});
                if (!tunable) continue;
                for (Goal goal : plan.goals) {
                    cells.push_back({triple, learner, goal, repeat});
                }
            }
        }
    }

    std::vector<RunRecord> records(cells.size());
    const auto run_cell = [&](std::size_t i) {
        const Cell& cell = cells[i];
        records[i] = cell.goal
                         ? run_tuned(*cell.triple, cell.learner, *cell.goal,
                                     plan, cell.repeat)
                         : run_untuned(*cell.triple, cell.learner, plan,
                                       cell.repeat);
    };

    const int workers = std::min<int>(plan.threads, static_cast<int>(cells.size()));
    if (workers <= 1) {
        for (std::size_t i = 0; i < cells.size(); ++i) run_cell(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int t = 0; t < workers; ++t) {
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < cells.size();
                     i = next.fetch_add(1)) {
                    run_cell(i);
                }
            });
        }
        for (auto& t : pool) t.join();
    }
    return records;
}

namespace {

constexpr const char* kRecordHeader =
    "triple,learner,goal,tuned,repeat,seed,np,life,de_f,de_cr,evaluations,"
    "generations,pd,pf,prec,f_measure,tuning_best,tuning_default,walltime_s,"
    "features,config";

std::string join_features(const std::set<std::string>& features) {
    std::string out;
    for (const auto& f : features) {
        if (!out.empty()) out += ';';
        out += f;
    }
    return out;
}

} // namespace

void write_records_csv(const std::vector<RunRecord>& records,
                       const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << kRecordHeader << '\n';
    for (const RunRecord& r : records) {
        out << csv_escape(r.triple) << ',' << learner_name(r.learner) << ','
            << (r.goal ? goal_name(*r.goal) : "") << ',' << (r.tuned ? 1 : 0)
            << ',' << r.repeat << ',' << r.seed << ',' << r.np << ',' << r.life
            << ',' << format_double(r.de_f) << ',' << format_double(r.de_cr)
            << ',' << r.evaluations << ',' << r.generations << ','
            << format_double(r.pd) << ',' << format_double(r.pf) << ','
            << format_double(r.prec) << ',' << format_double(r.f_measure) << ','
            << format_double(r.tuning_best) << ','
            << format_double(r.tuning_default) << ','
            << format_double(r.walltime_s) << ','
            << csv_escape(join_features(r.features)) << ','
            << csv_escape(r.config_json) << '\n';
    }
}

std::vector<RunRecord> read_records_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) {
        throw std::runtime_error(path.string() + ": empty records file");
    }
    std::vector<RunRecord> records;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 21) {
            throw std::runtime_error(path.string() + ": malformed record line");
        }
        RunRecord r;
        r.triple = f[0];
        r.learner = learner_from_name(f[1]);
        if (!f[2].empty()) r.goal = goal_from_name(f[2]);
        r.tuned = f[3] == "1";
        r.repeat = std::stoi(f[4]);
        r.seed = std::stoull(f[5]);
        r.np = std::stoi(f[6]);
        r.life = std::stoi(f[7]);
        r.de_f = std::stod(f[8]);
        r.de_cr = std::stod(f[9]);
        r.evaluations = std::stoull(f[10]);
        r.generations = std::stoi(f[11]);
        r.pd = std::stod(f[12]);
        r.pf = std::stod(f[13]);
        r.prec = std::stod(f[14]);
        r.f_measure = std::stod(f[15]);
        r.tuning_best = std::stod(f[16]);
        r.tuning_default = std::stod(f[17]);
        r.walltime_s = std::stod(f[18]);
        std::stringstream features(f[19]);
        std::string feature;
        while (std::getline(features, feature, ';')) {
            if (!feature.empty()) r.features.insert(feature);
        }
        r.config_json = f[20];
        records.push_back(std::move(r));
    }
    return records;
}

std::string display_name(const std::string& triple_name,
                         const std::vector<std::string>& all_names) {
    const auto pos = triple_name.rfind('V');
    if (pos == std::string::npos) return triple_name;
    const std::string project = triple_name.substr(0, pos);
    int siblings = 0;
    for (const auto& name : all_names) {
        if (name.size() > project.size() &&
            name.compare(0, project.size(), project) == 0 &&
            name[project.size()] == 'V') {
            ++siblings;
        }
    }
    return siblings == 1 ? project : triple_name;
}

namespace {

// Per-cell aggregation: medians over repeats of one measure.
struct CellKey {
    std::string triple;
    int learner;
    int goal; // -1 = untuned
    bool operator<(const CellKey& o) const {
        return std::tie(triple, learner, goal) <
               std::tie(o.triple, o.learner, o.goal);
    }
};

using CellMap = std::map<CellKey, std::vector<const RunRecord*>>;

CellMap group_cells(const std::vector<RunRecord>& records) {
    CellMap cells;
    for (const RunRecord& r : records) {
        const CellKey key{r.triple, static_cast<int>(r.learner),
                          r.goal ? static_cast<int>(*r.goal) : -1};
        cells[key].push_back(&r);
    }
    return cells;
}

double measure_of(const RunRecord& r, Goal goal) {
    switch (goal) {
    case Goal::PD: return r.pd;
    case Goal::PF: return r.pf;
    case Goal::PREC: return r.prec;
    case Goal::F: return r.f_measure;
    }
    return 0.0;
}

std::vector<double> cell_values(const CellMap& cells, const CellKey& key,
                                Goal measure) {
    std::vector<double> values;
    const auto it = cells.find(key);
    if (it == cells.end()) return values;
    for (const RunRecord* r : it->second) values.push_back(measure_of(*r, measure));
    return values;
}

std::vector<std::string> sorted_triples(const std::vector<RunRecord>& records) {
    std::vector<std::string> names;
    for (const RunRecord& r : records) {
        if (std::find(names.begin(), names.end(), r.triple) == names.end()) {
            names.push_back(r.triple);
        }
    }
    std::sort(names.begin(), names.end());
    return names;
}

std::vector<Learner> learners_present(const std::vector<RunRecord>& records) {
    std::vector<Learner> order = {Learner::WHERE, Learner::CART,
                                  Learner::RANDOM_FOREST,
                                  Learner::LOGISTIC_REGRESSION};
    std::vector<Learner> present;
    for (Learner l : order) {
        if (std::any_of(records.begin(), records.end(),
                        [&](const RunRecord& r) { return r.learner == l; })) {
            present.push_back(l);
        }
    }
    return present;
}

std::vector<Goal> goals_present(const std::vector<RunRecord>& records) {
    std::vector<Goal> order = {Goal::PD, Goal::PF, Goal::PREC, Goal::F};
    std::vector<Goal> present;
    for (Goal g : order) {
        if (std::any_of(records.begin(), records.end(), [&](const RunRecord& r) {
                return r.tuned && r.goal == g;
            })) {
            present.push_back(g);
        }
    }
    return present;
}

// One score table: per triple, a default and a goal-tuned column for
// each learner; the per-row best is flagged in the markdown rendering.
void emit_score_table(const std::vector<RunRecord>& records,
                      const CellMap& cells, Goal goal,
                      const std::filesystem::path& csv_path,
                      const std::filesystem::path& md_path) {
    const auto triples = sorted_triples(records);
    const auto learners = learners_present(records);

    struct Column {
        std::string header;
        Learner learner;
        int goal; // -1 default mode
    };
    std::vector<Column> columns;
    for (Learner l : learners) {
        columns.push_back({std::string(learner_name(l)) + "_default", l, -1});
        if (!param_space(l).empty()) {
            columns.push_back({std::string(learner_name(l)) + "_tuned", l,
                               static_cast<int>(goal)});
        }
    }

    std::ofstream csv(csv_path);
    if (!csv) throw std::runtime_error("cannot write " + csv_path.string());
    std::ofstream md(md_path);
    if (!md) throw std::runtime_error("cannot write " + md_path.string());

    csv << "dataset";
    for (const auto& c : columns) csv << ',' << c.header;
    csv << '\n';
    md << "| dataset |";
    for (const auto& c : columns) md << ' ' << c.header << " |";
    md << "\n|---|";
    for (std::size_t i = 0; i < columns.size(); ++i) md << "---|";
    md << '\n';

    for (const std::string& triple : triples) {
        std::vector<double> row;
        for (const auto& c : columns) {
            const auto values =
                cell_values(cells, {triple, static_cast<int>(c.learner), c.goal},
                            goal);
            row.push_back(values.empty() ? std::nan("") : median(values));
        }
        csv << csv_escape(display_name(triple, triples));
        for (double v : row) {
            csv << ',' << (std::isnan(v) ? std::string() : format_double(v));
        }
        csv << '\n';

        double best = -1.0;
        for (double v : row) {
            if (!std::isnan(v)) best = std::max(best, v);
        }
        md << "| " << display_name(triple, triples) << " |";
        for (double v : row) {
            if (std::isnan(v)) {
                md << "  |";
                continue;
            }
            const int pct = static_cast<int>(std::lround(100.0 * v));
            if (v == best) {
                md << " **" << pct << "** |";
            } else {
                md << ' ' << pct << " |";
            }
        }
        md << '\n';
    }
}

void emit_delta_series(const std::vector<RunRecord>& records,
                       const CellMap& cells, Goal goal,
                       const std::filesystem::path& path) {
    const auto triples = sorted_triples(records);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "learner,rank,delta,dataset\n";
    for (Learner l : learners_present(records)) {
        if (param_space(l).empty()) continue;
        SampleSeries tuned{std::string(learner_name(l)) + "_tuned", {}, {}};
        SampleSeries untuned{std::string(learner_name(l)) + "_default", {}, {}};
        for (const std::string& triple : triples) {
            const auto tv = cell_values(
                cells, {triple, static_cast<int>(l), static_cast<int>(goal)},
                goal);
            const auto uv =
                cell_values(cells, {triple, static_cast<int>(l), -1}, goal);
            if (tv.empty() || uv.empty()) continue;
            tuned.values.push_back(median(tv));
            tuned.tags.push_back(triple);
            untuned.values.push_back(median(uv));
            untuned.tags.push_back(triple);
        }
        if (tuned.values.empty()) continue;
        // Sorted deltas, but keep the originating dataset next to each.
        std::vector<std::pair<double, std::string>> deltas;
        for (std::size_t i = 0; i < tuned.values.size(); ++i) {
            deltas.emplace_back(tuned.values[i] - untuned.values[i],
                                tuned.tags[i]);
        }
        std::sort(deltas.begin(), deltas.end());
        for (std::size_t i = 0; i < deltas.size(); ++i) {
            out << learner_name(l) << ',' << i << ','
                << format_double(deltas[i].first) << ','
                << csv_escape(deltas[i].second) << '\n';
        }
    }
}

void emit_features_table(const std::vector<RunRecord>& records,
                         const std::filesystem::path& path) {
    const bool any_where =
        std::any_of(records.begin(), records.end(), [](const RunRecord& r) {
            return r.learner == Learner::WHERE;
        });
    if (!any_where) return;

    const auto triples = sorted_triples(records);
    const auto goals = goals_present(records);

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "dataset,default_features";
    for (Goal g : goals) out << ",tuned_" << goal_name(g) << "_features";
    out << '\n';
    for (const std::string& triple : triples) {
        const auto pick = [&](std::optional<Goal> goal) -> std::string {
            for (const RunRecord& r : records) {
                if (r.triple == triple && r.learner == Learner::WHERE &&
                    r.goal == goal && r.repeat == 0) {
                    return join_features(r.features);
                }
            }
            return "";
        };
        out << csv_escape(display_name(triple, triples)) << ','
            << csv_escape(pick(std::nullopt));
        for (Goal g : goals) out << ',' << csv_escape(pick(g));
        out << '\n';
    }
}

void emit_evaluations_table(const std::vector<RunRecord>& records,
                            const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "dataset,learner,goal,np,median_evaluations,min_evaluations,"
           "max_evaluations\n";
    const auto triples = sorted_triples(records);
    std::map<std::tuple<std::string, int, int, int>, std::vector<double>> cells;
    for (const RunRecord& r : records) {
        if (!r.tuned) continue;
        cells[{r.triple, static_cast<int>(r.learner),
               static_cast<int>(*r.goal), r.np}]
            .push_back(static_cast<double>(r.evaluations));
    }
    for (const auto& [key, values] : cells) {
        const auto& [triple, learner, goal, np] = key;
        out << csv_escape(display_name(triple, triples)) << ','
            << learner_name(static_cast<Learner>(learner)) << ','
            << goal_name(static_cast<Goal>(goal)) << ',' << np << ','
            << format_double(median(values)) << ','
            << format_double(*std::min_element(values.begin(), values.end()))
            << ','
            << format_double(*std::max_element(values.begin(), values.end()))
            << '\n';
    }
}

void emit_runtime_table(const std::vector<RunRecord>& records,
                        const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "dataset,learner,mode,goal,median_seconds\n";
    const auto triples = sorted_triples(records);
    std::map<std::tuple<std::string, int, bool, int>, std::vector<double>> cells;
    for (const RunRecord& r : records) {
        cells[{r.triple, static_cast<int>(r.learner), r.tuned,
               r.goal ? static_cast<int>(*r.goal) : -1}]
            .push_back(r.walltime_s);
    }
    for (const auto& [key, values] : cells) {
        const auto& [triple, learner, tuned, goal] = key;
        out << csv_escape(display_name(triple, triples)) << ','
            << learner_name(static_cast<Learner>(learner)) << ','
            << (tuned ? "tuned" : "default") << ','
            << (goal >= 0 ? goal_name(static_cast<Goal>(goal)) : "") << ','
            << format_double(median(values)) << '\n';
    }
}

void emit_ks_summary(const std::vector<RunRecord>& records, const CellMap& cells,
                     const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "goal,series_a,series_b,n,statistic,threshold,verdict\n";
    const auto triples = sorted_triples(records);
    for (Goal goal : goals_present(records)) {
        SampleSeries cart{"cart_tuned", {}, {}};
        SampleSeries rf{"rf_tuned", {}, {}};
        for (const std::string& triple : triples) {
            const auto cv = cell_values(cells,
                                        {triple,
                                         static_cast<int>(Learner::CART),
                                         static_cast<int>(goal)},
                                        goal);
            const auto rv =
                cell_values(cells,
                            {triple, static_cast<int>(Learner::RANDOM_FOREST),
                             static_cast<int>(goal)},
                            goal);
            if (cv.empty() || rv.empty()) continue;
            cart.values.push_back(median(cv));
            cart.tags.push_back(triple);
            rf.values.push_back(median(rv));
            rf.tags.push_back(triple);
        }
        if (cart.values.empty()) continue;
        const double stat = ks_statistic(cart, rf);
        const double threshold =
            ks_threshold(cart.values.size(), rf.values.size());
        out << goal_name(goal) << ",cart_tuned,rf_tuned," << cart.values.size()
            << ',' << format_double(stat) << ',' << format_double(threshold)
            << ',' << (stat < threshold ? "not_different" : "different")
            << '\n';
    }
}

// Emitted only when the records span several population sizes: compares
// score distributions between np settings per learner and goal.
void emit_np_comparison(const std::vector<RunRecord>& records,
                        const std::filesystem::path& path) {
    std::vector<int> nps;
    for (const RunRecord& r : records) {
        if (r.tuned && std::find(nps.begin(), nps.end(), r.np) == nps.end()) {
            nps.push_back(r.np);
        }
    }
    if (nps.size() < 2) return;
    std::sort(nps.begin(), nps.end());

    const auto triples = sorted_triples(records);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "goal,learner,np_a,np_b,n,statistic,threshold,verdict\n";
    for (Goal goal : goals_present(records)) {
        for (Learner learner : learners_present(records)) {
            if (param_space(learner).empty()) continue;
            const auto series_for = [&](int np) {
                SampleSeries s{std::to_string(np), {}, {}};
                for (const std::string& triple : triples) {
                    std::vector<double> values;
                    for (const RunRecord& r : records) {
                        if (r.tuned && r.triple == triple &&
                            r.learner == learner && r.goal == goal &&
                            r.np == np) {
                            values.push_back(measure_of(r, goal));
                        }
                    }
                    if (!values.empty()) {
                        s.values.push_back(median(values));
                        s.tags.push_back(triple);
                    }
                }
                return s;
            };
            for (std::size_t i = 0; i < nps.size(); ++i) {
                for (std::size_t j = i + 1; j < nps.size(); ++j) {
                    const SampleSeries a = series_for(nps[i]);
                    const SampleSeries b = series_for(nps[j]);
                    if (a.values.empty() || b.values.empty()) continue;
                    const double stat = ks_statistic(a, b);
                    const double threshold =
                        ks_threshold(a.values.size(), b.values.size());
                    out << goal_name(goal) << ',' << learner_name(learner)
                        << ',' << nps[i] << ',' << nps[j] << ','
                        << a.values.size() << ',' << format_double(stat) << ','
                        << format_double(threshold) << ','
                        << (stat < threshold ? "not_different" : "different")
                        << '\n';
                }
            }
        }
    }
}

void emit_params_distribution(const std::vector<RunRecord>& records,
                              const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "dataset,learner,goal,repeat,parameter,value\n";
    const auto triples = sorted_triples(records);
    for (const RunRecord& r : records) {
        if (!r.tuned) continue;
        const nlohmann::json config = nlohmann::json::parse(r.config_json);
        for (const auto& [name, value] : config.items()) {
            out << csv_escape(display_name(r.triple, triples)) << ','
                << learner_name(r.learner) << ',' << goal_name(*r.goal) << ','
                << r.repeat << ',' << name << ','
                << format_double(value.get<double>()) << '\n';
        }
    }
}

} // namespace

void emit_reports(const std::vector<RunRecord>& records,
                  const std::filesystem::path& out_dir) {
    if (records.empty()) {
        throw std::invalid_argument("emit_reports: no records");
    }
    std::filesystem::create_directories(out_dir);
    const CellMap cells = group_cells(records);

    write_records_csv(records, out_dir / "records.csv");
    emit_score_table(records, cells, Goal::PREC, out_dir / "precision_table.csv",
                     out_dir / "precision_table.md");
    emit_score_table(records, cells, Goal::F, out_dir / "f_table.csv",
                     out_dir / "f_table.md");
    emit_delta_series(records, cells, Goal::PREC, out_dir / "delta_prec.csv");
    emit_delta_series(records, cells, Goal::F, out_dir / "delta_f.csv");
    emit_features_table(records, out_dir / "features_table.csv");
    emit_evaluations_table(records, out_dir / "evaluations_table.csv");
    emit_runtime_table(records, out_dir / "runtime_table.csv");
    emit_ks_summary(records, cells, out_dir / "ks_summary.csv");
    emit_np_comparison(records, out_dir / "np_comparison.csv");
    emit_params_distribution(records, out_dir / "params_distribution.csv");
}

ValidationResult validate_counts(const std::vector<ExperimentTriple>& triples) {
    ValidationResult result;
    result.ok = true;
    std::ostringstream report;

    const auto check = [&](const std::string& what, const Release& release,
                           const ReleaseShape& expected) {
        const int defective = static_cast<int>(release.defective_count());
        const int total = static_cast<int>(release.size());
        ++result.checked;
        if (defective == expected.defective && total == expected.total) {
            report << "  ok " << what << ": " << defective << "/" << total
                   << "\n";
        } else {
            result.ok = false;
            report << "  MISMATCH " << what << ": expected "
                   << expected.defective << "/" << expected.total << ", got "
                   << defective << "/" << total << "\n";
        }
    };

    std::map<std::string, const ExperimentTriple*> by_name;
    for (const auto& t : triples) by_name[t.name] = &t;
    std::size_t matched = 0;

    for (const ProjectShape& project : promise_release_catalog()) {
        const int n_triples = static_cast<int>(project.releases.size()) - 2;
        report << project.name << ":\n";
        for (int i = 0; i < n_triples; ++i) {
            const std::string name = project.name + "V" + std::to_string(i);
            const auto it = by_name.find(name);
            if (it == by_name.end()) {
                result.ok = false;
                report << "  MISSING triple " << name << "\n";
                continue;
            }
            ++matched;
            const ExperimentTriple& t = *it->second;
            check(name + " train", t.train, project.releases[i]);
            check(name + " tune", t.tune, project.releases[i + 1]);
            check(name + " test", t.test, project.releases[i + 2]);
        }
    }
    if (matched != by_name.size()) {
        result.ok = false;
        report << "unexpected extra triples: " << (by_name.size() - matched)
               << "\n";
    }
    report << (result.ok ? "all release counts match" : "validation FAILED")
           << " (" << result.checked << " release checks)\n";
    result.report = report.str();
    return result;
}

} // namespace tunedp
