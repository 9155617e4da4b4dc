#include <doctest.h>

#include "tunedp/datagen.hpp"
#include "tunedp/harness.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

using namespace tunedp;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
    static fs::path dir = [] {
        auto d = fs::temp_directory_path() /
                 ("tunedp-harness-test-" + std::to_string(std::random_device{}()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

Release small_release(const std::string& project, int version,
                      std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 100.0);
    Release r;
    r.project = project;
    r.version_index = version;
    for (int i = 0; i < 30; ++i) {
        Instance inst;
        for (auto& m : inst.metrics) m = unif(rng);
        inst.defect_count = inst.metrics[0] > 55.0 ? 1 : 0;
        inst.label = inst.defect_count >= 1;
        r.instances.push_back(inst);
    }
    return r;
}

ExperimentTriple small_triple(const std::string& project, std::uint64_t seed) {
    ExperimentTriple t;
    t.name = project + "V0";
    t.train = small_release(project, 0, seed);
    t.tune = small_release(project, 1, seed + 1);
    t.test = small_release(project, 2, seed + 2);
    return t;
}

ExperimentPlan small_plan() {
    ExperimentPlan plan;
    plan.learners = {Learner::CART, Learner::LOGISTIC_REGRESSION};
    plan.goals = {Goal::PREC};
    plan.repeats = 2;
    plan.np = 6;
    plan.life = 2;
    plan.seed = 5;
    plan.threads = 1;
    return plan;
}

bool same_ignoring_time(const RunRecord& a, const RunRecord& b) {
    return a.triple == b.triple && a.learner == b.learner && a.goal == b.goal &&
           a.tuned == b.tuned && a.repeat == b.repeat && a.seed == b.seed &&
           a.np == b.np && a.life == b.life && a.de_f == b.de_f &&
           a.de_cr == b.de_cr && a.evaluations == b.evaluations &&
           a.generations == b.generations && a.pd == b.pd && a.pf == b.pf &&
           a.prec == b.prec && a.f_measure == b.f_measure &&
           a.tuning_best == b.tuning_best &&
           a.tuning_default == b.tuning_default &&
           a.config_json == b.config_json && a.features == b.features;
}

// A synthetic tuned record with a believable shape for report emission.
RunRecord fake_tuned(const std::string& triple, Learner learner, Goal goal,
                     int repeat, double prec, double f) {
    RunRecord r;
    r.triple = triple;
    r.learner = learner;
    r.goal = goal;
    r.tuned = true;
    r.repeat = repeat;
    r.seed = 100 + repeat;
    r.np = 10;
    r.life = 5;
    r.de_f = 0.75;
    r.de_cr = 0.3;
    r.evaluations = 60;
    r.generations = 5;
    r.pd = 0.5;
    r.pf = 0.2;
    r.prec = prec;
    r.f_measure = f;
    r.tuning_best = prec;
    r.tuning_default = prec / 2;
    r.config_json = R"({"max_feature":0.5,"threshold":0.4})";
    r.walltime_s = 0.01;
    return r;
}

RunRecord fake_untuned(const std::string& triple, Learner learner, int repeat,
                       double prec, double f) {
    RunRecord r = fake_tuned(triple, learner, Goal::PREC, repeat, prec, f);
    r.goal = std::nullopt;
    r.tuned = false;
    r.evaluations = 0;
    r.generations = 0;
    r.tuning_best = 0;
    r.tuning_default = 0;
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    return std::string((std::istreambuf_iterator<char>(in)),
                       std::istreambuf_iterator<char>());
}

} // namespace

TEST_CASE("record seeds separate every cell coordinate") {
    std::set<std::uint64_t> seen;
    int produced = 0;
    for (const std::string& triple : {"antV0", "antV1", "camelV2"}) {
        for (Learner l : {Learner::WHERE, Learner::CART, Learner::RANDOM_FOREST,
                          Learner::LOGISTIC_REGRESSION}) {
            for (int g = -1; g < 2; ++g) {
                const std::optional<Goal> goal =
                    g < 0 ? std::nullopt : std::optional<Goal>(Goal(g + 2));
                for (bool tuned : {false, true}) {
                    for (int repeat = 0; repeat < 3; ++repeat) {
                        seen.insert(
                            record_seed(1, triple, l, goal, tuned, repeat));
                        ++produced;
                    }
                }
            }
        }
    }
    CHECK(seen.size() == std::size_t(produced)); // no collisions across cells
    CHECK(record_seed(1, "antV0", Learner::CART, Goal::PREC, true, 0) ==
          record_seed(1, "antV0", Learner::CART, Goal::PREC, true, 0));
    CHECK(record_seed(1, "antV0", Learner::CART, Goal::PREC, true, 0) !=
          record_seed(2, "antV0", Learner::CART, Goal::PREC, true, 0));
}

TEST_CASE("a plan runs one untuned cell plus one tuned cell per goal") {
    const std::vector<ExperimentTriple> triples = {small_triple("aa", 1),
                                                   small_triple("bb", 50)};
    const ExperimentPlan plan = small_plan();
    const auto records = run_plan(triples, plan);

    // 2 triples x 2 repeats x (CART untuned + CART/prec tuned + LR untuned)
    REQUIRE(records.size() == 12);

    using Key = std::tuple<std::string, int, int, bool, int>;
    std::set<Key> keys;
    int tuned_cart = 0, untuned_cart = 0, untuned_lr = 0;
    std::set<std::uint64_t> seeds;
    for (const RunRecord& r : records) {
        keys.insert({r.triple, int(r.learner), r.goal ? int(*r.goal) : -1,
                     r.tuned, r.repeat});
        seeds.insert(r.seed);
        CHECK(r.seed == record_seed(plan.seed, r.triple, r.learner, r.goal,
                                    r.tuned, r.repeat));
        CHECK(r.pd >= 0.0);
        CHECK(r.pd <= 1.0);
        CHECK(r.pf >= 0.0);
        CHECK(r.pf <= 1.0);
        CHECK(r.prec >= 0.0);
        CHECK(r.prec <= 1.0);
        CHECK(r.f_measure >= 0.0);
        CHECK(r.f_measure <= 1.0);
        if (r.pd > 0.0 && r.prec > 0.0) {
            CHECK(r.f_measure ==
                  doctest::Approx(2 * r.pd * r.prec / (r.pd + r.prec)));
        } else {
            CHECK(r.f_measure == 0.0);
        }
        if (r.tuned) {
            REQUIRE(r.goal.has_value());
            CHECK(r.learner == Learner::CART);
            ++tuned_cart;
            CHECK(r.evaluations ==
                  std::uint64_t(plan.np) * std::uint64_t(r.generations + 1));
            CHECK(r.generations >= plan.life);
            CHECK(r.tuning_best >= r.tuning_default);
            CHECK_FALSE(r.config_json.empty());
        } else {
            CHECK_FALSE(r.goal.has_value());
            CHECK(r.evaluations == 0);
            if (r.learner == Learner::CART) ++untuned_cart;
            if (r.learner == Learner::LOGISTIC_REGRESSION) ++untuned_lr;
        }
    }
    CHECK(keys.size() == 12);  // every cell unique
    CHECK(seeds.size() == 12); // every record has its own seed
    CHECK(tuned_cart == 4);
    CHECK(untuned_cart == 4);
    CHECK(untuned_lr == 4);
}

TEST_CASE("plans select triples by name and reject unknown ones") {
    const std::vector<ExperimentTriple> triples = {small_triple("aa", 1),
                                                   small_triple("bb", 50)};
    ExperimentPlan plan = small_plan();
    plan.repeats = 1;
    plan.triples = {"bbV0"};
    const auto records = run_plan(triples, plan);
    for (const RunRecord& r : records) CHECK(r.triple == "bbV0");
    REQUIRE(records.size() == 3);

    plan.triples = {"zzV9"};
    CHECK_THROWS_AS(run_plan(triples, plan), std::invalid_argument);
    plan.triples.clear();
    plan.repeats = 0;
    CHECK_THROWS_AS(run_plan(triples, plan), std::invalid_argument);
}

TEST_CASE("scheduling across threads changes nothing but wall time") {
    const std::vector<ExperimentTriple> triples = {small_triple("aa", 1),
                                                   small_triple("bb", 50)};
    ExperimentPlan plan = small_plan();
    const auto base = run_plan(triples, plan);
    const auto again = run_plan(triples, plan);
    plan.threads = 3;
    const auto threaded = run_plan(triples, plan);

    REQUIRE(again.size() == base.size());
    REQUIRE(threaded.size() == base.size());
    for (std::size_t i = 0; i < base.size(); ++i) {
        CHECK(same_ignoring_time(base[i], again[i]));
        CHECK(same_ignoring_time(base[i], threaded[i]));
    }
}

TEST_CASE("records survive a CSV round trip exactly") {
    const std::vector<ExperimentTriple> triples = {small_triple("aa", 1)};
    const auto records = run_plan(triples, small_plan());
    const fs::path p = scratch_dir() / "records_roundtrip.csv";
    write_records_csv(records, p);
    const auto loaded = read_records_csv(p);
    REQUIRE(loaded.size() == records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        CHECK(same_ignoring_time(records[i], loaded[i]));
        CHECK(records[i].walltime_s == loaded[i].walltime_s);
    }
}

TEST_CASE("malformed record lines are rejected") {
    const fs::path p = scratch_dir() / "broken_records.csv";
    std::ofstream out(p);
    out << "triple,learner\n";
    out << "antV0,cart,prec\n"; // wrong column count
    out.close();
    CHECK_THROWS_AS(read_records_csv(p), std::runtime_error);
}

TEST_CASE("report emission writes the full report set") {
    const std::vector<ExperimentTriple> triples = {small_triple("aa", 1),
                                                   small_triple("bb", 50)};
    ExperimentPlan plan = small_plan();
    plan.learners = {Learner::WHERE, Learner::CART, Learner::RANDOM_FOREST,
                     Learner::LOGISTIC_REGRESSION};
    plan.goals = {Goal::PREC, Goal::F};
    plan.repeats = 1;
    const auto records = run_plan(triples, plan);
    const fs::path out = scratch_dir() / "reports";
    fs::create_directories(out);
    emit_reports(records, out);

    for (const char* name :
         {"records.csv", "precision_table.csv", "precision_table.md",
          "f_table.csv", "f_table.md", "delta_prec.csv", "delta_f.csv",
          "features_table.csv", "evaluations_table.csv", "runtime_table.csv",
          "ks_summary.csv", "params_distribution.csv"}) {
        INFO("report file: ", name);
        CHECK(fs::exists(out / name));
        CHECK(fs::file_size(out / name) > 0);
    }
    // Single population size: the np comparison is not applicable.
    CHECK_FALSE(fs::exists(out / "np_comparison.csv"));

    // The round trip through records.csv preserves the report inputs.
    const auto reloaded = read_records_csv(out / "records.csv");
    REQUIRE(reloaded.size() == records.size());

    CHECK_THROWS_AS(emit_reports({}, out), std::invalid_argument);
}

TEST_CASE("identical tuned series are reported as not different") {
    std::vector<RunRecord> records;
    const std::vector<std::string> names = {"aaV0", "bbV0", "ccV0"};
    for (std::size_t i = 0; i < names.size(); ++i) {
        const double prec = 0.3 + 0.2 * double(i);
        const double f = 0.25 + 0.2 * double(i);
        // CART and RF get exactly the same tuned scores on every triple.
        records.push_back(
            fake_tuned(names[i], Learner::CART, Goal::PREC, 0, prec, f));
        records.push_back(
            fake_tuned(names[i], Learner::RANDOM_FOREST, Goal::PREC, 0, prec, f));
        records.push_back(fake_untuned(names[i], Learner::CART, 0, 0.1, 0.1));
        records.push_back(
            fake_untuned(names[i], Learner::RANDOM_FOREST, 0, 0.1, 0.1));
    }
    const fs::path out = scratch_dir() / "ks_reports";
    fs::create_directories(out);
    emit_reports(records, out);
    const std::string ks = slurp(out / "ks_summary.csv");
    CHECK(ks.find("prec,cart_tuned,rf_tuned,3,0,") != std::string::npos);
    CHECK(ks.find("not_different") != std::string::npos);
    CHECK(ks.find(",different") == std::string::npos);
}

TEST_CASE("clearly separated tuned series are reported as different") {
    std::vector<RunRecord> records;
    std::vector<std::string> names;
    for (int i = 0; i < 8; ++i) names.push_back("p" + std::to_string(i) + "V0");
    for (std::size_t i = 0; i < names.size(); ++i) {
        records.push_back(
            fake_tuned(names[i], Learner::CART, Goal::PREC, 0, 0.9, 0.9));
        records.push_back(
            fake_tuned(names[i], Learner::RANDOM_FOREST, Goal::PREC, 0, 0.1, 0.1));
    }
    const fs::path out = scratch_dir() / "ks_reports_diff";
    fs::create_directories(out);
    emit_reports(records, out);
    const std::string ks = slurp(out / "ks_summary.csv");
    // statistic 1 against threshold 1.36*sqrt(2/8) = 0.68
    CHECK(ks.find("prec,cart_tuned,rf_tuned,8,1,") != std::string::npos);
    CHECK(ks.find(",different") != std::string::npos);
}

TEST_CASE("display names drop the suffix only for single-triple projects") {
    const std::vector<std::string> all = {"antV0", "antV1", "ivyV0", "jeditV2"};
    CHECK(display_name("ivyV0", all) == "ivy");
    CHECK(display_name("antV0", all) == "antV0");
    CHECK(display_name("antV1", all) == "antV1");
    CHECK(display_name("jeditV2", all) == "jedit");
    CHECK(display_name("plain", all) == "plain");
}

TEST_CASE("count validation accepts the generated corpus") {
    std::vector<Release> all_releases;
    std::vector<ExperimentTriple> triples;
    for (const auto& shape : promise_release_catalog()) {
        const auto releases = generate_project(shape, 42);
        const auto project_triples = build_triples(releases);
        triples.insert(triples.end(), project_triples.begin(),
                       project_triples.end());
    }
    std::sort(triples.begin(), triples.end(),
              [](const ExperimentTriple& a, const ExperimentTriple& b) {
                  return a.name < b.name;
              });
    REQUIRE(triples.size() == 17);

    const ValidationResult good = validate_counts(triples);
    CHECK(good.ok);
    CHECK(good.checked == 51); // 17 triples x train/tune/test
    CHECK(good.report.find("all release counts match") != std::string::npos);

    SUBCASE("a dropped instance is caught") {
        auto corrupted = triples;
        corrupted[0].train.instances.pop_back();
        const ValidationResult bad = validate_counts(corrupted);
        CHECK_FALSE(bad.ok);
        CHECK(bad.report.find("FAILED") != std::string::npos);
    }
    SUBCASE("a flipped label is caught") {
        auto corrupted = triples;
        for (auto& inst : corrupted[0].tune.instances) {
            if (!inst.label) {
                inst.label = true;
                inst.defect_count = 1;
                break;
            }
        }
        CHECK_FALSE(validate_counts(corrupted).ok);
    }
    SUBCASE("a missing triple is caught") {
        auto fewer = triples;
        fewer.erase(fewer.begin());
        CHECK_FALSE(validate_counts(fewer).ok);
    }
    SUBCASE("an unexpected extra triple is caught") {
        auto more = triples;
        ExperimentTriple extra = triples[0];
        extra.name = "zzzV0";
        extra.train.project = "zzz";
        extra.tune.project = "zzz";
        extra.test.project = "zzz";
        more.push_back(extra);
        CHECK_FALSE(validate_counts(more).ok);
    }
}
