#ifndef TUNEDP_HARNESS_HPP
#define TUNEDP_HARNESS_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tunedp/dataset.hpp"
#include "tunedp/metrics.hpp"
#include "tunedp/params.hpp"
#include "tunedp/tuner.hpp"

namespace tunedp {

/// What to run: which triples (empty = all loaded), learners, tuning
/// goals, how many repeats with distinct derived seeds, and the DE
/// settings shared by every tuned cell.
struct ExperimentPlan {
    std::vector<std::string> triples;
    std::vector<Learner> learners = {Learner::WHERE, Learner::CART,
                                     Learner::RANDOM_FOREST,
                                     Learner::LOGISTIC_REGRESSION};
    std::vector<Goal> goals = {Goal::PREC, Goal::F};
    int repeats = 1;
    std::uint64_t seed = 1;
    int np = 10;
    int life = 5;
    double f = 0.75;
    double cr = 0.3;
    int threads = 1;
};

/// One experiment cell: a learner evaluated on a triple's test release,
/// either tuned on (train, tune) or trained off-the-shelf on train+tune.
struct RunRecord {
    std::string triple;
    Learner learner = Learner::CART;
    std::optional<Goal> goal; // tuning goal; untuned records carry none
    bool tuned = false;
    int repeat = 0;
    std::uint64_t seed = 0; // derived per-record seed
    int np = 0;
    int life = 0;
    double de_f = 0.0;
    double de_cr = 0.0;
    std::uint64_t evaluations = 0; // 0 for untuned records
    int generations = 0;
    double pd = 0.0, pf = 0.0, prec = 0.0, f_measure = 0.0; // test release
    double tuning_best = 0.0;    // tuned: best goal score on the tuning release
    double tuning_default = 0.0; // tuned: default config's score there
    std::string config_json;     // the trained configuration
    std::set<std::string> features; // features_used of the evaluated model
    double walltime_s = 0.0;
};

/// Deterministic per-record seed from the plan seed and cell coordinates.
std::uint64_t record_seed(std::uint64_t plan_seed, const std::string& triple,
                          Learner learner, std::optional<Goal> goal, bool tuned,
                          int repeat);

RunRecord run_tuned(const ExperimentTriple& triple, Learner learner, Goal goal,
                    const ExperimentPlan& plan, int repeat);

RunRecord run_untuned(const ExperimentTriple& triple, Learner learner,
                      const ExperimentPlan& plan, int repeat);

/// Runs every cell of the plan (tuned cells for tunable learners, one
/// untuned cell per triple x learner x repeat). Cells may execute on
/// plan.threads workers; the returned order and contents are independent
/// of scheduling.
std::vector<RunRecord> run_plan(const std::vector<ExperimentTriple>& triples,
                                const ExperimentPlan& plan);

void write_records_csv(const std::vector<RunRecord>& records,
                       const std::filesystem::path& path);
std::vector<RunRecord> read_records_csv(const std::filesystem::path& path);

/// Writes the report set: precision and F tables (per-dataset best
/// flagged), sorted delta series, features-used table, evaluation-count
/// and runtime tables, KS summaries, and the chosen-parameter-value
/// export. Throws on empty records.
void emit_reports(const std::vector<RunRecord>& records,
                  const std::filesystem::path& out_dir);

/// Per-release and per-triple (defective, total) check against the
/// bundled release catalog.
struct ValidationResult {
    bool ok = false;
    int checked = 0;
    std::string report;
};
ValidationResult validate_counts(const std::vector<ExperimentTriple>& triples);

/// Paper-style display name: the V0 suffix is dropped for projects with
/// a single triple (ivy, log4j, ...).
std::string display_name(const std::string& triple_name,
                         const std::vector<std::string>& all_names);

} // namespace tunedp

#endif
