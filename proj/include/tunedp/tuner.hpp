#ifndef TUNEDP_TUNER_HPP
#define TUNEDP_TUNER_HPP

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "tunedp/dataset.hpp"
#include "tunedp/learners.hpp"
#include "tunedp/metrics.hpp"
#include "tunedp/params.hpp"

namespace tunedp {

/// Differential evolution settings. np candidates per generation, f the
/// extrapolation factor, cr the crossover probability, life the patience
/// in non-improving generations.
struct DEConfig {
    int np = 10;
    double f = 0.75;
    double cr = 0.3;
    int life = 5;
    Goal goal = Goal::PREC;
    std::uint64_t seed = 0;
    int threads = 1; // within-generation evaluation parallelism

    void validate() const; // np >= 4, 0 <= cr <= 1, f > 0, life >= 1
};

/// A configuration with its cached goal score. evaluated_at is the value
/// of the evaluation counter when this candidate was scored; it also
/// derives the learner seed used for that evaluation.
struct Candidate {
    Config config;
    double score = 0.0;
    std::uint64_t evaluated_at = 0;
};

struct TuneResult {
    Candidate best;
    std::uint64_t evaluations = 0;
    int generations = 0;
    std::vector<double> history; // population best after each generation,
                                 // starting with the initial population
};

/// Objective for the DE core: candidate values plus the learner seed
/// derived for this evaluation. Must be deterministic in its arguments.
using Objective =
    std::function<double(const Config& config, std::uint64_t learner_seed)>;

/// Per-evaluation learner seed: a documented splitmix64-style mix of the
/// master seed and the evaluation counter, so results are reproducible
/// and independent of evaluation parallelism.
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t counter);

/// Clamps a numeric value into the parameter's range; integer kinds are
/// then rounded to the nearest integer.
double trim(const ParamSpec& spec, double value);

/// Builds a trial config from `old`: per parameter in `space`, with
/// probability cr mutate (booleans negate, numerics a + f*(b - c) trimmed
/// into range), otherwise keep the old value. a, b, c are three distinct
/// population members other than `old` itself.
Config extrapolate(const std::vector<ParamSpec>& space, const Config& old,
                   const std::vector<Candidate>& population,
                   std::size_t old_index, double cr, double f,
                   std::mt19937_64& rng);

/// Generic single-objective DE with early termination over an arbitrary
/// parameter space. Population seeded with `initial` (the learner default
/// in de_tune) plus np-1 uniform random candidates. Each generation
/// evaluates np trial configs; an incumbent is replaced only when its
/// trial scores strictly better under the goal's polarity. One life is
/// lost whenever the population best fails to strictly improve;
/// terminates at life = 0 and returns the best candidate ever evaluated.
TuneResult de_optimize(const std::vector<ParamSpec>& space, const Config& initial,
                       const Objective& objective, const DEConfig& de);

/// Trains `config` on `train`, predicts on `tune`, returns the goal score
/// of the resulting confusion matrix.
double tuning_score(const Config& config, const Release& train,
                    const Release& tune, Goal goal, std::uint64_t learner_seed);

/// Algorithm front door: tunes `learner` on (train, tune) under de.goal.
/// Rejects learners with an empty parameter space (logistic regression).
TuneResult de_tune(Learner learner, const Release& train, const Release& tune,
                   const DEConfig& de);

} // namespace tunedp

#endif
