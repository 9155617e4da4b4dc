#include "tunedp/tuner.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "learner_internal.hpp"
#include "tunedp/metrics.hpp"

namespace tunedp {

void DEConfig::validate() const {
    if (np < 4) throw std::invalid_argument("de: np must be >= 4");
    if (cr < 0.0 || cr > 1.0) {
        throw std::invalid_argument("de: cr must lie in [0,1]");
    }
    if (f <= 0.0) throw std::invalid_argument("de: f must be positive");
    if (life < 1) throw std::invalid_argument("de: life must be >= 1");
    if (threads < 1) throw std::invalid_argument("de: threads must be >= 1");
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t counter) {
    // splitmix64 step applied to the master seed advanced by the counter.
    std::uint64_t z = master_seed + (counter + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double trim(const ParamSpec& spec, double value) {
    double v = std::clamp(value, spec.low, spec.high);
    if (spec.kind == ParamKind::Integer) {
        v = std::round(v);
    }
    return v;
}

Config extrapolate(const std::vector<ParamSpec>& space, const Config& old,
                   const std::vector<Candidate>& population,
                   std::size_t old_index, double cr, double f,
                   std::mt19937_64& rng) {
    if (population.size() < 4) {
        throw std::invalid_argument("extrapolate: need a population of >= 4");
    }
    // Three distinct members other than the target.
    std::vector<std::size_t> others;
    others.reserve(population.size() - 1);
    for (std::size_t i = 0; i < population.size(); ++i) {
        if (i != old_index) others.push_back(i);
    }
    std::array<const Config*, 3> abc{};
    for (int k = 0; k < 3; ++k) {
        const std::size_t j = k + detail::draw_index(rng, others.size() - k);
        std::swap(others[k], others[j]);
        abc[k] = &population[others[k]].config;
    }

    Config trial;
    trial.learner = old.learner;
    for (const ParamSpec& spec : space) {
        const double old_value = old.at(spec.name);
        const double u = detail::draw_real(rng, 0.0, 1.0);
        if (u >= cr) {
            trial.values[spec.name] = old_value;
        } else if (spec.kind == ParamKind::Boolean) {
            trial.values[spec.name] = old_value != 0.0 ? 0.0 : 1.0;
        } else {
            const double mixed = abc[0]->at(spec.name) +
                                 f * (abc[1]->at(spec.name) -
                                      abc[2]->at(spec.name));
            trial.values[spec.name] = trim(spec, mixed);
        }
    }
    return trial;
}

namespace {

Config random_config(const std::vector<ParamSpec>& space, Learner learner,
                     std::mt19937_64& rng) {
    Config c;
    c.learner = learner;
    for (const ParamSpec& spec : space) {
        double v = 0.0;
        switch (spec.kind) {
        case ParamKind::Continuous:
            v = detail::draw_real(rng, spec.low, spec.high);
            break;
        case ParamKind::Integer: {
            const auto span = static_cast<std::size_t>(spec.high - spec.low) + 1;
            v = spec.low + static_cast<double>(detail::draw_index(rng, span));
            break;
        }
        case ParamKind::Boolean:
            v = detail::draw_real(rng, 0.0, 1.0) < 0.5 ? 0.0 : 1.0;
            break;
        }
        c.values[spec.name] = v;
    }
    return c;
}

// Scores a batch of candidates. Learner seeds were fixed when the
// candidates were created, so the outcome does not depend on threads.
void evaluate_batch(std::vector<Candidate>& batch, const Objective& objective,
                    std::uint64_t master_seed, int threads) {
    const auto work = [&](std::size_t begin, std::size_t step) {
        for (std::size_t i = begin; i < batch.size(); i += step) {
            batch[i].score = objective(
                batch[i].config, derive_seed(master_seed, batch[i].evaluated_at));
        }
    };
    const int workers =
        std::min<int>(threads, static_cast<int>(batch.size()));
    if (workers <= 1) {
        work(0, 1);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int t = 0; t < workers; ++t) {
        pool.emplace_back(work, static_cast<std::size_t>(t),
                          static_cast<std::size_t>(workers));
    }
    for (auto& t : pool) t.join();
}

} // namespace

TuneResult de_optimize(const std::vector<ParamSpec>& space, const Config& initial,
                       const Objective& objective, const DEConfig& de) {
    de.validate();
    std::mt19937_64 rng(de.seed);
    std::uint64_t counter = 0;

    std::vector<Candidate> population;
    population.reserve(de.np);
    {
        Candidate first;
        first.config = initial;
        first.evaluated_at = counter++;
        population.push_back(std::move(first));
        for (int i = 1; i < de.np; ++i) {
            Candidate c;
            c.config = random_config(space, initial.learner, rng);
            c.evaluated_at = counter++;
            population.push_back(std::move(c));
        }
    }
    evaluate_batch(population, objective, de.seed, de.threads);

    const auto best_of = [&](const std::vector<Candidate>& pop) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < pop.size(); ++i) {
            if (better(de.goal, pop[i].score, pop[best].score)) best = i;
        }
        return best;
    };

    TuneResult result;
    result.best = population[best_of(population)];
    result.history.push_back(result.best.score);

    int life = de.life;
    while (life > 0) {
        std::vector<Candidate> trials;
        trials.reserve(de.np);
        for (int i = 0; i < de.np; ++i) {
            Candidate t;
            t.config = extrapolate(space, population[i].config, population,
                                   static_cast<std::size_t>(i), de.cr, de.f, rng);
            t.evaluated_at = counter++;
            trials.push_back(std::move(t));
        }
        evaluate_batch(trials, objective, de.seed, de.threads);

        for (int i = 0; i < de.np; ++i) {
            if (better(de.goal, trials[i].score, population[i].score)) {
                population[i] = std::move(trials[i]);
            }
        }
        ++result.generations;

        const Candidate& gen_best = population[best_of(population)];
        if (better(de.goal, gen_best.score, result.best.score)) {
            result.best = gen_best;
        } else {
            --life;
        }
        result.history.push_back(gen_best.score);
    }
    result.evaluations = counter;
    return result;
}

double tuning_score(const Config& config, const Release& train,
                    const Release& tune, Goal goal, std::uint64_t learner_seed) {
    const Model model = tunedp::train(config, train, learner_seed);
    const std::vector<bool> predicted = predict_all(model, tune);
    std::vector<bool> actual;
    actual.reserve(tune.size());
    for (const Instance& inst : tune.instances) actual.push_back(inst.label);
    return score(goal, confusion(actual, predicted));
}

TuneResult de_tune(Learner learner, const Release& train, const Release& tune,
                   const DEConfig& de) {
    const std::vector<ParamSpec> space = param_space(learner);
    if (space.empty()) {
        throw std::invalid_argument(
            std::string("de_tune: ") + learner_name(learner) +
            " has no tunable parameters");
    }
    if (train.instances.empty() || tune.instances.empty()) {
        throw std::invalid_argument("de_tune: empty train or tune release");
    }
    const Objective objective = [&](const Config& config,
                                    std::uint64_t learner_seed) {
        return tuning_score(config, train, tune, de.goal, learner_seed);
    };
    return de_optimize(space, default_config(learner), objective, de);
}

} // namespace tunedp
