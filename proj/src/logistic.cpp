#include <algorithm>
#include <cmath>

#include "learner_internal.hpp"

namespace tunedp::detail {
namespace {

// log(1 + exp(z)) without overflow.
double softplus(double z) {
    return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z)));
}

struct Standardized {
    std::vector<std::array<double, kNumAttributes>> x; // (v - mean) / sd
    std::vector<double> y;                             // 0/1 labels
    std::vector<double> mean, sd;                      // sd 0 = constant attr
};

Standardized standardize(const Release& data) {
    Standardized s;
    const std::size_t n = data.size();
    s.mean.assign(kNumAttributes, 0.0);
    s.sd.assign(kNumAttributes, 0.0);
    for (std::size_t a = 0; a < kNumAttributes; ++a) {
        double sum = 0.0, sumsq = 0.0;
        for (const auto& inst : data.instances) {
            sum += inst.metrics[a];
            sumsq += inst.metrics[a] * inst.metrics[a];
        }
        const double mean = sum / n;
        const double var = std::max(0.0, sumsq / n - mean * mean);
        s.mean[a] = mean;
        s.sd[a] = var > 0.0 ? std::sqrt(var) : 0.0;
    }
    s.x.resize(n);
    s.y.resize(n);
    for (std::size_t r = 0; r < n; ++r) {
        const auto& inst = data.instances[r];
        for (std::size_t a = 0; a < kNumAttributes; ++a) {
            s.x[r][a] = s.sd[a] > 0.0
                            ? (inst.metrics[a] - s.mean[a]) / s.sd[a]
                            : 0.0;
        }
        s.y[r] = inst.label ? 1.0 : 0.0;
    }
    return s;
}

double mean_nll(const Standardized& s, const std::vector<double>& beta) {
    double loss = 0.0;
    for (std::size_t r = 0; r < s.x.size(); ++r) {
        double f = beta[0];
        for (std::size_t a = 0; a < kNumAttributes; ++a) {
            f += beta[a + 1] * s.x[r][a];
        }
        loss += s.y[r] > 0.5 ? softplus(-f) : softplus(f);
    }
    return loss / s.x.size();
}

std::vector<double> gradient(const Standardized& s,
                             const std::vector<double>& beta) {
    std::vector<double> g(beta.size(), 0.0);
    for (std::size_t r = 0; r < s.x.size(); ++r) {
        double f = beta[0];
        for (std::size_t a = 0; a < kNumAttributes; ++a) {
            f += beta[a + 1] * s.x[r][a];
        }
        const double p = 1.0 / (1.0 + std::exp(-std::clamp(f, -36.0, 36.0)));
        const double err = p - s.y[r];
        g[0] += err;
        for (std::size_t a = 0; a < kNumAttributes; ++a) {
            g[a + 1] += err * s.x[r][a];
        }
    }
    for (double& v : g) v /= s.x.size();
    return g;
}

} // namespace

// Batch gradient descent with a halving line search, so the recorded loss
// trajectory never increases. Stops after 500 accepted steps or when the
// gradient's largest component drops below 1e-6.
LogisticModel train_logistic(const Release& data) {
    const Standardized s = standardize(data);
    LogisticModel model;
    model.mean = s.mean;
    model.sd = s.sd;
    model.beta.assign(kNumAttributes + 1, 0.0);

    double loss = mean_nll(s, model.beta);
    model.loss_history.push_back(loss);

    double step = 1.0;
    for (int iter = 0; iter < 500; ++iter) {
        const std::vector<double> g = gradient(s, model.beta);
        double gmax = 0.0;
        for (double v : g) gmax = std::max(gmax, std::abs(v));
        if (gmax < 1e-6) break;

        bool accepted = false;
        while (step > 1e-15) {
            std::vector<double> trial(model.beta);
            for (std::size_t i = 0; i < trial.size(); ++i) {
                trial[i] -= step * g[i];
            }
            const double trial_loss = mean_nll(s, trial);
            if (trial_loss <= loss) {
                model.beta = std::move(trial);
                loss = trial_loss;
                model.loss_history.push_back(loss);
                step *= 1.2;
                accepted = true;
                break;
            }
            step /= 2.0;
        }
        if (!accepted) break;
    }
    return model;
}

} // namespace tunedp::detail
