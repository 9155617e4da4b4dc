#include "tunedp/metrics.hpp"

#include <stdexcept>

namespace tunedp {

const char* goal_name(Goal g) {
    switch (g) {
    case Goal::PD: return "pd";
    case Goal::PF: return "pf";
    case Goal::PREC: return "prec";
    case Goal::F: return "f";
    }
    return "?";
}

Goal goal_from_name(const std::string& name) {
    if (name == "pd") return Goal::PD;
    if (name == "pf") return Goal::PF;
    if (name == "prec" || name == "precision") return Goal::PREC;
    if (name == "f" || name == "F") return Goal::F;
    throw std::invalid_argument("unknown goal: " + name);
}

bool goal_maximizes(Goal g) { return g != Goal::PF; }

ConfusionMatrix confusion(const std::vector<bool>& actual,
                          const std::vector<bool>& predicted) {
    if (actual.empty()) throw std::invalid_argument("confusion: empty input");
    if (actual.size() != predicted.size()) {
        throw std::invalid_argument("confusion: length mismatch (" +
                                    std::to_string(actual.size()) + " vs " +
                                    std::to_string(predicted.size()) + ")");
    }
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        if (actual[i]) {
            (predicted[i] ? cm.D : cm.B)++;
        } else {
            (predicted[i] ? cm.C : cm.A)++;
        }
    }
    return cm;
}

namespace {
double ratio(std::int64_t num, std::int64_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}
} // namespace

double score(Goal g, const ConfusionMatrix& cm) {
    switch (g) {
    case Goal::PD: return ratio(cm.D, cm.B + cm.D);
    case Goal::PF: return ratio(cm.C, cm.A + cm.C);
    case Goal::PREC: return ratio(cm.D, cm.D + cm.C);
    case Goal::F: {
        const double pd = ratio(cm.D, cm.B + cm.D);
        const double prec = ratio(cm.D, cm.D + cm.C);
        return (pd + prec) == 0.0 ? 0.0 : 2.0 * pd * prec / (pd + prec);
    }
    }
    return 0.0;
}

bool better(Goal g, double x, double y) {
    return goal_maximizes(g) ? x > y : x < y;
}

} // namespace tunedp
