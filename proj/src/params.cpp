#include "tunedp/params.hpp"

#include <cmath>
#include <stdexcept>

namespace tunedp {

const char* learner_name(Learner l) {
    switch (l) {
    case Learner::WHERE: return "where";
    case Learner::CART: return "cart";
    case Learner::RANDOM_FOREST: return "rf";
    case Learner::LOGISTIC_REGRESSION: return "lr";
    }
    return "?";
}

Learner learner_from_name(const std::string& name) {
    if (name == "where") return Learner::WHERE;
    if (name == "cart") return Learner::CART;
    if (name == "rf" || name == "random_forest") return Learner::RANDOM_FOREST;
    if (name == "lr" || name == "logistic_regression") {
        return Learner::LOGISTIC_REGRESSION;
    }
    throw std::invalid_argument("unknown learner: " + name);
}

double Config::at(const std::string& name) const {
    auto it = values.find(name);
    if (it == values.end()) {
        throw std::invalid_argument(std::string(learner_name(learner)) +
                                    " config missing parameter: " + name);
    }
    return it->second;
}

namespace {

ParamSpec cont(const char* name, double def, double lo, double hi) {
    return {name, ParamKind::Continuous, lo, hi, def};
}
ParamSpec intp(const char* name, double def, double lo, double hi) {
    return {name, ParamKind::Integer, lo, hi, def};
}
ParamSpec boolp(const char* name, bool def) {
    return {name, ParamKind::Boolean, 0.0, 1.0, def ? 1.0 : 0.0};
}

} // namespace

std::vector<ParamSpec> param_space(Learner l) {
    switch (l) {
    case Learner::WHERE:
        return {
            cont("threshold", 0.5, 0.01, 1.0),
            cont("infoPrune", 0.33, 0.01, 1.0),
            intp("min_sample_split", 4, 1, 10),
            cont("min_Size", 0.5, 0.01, 1.0),
            cont("wriggle", 0.2, 0.01, 1.0),
            intp("depthMin", 2, 1, 6),
            intp("depthMax", 10, 1, 20),
            boolp("wherePrune", false),
            boolp("treePrune", true),
        };
    case Learner::CART:
        // "all features" and "unbounded depth" defaults sit at the top of
        // their tuning ranges; depth 50 is unreachable at these data sizes.
        return {
            cont("threshold", 0.5, 0.0, 1.0),
            cont("max_feature", 1.0, 0.01, 1.0),
            intp("min_sample_split", 2, 2, 20),
            intp("min_samples_leaf", 1, 1, 20),
            intp("max_depth", 50, 1, 50),
        };
    case Learner::RANDOM_FOREST:
        return {
            cont("threshold", 0.5, 0.01, 1.0),
            cont("max_feature", 1.0, 0.01, 1.0),
            intp("max_leaf_nodes", 50, 1, 50),
            intp("min_sample_split", 2, 2, 20),
            intp("min_samples_leaf", 1, 1, 20),
            intp("n_estimators", 100, 50, 150),
        };
    case Learner::LOGISTIC_REGRESSION:
        return {};
    }
    return {};
}

Config default_config(Learner l) {
    Config c;
    c.learner = l;
    for (const auto& spec : param_space(l)) {
        c.values[spec.name] = spec.default_value;
    }
    return c;
}

void validate_config(const Config& config) {
    const auto space = param_space(config.learner);
    for (const auto& spec : space) {
        auto it = config.values.find(spec.name);
        if (it == config.values.end()) {
            throw std::invalid_argument(std::string(learner_name(config.learner)) +
                                        ": missing parameter " + spec.name);
        }
        const double v = it->second;
        if (spec.kind == ParamKind::Boolean) {
            if (v != 0.0 && v != 1.0) {
                throw std::invalid_argument(spec.name + " must be 0 or 1");
            }
            continue;
        }
        if (v < spec.low || v > spec.high) {
            throw std::invalid_argument(spec.name + " = " + std::to_string(v) +
                                        " outside [" + std::to_string(spec.low) +
                                        ", " + std::to_string(spec.high) + "]");
        }
        if (spec.kind == ParamKind::Integer && v != std::floor(v)) {
            throw std::invalid_argument(spec.name + " must be an integer");
        }
    }
    if (config.values.size() != space.size()) {
        throw std::invalid_argument(std::string(learner_name(config.learner)) +
                                    ": unexpected extra parameters");
    }
}

} // namespace tunedp
