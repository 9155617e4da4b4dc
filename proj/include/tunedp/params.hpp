#ifndef TUNEDP_PARAMS_HPP
#define TUNEDP_PARAMS_HPP

#include <map>
#include <string>
#include <vector>

namespace tunedp {

enum class Learner { WHERE, CART, RANDOM_FOREST, LOGISTIC_REGRESSION };

const char* learner_name(Learner l);
Learner learner_from_name(const std::string& name);

enum class ParamKind { Continuous, Integer, Boolean };

/// One tunable parameter: its kind, legal range and default.
struct ParamSpec {
    std::string name;
    ParamKind kind = ParamKind::Continuous;
    double low = 0.0;   // numeric kinds only
    double high = 0.0;  // numeric kinds only
    double default_value = 0.0; // booleans: 0/1

    bool is_numeric() const { return kind != ParamKind::Boolean; }
};

/// A concrete parameter assignment for one learner. Booleans are stored
/// as 0/1 and integer kinds as whole-valued doubles so that the tuner can
/// do uniform arithmetic over the vector.
struct Config {
    Learner learner = Learner::CART;
    std::map<std::string, double> values;

    double at(const std::string& name) const;
    bool flag(const std::string& name) const { return at(name) != 0.0; }
};

/// The tunable surface of each learner. WHERE has 9 parameters, CART 5,
/// Random Forest 6 and logistic regression none. The "all attributes" /
/// "unbounded" defaults are represented by the top of the tuning range,
/// which is behaviorally equivalent at these data sizes.
std::vector<ParamSpec> param_space(Learner l);

/// The off-the-shelf configuration: every parameter at its default.
Config default_config(Learner l);

/// Throws std::invalid_argument when a value is missing, out of bounds,
/// or not integral for an integer kind.
void validate_config(const Config& config);

} // namespace tunedp

#endif
