#ifndef TUNEDP_METRICS_HPP
#define TUNEDP_METRICS_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace tunedp {

/// Counts from a binary detector: A true negatives, B false negatives,
/// C false positives, D true positives.
struct ConfusionMatrix {
    std::int64_t A = 0;
    std::int64_t B = 0;
    std::int64_t C = 0;
    std::int64_t D = 0;

    std::int64_t total() const { return A + B + C + D; }
};

/// The four goal functions. pf is minimized, the rest are maximized.
enum class Goal { PD, PF, PREC, F };

const char* goal_name(Goal g);
Goal goal_from_name(const std::string& name);

/// True when larger values of the goal are better.
bool goal_maximizes(Goal g);

/// Tallies predictions against actual labels. Throws on empty or
/// length-mismatched input.
ConfusionMatrix confusion(const std::vector<bool>& actual,
                          const std::vector<bool>& predicted);

/// pd = D/(B+D), pf = C/(A+C), prec = D/(D+C), F = 2*pd*prec/(pd+prec).
/// Any zero denominator yields 0.
double score(Goal g, const ConfusionMatrix& cm);

/// True iff x strictly improves on y under the goal's polarity.
bool better(Goal g, double x, double y);

} // namespace tunedp

#endif
