#ifndef TUNEDP_STATS_HPP
#define TUNEDP_STATS_HPP

#include <string>
#include <vector>

namespace tunedp {

/// A labeled sample of scores. `tags` optionally names the dataset behind
/// each value so paired series can be checked for alignment.
struct SampleSeries {
    std::string label;
    std::vector<double> values;
    std::vector<std::string> tags; // empty, or one tag per value
};

/// Maximum absolute difference between the two empirical CDFs.
double ks_statistic(const SampleSeries& xs, const SampleSeries& ys);

/// 1.36 * sqrt((n+m)/(n*m)); the 95%-confidence acceptance threshold for
/// the two-sample KS statistic.
double ks_threshold(std::size_t n, std::size_t m);

/// True when the two samples are not statistically different, i.e. the
/// KS statistic falls below the threshold for their sizes.
bool ks_same(const SampleSeries& xs, const SampleSeries& ys);

/// Element-wise tuned - untuned, sorted ascending. Requires equal lengths
/// and, when both series carry tags, identical tag sequences.
std::vector<double> delta_series(const SampleSeries& tuned,
                                 const SampleSeries& untuned);

double median(std::vector<double> values);

} // namespace tunedp

#endif
