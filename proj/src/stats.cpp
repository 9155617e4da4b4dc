#include "tunedp/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tunedp {

double ks_statistic(const SampleSeries& xs, const SampleSeries& ys) {
    if (xs.values.empty() || ys.values.empty()) {
        throw std::invalid_argument("ks_statistic: empty sample");
    }
    std::vector<double> a = xs.values;
    std::vector<double> b = ys.values;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());

    // Merge-walk both sorted samples, tracking each empirical CDF.
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double v = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= v) ++i;
        while (j < b.size() && b[j] <= v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na -
                                 static_cast<double>(j) / nb));
    }
    // Tail differences past this point only shrink toward zero.
    return d;
}

double ks_threshold(std::size_t n, std::size_t m) {
    if (n == 0 || m == 0) throw std::invalid_argument("ks_threshold: n, m >= 1");
    const double dn = static_cast<double>(n);
    const double dm = static_cast<double>(m);
    return 1.36 * std::sqrt((dn + dm) / (dn * dm));
}

bool ks_same(const SampleSeries& xs, const SampleSeries& ys) {
    return ks_statistic(xs, ys) < ks_threshold(xs.values.size(), ys.values.size());
}

std::vector<double> delta_series(const SampleSeries& tuned,
                                 const SampleSeries& untuned) {
    if (tuned.values.size() != untuned.values.size()) {
        throw std::invalid_argument("delta_series: length mismatch");
    }
    if (!tuned.tags.empty() && !untuned.tags.empty() &&
        tuned.tags != untuned.tags) {
        throw std::invalid_argument("delta_series: misaligned series (" +
                                    tuned.label + " vs " + untuned.label + ")");
    }
    std::vector<double> deltas(tuned.values.size());
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        deltas[i] = tuned.values[i] - untuned.values[i];
    }
    std::sort(deltas.begin(), deltas.end());
    return deltas;
}

double median(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("median: empty");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 == 1 ? values[n / 2]
                      : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

} // namespace tunedp
