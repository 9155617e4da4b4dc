#ifndef TUNEDP_LEARNER_INTERNAL_HPP
#define TUNEDP_LEARNER_INTERNAL_HPP

#include <cstdint>
#include <random>

#include "tunedp/learners.hpp"

namespace tunedp::detail {

CartModel train_cart(const Config& config, const Release& data,
                     std::uint64_t seed);
ForestModel train_forest(const Config& config, const Release& data,
                         std::uint64_t seed);
WhereModel train_where(const Config& config, const Release& data,
                       std::uint64_t seed);
LogisticModel train_logistic(const Release& data);

/// Bounded draw used everywhere a row or attribute is picked, so results
/// do not depend on the standard library's distribution implementations.
inline std::size_t draw_index(std::mt19937_64& rng, std::size_t n) {
    return static_cast<std::size_t>(rng() % n);
}

/// Uniform real in [low, high) built directly from the raw 64-bit draw.
inline double draw_real(std::mt19937_64& rng, double low, double high) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return low + u * (high - low);
}

} // namespace tunedp::detail

#endif
