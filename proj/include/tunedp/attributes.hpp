#ifndef TUNEDP_ATTRIBUTES_HPP
#define TUNEDP_ATTRIBUTES_HPP

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

namespace tunedp {

/// The 20 object-oriented code metrics every instance carries, in canonical
/// (alphabetical) order. All per-attribute loops and tie-breaks use this
/// order, so "attribute index order" and "attribute name order" coincide.
inline constexpr std::size_t kNumAttributes = 20;

inline constexpr std::array<std::string_view, kNumAttributes> kAttributeNames = {
    "amc",   "avg_cc", "ca",    "cam",  "cbm", "cbo", "ce",  "dam",
    "dit",   "ic",     "lcom",  "lcom3", "loc", "max_cc", "mfa", "moa",
    "noc",   "npm",    "rfc",   "wmc",
};

std::optional<std::size_t> attribute_index(std::string_view name);

} // namespace tunedp

#endif
