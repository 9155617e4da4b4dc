#include "tunedp/attributes.hpp"

namespace tunedp {

std::optional<std::size_t> attribute_index(std::string_view name) {
    for (std::size_t i = 0; i < kNumAttributes; ++i) {
        if (kAttributeNames[i] == name) return i;
    }
    return std::nullopt;
}

} // namespace tunedp
