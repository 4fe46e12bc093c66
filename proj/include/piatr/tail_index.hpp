#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace piatr {

// First sampled index after which `holds` is true for the rest of the
// sampled range; nullopt when the last sample already fails.
inline std::optional<std::int64_t> tail_index(const std::vector<std::int64_t>& ks, const std::vector<bool>& holds) {
    std::optional<std::int64_t> first;
    for (std::size_t i = ks.size(); i-- > 0;) {
        if (!holds[i]) break;
        first = ks[i];
    }
    return first;
}

} // namespace piatr
