#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "truecon/tsi.hpp"

namespace truecon {

using Run = std::vector<TransId>;

struct LabelledPoset {
    std::vector<std::string> labels;
    std::vector<std::vector<bool>> less;  // less[i][j]: i strictly below j

    [[nodiscard]] std::size_t size() const noexcept { return labels.size(); }
};

// Throws NotARun unless r starts at the initial state and is composable.
void check_run(const Run& r, const Tsi& t);

// Mazurkiewicz dependence closure: i below j when i < j and the two steps are
// dependent, closed transitively.
LabelledPoset run_poset(const Run& r, const Tsi& t);

// Label- and order-preserving bijection p -> q, if one exists.
std::optional<std::vector<std::size_t>> poset_isomorphic(const LabelledPoset& p, const LabelledPoset& q);

} // namespace truecon
