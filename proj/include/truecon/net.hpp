#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "truecon/tsi.hpp"

namespace truecon {

using PlaceId = std::uint32_t;
using ActionId = std::uint32_t;
using Marking = std::vector<PlaceId>;  // sorted, no duplicates

inline constexpr std::size_t kDefaultStateCap = 100000;

// Safe, unweighted place/transition net. Transitions of the net are called
// actions to keep them apart from TSI transitions.
class PetriNet {
public:
    PlaceId add_place(const std::string& name, bool marked = false);
    ActionId add_action(const std::string& name, const std::string& label);
    // Either place -> action or action -> place, resolved by name.
    void add_arc(const std::string& from, const std::string& to);
    void add_input(PlaceId p, ActionId a);
    void add_output(ActionId a, PlaceId p);

    [[nodiscard]] std::size_t place_count() const noexcept { return places_.size(); }
    [[nodiscard]] std::size_t action_count() const noexcept { return actions_.size(); }
    [[nodiscard]] const std::string& place_name(PlaceId p) const { return places_[p]; }
    [[nodiscard]] const std::string& action_name(ActionId a) const { return actions_[a]; }
    [[nodiscard]] const std::string& action_label(ActionId a) const { return labels_[a]; }
    [[nodiscard]] const std::vector<PlaceId>& preset(ActionId a) const { return pre_[a]; }
    [[nodiscard]] const std::vector<PlaceId>& postset(ActionId a) const { return post_[a]; }
    // Actions consuming from p.
    [[nodiscard]] std::vector<ActionId> consumers(PlaceId p) const;
    [[nodiscard]] const Marking& initial_marking() const noexcept { return initial_; }

    [[nodiscard]] std::string marking_name(const Marking& m) const;

private:
    std::vector<std::string> places_;
    std::vector<std::string> actions_;
    std::vector<std::string> labels_;
    std::vector<std::vector<PlaceId>> pre_;
    std::vector<std::vector<PlaceId>> post_;
    Marking initial_;
};

// Reachability graph with independence from action concurrency: two actions are
// concurrent when their neighbourhoods are disjoint and some reachable marking
// enables both.
Tsi net_to_tsi(const PetriNet& n, std::size_t cap = kDefaultStateCap);

ValidationReport validate_net(const PetriNet& n, std::size_t cap = kDefaultStateCap);

} // namespace truecon
