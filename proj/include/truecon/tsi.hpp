#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace truecon {

using StateId = std::uint32_t;
using TransId = std::uint32_t;

// Stands for the empty transition that "arrives" at the initial state.
inline constexpr TransId kEpsilon = std::numeric_limits<TransId>::max();

struct Transition {
    StateId source = 0;
    std::string label;
    StateId target = 0;
};

// Transition system with independence. Immutable once built; the
// independence relation is stored symmetrically.
class Tsi {
public:
    Tsi() = default;
    Tsi(std::vector<std::string> state_names, StateId initial,
        std::vector<Transition> transitions, std::vector<std::string> transition_names,
        const std::vector<std::pair<TransId, TransId>>& indep);

    [[nodiscard]] std::size_t state_count() const noexcept { return state_names_.size(); }
    [[nodiscard]] std::size_t transition_count() const noexcept { return transitions_.size(); }
    [[nodiscard]] StateId initial() const noexcept { return initial_; }

    [[nodiscard]] const Transition& transition(TransId t) const { return transitions_[t]; }
    [[nodiscard]] StateId source(TransId t) const { return transitions_[t].source; }
    [[nodiscard]] StateId target(TransId t) const { return transitions_[t].target; }
    [[nodiscard]] const std::string& label(TransId t) const { return transitions_[t].label; }

    [[nodiscard]] const std::vector<TransId>& out(StateId s) const { return out_[s]; }
    [[nodiscard]] const std::vector<TransId>& in(StateId s) const { return in_[s]; }

    // kEpsilon is independent of nothing.
    [[nodiscard]] bool independent(TransId a, TransId b) const;
    [[nodiscard]] const std::vector<TransId>& independent_of(TransId t) const { return indep_[t]; }
    [[nodiscard]] std::vector<std::pair<TransId, TransId>> indep_pairs() const;

    [[nodiscard]] const std::string& state_name(StateId s) const { return state_names_[s]; }
    [[nodiscard]] const std::string& transition_name(TransId t) const { return transition_names_[t]; }
    [[nodiscard]] std::optional<StateId> find_state(const std::string& name) const;
    [[nodiscard]] std::optional<TransId> find_transition(const std::string& name) const;
    [[nodiscard]] std::optional<TransId> find_transition(StateId src, const std::string& label,
                                                         StateId dst) const;

    [[nodiscard]] std::vector<std::string> alphabet() const;
    [[nodiscard]] bool acyclic() const;

private:
    std::vector<std::string> state_names_;
    StateId initial_ = 0;
    std::vector<Transition> transitions_;
    std::vector<std::string> transition_names_;
    std::vector<std::vector<TransId>> out_;
    std::vector<std::vector<TransId>> in_;
    std::vector<std::vector<TransId>> indep_;  // sorted
};

// Name-based construction, used by the parsers and by tests.
class TsiBuilder {
public:
    StateId add_state(const std::string& name, bool initial = false);
    TransId add_transition(const std::string& name, const std::string& src,
                           const std::string& label, const std::string& dst);
    // Auto-named transition; creates missing states.
    TransId add_transition(const std::string& src, const std::string& label, const std::string& dst);
    void add_indep(const std::string& t1, const std::string& t2);
    void add_indep(TransId t1, TransId t2) { indep_.emplace_back(t1, t2); }

    [[nodiscard]] Tsi build() const;

private:
    StateId state_or_create(const std::string& name);

    std::vector<std::string> states_;
    std::optional<StateId> initial_;
    std::vector<Transition> transitions_;
    std::vector<std::string> transition_names_;
    std::vector<std::pair<TransId, TransId>> indep_;
};

struct Check {
    std::string name;
    bool passed = true;
    std::string witness;
};

struct ValidationReport {
    std::vector<Check> checks;
    // Only filled for TSIs: the ≺ pairs and the ∼-class index of each transition.
    std::vector<std::pair<TransId, TransId>> precedes;
    std::vector<std::uint32_t> instance_class;

    [[nodiscard]] bool ok() const;
    [[nodiscard]] const Check* find(const std::string& name) const;
};

// ≺ pairs, by scanning every independence square.
std::vector<std::pair<TransId, TransId>> precedes_pairs(const Tsi& t);
// Class index per transition (classes numbered by smallest member).
std::vector<std::uint32_t> instance_classes(const Tsi& t);

ValidationReport validate_tsi(const Tsi& t);

// Pairs (t1,t2), t1 < t2, leaving the same state, independent, equally labelled.
std::vector<std::pair<TransId, TransId>> detect_auto_concurrency(const Tsi& t);

} // namespace truecon
