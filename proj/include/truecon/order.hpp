#pragma once

#include <array>
#include <memory>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "truecon/net.hpp"
#include "truecon/tsi.hpp"

namespace truecon {

// The four local dualities. Same-source pairs split into ⊗ (independent) and
// # (not, diagonal included); consecutive pairs into ⊖ and ≤.
struct DualityRelations {
    std::vector<std::pair<TransId, TransId>> co_immediate;
    std::vector<std::pair<TransId, TransId>> conflict;
    std::vector<std::pair<TransId, TransId>> co_linear;
    std::vector<std::pair<TransId, TransId>> causal;
};

DualityRelations duality_relations(const Tsi& t);

// Pointwise versions. The empty transition kEpsilon is only ever ≤ the
// transitions leaving the initial state.
bool immediately_concurrent(const Tsi& t, TransId a, TransId b);
bool in_conflict(const Tsi& t, TransId a, TransId b);
bool linearly_concurrent(const Tsi& t, TransId a, TransId b);
bool causally_dependent(const Tsi& t, TransId a, TransId b);

enum class SupportKind { Maximal, ConflictFree };

struct SupportSet {
    StateId owner = 0;
    std::vector<TransId> members;  // sorted
    SupportKind kind = SupportKind::Maximal;

    bool operator==(const SupportSet& o) const { return owner == o.owner && members == o.members; }
};

SupportSet maximal_set(const Tsi& t, StateId s);

// Distinct members pairwise ⊗.
bool conflict_free(const Tsi& t, const std::vector<TransId>& members);

// The ⊗-maximal conflict-free subsets of r (maximal cliques of ⊗ inside r),
// sorted by member list.
std::vector<SupportSet> complete_traces(const Tsi& t, const SupportSet& r);

struct Process {
    std::uint32_t support = 0;  // index into ProcessSpace supports
    TransId last = kEpsilon;
};

inline constexpr std::size_t kDefaultProcessCap = 2000000;

// Coherent processes whose supports are maximal sets or maximal traces.
class ProcessSpace {
public:
    explicit ProcessSpace(const Tsi& t, std::size_t cap = kDefaultProcessCap);

    [[nodiscard]] const Tsi& tsi() const noexcept { return *tsi_; }
    [[nodiscard]] std::size_t size() const noexcept { return processes_.size(); }
    [[nodiscard]] const Process& process(std::size_t i) const { return processes_[i]; }
    [[nodiscard]] const SupportSet& support(std::uint32_t s) const { return supports_[s]; }
    [[nodiscard]] const SupportSet& support_of(std::size_t p) const { return supports_[processes_[p].support]; }
    [[nodiscard]] StateId state_of(std::size_t p) const { return support_of(p).owner; }
    [[nodiscard]] std::size_t support_count() const noexcept { return supports_.size(); }
    [[nodiscard]] std::size_t initial() const noexcept { return initial_; }

    [[nodiscard]] std::uint32_t maximal_support(StateId s) const { return maximal_of_state_[s]; }
    // Supports reachable by one ⊗ step from support s.
    [[nodiscard]] const std::vector<std::uint32_t>& traces_of(std::uint32_t s) const { return traces_[s]; }
    [[nodiscard]] std::optional<std::size_t> find(std::uint32_t support, TransId last) const;
    [[nodiscard]] std::size_t index(std::uint32_t support, TransId last) const;

    // Target of a modal move along r: (𝔛(τ(r)), r).
    [[nodiscard]] std::size_t after(TransId r) const { return index(maximal_of_state_[tsi_->target(r)], r); }

    [[nodiscard]] std::string describe(std::size_t p) const;

private:
    std::shared_ptr<const Tsi> tsi_;
    std::vector<SupportSet> supports_;
    std::vector<std::uint32_t> maximal_of_state_;
    std::vector<std::vector<std::uint32_t>> traces_;
    std::vector<Process> processes_;
    std::unordered_map<std::uint64_t, std::size_t> lookup_;
    std::size_t initial_ = 0;
};

enum class ConfusionVariant { Symmetric, Asymmetric };

struct ConfusionTuple {
    TransId t1 = 0, t2 = 0, t3 = 0;
    ConfusionVariant variant = ConfusionVariant::Symmetric;
    bool deterministic = false;
};

// Symmetric tuples are reported once, with t1 < t2.
std::vector<ConfusionTuple> classify_confusion(const Tsi& t);

struct FreeChoiceResult {
    bool free_choice = true;
    std::optional<std::array<TransId, 3>> witness;  // t1 # t2, t3 independent of one of them
};

FreeChoiceResult is_free_choice(const Tsi& t);

struct FreeChoiceNetResult {
    bool free_choice = true;
    std::optional<PlaceId> witness;
};

FreeChoiceNetResult is_free_choice_net(const PetriNet& n);

struct XiResult {
    bool xi = true;
    std::string reason;
};

XiResult is_xi_system(const Tsi& t);

} // namespace truecon
