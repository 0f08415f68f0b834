#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "truecon/formula.hpp"
#include "truecon/order.hpp"

namespace truecon {

// Fixed-size bitset over the processes of one ProcessSpace.
class ProcessSet {
public:
    ProcessSet() = default;
    explicit ProcessSet(std::size_t n, bool full = false);

    [[nodiscard]] std::size_t size() const noexcept { return n_; }
    [[nodiscard]] bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
    void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
    void reset(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
    [[nodiscard]] std::size_t count() const;
    [[nodiscard]] bool empty() const { return count() == 0; }
    [[nodiscard]] ProcessSet complement() const;
    [[nodiscard]] bool subset_of(const ProcessSet& o) const;
    [[nodiscard]] std::vector<std::size_t> members() const;

    ProcessSet& operator|=(const ProcessSet& o);
    ProcessSet& operator&=(const ProcessSet& o);
    bool operator==(const ProcessSet& o) const { return n_ == o.n_ && words_ == o.words_; }
    bool operator!=(const ProcessSet& o) const { return !(*this == o); }

private:
    void trim();
    std::size_t n_ = 0;
    std::vector<std::uint64_t> words_;
};

struct ModalMove {
    TransId via;
    std::size_t target;  // (𝔛(τ(via)), via)
    bool causal;         // last ≤ via; otherwise last ⊖ via
};

// Successor structure of a process space, shared by the evaluator and the games.
class MoveTable {
public:
    explicit MoveTable(const ProcessSpace& space);

    [[nodiscard]] const std::vector<ModalMove>& modal(std::size_t p) const { return modal_[p]; }
    [[nodiscard]] const std::vector<std::size_t>& trace(std::size_t p) const { return trace_[p]; }

private:
    std::vector<std::vector<ModalMove>> modal_;
    std::vector<std::vector<std::size_t>> trace_;
};

using Valuation = std::map<std::string, ProcessSet>;

struct EvalOptions {
    // Processes whose truth is pinned to `frontier_value` for every subformula;
    // used for sound three-valued evaluation on truncated unfoldings.
    const ProcessSet* frontier = nullptr;
    bool frontier_value = false;
    // Filled with the iteration count of the last run of each fixpoint.
    std::map<std::string, std::size_t>* approximant_lengths = nullptr;
};

ProcessSet denote(const Formula& f, const ProcessSpace& space, const Valuation& v = {},
                  const EvalOptions& opts = {});
ProcessSet denote(const Formula& f, const ProcessSpace& space, const MoveTable& moves, const Valuation& v = {},
                  const EvalOptions& opts = {});

bool satisfies(const ProcessSpace& space, std::size_t process, const Formula& f);
// Initial process of t satisfies f.
bool satisfies(const Tsi& t, const Formula& f);

struct ApproximantTrace {
    std::string variable;
    bool least = true;
    std::vector<ProcessSet> chain;  // Z^0, Z^1, ... up to the first repetition
};

// f must be closed with a fixpoint at the root.
ApproximantTrace approximants(const Formula& f, const ProcessSpace& space);

} // namespace truecon
