#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "truecon/formula.hpp"
#include "truecon/order.hpp"
#include "truecon/tsi.hpp"

namespace truecon {

enum class Relation { SB, HPB, HHPB, THPB };

struct Mode {
    enum class Kind { ExactAcyclic, Bounded, LocalXi };
    Kind kind = Kind::ExactAcyclic;
    std::size_t bound = 0;  // run length cap for Bounded

    static Mode exact() { return {Kind::ExactAcyclic, 0}; }
    static Mode bounded(std::size_t k) { return {Kind::Bounded, k}; }
    static Mode local() { return {Kind::LocalXi, 0}; }
};

enum class Outcome { Equivalent, NotEquivalent, Unknown };

const char* to_string(Relation r);
const char* to_string(Outcome o);
std::optional<Relation> relation_from_string(const std::string& s);

struct Verdict {
    Outcome outcome = Outcome::Equivalent;
    // Adam's distinguishing line ("L t3 (a)", "R t7 (b)", ...) or a note on Eve's strategy.
    std::vector<std::string> witness;
    Formula formula;  // HML witness for strong bisimulation, when refuted
    std::size_t configurations = 0;
    std::optional<std::size_t> bound;  // set for Unknown
};

Verdict strong_bisim(const Tsi& l, const Tsi& r);
// Throws NotAcyclic (exact mode) or NotXi (local mode).
Verdict hpb(const Tsi& l, const Tsi& r, Mode mode = Mode::exact());
// Exact mode only; throws NotAcyclic.
Verdict hhpb(const Tsi& l, const Tsi& r);
Verdict thpb(const Tsi& l, const Tsi& r, Mode mode = Mode::exact());

Verdict bisim(const Tsi& l, const Tsi& r, Relation rel, Mode mode = Mode::exact());

// Label- and pattern-preserving bijection between two transition sets leaving
// the current states, measured against the anchors (the last transitions, or
// kEpsilon). A member is causal when it depends on the anchor.
std::optional<std::vector<std::pair<TransId, TransId>>> hp_isomorphic_sets(const Tsi& l, const std::vector<TransId>& m,
                                                                           TransId anchor_l, const Tsi& r,
                                                                           const std::vector<TransId>& n,
                                                                           TransId anchor_r);

// Closed fixpoint-free formula of the fragment, of modal depth at most `depth`,
// that holds at exactly one of the two initial processes (the left one).
// Absence at a given depth is evidence, not proof, of equivalence.
std::optional<Formula> distinguishing_formula(const Tsi& l, const Tsi& r, Fragment frag, std::size_t depth);

} // namespace truecon
