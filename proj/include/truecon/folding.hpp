#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "truecon/es.hpp"
#include "truecon/formula.hpp"
#include "truecon/tsi.hpp"

namespace truecon {

// A configuration of a (possibly infinite) event structure, as sorted event keys.
using EventConfig = std::vector<std::string>;

struct EsStep {
    std::string event;
    std::string label;
};

class EsGenerator {
public:
    virtual ~EsGenerator() = default;
    // Events enabled at c, in a fixed order.
    [[nodiscard]] virtual std::vector<EsStep> successors(const EventConfig& c) const = 0;
    // Concurrency between two events of the structure.
    [[nodiscard]] virtual bool concurrent(const std::string& e1, const std::string& e2) const = 0;
};

class QuotientOracle {
public:
    virtual ~QuotientOracle() = default;
    [[nodiscard]] virtual std::string canonical(const EventConfig& c) const = 0;
    [[nodiscard]] bool equivalent(const EventConfig& a, const EventConfig& b) const {
        return canonical(a) == canonical(b);
    }
};

// Explicit finite event structure as a generator; event keys are event names.
class ExplicitGenerator : public EsGenerator {
public:
    explicit ExplicitGenerator(const EventStructure& e);
    [[nodiscard]] std::vector<EsStep> successors(const EventConfig& c) const override;
    [[nodiscard]] bool concurrent(const std::string& e1, const std::string& e2) const override;

private:
    EventId id(const std::string& name) const;
    const EventStructure& es_;
};

// Every configuration is its own class.
class IdentityOracle : public QuotientOracle {
public:
    [[nodiscard]] std::string canonical(const EventConfig& c) const override;
};

inline constexpr std::size_t kDefaultFoldCap = 100000;

EventConfig add_event(const EventConfig& c, const std::string& e);

struct RepresentativeSet {
    std::vector<std::string> classes;           // canonical forms, discovery order
    std::vector<EventConfig> representatives;   // first configuration seen per class
    std::set<std::string> er;
    std::set<std::string> ef;                   // empty until completed
};

// Breadth-first search that only expands configurations opening a new class.
// Throws CapExceeded when more than `cap` configurations are examined.
RepresentativeSet representative_set(const EsGenerator& g, const QuotientOracle& q, std::size_t cap = kDefaultFoldCap);
// Adds the events of all next configurations of the representatives.
RepresentativeSet complete_representative_set(RepresentativeSet rs, const EsGenerator& g);

// State i is named "s<i>" and stands for class i of representative_set.
Tsi fold(const EsGenerator& g, const QuotientOracle& q, std::size_t cap = kDefaultFoldCap);

// Prefix of the unfolding with at most `depth` events per configuration.
struct Unfolding {
    Tsi tsi;
    std::vector<StateId> frontier;  // configurations of `depth` events that could still grow
};

Unfolding truncated_unfolding(const EsGenerator& g, std::size_t depth, std::size_t cap = kDefaultFoldCap);

// Explicit event structure of a generator with finitely many configurations;
// causes are read off the configurations containing an event, conflict is
// never occurring together. Throws CapExceeded beyond `cap` configurations.
EventStructure materialize(const EsGenerator& g, std::size_t cap = kDefaultFoldCap);

enum class FoldStatus { Agree, Undecided, Disagree };
const char* to_string(FoldStatus s);

struct FoldCheck {
    Formula formula;
    bool folded = false;
    std::optional<bool> unfolded;  // empty when the truncation cannot decide
    FoldStatus status = FoldStatus::Undecided;
};

struct FoldReport {
    std::vector<FoldCheck> checks;
    std::size_t agreements = 0, undecided = 0, disagreements = 0;
};

// Compares each closed formula on the folded system with a sound three-valued
// verdict on the truncated unfolding (frontier forced false, then true).
FoldReport verify_fold(const Tsi& folded, const EsGenerator& g, const std::vector<Formula>& formulas,
                       std::size_t depth, std::size_t cap = kDefaultFoldCap, int jobs = 1);

} // namespace truecon
