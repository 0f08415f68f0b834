#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "truecon/folding.hpp"
#include "truecon/net.hpp"

namespace truecon {

struct CcsTerm;
using CcsRef = std::shared_ptr<const CcsTerm>;

struct CcsTerm {
    enum class Kind { Nil, Prefix, Sum, Par, Name };
    Kind kind = Kind::Nil;
    std::string label;  // action of a prefix, or the referenced name
    std::vector<CcsRef> args;
};

CcsRef ccs_nil();
CcsRef ccs_prefix(const std::string& a, CcsRef t);
CcsRef ccs_sum(std::vector<CcsRef> ts);
CcsRef ccs_par(std::vector<CcsRef> ts);
CcsRef ccs_name(const std::string& n);

// Guarded definitions; `|` only at the top of the root term.
struct CcsProgram {
    std::map<std::string, CcsRef> definitions;
    CcsRef root;

    // Operands of the root's top-level parallel composition.
    [[nodiscard]] std::vector<CcsRef> components() const;
};

// Throws ParseError on syntax errors and FragmentViolation with kind
// "parallel-under-recursion" or "unguarded".
CcsProgram parse_ccs(const std::string& text);
std::string write_ccs(const CcsProgram& p);

std::string to_string(const CcsRef& t);
// Flattens and sorts + and | operands; names stay unexpanded.
CcsRef canonical(const CcsRef& t);
std::string canonical_string(const CcsRef& t);

struct CcsMove {
    std::string label;
    CcsRef residual;
    const CcsTerm* prefix;  // syntactic occurrence that fired
};

// Immediate moves of a sequential term, in syntactic order.
std::vector<CcsMove> ccs_moves(const CcsProgram& p, const CcsRef& t);

struct Relabelled {
    CcsProgram program;
    std::map<std::string, std::string> inverse;  // new label -> original label
};

// Suffixes every occurrence of a label that offers the same label twice from
// one reachable term or appears in two components; definitions shared by
// several components are copied per component first.
Relabelled relabel_theta(const CcsProgram& p);

// One sequential component per root operand: places are reachable residuals,
// actions their moves.
PetriNet ccs_to_net(const CcsProgram& p);

// Event keys are "k:i.j..." : component k and the move indices taken in it.
class CcsGenerator : public EsGenerator {
public:
    explicit CcsGenerator(CcsProgram p);
    [[nodiscard]] std::vector<EsStep> successors(const EventConfig& c) const override;
    [[nodiscard]] bool concurrent(const std::string& e1, const std::string& e2) const override;

    [[nodiscard]] const CcsProgram& program() const noexcept { return program_; }
    // Residual term of every component after c.
    [[nodiscard]] std::vector<CcsRef> residuals(const EventConfig& c) const;

private:
    CcsProgram program_;
    std::vector<CcsRef> components_;
};

// Configurations are equivalent when their residual terms are canonically equal.
class CcsOracle : public QuotientOracle {
public:
    explicit CcsOracle(const CcsGenerator& g) : g_(g) {}
    [[nodiscard]] std::string canonical(const EventConfig& c) const override;

private:
    const CcsGenerator& g_;
};

} // namespace truecon
