#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace truecon {

enum class Op { Tt, Ff, Var, Neg, And, Or, DiaC, DiaNC, BoxC, BoxNC, DiaCo, BoxCo, Mu, Nu };

struct Node;
using Formula = std::shared_ptr<const Node>;

struct Node {
    Op op;
    std::string name;  // label of a modality, variable of Var/Mu/Nu
    Formula left;      // sole operand of unary nodes
    Formula right;
};

Formula tt();
Formula ff();
Formula var(const std::string& z);
Formula neg(Formula f);
Formula conj(Formula a, Formula b);
Formula disj(Formula a, Formula b);
Formula dia_c(const std::string& a, Formula f);
Formula dia_nc(const std::string& a, Formula f);
Formula box_c(const std::string& a, Formula f);
Formula box_nc(const std::string& a, Formula f);
Formula dia_co(Formula f);
Formula box_co(Formula f);
Formula mu(const std::string& z, Formula f);
Formula nu(const std::string& z, Formula f);
// Plain modalities: <a>f = <a>c f | <a>nc f and [a]f = [a]c f & [a]nc f.
// The body is shared by both branches; run rename_apart before handing a
// hand-built formula with binders under plain modalities to the games.
Formula dia(const std::string& a, Formula f);
Formula box(const std::string& a, Formula f);

// Structural order and equality (variable names matter).
int compare(const Formula& a, const Formula& b);
struct FormulaLess {
    bool operator()(const Formula& a, const Formula& b) const { return compare(a, b) < 0; }
};
bool equal(const Formula& a, const Formula& b);
bool alpha_equal(const Formula& a, const Formula& b);

bool is_plain_dia(const Formula& f);
bool is_plain_box(const Formula& f);

std::set<std::string> free_variables(const Formula& f);
std::size_t formula_size(const Formula& f);
// Plain modalities, c/nc modalities and trace modalities each count one level.
std::size_t modal_depth(const Formula& f);
bool has_fixpoint(const Formula& f);

// Renames binders so that every binder is distinct and none shadows a free variable.
Formula rename_apart(const Formula& f);
// Canonical binder names (_0, _1, ... in preorder); used for α-insensitive comparison.
Formula alpha_normalize(const Formula& f);

struct ParseOptions {
    // Needed only for the complement label sets <-> and <-K>.
    std::vector<std::string> alphabet;
    bool require_closed = false;
};

Formula parse_formula(const std::string& text, const ParseOptions& opts = {});
// One formula per non-empty, non-comment line.
std::vector<Formula> parse_formula_list(const std::string& text, const ParseOptions& opts = {});

std::string to_string(const Formula& f);

Formula to_positive_normal_form(const Formula& f);
bool is_positive_normal_form(const Formula& f);

// Syntactic subformulas in preorder, deduplicated.
std::vector<Formula> fl_closure(const Formula& f);

enum class Fragment { HML, LMU, TLMU, CLMU, TFL };
Fragment fragment_of(const Formula& f);
std::string to_string(Fragment f);
std::optional<Fragment> fragment_from_string(const std::string& s);
// Whether every formula of `inner` is a formula of `outer`.
bool fragment_within(Fragment inner, Fragment outer);

// Classic modal mu-calculus, the target of plain ⊗-free formulas.
namespace lmu {
enum class Op { Tt, Ff, Var, And, Or, Dia, Box, Mu, Nu };
struct Node;
using Formula = std::shared_ptr<const Node>;
struct Node {
    Op op;
    std::string name;
    Formula left;
    Formula right;
};
int compare(const Formula& a, const Formula& b);
struct Less {
    bool operator()(const Formula& a, const Formula& b) const { return compare(a, b) < 0; }
};
std::string to_string(const Formula& f);
} // namespace lmu

using LmuImage = std::map<Formula, lmu::Formula, FormulaLess>;

// Collapses plain modalities. Throws NotLmuFragment on c/nc-only modalities,
// trace modalities or negations. When `image` is given it receives the
// Lμ counterpart of every subformula (both copies of a plain body map to the
// same image).
lmu::Formula to_lmu(const Formula& f, LmuImage* image = nullptr);

} // namespace truecon
