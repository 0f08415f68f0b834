#pragma once

#include <functional>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "truecon/formula.hpp"
#include "truecon/order.hpp"
#include "truecon/parity.hpp"
#include "truecon/semantics.hpp"

namespace truecon {

enum class Rule { Tt, Ff, Free, Or, And, DiaC, DiaNC, BoxC, BoxNC, DiaCo, BoxCo, Fp, Var };

const char* to_string(Rule r);

inline constexpr std::size_t kDefaultGameCap = 2000000;

// Board of the model-checking game: node v is the configuration
// process(v) ⊢ closure[formula(v)].
struct McGame {
    std::shared_ptr<const ProcessSpace> space;
    std::vector<Formula> closure;  // PNF, binders renamed apart
    std::vector<std::size_t> process;
    std::vector<std::uint32_t> formula;
    std::vector<Rule> rule;
    ParityGame arena;
    std::uint32_t initial = 0;

    [[nodiscard]] std::size_t size() const noexcept { return process.size(); }
    [[nodiscard]] std::string describe(std::uint32_t v) const;
    [[nodiscard]] std::uint32_t max_priority() const;
};

// f is converted to positive normal form and renamed apart first. Free
// variables need a valuation over `space`; otherwise OpenFormula is thrown.
McGame build_mc_game(std::shared_ptr<const ProcessSpace> space, std::size_t p0, const Formula& f,
                     const Valuation* valuation = nullptr, std::size_t cap = kDefaultGameCap);
McGame build_mc_game(const Tsi& t, const Formula& f, std::size_t cap = kDefaultGameCap);

struct McSolution {
    Player winner = Player::Eve;
    ParitySolution parity;
};

McSolution solve_mc(const McGame& g);

struct PlayStep {
    std::uint32_t node = 0;
    Rule rule = Rule::Tt;
    Player mover = Player::Eve;
    std::int64_t next = kNoMove;  // kNoMove when the play stops here
};

struct Transcript {
    std::vector<PlayStep> steps;
    Player winner = Player::Eve;
    std::string reason;
};

// Picks a successor (index into `options`) for the losing side.
using ChoiceFn = std::function<std::size_t(const McGame&, std::uint32_t node, const std::vector<std::uint32_t>& options)>;

// Winner follows its strategy, the loser is driven by `choose`. Stops at a
// dead end or at the first repeated configuration. Throws IllegalMove when
// `choose` returns an out-of-range index.
Transcript replay(const McGame& g, const McSolution& sol, const ChoiceFn& choose);

// Every play the loser can force against the winner's strategy, up to `limit` plays.
std::vector<Transcript> all_loser_lines(const McGame& g, const McSolution& sol, std::size_t limit = 10000);

std::string to_string(const McGame& g, const Transcript& tr);

// Classic local model-checking game on states (independence ignored).
struct StirlingGame {
    std::shared_ptr<const Tsi> tsi;
    std::vector<lmu::Formula> closure;
    std::vector<StateId> state;
    std::vector<std::uint32_t> formula;
    ParityGame arena;
    std::uint32_t initial = 0;

    [[nodiscard]] std::size_t size() const noexcept { return state.size(); }
};

StirlingGame build_stirling_game(const Tsi& t, const lmu::Formula& f, std::size_t cap = kDefaultGameCap);
// Throws NotLmuFragment when f has no Lμ counterpart.
Player solve_stirling(const Tsi& t, const Formula& f);

// Game graph with processes projected to states and formulas to their Lμ
// image. The choice between the causal and non-causal half of a plain
// modality is contracted.
struct ProjectedGraph {
    std::set<std::string> nodes;
    std::set<std::pair<std::string, std::string>> edges;
    bool operator==(const ProjectedGraph&) const = default;
};

ProjectedGraph project(const McGame& g);
ProjectedGraph project(const StirlingGame& g);

} // namespace truecon
