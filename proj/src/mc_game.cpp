#include "truecon/mc_game.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <unordered_map>

#include "truecon/error.hpp"

namespace truecon {

const char* to_string(Rule r) {
    switch (r) {
    case Rule::Tt: return "tt";
    case Rule::Ff: return "ff";
    case Rule::Free: return "free";
    case Rule::Or: return "or";
    case Rule::And: return "and";
    case Rule::DiaC: return "<>c";
    case Rule::DiaNC: return "<>nc";
    case Rule::BoxC: return "[]c";
    case Rule::BoxNC: return "[]nc";
    case Rule::DiaCo: return "<co>";
    case Rule::BoxCo: return "[co]";
    case Rule::Fp: return "fp";
    case Rule::Var: return "var";
    }
    return "?";
}

namespace {

// Priority of each binder: outermost binders get the largest values,
// least fixpoints odd, greatest even.
template <class F, class IsBinder, class IsLeast>
std::map<std::string, std::uint32_t> binder_priorities(const F& root, IsBinder is_binder, IsLeast is_least) {
    std::vector<std::pair<std::string, std::pair<std::size_t, bool>>> found;
    std::function<void(const F&, std::size_t)> walk = [&](const F& f, std::size_t depth) {
        if (!f) return;
        if (is_binder(f)) {
            found.push_back({f->name, {depth, is_least(f)}});
            ++depth;
        }
        walk(f->left, depth);
        walk(f->right, depth);
    };
    walk(root, 0);
    std::size_t deepest = 0;
    for (const auto& [_, d] : found) deepest = std::max(deepest, d.first);
    std::map<std::string, std::uint32_t> res;
    for (const auto& [name, d] : found)
        res[name] = static_cast<std::uint32_t>(2 * (deepest - d.first) + (d.second ? 1 : 2));
    return res;
}

} // namespace

std::string McGame::describe(std::uint32_t v) const {
    return space->describe(process[v]) + " |- " + to_string(closure[formula[v]]);
}

std::uint32_t McGame::max_priority() const {
    std::uint32_t m = 0;
    for (auto p : arena.priority) m = std::max(m, p);
    return m;
}

McGame build_mc_game(std::shared_ptr<const ProcessSpace> space, std::size_t p0, const Formula& f,
                     const Valuation* valuation, std::size_t cap) {
    McGame g;
    g.space = std::move(space);
    const ProcessSpace& sp = *g.space;
    const Tsi& t = sp.tsi();
    Formula root = to_positive_normal_form(f);
    g.closure = fl_closure(root);
    std::map<Formula, std::uint32_t, FormulaLess> findex;
    std::map<std::string, Formula> binder;
    for (std::uint32_t i = 0; i < g.closure.size(); ++i) {
        findex.emplace(g.closure[i], i);
        if (g.closure[i]->op == Op::Mu || g.closure[i]->op == Op::Nu) binder[g.closure[i]->name] = g.closure[i];
    }
    // A binder whose variable never occurs still needs its (VAR) configuration.
    for (const auto& [z, _] : binder)
        if (auto zv = var(z); findex.emplace(zv, static_cast<std::uint32_t>(g.closure.size())).second)
            g.closure.push_back(zv);
    auto prio = binder_priorities(
        root, [](const Formula& x) { return x->op == Op::Mu || x->op == Op::Nu; },
        [](const Formula& x) { return x->op == Op::Mu; });
    if (valuation)
        for (const auto& [name, set] : *valuation)
            if (set.size() != sp.size()) throw Error("valuation for " + name + " does not match the process space");

    MoveTable moves(sp);
    std::unordered_map<std::uint64_t, std::uint32_t> seen;
    auto key = [&](std::size_t p, std::uint32_t fi) { return static_cast<std::uint64_t>(p) * g.closure.size() + fi; };
    auto node = [&](std::size_t p, std::uint32_t fi) -> std::uint32_t {
        auto [it, fresh] = seen.emplace(key(p, fi), static_cast<std::uint32_t>(g.process.size()));
        if (fresh) {
            if (g.process.size() >= cap) throw StateExplosion(cap);
            g.process.push_back(p);
            g.formula.push_back(fi);
        }
        return it->second;
    };
    g.initial = node(p0, findex.at(root));

    for (std::uint32_t v = 0; v < g.process.size(); ++v) {
        std::size_t p = g.process[v];
        const Formula& phi = g.closure[g.formula[v]];
        Player owner = Player::Eve;
        Rule rule = Rule::Tt;
        std::uint32_t priority = 0;
        std::vector<std::uint32_t> succ;
        auto child = [&](std::size_t q, const Formula& sub) { succ.push_back(node(q, findex.at(sub))); };
        switch (phi->op) {
        case Op::Tt: rule = Rule::Tt; owner = Player::Adam; break;
        case Op::Ff: rule = Rule::Ff; owner = Player::Eve; break;
        case Op::Var:
        case Op::Neg: {
            const std::string& z = phi->op == Op::Var ? phi->name : phi->left->name;
            if (phi->op == Op::Var) {
                if (auto b = binder.find(z); b != binder.end()) {
                    rule = Rule::Var;
                    priority = prio.at(z);
                    child(p, b->second->left);
                    break;
                }
            } else if (phi->left->op != Op::Var || binder.count(z)) {
                throw FormulaError("formula is not in positive normal form: " + to_string(phi));
            }
            if (!valuation || !valuation->count(z)) throw OpenFormula(z);
            bool holds = valuation->at(z).test(p) == (phi->op == Op::Var);
            rule = Rule::Free;
            owner = holds ? Player::Adam : Player::Eve;
            break;
        }
        case Op::Or:
        case Op::And:
            rule = phi->op == Op::Or ? Rule::Or : Rule::And;
            owner = phi->op == Op::Or ? Player::Eve : Player::Adam;
            child(p, phi->left);
            child(p, phi->right);
            break;
        case Op::DiaC:
        case Op::DiaNC:
        case Op::BoxC:
        case Op::BoxNC: {
            bool causal = phi->op == Op::DiaC || phi->op == Op::BoxC;
            bool eve = phi->op == Op::DiaC || phi->op == Op::DiaNC;
            rule = phi->op == Op::DiaC ? Rule::DiaC : phi->op == Op::DiaNC ? Rule::DiaNC
                 : phi->op == Op::BoxC ? Rule::BoxC : Rule::BoxNC;
            owner = eve ? Player::Eve : Player::Adam;
            for (const auto& m : moves.modal(p))
                if (m.causal == causal && t.label(m.via) == phi->name) child(m.target, phi->left);
            break;
        }
        case Op::DiaCo:
        case Op::BoxCo:
            rule = phi->op == Op::DiaCo ? Rule::DiaCo : Rule::BoxCo;
            owner = phi->op == Op::DiaCo ? Player::Eve : Player::Adam;
            for (auto q : moves.trace(p)) child(q, phi->left);
            break;
        case Op::Mu:
        case Op::Nu:
            rule = Rule::Fp;
            child(p, var(phi->name));
            break;
        }
        std::sort(succ.begin(), succ.end());
        succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
        g.rule.push_back(rule);
        g.arena.owner.push_back(owner);
        g.arena.priority.push_back(priority);
        g.arena.succ.push_back(std::move(succ));
    }
    return g;
}

McGame build_mc_game(const Tsi& t, const Formula& f, std::size_t cap) {
    if (auto fv = free_variables(f); !fv.empty()) throw OpenFormula(*fv.begin());
    auto space = std::make_shared<const ProcessSpace>(t);
    auto p0 = space->initial();
    return build_mc_game(std::move(space), p0, f, nullptr, cap);
}

McSolution solve_mc(const McGame& g) {
    McSolution s;
    s.parity = solve_parity(g.arena);
    s.winner = s.parity.winner[g.initial];
    return s;
}

namespace {

std::string dead_end_reason(const McGame& g, std::uint32_t v) {
    const Formula& phi = g.closure[g.formula[v]];
    switch (g.rule[v]) {
    case Rule::Tt: return "Adam cannot move at tt";
    case Rule::Ff: return "Eve cannot move at ff";
    case Rule::Free:
        return g.arena.owner[v] == Player::Adam ? "free variable holds at the process"
                                                : "free variable fails at the process";
    case Rule::DiaC:
    case Rule::DiaNC: return "Eve has no " + to_string(phi).substr(0, to_string(phi).find('>') + 1) + " move";
    case Rule::BoxC:
    case Rule::BoxNC: return "Adam has no " + to_string(phi).substr(0, to_string(phi).find(']') + 1) + " move";
    case Rule::DiaCo: return "Eve has no trace to pick";
    case Rule::BoxCo: return "Adam has no trace to pick";
    default: return "no move";
    }
}

std::string cycle_reason(const McGame& g, const std::vector<std::uint32_t>& loop) {
    std::uint32_t best = 0;
    std::string name;
    for (auto v : loop)
        if (g.rule[v] == Rule::Var && g.arena.priority[v] > best) {
            best = g.arena.priority[v];
            name = g.closure[g.formula[v]]->name;
        }
    if (name.empty()) return "configuration repeats without a fixpoint variable";
    return "configuration repeats; outermost variable " + name + ((best & 1u) ? " is a least fixpoint"
                                                                              : " is a greatest fixpoint");
}

} // namespace

Transcript replay(const McGame& g, const McSolution& sol, const ChoiceFn& choose) {
    Transcript tr;
    Player win = sol.winner;
    std::unordered_map<std::uint32_t, std::size_t> seen;
    std::uint32_t v = g.initial;
    for (;;) {
        PlayStep step{v, g.rule[v], g.arena.owner[v], kNoMove};
        const auto& opts = g.arena.succ[v];
        if (auto [it, fresh] = seen.emplace(v, tr.steps.size()); !fresh) {
            std::vector<std::uint32_t> loop;
            for (std::size_t k = it->second; k < tr.steps.size(); ++k) loop.push_back(tr.steps[k].node);
            std::uint32_t top = 0;
            for (auto u : loop) top = std::max(top, g.arena.priority[u]);
            tr.steps.push_back(step);
            tr.winner = (top & 1u) ? Player::Adam : Player::Eve;
            tr.reason = cycle_reason(g, loop);
            return tr;
        }
        if (opts.empty()) {
            tr.steps.push_back(step);
            tr.winner = opponent(step.mover);
            tr.reason = dead_end_reason(g, v);
            return tr;
        }
        std::uint32_t next;
        if (opts.size() == 1) {
            next = opts[0];
        } else if (step.mover == win && sol.parity.strategy[v] != kNoMove) {
            next = static_cast<std::uint32_t>(sol.parity.strategy[v]);
        } else {
            std::size_t k = choose(g, v, opts);
            if (k >= opts.size()) throw IllegalMove(tr.steps.size(), std::to_string(k));
            next = opts[k];
        }
        step.next = next;
        tr.steps.push_back(step);
        v = next;
    }
}

std::vector<Transcript> all_loser_lines(const McGame& g, const McSolution& sol, std::size_t limit) {
    std::vector<Transcript> out;
    // Each line is identified by the sequence of loser choices.
    std::vector<std::size_t> prefix;
    for (;;) {
        std::size_t depth = 0;
        std::vector<std::size_t> arity;
        auto tr = replay(g, sol, [&](const McGame&, std::uint32_t, const std::vector<std::uint32_t>& opts) {
            std::size_t k = depth < prefix.size() ? prefix[depth] : 0;
            arity.push_back(opts.size());
            ++depth;
            return k;
        });
        out.push_back(std::move(tr));
        if (out.size() >= limit) break;
        prefix.resize(arity.size(), 0);
        // Advance to the next choice sequence, odometer style.
        while (!prefix.empty() && prefix.back() + 1 >= arity[prefix.size() - 1]) {
            prefix.pop_back();
            arity.pop_back();
        }
        if (prefix.empty()) break;
        ++prefix.back();
    }
    return out;
}

std::string to_string(const McGame& g, const Transcript& tr) {
    std::string s;
    for (std::size_t i = 0; i < tr.steps.size(); ++i) {
        const auto& st = tr.steps[i];
        s += std::to_string(i) + ". " + g.describe(st.node) + "  [" + to_string(st.rule) + ", " + to_string(st.mover) +
             "]\n";
    }
    s += "winner: " + std::string(to_string(tr.winner)) + " (" + tr.reason + ")\n";
    return s;
}

StirlingGame build_stirling_game(const Tsi& t, const lmu::Formula& f, std::size_t cap) {
    StirlingGame g;
    g.tsi = std::make_shared<const Tsi>(t);
    std::map<lmu::Formula, std::uint32_t, lmu::Less> findex;
    std::map<std::string, lmu::Formula> binder;
    std::function<void(const lmu::Formula&)> walk = [&](const lmu::Formula& x) {
        if (!x || findex.count(x)) return;
        findex.emplace(x, static_cast<std::uint32_t>(g.closure.size()));
        g.closure.push_back(x);
        if (x->op == lmu::Op::Mu || x->op == lmu::Op::Nu) binder[x->name] = x;
        walk(x->left);
        walk(x->right);
    };
    walk(f);
    for (const auto& [z, _] : binder)
        walk(std::make_shared<const lmu::Node>(lmu::Node{lmu::Op::Var, z, nullptr, nullptr}));
    auto prio = binder_priorities(
        f, [](const lmu::Formula& x) { return x->op == lmu::Op::Mu || x->op == lmu::Op::Nu; },
        [](const lmu::Formula& x) { return x->op == lmu::Op::Mu; });

    std::unordered_map<std::uint64_t, std::uint32_t> seen;
    auto node = [&](StateId s, const lmu::Formula& x) -> std::uint32_t {
        std::uint32_t fi = findex.at(x);
        auto [it, fresh] = seen.emplace(static_cast<std::uint64_t>(s) * g.closure.size() + fi,
                                        static_cast<std::uint32_t>(g.state.size()));
        if (fresh) {
            if (g.state.size() >= cap) throw StateExplosion(cap);
            g.state.push_back(s);
            g.formula.push_back(fi);
        }
        return it->second;
    };
    g.initial = node(t.initial(), f);
    for (std::uint32_t v = 0; v < g.state.size(); ++v) {
        StateId s = g.state[v];
        const lmu::Formula& x = g.closure[g.formula[v]];
        Player owner = Player::Eve;
        std::uint32_t priority = 0;
        std::vector<std::uint32_t> succ;
        switch (x->op) {
        case lmu::Op::Tt: owner = Player::Adam; break;
        case lmu::Op::Ff: break;
        case lmu::Op::Var: {
            auto b = binder.find(x->name);
            if (b == binder.end()) throw OpenFormula(x->name);
            priority = prio.at(x->name);
            succ.push_back(node(s, b->second->left));
            break;
        }
        case lmu::Op::Or:
        case lmu::Op::And:
            owner = x->op == lmu::Op::Or ? Player::Eve : Player::Adam;
            succ.push_back(node(s, x->left));
            succ.push_back(node(s, x->right));
            break;
        case lmu::Op::Dia:
        case lmu::Op::Box:
            owner = x->op == lmu::Op::Dia ? Player::Eve : Player::Adam;
            for (auto r : t.out(s))
                if (t.label(r) == x->name) succ.push_back(node(t.target(r), x->left));
            break;
        case lmu::Op::Mu:
        case lmu::Op::Nu: {
            auto z = std::make_shared<const lmu::Node>(lmu::Node{lmu::Op::Var, x->name, nullptr, nullptr});
            succ.push_back(node(s, z));
            break;
        }
        }
        std::sort(succ.begin(), succ.end());
        succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
        g.arena.owner.push_back(owner);
        g.arena.priority.push_back(priority);
        g.arena.succ.push_back(std::move(succ));
    }
    return g;
}

Player solve_stirling(const Tsi& t, const Formula& f) {
    auto g = build_stirling_game(t, to_lmu(to_positive_normal_form(f)));
    return solve_parity(g.arena).winner[g.initial];
}

ProjectedGraph project(const McGame& g) {
    LmuImage image;
    to_lmu(g.closure.front(), &image);
    const Tsi& t = g.space->tsi();
    auto label = [&](std::uint32_t v) {
        return t.state_name(g.space->state_of(g.process[v])) + " |- " +
               lmu::to_string(image.at(g.closure[g.formula[v]]));
    };
    ProjectedGraph pg;
    for (std::uint32_t v = 0; v < g.size(); ++v) {
        auto from = label(v);
        pg.nodes.insert(from);
        const Formula& phi = g.closure[g.formula[v]];
        bool plain = is_plain_dia(phi) || is_plain_box(phi);
        for (auto w : g.arena.succ[v]) {
            if (plain) continue;  // contracted into the modal node below
            pg.edges.insert({from, label(w)});
        }
    }
    return pg;
}

ProjectedGraph project(const StirlingGame& g) {
    auto label = [&](std::uint32_t v) {
        return g.tsi->state_name(g.state[v]) + " |- " + lmu::to_string(g.closure[g.formula[v]]);
    };
    ProjectedGraph pg;
    for (std::uint32_t v = 0; v < g.size(); ++v) {
        pg.nodes.insert(label(v));
        for (auto w : g.arena.succ[v]) pg.edges.insert({label(v), label(w)});
    }
    return pg;
}

} // namespace truecon
