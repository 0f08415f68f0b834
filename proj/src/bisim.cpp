#include "truecon/bisim.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <tuple>

#include "truecon/error.hpp"
#include "truecon/poset.hpp"
#include "truecon/semantics.hpp"

namespace truecon {

const char* to_string(Relation r) {
    switch (r) {
    case Relation::SB: return "sb";
    case Relation::HPB: return "hpb";
    case Relation::HHPB: return "hhpb";
    case Relation::THPB: return "thpb";
    }
    return "?";
}

const char* to_string(Outcome o) {
    switch (o) {
    case Outcome::Equivalent: return "equivalent";
    case Outcome::NotEquivalent: return "not-equivalent";
    case Outcome::Unknown: return "unknown";
    }
    return "?";
}

std::optional<Relation> relation_from_string(const std::string& s) {
    if (s == "sb") return Relation::SB;
    if (s == "hpb") return Relation::HPB;
    if (s == "hhpb") return Relation::HHPB;
    if (s == "thpb") return Relation::THPB;
    return std::nullopt;
}

namespace {

bool depends_on_anchor(const Tsi& t, TransId anchor, TransId x) {
    return anchor == kEpsilon || !t.independent(anchor, x);
}

std::string move_name(char side, const Tsi& t, TransId x) {
    return std::string(1, side) + " " + t.transition_name(x) + " (" + t.label(x) + ")";
}

std::string set_name(char side, const Tsi& t, const std::vector<TransId>& m) {
    std::string s = std::string(1, side) + " trace {";
    for (std::size_t i = 0; i < m.size(); ++i) s += (i ? "," : "") + t.transition_name(m[i]);
    return s + "}";
}

// Maximal traces below the maximal support of each state, computed on demand.
class TraceCache {
public:
    explicit TraceCache(const Tsi& t) : t_(t), cache_(t.state_count()), done_(t.state_count(), 0) {}
    const std::vector<std::vector<TransId>>& at(StateId s) {
        if (!done_[s]) {
            for (const auto& m : complete_traces(t_, maximal_set(t_, s))) cache_[s].push_back(m.members);
            done_[s] = 1;
        }
        return cache_[s];
    }

private:
    const Tsi& t_;
    std::vector<std::vector<std::vector<TransId>>> cache_;
    std::vector<char> done_;
};

// One side of a synchronous run pair, with the down-set of every position.
struct Side {
    Run run;
    StateId end = 0;
    std::vector<std::vector<bool>> below;

    [[nodiscard]] TransId last() const { return run.empty() ? kEpsilon : run.back(); }
};

std::vector<bool> predecessors(const Tsi& t, const Side& s, TransId u) {
    std::vector<bool> res(s.run.size(), false);
    for (std::size_t i = 0; i < s.run.size(); ++i) {
        if (t.independent(s.run[i], u)) continue;
        res[i] = true;
        for (std::size_t j = 0; j < i; ++j)
            if (s.below[i][j]) res[j] = true;
    }
    return res;
}

Side extend(const Tsi& t, const Side& s, TransId u, std::vector<bool> pred) {
    Side n = s;
    n.run.push_back(u);
    n.end = t.target(u);
    n.below.push_back(std::move(pred));
    return n;
}

// Three-valued game value for Eve.
enum class Val : std::uint8_t { Lose = 0, Unknown = 1, Win = 2 };

Val vmin(Val a, Val b) { return std::min(a, b); }
Val vmax(Val a, Val b) { return std::max(a, b); }

// Exhaustive search of the hpb game (optionally with the trace rule) over
// synchronous run pairs.
class RunGame {
public:
    RunGame(const Tsi& l, const Tsi& r, bool traces, std::optional<std::size_t> bound)
        : t_{&l, &r}, traces_(traces), bound_(bound), tc_{TraceCache(l), TraceCache(r)} {}

    Val value(const Side& a, const Side& b) {
        auto key = std::make_pair(a.run, b.run);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        Val v = compute(a, b, nullptr);
        memo_.emplace(std::move(key), v);
        return v;
    }

    std::size_t configurations() const { return memo_.size(); }

    // Adam's refutation from a losing position, following Eve's first answers.
    std::vector<std::string> refutation(Side a, Side b) {
        std::vector<std::string> line;
        for (std::size_t guard = 0; guard < 1000; ++guard) {
            std::optional<std::pair<Side, Side>> next;
            compute(a, b, &line, &next);
            if (!next) break;
            a = next->first;
            b = next->second;
        }
        return line;
    }

private:
    const Tsi& tsi(int d) const { return *t_[d]; }

    // Best value Eve reaches by answering `u` (played by Adam on side d)
    // with a move on the other side, restricted to `allowed` when given.
    Val answer(const Side* s, int d, TransId u, const std::vector<TransId>* allowed, std::optional<std::pair<Side, Side>>* pick) {
        int e = 1 - d;
        auto pu = predecessors(tsi(d), s[d], u);
        Val best = Val::Lose;
        for (TransId v : tsi(e).out(s[e].end)) {
            if (tsi(e).label(v) != tsi(d).label(u)) continue;
            if (allowed && std::find(allowed->begin(), allowed->end(), v) == allowed->end()) continue;
            auto pv = predecessors(tsi(e), s[e], v);
            if (pu != pv) continue;
            Side ext[2];
            ext[d] = extend(tsi(d), s[d], u, pu);
            ext[e] = extend(tsi(e), s[e], v, pv);
            Val val = value(ext[0], ext[1]);
            if (pick && !*pick) *pick = std::make_pair(ext[0], ext[1]);
            best = vmax(best, val);
            if (best == Val::Win) break;
        }
        return best;
    }

    Val compute(const Side& a, const Side& b, std::vector<std::string>* line,
                std::optional<std::pair<Side, Side>>* next = nullptr) {
        const Side s[2] = {a, b};
        if (bound_ && a.run.size() >= *bound_) {
            bool stuck = tsi(0).out(a.end).empty() && tsi(1).out(b.end).empty();
            return stuck ? Val::Win : Val::Unknown;
        }
        Val res = Val::Win;
        for (int d = 0; d < 2; ++d) {
            for (TransId u : tsi(d).out(s[d].end)) {
                Val best = answer(s, d, u, nullptr, nullptr);
                if (line && best == Val::Lose) {
                    line->push_back(move_name(d ? 'R' : 'L', tsi(d), u));
                    answer(s, d, u, nullptr, next);
                    if (!*next) line->push_back("no answer");
                    return Val::Lose;
                }
                res = vmin(res, best);
                if (res == Val::Lose && !line) return res;
            }
        }
        if (!traces_ || res == Val::Lose) return res;
        for (int d = 0; d < 2; ++d) {
            int e = 1 - d;
            for (const auto& m : tc_[d].at(s[d].end)) {
                Val best = Val::Lose;
                for (const auto& n : tc_[e].at(s[e].end)) {
                    if (!hp_isomorphic_sets(tsi(d), m, s[d].last(), tsi(e), n, s[e].last())) continue;
                    Val round = Val::Win;
                    const std::vector<TransId>* chosen[2];
                    chosen[d] = &m;
                    chosen[e] = &n;
                    for (int x = 0; x < 2 && round != Val::Lose; ++x)
                        for (TransId u : *chosen[x]) {
                            round = vmin(round, answer(s, x, u, chosen[1 - x], nullptr));
                            if (round == Val::Lose) break;
                        }
                    best = vmax(best, round);
                    if (best == Val::Win) break;
                }
                if (line && best == Val::Lose) {
                    line->push_back(set_name(d ? 'R' : 'L', tsi(d), m));
                    line->push_back("no hp-isomorphic trace survives");
                    return Val::Lose;
                }
                res = vmin(res, best);
                if (res == Val::Lose) return res;
            }
        }
        return res;
    }

    const Tsi* t_[2];
    bool traces_;
    std::optional<std::size_t> bound_;
    TraceCache tc_[2];
    std::map<std::pair<Run, Run>, Val> memo_;
};

// Greatest fixpoint over pairs (state, last) x (state, last) using local
// synchrony only.
class LocalGame {
public:
    using Pos = std::tuple<StateId, TransId, StateId, TransId>;

    LocalGame(const Tsi& l, const Tsi& r, bool traces) : t_{&l, &r}, traces_(traces), tc_{TraceCache(l), TraceCache(r)} {}

    Outcome solve(std::size_t& configurations, std::vector<std::string>& witness) {
        Pos init{t_[0]->initial(), kEpsilon, t_[1]->initial(), kEpsilon};
        index(init);
        for (std::size_t k = 0; k < pos_.size(); ++k) expand(k);
        configurations = pos_.size() - aux_.size();
        // Remove positions with an unanswerable challenge until stable.
        std::vector<char> alive(pos_.size(), 1);
        for (bool changed = true; changed;) {
            changed = false;
            for (std::size_t k = 0; k < pos_.size(); ++k) {
                if (!alive[k]) continue;
                for (const auto& ch : challenges_[k]) {
                    bool ok = false;
                    for (const auto& option : ch.options) {
                        bool all = true;
                        for (auto w : option) all = all && alive[w];
                        if (all) { ok = true; break; }
                    }
                    if (!ok) {
                        alive[k] = 0;
                        changed = true;
                        if (k == 0) witness.push_back(ch.name);
                        break;
                    }
                }
            }
        }
        return alive[0] ? Outcome::Equivalent : Outcome::NotEquivalent;
    }

private:
    // A challenge is met when all successors of one option stay in the relation.
    struct Challenge {
        std::string name;
        std::vector<std::vector<std::size_t>> options;
    };

    std::size_t index(const Pos& p) {
        auto [it, fresh] = ids_.emplace(p, pos_.size());
        if (fresh) {
            pos_.push_back(p);
            challenges_.emplace_back();
        }
        return it->second;
    }

    std::vector<std::size_t> answers(const StateId st[2], const TransId last[2], int d, TransId u,
                                     const std::vector<TransId>* allowed) {
        int e = 1 - d;
        std::vector<std::size_t> res;
        bool cu = depends_on_anchor(*t_[d], last[d], u);
        for (TransId v : t_[e]->out(st[e])) {
            if (t_[e]->label(v) != t_[d]->label(u)) continue;
            if (allowed && std::find(allowed->begin(), allowed->end(), v) == allowed->end()) continue;
            if (depends_on_anchor(*t_[e], last[e], v) != cu) continue;
            StateId ns[2];
            TransId nl[2];
            ns[d] = t_[d]->target(u);
            nl[d] = u;
            ns[e] = t_[e]->target(v);
            nl[e] = v;
            res.push_back(index({ns[0], nl[0], ns[1], nl[1]}));
        }
        return res;
    }

    void expand(std::size_t k) {
        if (aux_.count(k)) return;
        auto [s0, l0, s1, l1] = pos_[k];
        const StateId st[2] = {s0, s1};
        const TransId last[2] = {l0, l1};
        std::vector<Challenge> chs;
        for (int d = 0; d < 2; ++d)
            for (TransId u : t_[d]->out(st[d])) {
                Challenge c{move_name(d ? 'R' : 'L', *t_[d], u), {}};
                for (auto w : answers(st, last, d, u, nullptr)) c.options.push_back({w});
                chs.push_back(std::move(c));
            }
        if (traces_) {
            for (int d = 0; d < 2; ++d) {
                int e = 1 - d;
                for (const auto& m : tc_[d].at(st[d])) {
                    Challenge c{set_name(d ? 'R' : 'L', *t_[d], m), {}};
                    for (const auto& n : tc_[e].at(st[e])) {
                        if (!hp_isomorphic_sets(*t_[d], m, last[d], *t_[e], n, last[e])) continue;
                        const std::vector<TransId>* chosen[2];
                        chosen[d] = &m;
                        chosen[e] = &n;
                        // Every move inside the chosen traces must be answerable;
                        // a move with several answers needs one of them alive, which
                        // a conjunction of options cannot express, so split per move.
                        std::vector<std::size_t> need;
                        bool possible = true;
                        for (int x = 0; x < 2 && possible; ++x)
                            for (TransId u : *chosen[x]) {
                                auto ans = answers(st, last, x, u, chosen[1 - x]);
                                if (ans.empty()) { possible = false; break; }
                                need.push_back(sub_challenge(std::move(ans)));
                            }
                        if (possible) c.options.push_back(std::move(need));
                    }
                    chs.push_back(std::move(c));
                }
            }
        }
        challenges_[k] = std::move(chs);
    }

    // Auxiliary position alive iff one of `ans` is alive.
    std::size_t sub_challenge(std::vector<std::size_t> ans) {
        std::size_t id = pos_.size();
        pos_.push_back({kEpsilon, kEpsilon, kEpsilon, kEpsilon});
        aux_.insert(id);
        Challenge c{"answer", {}};
        for (auto w : ans) c.options.push_back({w});
        challenges_.push_back({std::move(c)});
        return id;
    }

    const Tsi* t_[2];
    bool traces_;
    TraceCache tc_[2];
    std::map<Pos, std::size_t> ids_;
    std::vector<Pos> pos_;
    std::vector<std::vector<Challenge>> challenges_;
    std::set<std::size_t> aux_;
};

void require_acyclic(const Tsi& l, const Tsi& r) {
    if (!l.acyclic()) throw NotAcyclic("left system has a cycle");
    if (!r.acyclic()) throw NotAcyclic("right system has a cycle");
}

void require_xi(const Tsi& l, const Tsi& r) {
    if (auto x = is_xi_system(l); !x.xi) throw NotXi("left system is not in the class Xi");
    if (auto x = is_xi_system(r); !x.xi) throw NotXi("right system is not in the class Xi");
}

Verdict run_game(const Tsi& l, const Tsi& r, Mode mode, bool traces) {
    Verdict v;
    if (mode.kind == Mode::Kind::LocalXi) {
        require_xi(l, r);
        LocalGame g(l, r, traces);
        v.outcome = g.solve(v.configurations, v.witness);
        return v;
    }
    std::optional<std::size_t> bound;
    if (mode.kind == Mode::Kind::ExactAcyclic) require_acyclic(l, r);
    else bound = mode.bound;
    RunGame g(l, r, traces, bound);
    Side a{{}, l.initial(), {}}, b{{}, r.initial(), {}};
    Val val = g.value(a, b);
    v.configurations = g.configurations();
    if (val == Val::Win) {
        v.outcome = Outcome::Equivalent;
        v.witness.push_back("Eve answers every challenge over " + std::to_string(v.configurations) + " run pairs");
    } else if (val == Val::Lose) {
        v.outcome = Outcome::NotEquivalent;
        v.witness = g.refutation(a, b);
    } else {
        v.outcome = Outcome::Unknown;
        v.bound = bound;
    }
    return v;
}

// ------------------------------------------------------------------ hhpb

// Removes the maximal position i by commuting it to the end through
// independence squares.
Run delete_position(const Tsi& t, const std::vector<std::uint32_t>& cls, Run run, std::size_t i) {
    for (std::size_t j = i; j + 1 < run.size(); ++j) {
        TransId u = run[j], v = run[j + 1];
        StateId s = t.source(u), end = t.target(v);
        bool found = false;
        for (TransId v2 : t.out(s)) {
            if (cls[v2] != cls[v]) continue;
            for (TransId u2 : t.out(t.target(v2)))
                if (cls[u2] == cls[u] && t.target(u2) == end) {
                    run[j] = v2;
                    run[j + 1] = u2;
                    found = true;
                    break;
                }
            if (found) break;
        }
        if (!found)
            throw ModelError("no independence square for " + t.transition_name(u) + ", " + t.transition_name(v));
    }
    run.pop_back();
    return run;
}

Side side_of(const Tsi& t, const Run& run) {
    Side s{{}, t.initial(), {}};
    for (TransId u : run) s = extend(t, s, u, predecessors(t, s, u));
    return s;
}

Verdict solve_hhpb(const Tsi& l, const Tsi& r) {
    require_acyclic(l, r);
    const Tsi* t[2] = {&l, &r};
    std::vector<std::uint32_t> cls[2] = {instance_classes(l), instance_classes(r)};
    std::map<std::pair<Run, Run>, std::size_t> ids;
    std::vector<std::pair<Run, Run>> nodes;
    struct Move {
        std::string name;
        std::vector<std::size_t> answers;
    };
    std::vector<std::vector<Move>> moves;
    auto index = [&](const Run& a, const Run& b) {
        auto [it, fresh] = ids.emplace(std::make_pair(a, b), nodes.size());
        if (fresh) nodes.emplace_back(a, b);
        return it->second;
    };
    index({}, {});
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        Side s[2] = {side_of(l, nodes[k].first), side_of(r, nodes[k].second)};
        std::vector<Move> ms;
        for (int d = 0; d < 2; ++d) {
            int e = 1 - d;
            for (TransId u : t[d]->out(s[d].end)) {
                Move m{move_name(d ? 'R' : 'L', *t[d], u), {}};
                auto pu = predecessors(*t[d], s[d], u);
                for (TransId v : t[e]->out(s[e].end)) {
                    if (t[e]->label(v) != t[d]->label(u)) continue;
                    if (predecessors(*t[e], s[e], v) != pu) continue;
                    Run ext[2] = {s[0].run, s[1].run};
                    ext[d].push_back(u);
                    ext[e].push_back(v);
                    m.answers.push_back(index(ext[0], ext[1]));
                }
                ms.push_back(std::move(m));
            }
        }
        // Backward moves: Eve's answer is forced to the same position, which
        // is maximal on her side too because the posets match positionally.
        std::size_t n = s[0].run.size();
        for (std::size_t i = 0; i < n; ++i) {
            bool maximal = true;
            for (std::size_t j = i + 1; j < n && maximal; ++j) maximal = !s[0].below[j][i];
            if (!maximal) continue;
            Run a = delete_position(l, cls[0], s[0].run, i);
            Run b = delete_position(r, cls[1], s[1].run, i);
            Move m{"undo position " + std::to_string(i + 1) + " (" + l.label(s[0].run[i]) + ")", {index(a, b)}};
            ms.push_back(std::move(m));
        }
        moves.push_back(std::move(ms));
    }

    // Safety game: Eve loses exactly where Adam can force a stuck answer.
    const std::size_t inf = SIZE_MAX;
    std::vector<std::size_t> rank(nodes.size(), inf);
    for (std::size_t round = 0;; ++round) {
        std::vector<std::size_t> fresh;
        for (std::size_t k = 0; k < nodes.size(); ++k) {
            if (rank[k] != inf) continue;
            for (const auto& m : moves[k]) {
                bool lost = std::all_of(m.answers.begin(), m.answers.end(), [&](std::size_t w) { return rank[w] != inf; });
                if (lost) { fresh.push_back(k); break; }
            }
        }
        if (fresh.empty()) break;
        for (auto k : fresh) rank[k] = round;
    }
    Verdict v;
    v.configurations = nodes.size();
    if (rank[0] == inf) {
        v.outcome = Outcome::Equivalent;
        v.witness.push_back("Eve survives on " + std::to_string(nodes.size()) + " run pairs");
        return v;
    }
    v.outcome = Outcome::NotEquivalent;
    for (std::size_t k = 0;;) {
        const Move* best = nullptr;
        for (const auto& m : moves[k]) {
            bool lower = std::all_of(m.answers.begin(), m.answers.end(), [&](std::size_t w) { return rank[w] < rank[k]; });
            if (lower) { best = &m; break; }
        }
        if (!best) break;
        v.witness.push_back(best->name);
        if (best->answers.empty()) {
            v.witness.push_back("no answer");
            break;
        }
        k = best->answers.front();
    }
    return v;
}

// ------------------------------------------------------- refinement engine

struct Key {
    enum Kind { Plain, Causal, NonCausal, Trace } kind;
    std::string label;
    bool operator<(const Key& o) const { return std::tie(kind, label) < std::tie(o.kind, o.label); }
    bool operator==(const Key& o) const { return kind == o.kind && label == o.label; }
};

// Labelled graph whose level-k classes coincide with equivalence under
// formulas of modal depth k built from the keyed modalities.
class Refinement {
public:
    std::vector<std::vector<std::pair<Key, std::size_t>>> moves;

    std::size_t add_node() {
        moves.emplace_back();
        return moves.size() - 1;
    }

    void run(std::size_t max_depth) {
        levels_.assign(1, std::vector<std::uint32_t>(moves.size(), 0));
        std::size_t classes = 1;
        while (levels_.size() <= max_depth) {
            const auto& cur = levels_.back();
            std::map<std::pair<std::uint32_t, std::set<std::pair<Key, std::uint32_t>>>, std::uint32_t> sigs;
            std::vector<std::uint32_t> next(moves.size());
            for (std::size_t x = 0; x < moves.size(); ++x) {
                auto key = std::make_pair(cur[x], signature(x, cur));
                next[x] = sigs.emplace(std::move(key), static_cast<std::uint32_t>(sigs.size())).first->second;
            }
            levels_.push_back(std::move(next));
            if (sigs.size() == classes) break;
            classes = sigs.size();
        }
    }

    [[nodiscard]] bool separated(std::size_t x, std::size_t y) const { return levels_.back()[x] != levels_.back()[y]; }

    // Formula true at x and false at y.
    Formula distinguish(std::size_t x, std::size_t y) {
        auto mk = std::make_pair(x, y);
        if (auto it = memo_.find(mk); it != memo_.end()) return it->second;
        std::size_t k = 1;
        while (levels_[k][x] == levels_[k][y]) ++k;
        const auto& prev = levels_[k - 1];
        auto sy = signature(y, prev);
        Formula res;
        for (const auto& [key, x2] : moves[x]) {
            if (sy.count({key, prev[x2]})) continue;
            std::set<Formula, FormulaLess> parts;
            for (const auto& [key2, y2] : moves[y])
                if (key2 == key) parts.insert(distinguish(x2, y2));
            res = dia_of(key, fold(parts, true));
            break;
        }
        if (!res) {
            auto sx = signature(x, prev);
            for (const auto& [key, y2] : moves[y]) {
                if (sx.count({key, prev[y2]})) continue;
                std::set<Formula, FormulaLess> parts;
                for (const auto& [key2, x2] : moves[x])
                    if (key2 == key) parts.insert(distinguish(x2, y2));
                res = box_of(key, fold(parts, false));
                break;
            }
        }
        if (!res) throw std::logic_error("refinement levels inconsistent");
        memo_.emplace(mk, res);
        return res;
    }

private:
    std::set<std::pair<Key, std::uint32_t>> signature(std::size_t x, const std::vector<std::uint32_t>& cls) const {
        std::set<std::pair<Key, std::uint32_t>> s;
        for (const auto& [key, y] : moves[x]) s.insert({key, cls[y]});
        return s;
    }

    static Formula fold(const std::set<Formula, FormulaLess>& parts, bool conjunction) {
        Formula acc;
        for (const auto& p : parts) acc = acc ? (conjunction ? conj(acc, p) : disj(acc, p)) : p;
        return acc ? acc : (conjunction ? tt() : ff());
    }

    static Formula dia_of(const Key& k, Formula f) {
        switch (k.kind) {
        case Key::Plain: return dia(k.label, std::move(f));
        case Key::Causal: return dia_c(k.label, std::move(f));
        case Key::NonCausal: return dia_nc(k.label, std::move(f));
        case Key::Trace: return dia_co(std::move(f));
        }
        return f;
    }

    static Formula box_of(const Key& k, Formula f) {
        switch (k.kind) {
        case Key::Plain: return box(k.label, std::move(f));
        case Key::Causal: return box_c(k.label, std::move(f));
        case Key::NonCausal: return box_nc(k.label, std::move(f));
        case Key::Trace: return box_co(std::move(f));
        }
        return f;
    }

    std::vector<std::vector<std::uint32_t>> levels_;
    std::map<std::pair<std::size_t, std::size_t>, Formula> memo_;
};

// Adds the processes reachable from the initial one under the fragment's
// modalities; returns the node of the initial process.
std::size_t add_space(Refinement& g, const ProcessSpace& space, Fragment frag) {
    MoveTable mt(space);
    const Tsi& t = space.tsi();
    bool plain = frag == Fragment::HML || frag == Fragment::LMU || frag == Fragment::TLMU;
    bool trace = frag == Fragment::TLMU || frag == Fragment::TFL;
    std::map<std::size_t, std::size_t> node;
    std::deque<std::size_t> todo;
    auto visit = [&](std::size_t p) {
        auto [it, fresh] = node.emplace(p, 0);
        if (fresh) {
            it->second = g.add_node();
            todo.push_back(p);
        }
        return it->second;
    };
    std::size_t root = visit(space.initial());
    while (!todo.empty()) {
        std::size_t p = todo.front();
        todo.pop_front();
        std::size_t me = node.at(p);
        for (const auto& m : mt.modal(p)) {
            Key k{plain ? Key::Plain : (m.causal ? Key::Causal : Key::NonCausal), t.label(m.via)};
            std::size_t w = visit(m.target);
            g.moves[me].push_back({k, w});
        }
        if (trace)
            for (auto q : mt.trace(p)) {
                std::size_t w = visit(q);
                g.moves[me].push_back({Key{Key::Trace, {}}, w});
            }
    }
    return root;
}

} // namespace

std::optional<std::vector<std::pair<TransId, TransId>>> hp_isomorphic_sets(const Tsi& l, const std::vector<TransId>& m,
                                                                           TransId anchor_l, const Tsi& r,
                                                                           const std::vector<TransId>& n,
                                                                           TransId anchor_r) {
    if (m.size() != n.size()) return std::nullopt;
    // Elements are interchangeable exactly when label and pattern agree, so
    // bucketing by that pair and zipping the buckets decides the matching.
    using Tag = std::pair<std::string, bool>;
    std::map<Tag, std::vector<TransId>> lb, rb;
    for (TransId x : m) lb[{l.label(x), depends_on_anchor(l, anchor_l, x)}].push_back(x);
    for (TransId y : n) rb[{r.label(y), depends_on_anchor(r, anchor_r, y)}].push_back(y);
    if (lb.size() != rb.size()) return std::nullopt;
    std::vector<std::pair<TransId, TransId>> res;
    for (const auto& [tag, xs] : lb) {
        auto it = rb.find(tag);
        if (it == rb.end() || it->second.size() != xs.size()) return std::nullopt;
        for (std::size_t i = 0; i < xs.size(); ++i) res.emplace_back(xs[i], it->second[i]);
    }
    return res;
}

Verdict strong_bisim(const Tsi& l, const Tsi& r) {
    // Greatest fixpoint over state pairs.
    std::size_t nl = l.state_count(), nr = r.state_count();
    std::vector<char> rel(nl * nr, 1);
    auto in = [&](StateId s, StateId q) { return rel[s * nr + q] != 0; };
    auto matched = [&](const Tsi& a, StateId s, const Tsi& b, StateId q, bool flip) {
        for (TransId u : a.out(s)) {
            bool ok = false;
            for (TransId v : b.out(q)) {
                if (a.label(u) != b.label(v)) continue;
                StateId su = a.target(u), sv = b.target(v);
                if (flip ? in(sv, su) : in(su, sv)) { ok = true; break; }
            }
            if (!ok) return false;
        }
        return true;
    };
    for (bool changed = true; changed;) {
        changed = false;
        for (StateId s = 0; s < nl; ++s)
            for (StateId q = 0; q < nr; ++q) {
                if (!in(s, q)) continue;
                if (!matched(l, s, r, q, false) || !matched(r, q, l, s, true)) {
                    rel[s * nr + q] = 0;
                    changed = true;
                }
            }
    }
    Verdict v;
    v.configurations = nl * nr;
    if (in(l.initial(), r.initial())) {
        v.outcome = Outcome::Equivalent;
        return v;
    }
    v.outcome = Outcome::NotEquivalent;
    Refinement g;
    auto add = [&](const Tsi& t) {
        std::size_t base = g.moves.size();
        for (StateId s = 0; s < t.state_count(); ++s) g.add_node();
        for (StateId s = 0; s < t.state_count(); ++s)
            for (TransId u : t.out(s)) g.moves[base + s].push_back({Key{Key::Plain, t.label(u)}, base + t.target(u)});
        return base + t.initial();
    };
    std::size_t x = add(l), y = add(r);
    g.run(SIZE_MAX);
    v.formula = g.distinguish(x, y);
    v.witness.push_back("left satisfies " + to_string(v.formula) + ", right does not");
    return v;
}

Verdict hpb(const Tsi& l, const Tsi& r, Mode mode) { return run_game(l, r, mode, false); }

Verdict hhpb(const Tsi& l, const Tsi& r) { return solve_hhpb(l, r); }

Verdict thpb(const Tsi& l, const Tsi& r, Mode mode) { return run_game(l, r, mode, true); }

Verdict bisim(const Tsi& l, const Tsi& r, Relation rel, Mode mode) {
    switch (rel) {
    case Relation::SB: return strong_bisim(l, r);
    case Relation::HPB: return hpb(l, r, mode);
    case Relation::HHPB:
        if (mode.kind != Mode::Kind::ExactAcyclic) throw Error("hhpb is only available in exact mode");
        return hhpb(l, r);
    case Relation::THPB: return thpb(l, r, mode);
    }
    return {};
}

std::optional<Formula> distinguishing_formula(const Tsi& l, const Tsi& r, Fragment frag, std::size_t depth) {
    ProcessSpace sl(l), sr(r);
    Refinement g;
    std::size_t x = add_space(g, sl, frag);
    std::size_t y = add_space(g, sr, frag);
    g.run(depth);
    if (!g.separated(x, y)) return std::nullopt;
    Formula f = g.distinguish(x, y);
    if (!satisfies(sl, sl.initial(), f) || satisfies(sr, sr.initial(), f))
        throw std::logic_error("synthesised formula does not separate the systems: " + to_string(f));
    return f;
}

} // namespace truecon
