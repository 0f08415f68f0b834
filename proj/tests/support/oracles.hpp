#pragma once
// Independent brute-force oracles. They recompute from the definitions with
// the simplest possible algorithms and share no code with the library beyond
// the model types.

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "truecon/formula.hpp"
#include "truecon/poset.hpp"
#include "truecon/tsi.hpp"

namespace oracle {

using truecon::kEpsilon;
using truecon::StateId;
using truecon::TransId;
using truecon::Tsi;

// ------------------------------------------------------------ axioms

struct Axioms {
    bool a1 = true, a2 = true, a3 = true, a4 = true;
    std::vector<std::vector<bool>> sim;  // ∼ as a matrix
};

inline bool indep(const Tsi& t, TransId x, TransId y) {
    const auto& v = t.independent_of(x);
    return std::find(v.begin(), v.end(), y) != v.end();
}

inline Axioms axioms(const Tsi& t) {
    const std::size_t n = t.transition_count();
    auto same = [&](TransId x, StateId s, const std::string& a, StateId d) {
        return t.source(x) == s && t.label(x) == a && t.target(x) == d;
    };
    std::vector<std::vector<bool>> prec(n, std::vector<bool>(n, false));
    for (TransId x = 0; x < n; ++x)
        for (TransId u = 0; u < n; ++u) {
            if (t.label(x) != t.label(u)) continue;
            // x = (s,a,s1), u = (s2,a,q): exists (s,b,s2) and (s1,b,q) forming the square
            for (TransId y = 0; y < n && !prec[x][u]; ++y)
                for (TransId z = 0; z < n && !prec[x][u]; ++z)
                    if (same(y, t.source(x), t.label(y), t.source(u)) &&
                        same(z, t.target(x), t.label(y), t.target(u)) && indep(t, x, y) && indep(t, x, z) &&
                        indep(t, y, u))
                        prec[x][u] = true;
        }
    Axioms ax;
    ax.sim.assign(n, std::vector<bool>(n, false));
    for (TransId x = 0; x < n; ++x)
        for (TransId y = 0; y < n; ++y) ax.sim[x][y] = x == y || prec[x][y] || prec[y][x];
    for (TransId k = 0; k < n; ++k)
        for (TransId i = 0; i < n; ++i)
            for (TransId j = 0; j < n; ++j)
                if (ax.sim[i][k] && ax.sim[k][j]) ax.sim[i][j] = true;
    for (TransId x = 0; x < n; ++x)
        for (TransId y = 0; y < n; ++y) {
            if (ax.sim[x][y] && t.source(x) == t.source(y) && t.label(x) == t.label(y) && t.target(x) != t.target(y))
                ax.a1 = false;
            if (indep(t, x, y) && t.source(x) == t.source(y)) {
                bool ok = false;
                for (TransId p = 0; p < n && !ok; ++p)
                    for (TransId q = 0; q < n && !ok; ++q)
                        ok = t.source(p) == t.target(x) && t.label(p) == t.label(y) && t.source(q) == t.target(y) &&
                             t.label(q) == t.label(x) && t.target(p) == t.target(q) && indep(t, x, p) && indep(t, y, q);
                if (!ok) ax.a2 = false;
            }
            if (indep(t, x, y) && t.target(x) == t.source(y)) {
                bool ok = false;
                for (TransId p = 0; p < n && !ok; ++p)
                    for (TransId q = 0; q < n && !ok; ++q)
                        ok = t.source(p) == t.source(x) && t.label(p) == t.label(y) && t.source(q) == t.target(p) &&
                             t.label(q) == t.label(x) && t.target(q) == t.target(y) && indep(t, x, p) && indep(t, p, q);
                if (!ok) ax.a3 = false;
            }
            if (prec[x][y] || prec[y][x])
                for (TransId w = 0; w < n; ++w)
                    if (indep(t, y, w) && !indep(t, x, w)) ax.a4 = false;
        }
    return ax;
}

// ------------------------------------------------------------ Lμ on states

inline std::vector<bool> lmu_eval(const Tsi& t, const truecon::lmu::Formula& f,
                                  std::map<std::string, std::vector<bool>> env = {}) {
    using truecon::lmu::Op;
    const std::size_t n = t.state_count();
    switch (f->op) {
    case Op::Tt: return std::vector<bool>(n, true);
    case Op::Ff: return std::vector<bool>(n, false);
    case Op::Var: return env.at(f->name);
    case Op::And:
    case Op::Or: {
        auto l = lmu_eval(t, f->left, env), r = lmu_eval(t, f->right, env);
        for (std::size_t s = 0; s < n; ++s) l[s] = f->op == Op::And ? (l[s] && r[s]) : (l[s] || r[s]);
        return l;
    }
    case Op::Dia:
    case Op::Box: {
        auto b = lmu_eval(t, f->left, env);
        std::vector<bool> out(n, f->op == Op::Box);
        for (TransId x = 0; x < t.transition_count(); ++x) {
            if (t.label(x) != f->name) continue;
            if (f->op == Op::Dia && b[t.target(x)]) out[t.source(x)] = true;
            if (f->op == Op::Box && !b[t.target(x)]) out[t.source(x)] = false;
        }
        return out;
    }
    case Op::Mu:
    case Op::Nu: {
        std::vector<bool> cur(n, f->op == Op::Nu);
        for (;;) {
            env[f->name] = cur;
            auto next = lmu_eval(t, f->left, env);
            if (next == cur) return cur;
            cur = next;
        }
    }
    }
    return {};
}

// ------------------------------------------------------------ strong bisimilarity

// Naive signature refinement over the disjoint union.
inline bool bisimilar(const Tsi& l, const Tsi& r) {
    const std::size_t nl = l.state_count(), n = nl + r.state_count();
    std::vector<std::vector<std::pair<std::string, std::size_t>>> succ(n);
    for (TransId x = 0; x < l.transition_count(); ++x) succ[l.source(x)].emplace_back(l.label(x), l.target(x));
    for (TransId x = 0; x < r.transition_count(); ++x)
        succ[nl + r.source(x)].emplace_back(r.label(x), nl + r.target(x));
    std::vector<std::size_t> block(n, 0);
    for (;;) {
        std::map<std::pair<std::size_t, std::set<std::pair<std::string, std::size_t>>>, std::size_t> ids;
        std::vector<std::size_t> next(n);
        for (std::size_t s = 0; s < n; ++s) {
            std::set<std::pair<std::string, std::size_t>> sig;
            for (const auto& [a, d] : succ[s]) sig.emplace(a, block[d]);
            next[s] = ids.emplace(std::make_pair(block[s], sig), ids.size()).first->second;
        }
        std::set<std::size_t> before(block.begin(), block.end()), after(next.begin(), next.end());
        block = next;
        if (before.size() == after.size()) break;
    }
    return block[l.initial()] == block[nl + r.initial()];
}

// ------------------------------------------------------------ posets

inline std::vector<std::vector<bool>> run_order(const truecon::Run& run, const Tsi& t) {
    const std::size_t k = run.size();
    std::vector<std::vector<bool>> less(k, std::vector<bool>(k, false));
    // Depth-first search along dependent later steps.
    for (std::size_t i = 0; i < k; ++i) {
        std::vector<std::size_t> stack{i};
        std::vector<bool> seen(k, false);
        while (!stack.empty()) {
            auto u = stack.back();
            stack.pop_back();
            for (std::size_t v = u + 1; v < k; ++v)
                if (!indep(t, run[u], run[v]) && !seen[v]) {
                    seen[v] = true;
                    less[i][v] = true;
                    stack.push_back(v);
                }
        }
    }
    return less;
}

inline bool poset_iso(const truecon::LabelledPoset& p, const truecon::LabelledPoset& q) {
    if (p.size() != q.size()) return false;
    std::vector<std::size_t> perm(p.size());
    std::iota(perm.begin(), perm.end(), 0);
    do {
        bool ok = true;
        for (std::size_t i = 0; i < p.size() && ok; ++i) {
            ok = p.labels[i] == q.labels[perm[i]];
            for (std::size_t j = 0; j < p.size() && ok; ++j) ok = p.less[i][j] == q.less[perm[i]][perm[j]];
        }
        if (ok) return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

// ------------------------------------------------------------ traces and processes

// Non-empty, pairwise-independent, ⊗-maximal subsets of r.
inline std::set<std::vector<TransId>> complete_traces(const Tsi& t, const std::vector<TransId>& r) {
    std::set<std::vector<TransId>> out;
    const std::size_t k = r.size();
    for (std::size_t mask = 1; mask < (std::size_t{1} << k); ++mask) {
        std::vector<TransId> m;
        for (std::size_t i = 0; i < k; ++i)
            if (mask >> i & 1) m.push_back(r[i]);
        bool cf = true;
        for (auto x : m)
            for (auto y : m)
                if (x != y && !indep(t, x, y)) cf = false;
        if (!cf) continue;
        bool maximal = true;
        for (std::size_t i = 0; i < k && maximal; ++i) {
            if (mask >> i & 1) continue;
            if (std::all_of(m.begin(), m.end(), [&](TransId y) { return indep(t, r[i], y); })) maximal = false;
        }
        if (maximal) {
            std::sort(m.begin(), m.end());
            out.insert(m);
        }
    }
    return out;
}

// Coherent processes over every state, deduplicated on (owner, members, last).
inline std::size_t process_count(const Tsi& t) {
    std::set<std::tuple<StateId, std::vector<TransId>, TransId>> ps;
    for (StateId s = 0; s < t.state_count(); ++s) {
        std::vector<TransId> all(t.out(s).begin(), t.out(s).end());
        std::sort(all.begin(), all.end());
        auto supports = complete_traces(t, all);
        supports.insert(all);
        std::vector<TransId> lasts(t.in(s).begin(), t.in(s).end());
        if (s == t.initial()) lasts.push_back(kEpsilon);
        for (const auto& m : supports)
            for (auto l : lasts) ps.emplace(s, m, l);
    }
    return ps.size();
}

// ------------------------------------------------------------ hp-isomorphic sets

// ≤ (true) or ⊖ (false) between the anchor and a transition leaving its target.
inline bool causal_to(const Tsi& t, TransId anchor, TransId x) { return anchor == kEpsilon || !indep(t, anchor, x); }

inline bool hp_iso_sets(const Tsi& l, const std::vector<TransId>& m, TransId al, const Tsi& r,
                        const std::vector<TransId>& n, TransId ar) {
    if (m.size() != n.size()) return false;
    std::vector<std::size_t> perm(n.size());
    std::iota(perm.begin(), perm.end(), 0);
    do {
        bool ok = true;
        for (std::size_t i = 0; i < m.size() && ok; ++i)
            ok = l.label(m[i]) == r.label(n[perm[i]]) && causal_to(l, al, m[i]) == causal_to(r, ar, n[perm[i]]);
        if (ok) return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

// ------------------------------------------------------------ TSI isomorphism

inline bool isomorphic(const Tsi& a, const Tsi& b) {
    if (a.state_count() != b.state_count() || a.transition_count() != b.transition_count()) return false;
    const std::size_t n = a.state_count();
    std::vector<std::optional<StateId>> map(n);
    std::vector<bool> used(n, false);
    auto triples = [](const Tsi& t, const std::vector<std::optional<StateId>>* m) {
        std::multiset<std::tuple<StateId, std::string, StateId>> s;
        for (TransId x = 0; x < t.transition_count(); ++x)
            s.emplace(m ? *(*m)[t.source(x)] : t.source(x), t.label(x), m ? *(*m)[t.target(x)] : t.target(x));
        return s;
    };
    auto check = [&]() {
        if (triples(a, &map) != triples(b, nullptr)) return false;
        // Independence, compared through the transition triples.
        auto key = [](const Tsi& t, TransId x, const std::vector<std::optional<StateId>>* m) {
            return std::make_tuple(m ? *(*m)[t.source(x)] : t.source(x), t.label(x),
                                   m ? *(*m)[t.target(x)] : t.target(x));
        };
        std::set<std::pair<std::tuple<StateId, std::string, StateId>, std::tuple<StateId, std::string, StateId>>> ia, ib;
        for (auto [x, y] : a.indep_pairs()) ia.emplace(key(a, x, &map), key(a, y, &map)), ia.emplace(key(a, y, &map), key(a, x, &map));
        for (auto [x, y] : b.indep_pairs()) ib.emplace(key(b, x, nullptr), key(b, y, nullptr)), ib.emplace(key(b, y, nullptr), key(b, x, nullptr));
        return ia == ib;
    };
    std::function<bool(StateId)> go = [&](StateId s) -> bool {
        if (s == n) return check();
        if (s == a.initial()) return go(s + 1);
        for (StateId d = 0; d < n; ++d) {
            if (used[d]) continue;
            used[d] = true;
            map[s] = d;
            if (go(s + 1)) return true;
            used[d] = false;
        }
        map[s].reset();
        return false;
    };
    map[a.initial()] = b.initial();
    used[b.initial()] = true;
    return go(0);
}

} // namespace oracle
