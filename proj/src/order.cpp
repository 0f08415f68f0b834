#include "truecon/order.hpp"

#include <algorithm>
#include <set>

#include "truecon/error.hpp"

namespace truecon {

bool immediately_concurrent(const Tsi& t, TransId a, TransId b) {
    if (a == kEpsilon || b == kEpsilon) return false;
    return t.source(a) == t.source(b) && t.independent(a, b);
}

bool in_conflict(const Tsi& t, TransId a, TransId b) {
    if (a == kEpsilon || b == kEpsilon) return false;
    return t.source(a) == t.source(b) && !t.independent(a, b);
}

bool linearly_concurrent(const Tsi& t, TransId a, TransId b) {
    if (a == kEpsilon || b == kEpsilon) return false;
    return t.target(a) == t.source(b) && t.independent(a, b);
}

bool causally_dependent(const Tsi& t, TransId a, TransId b) {
    if (b == kEpsilon) return false;
    if (a == kEpsilon) return t.source(b) == t.initial();
    return t.target(a) == t.source(b) && !t.independent(a, b);
}

DualityRelations duality_relations(const Tsi& t) {
    DualityRelations d;
    for (StateId s = 0; s < t.state_count(); ++s) {
        for (TransId a : t.out(s))
            for (TransId b : t.out(s)) (t.independent(a, b) ? d.co_immediate : d.conflict).emplace_back(a, b);
        for (TransId a : t.in(s))
            for (TransId b : t.out(s)) (t.independent(a, b) ? d.co_linear : d.causal).emplace_back(a, b);
    }
    for (auto* v : {&d.co_immediate, &d.conflict, &d.co_linear, &d.causal}) std::sort(v->begin(), v->end());
    return d;
}

SupportSet maximal_set(const Tsi& t, StateId s) {
    SupportSet r;
    r.owner = s;
    r.members = t.out(s);
    std::sort(r.members.begin(), r.members.end());
    r.kind = SupportKind::Maximal;
    return r;
}

bool conflict_free(const Tsi& t, const std::vector<TransId>& members) {
    for (std::size_t i = 0; i < members.size(); ++i)
        for (std::size_t j = i + 1; j < members.size(); ++j)
            if (!immediately_concurrent(t, members[i], members[j])) return false;
    return true;
}

std::vector<SupportSet> complete_traces(const Tsi& t, const SupportSet& r) {
    std::vector<SupportSet> res;
    const auto& m = r.members;
    if (m.empty()) return res;

    // Bron–Kerbosch with pivoting over the ⊗ graph restricted to r.
    const std::size_t n = m.size();
    std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) adj[i][j] = i != j && immediately_concurrent(t, m[i], m[j]);

    std::vector<std::vector<std::size_t>> cliques;
    std::vector<std::size_t> current;
    auto expand = [&](auto&& self, std::vector<std::size_t> cand, std::vector<std::size_t> excluded) -> void {
        if (cand.empty() && excluded.empty()) {
            cliques.push_back(current);
            return;
        }
        std::size_t pivot = cand.empty() ? excluded.front() : cand.front();
        std::size_t best = 0;
        for (auto* pool : {&cand, &excluded})
            for (std::size_t u : *pool) {
                std::size_t deg = 0;
                for (std::size_t v : cand) deg += adj[u][v] ? 1 : 0;
                if (deg > best) best = deg, pivot = u;
            }
        std::vector<std::size_t> branch;
        for (std::size_t v : cand)
            if (!adj[pivot][v]) branch.push_back(v);
        for (std::size_t v : branch) {
            std::vector<std::size_t> nc, ne;
            for (std::size_t u : cand)
                if (adj[v][u]) nc.push_back(u);
            for (std::size_t u : excluded)
                if (adj[v][u]) ne.push_back(u);
            current.push_back(v);
            self(self, nc, ne);
            current.pop_back();
            cand.erase(std::find(cand.begin(), cand.end(), v));
            excluded.push_back(v);
        }
    };
    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    expand(expand, all, {});

    for (auto& c : cliques) {
        SupportSet s;
        s.owner = r.owner;
        for (std::size_t i : c) s.members.push_back(m[i]);
        std::sort(s.members.begin(), s.members.end());
        s.kind = SupportKind::ConflictFree;
        res.push_back(std::move(s));
    }
    std::sort(res.begin(), res.end(), [](const SupportSet& a, const SupportSet& b) { return a.members < b.members; });
    return res;
}

namespace {
std::uint64_t key(std::uint32_t support, TransId last) {
    return (static_cast<std::uint64_t>(support) << 32) | last;
}
} // namespace

ProcessSpace::ProcessSpace(const Tsi& t, std::size_t cap) : tsi_(std::make_shared<const Tsi>(t)) {
    const Tsi& m = *tsi_;
    maximal_of_state_.resize(m.state_count());
    for (StateId s = 0; s < m.state_count(); ++s) {
        auto x = maximal_set(m, s);
        auto own = static_cast<std::uint32_t>(supports_.size());
        maximal_of_state_[s] = own;
        supports_.push_back(x);
        traces_.emplace_back();
        for (auto& tr : complete_traces(m, x)) {
            if (tr.members == x.members) {
                traces_[own].push_back(own);  // 𝔛(s) is its own maximal trace
                continue;
            }
            auto id = static_cast<std::uint32_t>(supports_.size());
            supports_.push_back(tr);
            traces_.push_back({id});
            traces_[own].push_back(id);
        }
    }

    for (std::uint32_t sup = 0; sup < supports_.size(); ++sup) {
        StateId s = supports_[sup].owner;
        std::vector<TransId> lasts;
        if (s == m.initial()) lasts.push_back(kEpsilon);
        for (TransId r : m.in(s)) lasts.push_back(r);
        for (TransId last : lasts) {
            if (processes_.size() >= cap) throw StateExplosion(cap);
            lookup_.emplace(key(sup, last), processes_.size());
            processes_.push_back({sup, last});
        }
    }
    initial_ = index(maximal_of_state_[m.initial()], kEpsilon);
}

std::optional<std::size_t> ProcessSpace::find(std::uint32_t support, TransId last) const {
    auto it = lookup_.find(key(support, last));
    if (it == lookup_.end()) return std::nullopt;
    return it->second;
}

std::size_t ProcessSpace::index(std::uint32_t support, TransId last) const {
    auto p = find(support, last);
    if (!p) throw Error("incoherent process requested");
    return *p;
}

std::string ProcessSpace::describe(std::size_t p) const {
    const Tsi& m = *tsi_;
    const auto& pr = processes_[p];
    const auto& sup = supports_[pr.support];
    std::string s = "({";
    for (std::size_t i = 0; i < sup.members.size(); ++i) {
        if (i) s += ",";
        s += m.transition_name(sup.members[i]);
    }
    s += "}@" + m.state_name(sup.owner) + ", ";
    s += pr.last == kEpsilon ? std::string("eps") : m.transition_name(pr.last);
    return s + ")";
}

std::vector<ConfusionTuple> classify_confusion(const Tsi& t) {
    std::vector<ConfusionTuple> res;
    auto cls = instance_classes(t);
    auto deterministic = [&](TransId a, TransId b, TransId c) {
        const auto &la = t.label(a), &lb = t.label(b), &lc = t.label(c);
        if (la != lb && lb != lc && la != lc) return true;
        return la == lc && causally_dependent(t, a, c);
    };
    for (StateId s = 0; s < t.state_count(); ++s) {
        const auto& out = t.out(s);
        for (TransId t1 : out)
            for (TransId t2 : out) {
                if (!immediately_concurrent(t, t1, t2)) continue;
                if (t1 < t2)
                    for (TransId t3 : out) {
                        if (t3 == t1 || t3 == t2) continue;
                        if (in_conflict(t, t1, t3) && in_conflict(t, t2, t3))
                            res.push_back({t1, t2, t3, ConfusionVariant::Symmetric, deterministic(t1, t2, t3)});
                    }
                for (TransId t3 : t.out(t.target(t1))) {
                    if (!causally_dependent(t, t1, t3)) continue;
                    bool clash = false;
                    for (TransId r2 : t.out(t.source(t3)))
                        if (r2 != t3 && cls[r2] == cls[t2] && in_conflict(t, r2, t3)) clash = true;
                    if (clash)
                        res.push_back({t1, t2, t3, ConfusionVariant::Asymmetric, deterministic(t1, t2, t3)});
                }
            }
    }
    return res;
}

FreeChoiceResult is_free_choice(const Tsi& t) {
    auto cls = instance_classes(t);
    std::vector<std::vector<TransId>> members;
    for (TransId x = 0; x < t.transition_count(); ++x) {
        if (cls[x] >= members.size()) members.resize(cls[x] + 1);
        members[cls[x]].push_back(x);
    }
    auto rescued = [&](TransId t1, TransId t2, TransId t3) {
        for (TransId t4 : members[cls[t1]]) {
            if (!t.independent(t3, t4)) continue;
            for (TransId t5 : members[cls[t2]])
                if (t5 != t4 && in_conflict(t, t4, t5) && t.independent(t3, t5)) return true;
        }
        return false;
    };
    for (StateId s = 0; s < t.state_count(); ++s) {
        const auto& out = t.out(s);
        for (TransId t1 : out)
            for (TransId t2 : out) {
                if (t1 == t2 || !in_conflict(t, t1, t2)) continue;
                std::set<TransId> touched(t.independent_of(t1).begin(), t.independent_of(t1).end());
                touched.insert(t.independent_of(t2).begin(), t.independent_of(t2).end());
                for (TransId t3 : touched)
                    if (!rescued(t1, t2, t3)) return {false, std::array<TransId, 3>{t1, t2, t3}};
            }
    }
    return {};
}

FreeChoiceNetResult is_free_choice_net(const PetriNet& n) {
    for (PlaceId p = 0; p < n.place_count(); ++p) {
        auto users = n.consumers(p);
        if (users.size() <= 1) continue;
        for (ActionId a : users)
            if (n.preset(a).size() != 1) return {false, p};
    }
    return {};
}

XiResult is_xi_system(const Tsi& t) {
    auto ac = detect_auto_concurrency(t);
    if (!ac.empty())
        return {false, "auto-concurrency between " + t.transition_name(ac[0].first) + " and " +
                           t.transition_name(ac[0].second)};
    if (is_free_choice(t).free_choice) return {true, "free-choice"};
    for (const auto& c : classify_confusion(t))
        if (!c.deterministic)
            return {false, "non-deterministic confusion (" + t.transition_name(c.t1) + "," +
                               t.transition_name(c.t2) + "," + t.transition_name(c.t3) + ")"};
    return {true, "only deterministic confusion"};
}

} // namespace truecon
