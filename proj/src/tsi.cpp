#include "truecon/tsi.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <unordered_map>

#include "truecon/error.hpp"

namespace truecon {

namespace {

struct UnionFind {
    std::vector<std::uint32_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0u); }
    std::uint32_t find(std::uint32_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (b < a) std::swap(a, b);
        parent[b] = a;
    }
};

std::string describe(const Tsi& t, TransId id) {
    const auto& tr = t.transition(id);
    return "(" + t.state_name(tr.source) + "," + tr.label + "," + t.state_name(tr.target) + ")";
}

} // namespace

Tsi::Tsi(std::vector<std::string> state_names, StateId initial, std::vector<Transition> transitions,
         std::vector<std::string> transition_names,
         const std::vector<std::pair<TransId, TransId>>& indep)
    : state_names_(std::move(state_names)), initial_(initial), transitions_(std::move(transitions)),
      transition_names_(std::move(transition_names)) {
    if (state_names_.empty()) throw ModelError("transition system has no states");
    if (initial_ >= state_names_.size()) throw ModelError("initial state out of range");
    if (transition_names_.empty()) {
        for (std::size_t i = 0; i < transitions_.size(); ++i)
            transition_names_.push_back("t" + std::to_string(i));
    }
    if (transition_names_.size() != transitions_.size())
        throw ModelError("transition name count does not match transition count");

    out_.assign(state_names_.size(), {});
    in_.assign(state_names_.size(), {});
    std::set<std::tuple<StateId, std::string, StateId>> triples;
    for (TransId i = 0; i < transitions_.size(); ++i) {
        const auto& tr = transitions_[i];
        if (tr.source >= state_names_.size() || tr.target >= state_names_.size())
            throw ModelError("transition " + transition_names_[i] + " has an endpoint out of range");
        if (tr.label.empty()) throw ModelError("transition " + transition_names_[i] + " has an empty label");
        if (!triples.emplace(tr.source, tr.label, tr.target).second)
            throw ModelError("duplicate transition triple " + describe(*this, i));
        out_[tr.source].push_back(i);
        in_[tr.target].push_back(i);
    }

    indep_.assign(transitions_.size(), {});
    for (auto [a, b] : indep) {
        if (a >= transitions_.size() || b >= transitions_.size())
            throw ModelError("independence pair references an unknown transition");
        if (a == b) throw ModelError("independence must be irreflexive: " + transition_names_[a]);
        indep_[a].push_back(b);
        indep_[b].push_back(a);
    }
    for (auto& v : indep_) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    }
}

bool Tsi::independent(TransId a, TransId b) const {
    if (a == kEpsilon || b == kEpsilon) return false;
    const auto& v = indep_[a];
    return std::binary_search(v.begin(), v.end(), b);
}

std::vector<std::pair<TransId, TransId>> Tsi::indep_pairs() const {
    std::vector<std::pair<TransId, TransId>> res;
    for (TransId a = 0; a < indep_.size(); ++a)
        for (TransId b : indep_[a])
            if (a < b) res.emplace_back(a, b);
    return res;
}

std::optional<StateId> Tsi::find_state(const std::string& name) const {
    auto it = std::find(state_names_.begin(), state_names_.end(), name);
    if (it == state_names_.end()) return std::nullopt;
    return static_cast<StateId>(it - state_names_.begin());
}

std::optional<TransId> Tsi::find_transition(const std::string& name) const {
    auto it = std::find(transition_names_.begin(), transition_names_.end(), name);
    if (it == transition_names_.end()) return std::nullopt;
    return static_cast<TransId>(it - transition_names_.begin());
}

std::optional<TransId> Tsi::find_transition(StateId src, const std::string& label, StateId dst) const {
    for (TransId t : out_[src])
        if (transitions_[t].target == dst && transitions_[t].label == label) return t;
    return std::nullopt;
}

std::vector<std::string> Tsi::alphabet() const {
    std::set<std::string> labels;
    for (const auto& tr : transitions_) labels.insert(tr.label);
    return {labels.begin(), labels.end()};
}

bool Tsi::acyclic() const {
    std::vector<std::size_t> indegree(state_names_.size(), 0);
    for (const auto& tr : transitions_) ++indegree[tr.target];
    std::vector<StateId> ready;
    for (StateId s = 0; s < indegree.size(); ++s)
        if (indegree[s] == 0) ready.push_back(s);
    std::size_t seen = 0;
    while (!ready.empty()) {
        StateId s = ready.back();
        ready.pop_back();
        ++seen;
        for (TransId t : out_[s])
            if (--indegree[transitions_[t].target] == 0) ready.push_back(transitions_[t].target);
    }
    return seen == state_names_.size();
}

StateId TsiBuilder::add_state(const std::string& name, bool initial) {
    auto it = std::find(states_.begin(), states_.end(), name);
    StateId id;
    if (it != states_.end()) {
        id = static_cast<StateId>(it - states_.begin());
    } else {
        id = static_cast<StateId>(states_.size());
        states_.push_back(name);
    }
    if (initial) {
        if (initial_ && *initial_ != id) throw ModelError("second initial state " + name);
        initial_ = id;
    }
    return id;
}

StateId TsiBuilder::state_or_create(const std::string& name) { return add_state(name, false); }

TransId TsiBuilder::add_transition(const std::string& name, const std::string& src,
                                   const std::string& label, const std::string& dst) {
    if (std::find(transition_names_.begin(), transition_names_.end(), name) != transition_names_.end())
        throw ModelError("duplicate transition id " + name);
    StateId s = state_or_create(src);
    StateId d = state_or_create(dst);
    transitions_.push_back({s, label, d});
    transition_names_.push_back(name);
    return static_cast<TransId>(transitions_.size() - 1);
}

TransId TsiBuilder::add_transition(const std::string& src, const std::string& label,
                                   const std::string& dst) {
    return add_transition("t" + std::to_string(transitions_.size()), src, label, dst);
}

void TsiBuilder::add_indep(const std::string& t1, const std::string& t2) {
    auto find = [&](const std::string& n) {
        auto it = std::find(transition_names_.begin(), transition_names_.end(), n);
        if (it == transition_names_.end()) throw ModelError("unknown transition " + n);
        return static_cast<TransId>(it - transition_names_.begin());
    };
    indep_.emplace_back(find(t1), find(t2));
}

Tsi TsiBuilder::build() const {
    StateId init = initial_.value_or(0);
    return Tsi(states_, init, transitions_, transition_names_, indep_);
}

bool ValidationReport::ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

const Check* ValidationReport::find(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

std::vector<std::pair<TransId, TransId>> precedes_pairs(const Tsi& t) {
    // (s,a,s1) ≺ (s2,a,q) iff some b closes the square s -> s1 -> q, s -> s2 -> q.
    std::vector<std::pair<TransId, TransId>> res;
    for (TransId first = 0; first < t.transition_count(); ++first) {
        const auto& tr = t.transition(first);
        for (TransId side : t.independent_of(first)) {
            if (t.source(side) != tr.source) continue;
            const std::string& b = t.label(side);
            for (TransId u : t.out(t.target(side))) {
                if (t.label(u) != tr.label || !t.independent(side, u)) continue;
                StateId q = t.target(u);
                bool closed = false;
                for (TransId w : t.out(tr.target)) {
                    if (t.label(w) == b && t.target(w) == q && t.independent(first, w)) {
                        closed = true;
                        break;
                    }
                }
                if (closed) res.emplace_back(first, u);
            }
        }
    }
    std::sort(res.begin(), res.end());
    res.erase(std::unique(res.begin(), res.end()), res.end());
    return res;
}

std::vector<std::uint32_t> instance_classes(const Tsi& t) {
    UnionFind uf(t.transition_count());
    for (auto [a, b] : precedes_pairs(t)) uf.unite(a, b);
    std::vector<std::uint32_t> cls(t.transition_count());
    std::unordered_map<std::uint32_t, std::uint32_t> renumber;
    for (TransId i = 0; i < t.transition_count(); ++i) {
        auto root = uf.find(i);
        auto [it, fresh] = renumber.emplace(root, static_cast<std::uint32_t>(renumber.size()));
        cls[i] = it->second;
    }
    return cls;
}

ValidationReport validate_tsi(const Tsi& t) {
    ValidationReport rep;
    rep.precedes = precedes_pairs(t);
    rep.instance_class = instance_classes(t);
    const auto& cls = rep.instance_class;

    Check a1{"A1", true, ""};
    for (StateId s = 0; s < t.state_count() && a1.passed; ++s) {
        const auto& out = t.out(s);
        for (std::size_t i = 0; i < out.size() && a1.passed; ++i)
            for (std::size_t j = i + 1; j < out.size(); ++j) {
                TransId x = out[i], y = out[j];
                if (t.label(x) == t.label(y) && cls[x] == cls[y] && t.target(x) != t.target(y)) {
                    a1.passed = false;
                    a1.witness = describe(t, x) + " ~ " + describe(t, y) + " with different targets";
                    break;
                }
            }
    }

    Check a2{"A2", true, ""};
    for (TransId x = 0; x < t.transition_count() && a2.passed; ++x) {
        for (TransId y : t.independent_of(x)) {
            if (y < x || t.source(y) != t.source(x)) continue;
            bool closed = false;
            for (TransId w : t.out(t.target(x))) {
                if (t.label(w) != t.label(y) || !t.independent(x, w)) continue;
                for (TransId u : t.out(t.target(y)))
                    if (t.label(u) == t.label(x) && t.target(u) == t.target(w) && t.independent(y, u))
                        closed = true;
            }
            if (!closed) {
                a2.passed = false;
                a2.witness = describe(t, x) + " I " + describe(t, y) + " has no closing square";
                break;
            }
        }
    }

    Check a3{"A3", true, ""};
    for (TransId x = 0; x < t.transition_count() && a3.passed; ++x) {
        for (TransId w : t.independent_of(x)) {
            if (t.source(w) != t.target(x)) continue;
            bool closed = false;
            for (TransId v : t.out(t.source(x))) {
                if (t.label(v) != t.label(w) || !t.independent(x, v)) continue;
                for (TransId u : t.out(t.target(v)))
                    if (t.label(u) == t.label(x) && t.target(u) == t.target(w) && t.independent(v, u))
                        closed = true;
            }
            if (!closed) {
                a3.passed = false;
                a3.witness = describe(t, x) + " I " + describe(t, w) + " has no opening square";
                break;
            }
        }
    }

    // A4 in its equivalent form: members of one ∼-class share their independence set.
    Check a4{"A4", true, ""};
    std::unordered_map<std::uint32_t, TransId> first_of_class;
    for (TransId x = 0; x < t.transition_count(); ++x) {
        auto [it, fresh] = first_of_class.emplace(cls[x], x);
        if (fresh) continue;
        TransId y = it->second;
        if (t.independent_of(x) != t.independent_of(y)) {
            a4.passed = false;
            a4.witness = describe(t, y) + " ~ " + describe(t, x) + " but their independence sets differ";
            break;
        }
    }

    rep.checks = {a1, a2, a3, a4};
    return rep;
}

std::vector<std::pair<TransId, TransId>> detect_auto_concurrency(const Tsi& t) {
    std::vector<std::pair<TransId, TransId>> res;
    for (StateId s = 0; s < t.state_count(); ++s) {
        const auto& out = t.out(s);
        for (std::size_t i = 0; i < out.size(); ++i)
            for (std::size_t j = i + 1; j < out.size(); ++j)
                if (t.label(out[i]) == t.label(out[j]) && t.independent(out[i], out[j]))
                    res.emplace_back(std::min(out[i], out[j]), std::max(out[i], out[j]));
    }
    std::sort(res.begin(), res.end());
    return res;
}

} // namespace truecon
