#include "truecon/folding.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <tuple>

#include "truecon/batch.hpp"
#include "truecon/error.hpp"
#include "truecon/order.hpp"
#include "truecon/semantics.hpp"

namespace truecon {

EventConfig add_event(const EventConfig& c, const std::string& e) {
    EventConfig n = c;
    n.insert(std::lower_bound(n.begin(), n.end(), e), e);
    return n;
}

ExplicitGenerator::ExplicitGenerator(const EventStructure& e) : es_(e) {}

EventId ExplicitGenerator::id(const std::string& name) const {
    for (EventId x = 0; x < es_.event_count(); ++x)
        if (es_.event_name(x) == name) return x;
    throw ModelError("unknown event " + name);
}

std::vector<EsStep> ExplicitGenerator::successors(const EventConfig& c) const {
    std::vector<EventId> in;
    for (const auto& k : c) in.push_back(id(k));
    std::sort(in.begin(), in.end());
    std::vector<EsStep> res;
    for (EventId x = 0; x < es_.event_count(); ++x) {
        if (std::binary_search(in.begin(), in.end(), x)) continue;
        auto cs = es_.causes(x);
        if (!std::includes(in.begin(), in.end(), cs.begin(), cs.end())) continue;
        if (std::any_of(in.begin(), in.end(), [&](EventId y) { return es_.conflict(x, y); })) continue;
        res.push_back({es_.event_name(x), es_.event_label(x)});
    }
    return res;
}

bool ExplicitGenerator::concurrent(const std::string& e1, const std::string& e2) const {
    return es_.co(id(e1), id(e2));
}

std::string IdentityOracle::canonical(const EventConfig& c) const {
    std::string s = "{";
    for (std::size_t i = 0; i < c.size(); ++i) s += (i ? "," : "") + c[i];
    return s + "}";
}

RepresentativeSet representative_set(const EsGenerator& g, const QuotientOracle& q, std::size_t cap) {
    RepresentativeSet rs;
    std::set<std::string> covered;
    std::deque<EventConfig> queue{EventConfig{}};
    std::size_t examined = 0;
    while (!queue.empty()) {
        EventConfig c = std::move(queue.front());
        queue.pop_front();
        if (++examined > cap) throw CapExceeded(cap);
        std::string k = q.canonical(c);
        if (!covered.insert(k).second) continue;
        rs.classes.push_back(k);
        rs.representatives.push_back(c);
        rs.er.insert(c.begin(), c.end());
        for (const auto& st : g.successors(c)) queue.push_back(add_event(c, st.event));
    }
    return rs;
}

RepresentativeSet complete_representative_set(RepresentativeSet rs, const EsGenerator& g) {
    rs.ef = rs.er;
    for (const auto& c : rs.representatives)
        for (const auto& st : g.successors(c)) rs.ef.insert(st.event);
    return rs;
}

namespace {

// Relates every pair of transitions whose ∼-classes already contain an
// independent pair, until the classes stop changing.
std::set<std::pair<TransId, TransId>> close_under_instances(const std::vector<std::string>& states, StateId init,
                                                            const std::vector<Transition>& ts,
                                                            const std::vector<std::string>& names,
                                                            std::set<std::pair<TransId, TransId>> indep) {
    for (;;) {
        Tsi t(states, init, ts, names, {indep.begin(), indep.end()});
        auto cls = instance_classes(t);
        std::set<std::pair<std::uint32_t, std::uint32_t>> related;
        for (auto [x, y] : indep) related.emplace(std::min(cls[x], cls[y]), std::max(cls[x], cls[y]));
        std::set<std::pair<TransId, TransId>> next;
        for (TransId x = 0; x < ts.size(); ++x)
            for (TransId y = x + 1; y < ts.size(); ++y)
                if (related.count({std::min(cls[x], cls[y]), std::max(cls[x], cls[y])})) next.emplace(x, y);
        if (next == indep) return indep;
        indep = std::move(next);
    }
}

} // namespace

Tsi fold(const EsGenerator& g, const QuotientOracle& q, std::size_t cap) {
    auto rs = complete_representative_set(representative_set(g, q, cap), g);
    std::map<std::string, StateId> state_of;
    for (StateId s = 0; s < rs.classes.size(); ++s) state_of.emplace(rs.classes[s], s);

    std::vector<Transition> ts;
    std::vector<std::string> names;
    std::map<std::tuple<StateId, std::string, StateId>, TransId> triple;
    // For each representative, the transition taken by each enabled event.
    std::vector<std::vector<std::pair<std::string, TransId>>> taken(rs.classes.size());
    for (StateId s = 0; s < rs.classes.size(); ++s) {
        const auto& c = rs.representatives[s];
        for (const auto& st : g.successors(c)) {
            auto it = state_of.find(q.canonical(add_event(c, st.event)));
            if (it == state_of.end()) throw ModelError("quotient is not closed under successors at " + rs.classes[s]);
            auto key = std::make_tuple(s, st.label, it->second);
            auto [pos, fresh] = triple.emplace(key, static_cast<TransId>(ts.size()));
            if (fresh) {
                ts.push_back({s, st.label, it->second});
                names.push_back(st.event + "@" + std::to_string(s));
            }
            taken[s].emplace_back(st.event, pos->second);
        }
    }

    // Squares of co events enabled together at a representative.
    auto find = [&](StateId s, const std::string& label, StateId d) -> TransId {
        auto it = triple.find({s, label, d});
        if (it == triple.end()) throw ModelError("missing square transition from " + rs.classes[s]);
        return it->second;
    };
    std::set<std::pair<TransId, TransId>> indep;
    auto relate = [&](TransId x, TransId y) {
        if (x != y) indep.emplace(std::min(x, y), std::max(x, y));
    };
    for (StateId s = 0; s < rs.classes.size(); ++s) {
        const auto& c = rs.representatives[s];
        const auto& en = taken[s];
        for (std::size_t i = 0; i < en.size(); ++i)
            for (std::size_t j = i + 1; j < en.size(); ++j) {
                if (!g.concurrent(en[i].first, en[j].first)) continue;
                TransId t1 = en[i].second, t2 = en[j].second;
                StateId s1 = ts[t1].target, s2 = ts[t2].target;
                StateId s12 = state_of.at(q.canonical(add_event(add_event(c, en[i].first), en[j].first)));
                TransId t1b = find(s2, ts[t1].label, s12);
                TransId t2b = find(s1, ts[t2].label, s12);
                relate(t1, t2);
                relate(t1, t2b);
                relate(t2, t1b);
                relate(t1b, t2b);
            }
    }
    // Class strings may contain blanks, so states get plain names.
    std::vector<std::string> states;
    for (StateId s = 0; s < rs.classes.size(); ++s) states.push_back("s" + std::to_string(s));
    indep = close_under_instances(states, 0, ts, names, std::move(indep));
    return Tsi(std::move(states), 0, std::move(ts), std::move(names), {indep.begin(), indep.end()});
}

Unfolding truncated_unfolding(const EsGenerator& g, std::size_t depth, std::size_t cap) {
    std::map<EventConfig, StateId> index;
    std::vector<EventConfig> configs;
    std::deque<StateId> queue;
    auto intern = [&](const EventConfig& c) {
        auto [it, fresh] = index.emplace(c, static_cast<StateId>(configs.size()));
        if (fresh) {
            if (configs.size() >= cap) throw CapExceeded(cap);
            configs.push_back(c);
            queue.push_back(it->second);
        }
        return it->second;
    };
    intern({});
    std::vector<Transition> ts;
    std::vector<std::string> names, events;
    while (!queue.empty()) {
        StateId s = queue.front();
        queue.pop_front();
        EventConfig c = configs[s];
        if (c.size() >= depth) continue;
        for (const auto& st : g.successors(c)) {
            StateId d = intern(add_event(c, st.event));
            names.push_back(st.event + "@" + std::to_string(s));
            events.push_back(st.event);
            ts.push_back({s, st.label, d});
        }
    }
    std::vector<std::pair<TransId, TransId>> indep;
    for (TransId x = 0; x < ts.size(); ++x)
        for (TransId y = x + 1; y < ts.size(); ++y)
            if (events[x] != events[y] && g.concurrent(events[x], events[y])) indep.emplace_back(x, y);
    std::vector<std::string> states;
    IdentityOracle ident;
    std::vector<StateId> frontier;
    for (StateId s = 0; s < configs.size(); ++s) {
        states.push_back(ident.canonical(configs[s]));
        if (configs[s].size() == depth && !g.successors(configs[s]).empty()) frontier.push_back(s);
    }
    return {Tsi(std::move(states), 0, std::move(ts), std::move(names), indep), std::move(frontier)};
}

EventStructure materialize(const EsGenerator& g, std::size_t cap) {
    std::set<EventConfig> seen{{}};
    std::deque<EventConfig> queue{{}};
    std::vector<EventConfig> configs;
    std::vector<std::string> order;
    std::map<std::string, std::string> label;
    while (!queue.empty()) {
        EventConfig c = std::move(queue.front());
        queue.pop_front();
        configs.push_back(c);
        for (const auto& st : g.successors(c)) {
            if (label.emplace(st.event, st.label).second) order.push_back(st.event);
            auto n = add_event(c, st.event);
            if (!seen.insert(n).second) continue;
            if (seen.size() > cap) throw CapExceeded(cap);
            queue.push_back(std::move(n));
        }
    }
    EventStructure es;
    std::map<std::string, EventId> id;
    for (const auto& e : order) id[e] = es.add_event(e, label.at(e));
    // Membership bitmap per configuration.
    std::vector<std::vector<char>> in(configs.size(), std::vector<char>(order.size(), 0));
    for (std::size_t k = 0; k < configs.size(); ++k)
        for (const auto& e : configs[k]) in[k][id.at(e)] = 1;
    const auto n = static_cast<EventId>(order.size());
    for (EventId e = 0; e < n; ++e)
        for (EventId f = 0; f < n; ++f) {
            if (e == f) continue;
            bool together = false, always = true;
            for (const auto& row : in) {
                if (!row[f]) continue;
                together = together || row[e];
                always = always && row[e];
            }
            if (always) es.add_causal(e, f);
            else if (!together && e < f) es.add_conflict(e, f);
        }
    return es;
}

const char* to_string(FoldStatus s) {
    switch (s) {
    case FoldStatus::Agree: return "agree";
    case FoldStatus::Undecided: return "undecided";
    case FoldStatus::Disagree: return "disagree";
    }
    return "?";
}

FoldReport verify_fold(const Tsi& folded, const EsGenerator& g, const std::vector<Formula>& formulas,
                       std::size_t depth, std::size_t cap, int jobs) {
    auto unf = truncated_unfolding(g, depth, cap);
    ProcessSpace space(unf.tsi);
    MoveTable moves(space);
    ProcessSet frontier(space.size());
    std::vector<char> at_frontier(unf.tsi.state_count(), 0);
    for (auto s : unf.frontier) at_frontier[s] = 1;
    for (std::size_t p = 0; p < space.size(); ++p)
        if (at_frontier[space.state_of(p)]) frontier.set(p);
    ProcessSpace fspace(folded);
    MoveTable fmoves(fspace);

    FoldReport rep;
    rep.checks.resize(formulas.size());
    parallel_for(formulas.size(), jobs, [&](std::size_t i) {
        Formula f = to_positive_normal_form(formulas[i]);
        FoldCheck& c = rep.checks[i];
        c.formula = formulas[i];
        c.folded = denote(f, fspace, fmoves).test(fspace.initial());
        EvalOptions lo, hi;
        lo.frontier = hi.frontier = &frontier;
        lo.frontier_value = false;
        hi.frontier_value = true;
        bool lower = denote(f, space, moves, {}, lo).test(space.initial());
        bool upper = denote(f, space, moves, {}, hi).test(space.initial());
        if (lower) c.unfolded = true;
        else if (!upper) c.unfolded = false;
        if (!c.unfolded) c.status = FoldStatus::Undecided;
        else c.status = *c.unfolded == c.folded ? FoldStatus::Agree : FoldStatus::Disagree;
    });
    for (const auto& c : rep.checks) {
        switch (c.status) {
        case FoldStatus::Agree: ++rep.agreements; break;
        case FoldStatus::Undecided: ++rep.undecided; break;
        case FoldStatus::Disagree: ++rep.disagreements; break;
        }
    }
    return rep;
}

} // namespace truecon
