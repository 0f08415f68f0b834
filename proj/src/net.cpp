#include "truecon/net.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <tuple>

#include "truecon/error.hpp"

namespace truecon {

namespace {

bool disjoint(const std::vector<PlaceId>& a, const std::vector<PlaceId>& b) {
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i == *j) return false;
        if (*i < *j) ++i; else ++j;
    }
    return true;
}

bool subset(const std::vector<PlaceId>& small, const Marking& big) {
    return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

std::vector<PlaceId> neighbourhood(const PetriNet& n, ActionId a) {
    std::vector<PlaceId> res;
    std::set_union(n.preset(a).begin(), n.preset(a).end(), n.postset(a).begin(), n.postset(a).end(),
                   std::back_inserter(res));
    return res;
}

void insert_sorted(std::vector<PlaceId>& v, PlaceId p) {
    auto it = std::lower_bound(v.begin(), v.end(), p);
    if (it == v.end() || *it != p) v.insert(it, p);
}

} // namespace

PlaceId PetriNet::add_place(const std::string& name, bool marked) {
    if (std::find(places_.begin(), places_.end(), name) != places_.end())
        throw ModelError("duplicate place " + name);
    if (std::find(actions_.begin(), actions_.end(), name) != actions_.end())
        throw ModelError("place " + name + " clashes with an action name");
    auto id = static_cast<PlaceId>(places_.size());
    places_.push_back(name);
    if (marked) insert_sorted(initial_, id);
    return id;
}

ActionId PetriNet::add_action(const std::string& name, const std::string& label) {
    if (std::find(actions_.begin(), actions_.end(), name) != actions_.end())
        throw ModelError("duplicate action " + name);
    if (std::find(places_.begin(), places_.end(), name) != places_.end())
        throw ModelError("action " + name + " clashes with a place name");
    if (label.empty()) throw ModelError("action " + name + " has an empty label");
    auto id = static_cast<ActionId>(actions_.size());
    actions_.push_back(name);
    labels_.push_back(label);
    pre_.emplace_back();
    post_.emplace_back();
    return id;
}

void PetriNet::add_input(PlaceId p, ActionId a) { insert_sorted(pre_.at(a), p); }
void PetriNet::add_output(ActionId a, PlaceId p) { insert_sorted(post_.at(a), p); }

void PetriNet::add_arc(const std::string& from, const std::string& to) {
    auto place = [&](const std::string& n) -> std::optional<PlaceId> {
        auto it = std::find(places_.begin(), places_.end(), n);
        if (it == places_.end()) return std::nullopt;
        return static_cast<PlaceId>(it - places_.begin());
    };
    auto action = [&](const std::string& n) -> std::optional<ActionId> {
        auto it = std::find(actions_.begin(), actions_.end(), n);
        if (it == actions_.end()) return std::nullopt;
        return static_cast<ActionId>(it - actions_.begin());
    };
    if (auto p = place(from)) {
        auto a = action(to);
        if (!a) throw ModelError("arc " + from + " -> " + to + ": target is not an action");
        add_input(*p, *a);
    } else if (auto a = action(from)) {
        auto p2 = place(to);
        if (!p2) throw ModelError("arc " + from + " -> " + to + ": target is not a place");
        add_output(*a, *p2);
    } else {
        throw ModelError("arc " + from + " -> " + to + ": unknown source");
    }
}

std::vector<ActionId> PetriNet::consumers(PlaceId p) const {
    std::vector<ActionId> res;
    for (ActionId a = 0; a < pre_.size(); ++a)
        if (std::binary_search(pre_[a].begin(), pre_[a].end(), p)) res.push_back(a);
    return res;
}

std::string PetriNet::marking_name(const Marking& m) const {
    std::string s = "{";
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (i) s += ",";
        s += places_[m[i]];
    }
    return s + "}";
}

Tsi net_to_tsi(const PetriNet& n, std::size_t cap) {
    std::map<Marking, StateId> index;
    std::vector<Marking> markings;
    std::deque<StateId> queue;
    auto intern = [&](const Marking& m) {
        auto [it, fresh] = index.emplace(m, static_cast<StateId>(markings.size()));
        if (fresh) {
            if (markings.size() >= cap) throw StateExplosion(cap);
            markings.push_back(m);
            queue.push_back(it->second);
        }
        return it->second;
    };
    intern(n.initial_marking());

    std::vector<Transition> transitions;
    std::vector<std::string> names;
    std::map<std::tuple<StateId, std::string, StateId>, TransId> triple_index;
    std::vector<std::vector<TransId>> by_action(n.action_count());
    std::vector<std::size_t> per_action_count(n.action_count(), 0);
    std::set<std::pair<ActionId, ActionId>> concurrent;

    std::vector<std::vector<PlaceId>> hood(n.action_count());
    for (ActionId a = 0; a < n.action_count(); ++a) hood[a] = neighbourhood(n, a);

    while (!queue.empty()) {
        StateId s = queue.front();
        queue.pop_front();
        const Marking m = markings[s];
        std::vector<ActionId> enabled;
        for (ActionId a = 0; a < n.action_count(); ++a)
            if (subset(n.preset(a), m)) enabled.push_back(a);

        for (ActionId a : enabled) {
            Marking rest;
            std::set_difference(m.begin(), m.end(), n.preset(a).begin(), n.preset(a).end(),
                                std::back_inserter(rest));
            if (!disjoint(rest, n.postset(a))) throw UnsafeNet(n.marking_name(m), n.action_name(a));
            Marking next;
            std::set_union(rest.begin(), rest.end(), n.postset(a).begin(), n.postset(a).end(),
                           std::back_inserter(next));
            StateId d = intern(next);
            auto key = std::make_tuple(s, n.action_label(a), d);
            auto it = triple_index.find(key);
            TransId t;
            if (it == triple_index.end()) {
                t = static_cast<TransId>(transitions.size());
                transitions.push_back({s, n.action_label(a), d});
                names.push_back(n.action_name(a) + "." + std::to_string(per_action_count[a]++));
                triple_index.emplace(key, t);
            } else {
                t = it->second;
            }
            by_action[a].push_back(t);
        }
        for (std::size_t i = 0; i < enabled.size(); ++i)
            for (std::size_t j = i + 1; j < enabled.size(); ++j)
                if (disjoint(hood[enabled[i]], hood[enabled[j]]))
                    concurrent.emplace(enabled[i], enabled[j]);
    }

    std::set<std::pair<TransId, TransId>> indep;
    for (auto [a, b] : concurrent)
        for (TransId x : by_action[a])
            for (TransId y : by_action[b])
                if (x != y) indep.emplace(std::min(x, y), std::max(x, y));

    std::vector<std::string> state_names;
    state_names.reserve(markings.size());
    for (const auto& m : markings) state_names.push_back(n.marking_name(m));
    return Tsi(std::move(state_names), 0, std::move(transitions), std::move(names),
               {indep.begin(), indep.end()});
}

ValidationReport validate_net(const PetriNet& n, std::size_t cap) {
    ValidationReport rep;
    Check safe{"safe", true, ""};
    Check finite{"finite", true, ""};
    try {
        (void)net_to_tsi(n, cap);
    } catch (const UnsafeNet& e) {
        safe.passed = false;
        safe.witness = "action " + e.action() + " at marking " + e.marking();
    } catch (const StateExplosion& e) {
        finite.passed = false;
        finite.witness = e.what();
    }
    rep.checks = {safe, finite};
    return rep;
}

} // namespace truecon
