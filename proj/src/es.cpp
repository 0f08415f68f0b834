#include "truecon/es.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "truecon/error.hpp"

namespace truecon {

EventId EventStructure::add_event(const std::string& name, const std::string& label) {
    if (std::find(names_.begin(), names_.end(), name) != names_.end())
        throw ModelError("duplicate event " + name);
    if (label.empty()) throw ModelError("event " + name + " has an empty label");
    names_.push_back(name);
    labels_.push_back(label);
    for (auto& row : conflict_) row.push_back(false);
    conflict_.emplace_back(names_.size(), false);
    closed_ = false;
    return static_cast<EventId>(names_.size() - 1);
}

EventId EventStructure::lookup(const std::string& name) const {
    auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) throw ModelError("unknown event " + name);
    return static_cast<EventId>(it - names_.begin());
}

void EventStructure::add_causal(const std::string& before, const std::string& after) {
    add_causal(lookup(before), lookup(after));
}

void EventStructure::add_conflict(const std::string& a, const std::string& b) {
    add_conflict(lookup(a), lookup(b));
}

void EventStructure::add_causal(EventId before, EventId after) {
    causal_.emplace_back(before, after);
    closed_ = false;
}

void EventStructure::add_conflict(EventId a, EventId b) {
    conflict_.at(a).at(b) = true;
    conflict_.at(b).at(a) = true;
}

void EventStructure::close() const {
    if (closed_) return;
    const std::size_t n = names_.size();
    leq_.assign(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) leq_[i][i] = true;
    for (auto [a, b] : causal_) leq_[a][b] = true;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            if (leq_[i][k])
                for (std::size_t j = 0; j < n; ++j)
                    if (leq_[k][j]) leq_[i][j] = true;
    closed_ = true;
}

bool EventStructure::leq(EventId a, EventId b) const {
    close();
    return leq_[a][b];
}

bool EventStructure::conflict(EventId a, EventId b) const { return conflict_[a][b]; }

bool EventStructure::co(EventId a, EventId b) const {
    return a != b && !leq(a, b) && !leq(b, a) && !conflict(a, b);
}

std::vector<EventId> EventStructure::causes(EventId e) const {
    std::vector<EventId> res;
    for (EventId x = 0; x < names_.size(); ++x)
        if (x != e && leq(x, e)) res.push_back(x);
    return res;
}

std::string EventStructure::configuration_name(const Configuration& c) const {
    std::string s = "{";
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (i) s += ",";
        s += names_[c[i]];
    }
    return s + "}";
}

ValidationReport validate_es(const EventStructure& e) {
    ValidationReport rep;
    const std::size_t n = e.event_count();

    Check irreflexive{"conflict-irreflexive", true, ""};
    for (EventId x = 0; x < n; ++x)
        if (e.conflict(x, x)) {
            irreflexive.passed = false;
            irreflexive.witness = e.event_name(x) + " # " + e.event_name(x);
            break;
        }

    Check order{"causality-partial-order", true, ""};
    for (EventId x = 0; x < n && order.passed; ++x)
        for (EventId y = x + 1; y < n; ++y)
            if (e.leq(x, y) && e.leq(y, x)) {
                order.passed = false;
                order.witness = e.event_name(x) + " and " + e.event_name(y) + " cause each other";
                break;
            }

    Check inherit{"conflict-inheritance", true, ""};
    for (EventId a = 0; a < n && inherit.passed; ++a)
        for (EventId b = 0; b < n && inherit.passed; ++b) {
            if (!e.conflict(a, b)) continue;
            for (EventId c = 0; c < n; ++c)
                if (e.leq(b, c) && !e.conflict(a, c)) {
                    inherit.passed = false;
                    inherit.witness = e.event_name(a) + " # " + e.event_name(b) + " <= " + e.event_name(c) +
                                      " but not " + e.event_name(a) + " # " + e.event_name(c);
                    break;
                }
        }

    // Finite structures always have finite cause sets.
    Check finite{"finite-causes", true, ""};
    rep.checks = {irreflexive, order, inherit, finite};
    return rep;
}

Tsi es_to_tsi(const EventStructure& e, std::size_t cap) {
    auto rep = validate_es(e);
    if (!rep.ok()) {
        for (const auto& c : rep.checks)
            if (!c.passed) throw ModelError("invalid event structure: " + c.name + ": " + c.witness);
    }
    const std::size_t n = e.event_count();
    std::vector<std::vector<EventId>> causes(n);
    for (EventId x = 0; x < n; ++x) causes[x] = e.causes(x);

    std::map<Configuration, StateId> index;
    std::vector<Configuration> configs;
    std::deque<StateId> queue;
    auto intern = [&](const Configuration& c) {
        auto [it, fresh] = index.emplace(c, static_cast<StateId>(configs.size()));
        if (fresh) {
            if (configs.size() >= cap) throw StateExplosion(cap);
            configs.push_back(c);
            queue.push_back(it->second);
        }
        return it->second;
    };
    intern({});

    std::vector<Transition> transitions;
    std::vector<std::string> names;
    std::vector<std::vector<TransId>> by_event(n);
    while (!queue.empty()) {
        StateId s = queue.front();
        queue.pop_front();
        const Configuration c = configs[s];
        for (EventId x = 0; x < n; ++x) {
            if (std::binary_search(c.begin(), c.end(), x)) continue;
            if (!std::includes(c.begin(), c.end(), causes[x].begin(), causes[x].end())) continue;
            bool clash = std::any_of(c.begin(), c.end(), [&](EventId y) { return e.conflict(x, y); });
            if (clash) continue;
            Configuration next = c;
            next.insert(std::lower_bound(next.begin(), next.end(), x), x);
            StateId d = intern(next);
            by_event[x].push_back(static_cast<TransId>(transitions.size()));
            names.push_back(e.event_name(x) + "@" + std::to_string(s));
            transitions.push_back({s, e.event_label(x), d});
        }
    }

    std::vector<std::pair<TransId, TransId>> indep;
    for (EventId x = 0; x < n; ++x)
        for (EventId y = x + 1; y < n; ++y)
            if (e.co(x, y))
                for (TransId a : by_event[x])
                    for (TransId b : by_event[y]) indep.emplace_back(a, b);

    std::vector<std::string> state_names;
    for (const auto& c : configs) state_names.push_back(e.configuration_name(c));
    return Tsi(std::move(state_names), 0, std::move(transitions), std::move(names), indep);
}

} // namespace truecon
