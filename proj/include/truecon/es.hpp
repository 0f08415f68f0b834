#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "truecon/net.hpp"
#include "truecon/tsi.hpp"

namespace truecon {

using EventId = std::uint32_t;
using Configuration = std::vector<EventId>;  // sorted

// Finite prime event structure. Conflicts are stored exactly as declared
// (symmetrically); inheritance is checked by validate_es, not imposed.
class EventStructure {
public:
    EventId add_event(const std::string& name, const std::string& label);
    void add_causal(const std::string& before, const std::string& after);
    void add_conflict(const std::string& a, const std::string& b);
    void add_causal(EventId before, EventId after);
    void add_conflict(EventId a, EventId b);

    [[nodiscard]] std::size_t event_count() const noexcept { return names_.size(); }
    [[nodiscard]] const std::string& event_name(EventId e) const { return names_[e]; }
    [[nodiscard]] const std::string& event_label(EventId e) const { return labels_[e]; }
    [[nodiscard]] const std::vector<std::pair<EventId, EventId>>& declared_causality() const { return causal_; }

    // Reflexive-transitive closure of the declared causality.
    [[nodiscard]] bool leq(EventId a, EventId b) const;
    [[nodiscard]] bool conflict(EventId a, EventId b) const;
    [[nodiscard]] bool co(EventId a, EventId b) const;
    // Strict causes of e.
    [[nodiscard]] std::vector<EventId> causes(EventId e) const;

    [[nodiscard]] std::string configuration_name(const Configuration& c) const;

private:
    EventId lookup(const std::string& name) const;
    void close() const;

    std::vector<std::string> names_;
    std::vector<std::string> labels_;
    std::vector<std::pair<EventId, EventId>> causal_;
    std::vector<std::vector<bool>> conflict_;
    mutable std::vector<std::vector<bool>> leq_;
    mutable bool closed_ = false;
};

Tsi es_to_tsi(const EventStructure& e, std::size_t cap = kDefaultStateCap);

ValidationReport validate_es(const EventStructure& e);

} // namespace truecon
