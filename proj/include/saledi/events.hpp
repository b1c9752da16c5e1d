#pragma once

#include <span>
#include <vector>

#include "saledi/types.hpp"

namespace saledi::events {

// Groups sustained outages into resilience events by time overlap.
//
// Sweep rule: an event starts with an outage; each later outage joins the
// current event if it starts strictly before the running horizon, where the
// horizon is the max over members of min(restore, start + cap_minutes).
// The cap applies only to grouping; actual restore times are kept on the
// members and on Event::end. Input must be sorted ascending by start
// (ties by outage_id), as produced by ingest.
EventCatalog group_events(const std::vector<OutageRecord>& records,
                          const SystemProfile& profile,
                          std::int64_t cap_minutes = 180);

// M_i: sum of member outage CMIp, in member order.
double event_cmip(std::span<const OutageSample> members);
double event_cmip(const EventCatalog& catalog, const Event& event);

}  // namespace saledi::events
