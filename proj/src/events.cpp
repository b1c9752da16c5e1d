#include "saledi/events.hpp"

#include <algorithm>

#include "saledi/ingest.hpp"

namespace saledi::events {

double event_cmip(std::span<const OutageSample> members) {
  double m = 0.0;
  for (const auto& o : members) m += o.cmip;
  return m;
}

double event_cmip(const EventCatalog& catalog, const Event& event) {
  return event_cmip(std::span<const OutageSample>(
      catalog.outages.data() + event.first_outage, event.n_outage));
}

EventCatalog group_events(const std::vector<OutageRecord>& records,
                          const SystemProfile& profile,
                          std::int64_t cap_minutes) {
  profile.validate();
  if (cap_minutes <= 0) throw ConfigError("grouping cap must be positive");
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].start < records[i - 1].start ||
        (records[i].start == records[i - 1].start &&
         records[i].outage_id < records[i - 1].outage_id))
      throw DataError("group_events: records are not sorted");
  }

  EventCatalog catalog;
  catalog.profile = profile;
  catalog.outages.reserve(records.size());
  for (const auto& r : records)
    catalog.outages.push_back(
        {r.outage_id, r.start, r.restore, ingest::outage_cmip(r, profile)});

  EpochMinutes horizon = 0;
  for (std::size_t i = 0; i < catalog.outages.size(); ++i) {
    const auto& o = catalog.outages[i];
    const EpochMinutes capped = std::min(o.restore, o.start + cap_minutes);
    // Strict inequality: starting exactly at the horizon opens a new event.
    if (catalog.events.empty() || o.start >= horizon) {
      Event ev;
      ev.event_id = static_cast<int>(catalog.events.size()) + 1;
      ev.first_outage = i;
      ev.n_outage = 1;
      ev.start = o.start;
      ev.end = o.restore;
      catalog.events.push_back(ev);
      horizon = capped;
    } else {
      Event& ev = catalog.events.back();
      ++ev.n_outage;
      ev.end = std::max(ev.end, o.restore);
      horizon = std::max(horizon, capped);
    }
  }
  for (auto& ev : catalog.events) ev.cmip = event_cmip(catalog, ev);
  return catalog;
}

}  // namespace saledi::events
