#pragma once

#include <istream>
#include <string>
#include <vector>

#include "saledi/types.hpp"

namespace saledi::ingest {

// Reads the outage CSV schema `outage_id,start,restore,customers`.
// Timestamps are either ISO-8601 to the minute or integer epoch-minutes;
// the two styles may not be mixed within one file. Rows come back sorted
// by start, ties broken by outage_id. Throws DataError naming the row and
// field on any malformed input; an empty file is an error.
std::vector<OutageRecord> parse_outage_csv(const std::string& path);
std::vector<OutageRecord> parse_outage_csv(std::istream& in,
                                           const std::string& name);

// Keeps exactly the records with duration > threshold_minutes (default 5,
// the sustained-outage cutoff).
std::vector<OutageRecord> filter_sustained(
    const std::vector<OutageRecord>& records,
    std::int64_t threshold_minutes = 5);

// m_i = duration * customers / n_customer.
double outage_cmip(const OutageRecord& record, const SystemProfile& profile);

// Writes records back in the input schema (ISO timestamps).
void write_outage_csv(const std::vector<OutageRecord>& records,
                      std::ostream& out);
void write_outage_csv(const std::vector<OutageRecord>& records,
                      const std::string& path);

}  // namespace saledi::ingest
