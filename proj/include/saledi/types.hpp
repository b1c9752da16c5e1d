#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "saledi/time.hpp"

namespace saledi {

// Thrown for invalid configuration (CLI exit code 2).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown for malformed or inconsistent input data (CLI exit code 3).
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when a numerical procedure cannot produce a result (CLI exit code 4).
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One sustained (or momentary) outage as recorded by the utility.
struct OutageRecord {
  std::string outage_id;
  EpochMinutes start = 0;
  EpochMinutes restore = 0;
  std::int64_t customers_interrupted = 0;

  std::int64_t duration_minutes() const { return restore - start; }
};

struct SystemProfile {
  std::int64_t n_customer = 0;
  EpochMinutes span_start = 0;
  EpochMinutes span_end = 0;

  double n_year_all() const { return minutes_to_years(span_end - span_start); }

  void validate() const {
    if (n_customer <= 0) throw ConfigError("n_customer must be positive");
    if (span_end <= span_start)
      throw ConfigError("span_end must be after span_start");
  }
};

// A sustained outage reduced to what the metrics need.
struct OutageSample {
  std::string outage_id;
  EpochMinutes start = 0;
  EpochMinutes restore = 0;
  double cmip = 0.0;  // m_i, minutes per customer served
};

// A group of time-overlapping outages. Members are the contiguous range
// [first_outage, first_outage + n_outage) of the catalog's outage array.
struct Event {
  int event_id = 0;
  std::size_t first_outage = 0;
  std::size_t n_outage = 0;
  EpochMinutes start = 0;
  EpochMinutes end = 0;  // latest actual restore; the grouping cap is not applied here
  double cmip = 0.0;     // M_i
};

struct EventCatalog {
  std::vector<OutageSample> outages;  // sorted by start, tie outage_id
  std::vector<Event> events;          // sorted by start
  SystemProfile profile;

  std::size_t n_allevent() const { return events.size(); }

  Eigen::ArrayXd event_magnitudes() const {
    Eigen::ArrayXd m(static_cast<Eigen::Index>(events.size()));
    for (std::size_t i = 0; i < events.size(); ++i)
      m[static_cast<Eigen::Index>(i)] = events[i].cmip;
    return m;
  }
};

}  // namespace saledi
