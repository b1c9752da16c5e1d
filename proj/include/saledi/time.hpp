#pragma once

#include <cstdint>
#include <string>

namespace saledi {

// All timestamps are integer minutes since the Unix epoch.
using EpochMinutes = std::int64_t;

// 365.25 days.
inline constexpr std::int64_t kMinutesPerYear = 525960;
inline constexpr std::int64_t kMinutesPerMonth = kMinutesPerYear / 12;  // 43830

// Parses "YYYY-MM-DDTHH:MM" (a space separator is also accepted).
// Throws std::invalid_argument on anything else, including sub-minute input.
EpochMinutes parse_iso_minute(const std::string& text);

std::string format_iso_minute(EpochMinutes t);

// Calendar year containing t.
int civil_year_of(EpochMinutes t);

inline double minutes_to_years(std::int64_t minutes) {
  return static_cast<double>(minutes) / static_cast<double>(kMinutesPerYear);
}

}  // namespace saledi
