#include "saledi/time.hpp"

#include <array>
#include <cstdio>
#include <stdexcept>

namespace saledi {

namespace {

// Days from 1970-01-01 for a civil date (Howard Hinnant's algorithm).
std::int64_t days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
  m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
  y = static_cast<int>(yy + (m <= 2));
}

bool days_in_month_ok(int y, int m, int d) {
  static constexpr std::array<int, 12> len = {31, 28, 31, 30, 31, 30,
                                              31, 31, 30, 31, 30, 31};
  if (m < 1 || m > 12 || d < 1) return false;
  int max_d = len[m - 1];
  const bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
  if (m == 2 && leap) max_d = 29;
  return d <= max_d;
}

}  // namespace

EpochMinutes parse_iso_minute(const std::string& text) {
  int y = 0, mo = 0, d = 0, h = 0, mi = 0;
  char sep = 0, tail = 0;
  const int got = std::sscanf(text.c_str(), "%d-%d-%d%c%d:%d%c", &y, &mo, &d,
                              &sep, &h, &mi, &tail);
  if (got != 6 || (sep != 'T' && sep != ' '))
    throw std::invalid_argument("not a YYYY-MM-DDTHH:MM timestamp: " + text);
  if (!days_in_month_ok(y, mo, d) || h < 0 || h > 23 || mi < 0 || mi > 59)
    throw std::invalid_argument("timestamp out of range: " + text);
  return days_from_civil(y, mo, d) * 1440 + h * 60 + mi;
}

std::string format_iso_minute(EpochMinutes t) {
  std::int64_t days = t / 1440;
  std::int64_t rem = t % 1440;
  if (rem < 0) {
    rem += 1440;
    --days;
  }
  int y, m, d;
  civil_from_days(days, y, m, d);
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02lld:%02lld", y, m, d,
                static_cast<long long>(rem / 60),
                static_cast<long long>(rem % 60));
  return buf;
}

int civil_year_of(EpochMinutes t) {
  std::int64_t days = t / 1440;
  if (t % 1440 < 0) --days;
  int y, m, d;
  civil_from_days(days, y, m, d);
  return y;
}

}  // namespace saledi
