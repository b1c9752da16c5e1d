#include "saledi/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

namespace saledi::ingest {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

bool is_integer(const std::string& s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  return std::all_of(s.begin() + i, s.end(),
                     [](unsigned char c) { return std::isdigit(c); });
}

std::int64_t parse_i64(const std::string& s, std::size_t row,
                       const char* field) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw DataError("row " + std::to_string(row) + ": field '" + field +
                    "' is not an integer: '" + s + "'");
  return v;
}

enum class TsStyle { undecided, iso, epoch_minutes };

EpochMinutes parse_timestamp(const std::string& s, TsStyle& style,
                             std::size_t row, const char* field) {
  const bool looks_numeric = is_integer(s);
  if (style == TsStyle::undecided)
    style = looks_numeric ? TsStyle::epoch_minutes : TsStyle::iso;
  if (looks_numeric != (style == TsStyle::epoch_minutes))
    throw DataError("row " + std::to_string(row) + ": field '" + field +
                    "' mixes timestamp styles within one file");
  if (style == TsStyle::epoch_minutes) return parse_i64(s, row, field);
  try {
    return parse_iso_minute(s);
  } catch (const std::invalid_argument& e) {
    throw DataError("row " + std::to_string(row) + ": field '" + field +
                    "': " + e.what());
  }
}

}  // namespace

std::vector<OutageRecord> parse_outage_csv(std::istream& in,
                                           const std::string& name) {
  std::string line;
  if (!std::getline(in, line))
    throw DataError(name + ": empty file");
  if (split_csv_line(line) !=
      std::vector<std::string>{"outage_id", "start", "restore", "customers"})
    throw DataError(name +
                    ": header must be exactly "
                    "'outage_id,start,restore,customers'");

  std::vector<OutageRecord> records;
  TsStyle style = TsStyle::undecided;
  std::size_t row = 1;  // header is row 1
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 4)
      throw DataError("row " + std::to_string(row) + ": expected 4 columns, got " +
                      std::to_string(fields.size()));
    OutageRecord rec;
    rec.outage_id = fields[0];
    if (rec.outage_id.empty())
      throw DataError("row " + std::to_string(row) + ": field 'outage_id' is empty");
    rec.start = parse_timestamp(fields[1], style, row, "start");
    rec.restore = parse_timestamp(fields[2], style, row, "restore");
    rec.customers_interrupted = parse_i64(fields[3], row, "customers");
    if (rec.restore < rec.start)
      throw DataError("row " + std::to_string(row) +
                      ": field 'restore' is earlier than 'start'");
    if (rec.customers_interrupted < 0)
      throw DataError("row " + std::to_string(row) +
                      ": field 'customers' is negative");
    records.push_back(std::move(rec));
  }
  if (records.empty()) throw DataError(name + ": no data rows");

  std::stable_sort(records.begin(), records.end(),
                   [](const OutageRecord& a, const OutageRecord& b) {
                     if (a.start != b.start) return a.start < b.start;
                     return a.outage_id < b.outage_id;
                   });
  return records;
}

std::vector<OutageRecord> parse_outage_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open input file: " + path);
  return parse_outage_csv(in, path);
}

std::vector<OutageRecord> filter_sustained(
    const std::vector<OutageRecord>& records, std::int64_t threshold_minutes) {
  std::vector<OutageRecord> out;
  out.reserve(records.size());
  for (const auto& r : records)
    if (r.duration_minutes() > threshold_minutes) out.push_back(r);
  return out;
}

double outage_cmip(const OutageRecord& record, const SystemProfile& profile) {
  if (profile.n_customer <= 0)
    throw ConfigError("outage_cmip: n_customer must be positive");
  return static_cast<double>(record.duration_minutes()) *
         static_cast<double>(record.customers_interrupted) /
         static_cast<double>(profile.n_customer);
}

void write_outage_csv(const std::vector<OutageRecord>& records,
                      std::ostream& out) {
  out << "outage_id,start,restore,customers\n";
  for (const auto& r : records)
    out << r.outage_id << ',' << format_iso_minute(r.start) << ','
        << format_iso_minute(r.restore) << ',' << r.customers_interrupted
        << '\n';
}

void write_outage_csv(const std::vector<OutageRecord>& records,
                      const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open output file: " + path);
  write_outage_csv(records, out);
}

}  // namespace saledi::ingest
