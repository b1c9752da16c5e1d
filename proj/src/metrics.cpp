#include "saledi/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace saledi::metrics {

double saidi_with_med(const Eigen::ArrayXd& outage_cmip) {
  return outage_cmip.size() == 0 ? 0.0 : outage_cmip.sum();
}

double saidi_without_med(std::span<const double> year_daily,
                         std::span<const double> history_daily) {
  if (history_daily.size() < 365)
    throw DataError("saidi_without_med: need at least 365 historical daily values");
  double sum_log = 0.0;
  std::size_t n = 0;
  for (double d : history_daily)
    if (d > 0.0) {
      sum_log += std::log(d);
      ++n;
    }
  if (n < 2)
    throw DataError("saidi_without_med: too few nonzero historical days");
  const double mu = sum_log / static_cast<double>(n);
  double ss = 0.0;
  for (double d : history_daily)
    if (d > 0.0) {
      const double e = std::log(d) - mu;
      ss += e * e;
    }
  const double sigma = std::sqrt(ss / static_cast<double>(n - 1));
  const double t_med = std::exp(mu + 2.5 * sigma);
  double saidi = 0.0;
  for (double d : year_daily)
    if (d <= t_med) saidi += d;
  return saidi;
}

namespace {

// Event CMIp values with event start inside [ws, we).
Eigen::ArrayXd window_magnitudes(const EventCatalog& catalog, EpochMinutes ws,
                                 EpochMinutes we) {
  std::vector<double> m;
  for (const auto& ev : catalog.events)
    if (ev.start >= ws && ev.start < we) m.push_back(ev.cmip);
  return Eigen::Map<const Eigen::ArrayXd>(m.data(),
                                          static_cast<Eigen::Index>(m.size()));
}

void check_window(const EventCatalog& catalog, double m_large, EpochMinutes ws,
                  EpochMinutes we) {
  if (m_large <= 0.0) throw ConfigError("M_large must be positive");
  if (we <= ws) throw ConfigError("window has zero or negative duration");
  if (ws < catalog.profile.span_start || we > catalog.profile.span_end)
    throw DataError("window is not within the catalog span");
}

}  // namespace

MetricsReport resilience_metrics(const EventCatalog& catalog, double m_large,
                                 EpochMinutes window_start,
                                 EpochMinutes window_end) {
  check_window(catalog, m_large, window_start, window_end);
  MetricsReport rep;
  rep.window_start = window_start;
  rep.window_end = window_end;
  rep.n_year = minutes_to_years(window_end - window_start);
  rep.m_large = m_large;

  const Eigen::ArrayXd m = window_magnitudes(catalog, window_start, window_end);
  double sum_log = 0.0;
  double sum_norm = 0.0;
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    if (m[i] >= m_large) {  // inclusive membership
      ++rep.n_large;
      sum_log += std::log(m[i] / m_large);
      sum_norm += m[i] / m_large;
    }
  }
  rep.f_large = rep.n_large / rep.n_year;
  rep.saledi = sum_log / rep.n_year;
  rep.spledi = sum_norm / rep.n_year;
  if (rep.n_large > 0) {
    rep.aled = sum_log / rep.n_large;
    rep.spaled = sum_norm / rep.n_large;
  }

  std::map<int, double> by_year;
  for (const auto& o : catalog.outages)
    if (o.start >= window_start && o.start < window_end)
      by_year[civil_year_of(o.start)] += o.cmip;
  rep.saidi_with_med_by_year.assign(by_year.begin(), by_year.end());
  return rep;
}

std::pair<double, std::optional<double>> seemingly_plausible_metrics(
    const EventCatalog& catalog, double m_large, EpochMinutes window_start,
    EpochMinutes window_end) {
  const MetricsReport rep =
      resilience_metrics(catalog, m_large, window_start, window_end);
  return {rep.spledi, rep.spaled};
}

double cvar(const Eigen::ArrayXd& values, const CvarSpec& spec,
            double threshold) {
  if (values.size() == 0) throw DataError("cvar: no large events");
  if (threshold <= 0.0) throw ConfigError("cvar: threshold must be positive");
  if ((values < threshold).any())
    throw DataError("cvar: value below threshold");
  switch (spec.transform) {
    case CvarTransform::identity:
      return (values / threshold).mean();
    case CvarTransform::log_normalized:
      return (values / threshold).log().mean();
    case CvarTransform::log10_cost:
      if (spec.cost_factor_k <= 0.0)
        throw ConfigError("cvar: cost_factor_k must be positive");
      return (spec.cost_factor_k * values).log10().mean();
  }
  throw ConfigError("cvar: unknown transform");
}

double ExceedanceCurve::value_at(double x) const {
  // exceedance(x) = count(values > x) / denom; points hold the value just
  // above each unique data value.
  auto it = std::upper_bound(
      points.begin(), points.end(), x,
      [](double lhs, const std::pair<double, double>& p) { return lhs < p.first; });
  if (it == points.begin()) return total;
  return std::prev(it)->second;
}

ExceedanceCurve exceedance(const Eigen::ArrayXd& values,
                           ExceedanceCurve::Kind kind, double n_year) {
  if (kind == ExceedanceCurve::Kind::probability && values.size() == 0)
    throw DataError("exceedance: probability curve needs nonempty values");
  if (kind == ExceedanceCurve::Kind::frequency && n_year <= 0.0)
    throw ConfigError("exceedance: n_year must be positive");

  std::vector<double> sorted(values.data(), values.data() + values.size());
  std::sort(sorted.begin(), sorted.end());
  const double denom = kind == ExceedanceCurve::Kind::probability
                           ? static_cast<double>(sorted.size())
                           : n_year;
  ExceedanceCurve curve;
  curve.kind = kind;
  curve.n_points = static_cast<std::int64_t>(sorted.size());
  curve.total = static_cast<double>(sorted.size()) / denom;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    curve.points.emplace_back(sorted[i],
                              static_cast<double>(sorted.size() - j) / denom);
    i = j;
  }
  return curve;
}

double area_under_exceedance(const ExceedanceCurve& curve) {
  // Horizontal-slice integral of the staircase over [0, inf). The height on
  // (prev, v_i) is the exceedance just above prev.
  double area = 0.0;
  double prev_value = 0.0;
  double height = curve.total;
  for (const auto& [value, exceed] : curve.points) {
    if (value > prev_value) area += (value - prev_value) * height;
    prev_value = std::max(prev_value, value);
    height = exceed;
  }
  return area;
}

std::vector<MetricsReport> track_sliding(const EventCatalog& catalog,
                                         double m_large, int window_years,
                                         int step_months) {
  if (window_years <= 0) throw ConfigError("window_years must be positive");
  if (step_months <= 0) throw ConfigError("step_months must be positive");
  const std::int64_t window_len = window_years * kMinutesPerYear;
  const std::int64_t step = step_months * kMinutesPerMonth;
  const EpochMinutes span_start = catalog.profile.span_start;
  const EpochMinutes span_end = catalog.profile.span_end;
  if (span_end - span_start < window_len)
    throw DataError("track_sliding: catalog span is shorter than one window");

  std::vector<MetricsReport> reports;
  for (EpochMinutes ws = span_start; ws + window_len <= span_end; ws += step)
    reports.push_back(
        resilience_metrics(catalog, m_large, ws, ws + window_len));
  return reports;
}

}  // namespace saledi::metrics
