#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "saledi/types.hpp"

namespace saledi::metrics {

// Window metrics. SALEDI = f_large * ALED; ALED (and SPALED) are absent
// when the window has no large events, while SALEDI/SPLEDI report 0.
struct MetricsReport {
  EpochMinutes window_start = 0;
  EpochMinutes window_end = 0;
  double n_year = 0.0;
  double m_large = 0.0;
  int n_large = 0;
  double f_large = 0.0;
  double saledi = 0.0;
  std::optional<double> aled;
  double spledi = 0.0;
  std::optional<double> spaled;
  // SAIDI with major event days, per calendar year touching the window.
  std::vector<std::pair<int, double>> saidi_with_med_by_year;
};

// Staircase exceedance curve. points[i] = (v_i, exceedance just above v_i)
// over the sorted unique values; `total` is the exceedance below the
// smallest value (n/denominator).
struct ExceedanceCurve {
  enum class Kind { probability, frequency };
  Kind kind = Kind::probability;
  std::vector<std::pair<double, double>> points;
  double total = 0.0;
  std::int64_t n_points = 0;

  // Exceedance at x, strict ">" convention.
  double value_at(double x) const;
};

enum class CvarTransform { identity, log_normalized, log10_cost };

struct CvarSpec {
  CvarTransform transform = CvarTransform::log_normalized;
  double beta = 0.0;           // quantile in [0,1); informational here
  double cost_factor_k = 1.0;  // only for log10_cost
};

// SAIDI including major event days: sum of the year's outage CMIp.
double saidi_with_med(const Eigen::ArrayXd& outage_cmip);

// SAIDI excluding major event days per the 2.5-beta daily threshold:
// fit a lognormal to the nonzero historical daily sums, exclude days of the
// target year above exp(mu + 2.5 sigma), sum the rest. Requires >= 365
// historical daily values.
double saidi_without_med(std::span<const double> year_daily,
                         std::span<const double> history_daily);

MetricsReport resilience_metrics(const EventCatalog& catalog, double m_large,
                                 EpochMinutes window_start,
                                 EpochMinutes window_end);

// (SPLEDI, SPALED): the non-logarithmic counterparts.
std::pair<double, std::optional<double>> seemingly_plausible_metrics(
    const EventCatalog& catalog, double m_large, EpochMinutes window_start,
    EpochMinutes window_end);

// CVAR over large-event values: identity -> mean(M/threshold) (= SPALED),
// log_normalized -> mean(ln(M/threshold)) (= ALED),
// log10_cost -> mean(log10(k*M)) (= ALEC).
double cvar(const Eigen::ArrayXd& values, const CvarSpec& spec,
            double threshold);

ExceedanceCurve exceedance(const Eigen::ArrayXd& values,
                           ExceedanceCurve::Kind kind, double n_year = 1.0);

// Exact staircase integral over [0, inf). For frequency curves of raw data
// this is the (scaled) sum of the values; for probability curves, the mean.
double area_under_exceedance(const ExceedanceCurve& curve);

// One report per window position; windows are window_years long, advance by
// step_months (months of 43830 minutes), and share one fixed M_large.
std::vector<MetricsReport> track_sliding(const EventCatalog& catalog,
                                         double m_large, int window_years,
                                         int step_months = 1);

}  // namespace saledi::metrics
