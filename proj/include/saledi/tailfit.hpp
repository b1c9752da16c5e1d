#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "saledi/types.hpp"

namespace saledi::tailfit {

struct TailFit {
  double m_large = 0.0;
  double alpha = 0.0;       // Pareto slope magnitude, = 1/ALED over the tail
  double ks_distance = 0.0;
  int n_tail = 0;
  double quantile_q = 0.0;  // fraction of events below m_large
};

struct LognormalTailFit {
  double a = 0.0;  // lower truncation point
  double mu = 0.0;
  double sigma = 0.0;
  double ks_distance = 0.0;
};

struct GofResult {
  double p_value = 0.0;
  int n_bootstrap = 0;
  double d_observed = 0.0;

  bool rejected_at_0_1() const { return p_value < 0.1; }
};

// Candidate thresholds are unique observed values at or above the given
// empirical quantile that leave at least min_tail points in the tail.
struct CandidatePolicy {
  double min_quantile = 0.5;
  int min_tail = 50;
};

// Hill estimator: alpha = n / sum ln(M_i/m_large). Scale-invariant.
double hill_alpha(const Eigen::ArrayXd& tail_values, double m_large);

// Max |F_S(M_i) - F_P0(M_i)| over tail points, where F_S is the empirical
// CDF of the tail and F_P0 the Pareto(alpha) CDF above m_large.
double ks_distance(const Eigen::ArrayXd& tail_values, double m_large,
                   double alpha);

// Clauset threshold selection: over all candidate thresholds, pick the one
// whose Hill fit has minimal KS distance (ties toward the smaller threshold).
// Requires at least 100 events.
TailFit select_m_large(const Eigen::ArrayXd& all_event_cmip,
                       const CandidatePolicy& policy = {});

// Semi-parametric bootstrap goodness-of-fit: each replicate mixes Pareto
// draws above the fitted threshold with resamples of the empirical body,
// re-runs threshold selection, and compares its KS distance with the
// observed one. p >= 0.1 means the Pareto tail is not rejected.
GofResult gof_bootstrap(const Eigen::ArrayXd& all_event_cmip,
                        const TailFit& fit, int n_bootstrap,
                        std::uint64_t seed,
                        const CandidatePolicy& policy = {});

// Lower-truncated lognormal alternative: for each candidate truncation a,
// maximize the conditional likelihood over (mu, sigma) and keep the a with
// minimal KS distance above it.
LognormalTailFit fit_truncated_lognormal(const Eigen::ArrayXd& all_event_cmip,
                                         const CandidatePolicy& policy = {},
                                         double sigma_floor = 1e-3);

struct LrResult {
  double normalized_lr = 0.0;  // positive favors the Pareto fit
  double p_value = 1.0;

  bool conclusive_at_0_1() const { return p_value < 0.1; }
};

// Vuong-style normalized log-likelihood ratio between the Pareto tail and
// the truncated lognormal, over the values in their common support.
LrResult likelihood_ratio_test(const Eigen::ArrayXd& tail_values,
                               const TailFit& pareto,
                               const LognormalTailFit& lognormal);

}  // namespace saledi::tailfit
