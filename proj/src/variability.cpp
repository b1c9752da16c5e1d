#include "saledi/variability.hpp"

#include <cmath>

#include "saledi/rng.hpp"

namespace saledi::variability {

double rse_compound(double rse_x, double n_large_bar, CompoundMode mode) {
  if (n_large_bar <= 0.0)
    throw ConfigError("rse_compound: n_large_bar must be positive");
  if (rse_x < 0.0) throw ConfigError("rse_compound: rse_x must be nonnegative");
  switch (mode) {
    case CompoundMode::sum:
      return std::sqrt(1.0 + rse_x * rse_x) / std::sqrt(n_large_bar);
    case CompoundMode::mean:
      return rse_x / std::sqrt(n_large_bar);
  }
  throw ConfigError("rse_compound: unknown mode");
}

double bounded_pareto_moment(double alpha, double p_max, int k) {
  if (alpha <= 0.0) throw ConfigError("bounded_pareto_moment: alpha must be positive");
  if (p_max <= 1.0) throw ConfigError("bounded_pareto_moment: p_max must exceed 1");
  if (k != 1 && k != 2) throw ConfigError("bounded_pareto_moment: k must be 1 or 2");
  const double denom = 1.0 - std::pow(p_max, -alpha);
  if (std::abs(alpha - k) < 1e-9)
    return alpha * std::log(p_max) / denom;
  return alpha / (alpha - k) * (1.0 - std::pow(p_max, k - alpha)) / denom;
}

double bounded_lognormal_moment(double mu, double sigma, double p_max, int k) {
  if (sigma <= 0.0)
    throw ConfigError("bounded_lognormal_moment: sigma must be positive");
  if (p_max <= 1.0)
    throw ConfigError("bounded_lognormal_moment: p_max must exceed 1");
  if (k != 1 && k != 2)
    throw ConfigError("bounded_lognormal_moment: k must be 1 or 2");
  const double lp = std::log(p_max);
  const double kk = static_cast<double>(k);
  const double denom =
      rng::norm_cdf((lp - mu) / sigma) - rng::norm_cdf(-mu / sigma);
  if (denom < 1e-300)
    throw NumericalError(
        "bounded_lognormal_moment: support probability underflows");
  const double numer = rng::norm_cdf((lp - mu - kk * sigma * sigma) / sigma) -
                       rng::norm_cdf((-mu - kk * sigma * sigma) / sigma);
  return std::exp(kk * mu + kk * kk * sigma * sigma / 2.0) * numer / denom;
}

namespace {
double rse_from_moments(double e1, double e2) {
  return std::sqrt(e2 / (e1 * e1) - 1.0);
}
}  // namespace

double bounded_pareto_rse(double alpha, double p_max) {
  return rse_from_moments(bounded_pareto_moment(alpha, p_max, 1),
                          bounded_pareto_moment(alpha, p_max, 2));
}

double bounded_lognormal_rse(double mu, double sigma, double p_max) {
  return rse_from_moments(bounded_lognormal_moment(mu, sigma, p_max, 1),
                          bounded_lognormal_moment(mu, sigma, p_max, 2));
}

double data_requirement_factor(double rse_y) {
  if (rse_y < 0.0)
    throw ConfigError("data_requirement_factor: rse_y must be nonnegative");
  return (1.0 + rse_y * rse_y) / 2.0;
}

RsePlan plan_n_year(double f_large_all, double rse_target) {
  if (f_large_all <= 0.0)
    throw ConfigError("plan_n_year: f_large_all must be positive");
  if (rse_target <= 0.0 || rse_target >= 1.0)
    throw ConfigError("plan_n_year: rse_target must be in (0,1)");
  const double exact = 2.0 / (f_large_all * rse_target * rse_target);
  // 1e-12 slack absorbs floating-point noise only, not genuine fractions
  const int n_year = static_cast<int>(std::ceil(exact - 1e-12));
  RsePlan plan;
  plan.f_large_all = f_large_all;
  plan.rse_target = rse_target;
  plan.n_year = n_year;
  plan.n_large_bar = f_large_all * n_year;
  plan.rse_achieved = std::sqrt(2.0 / plan.n_large_bar);
  return plan;
}

}  // namespace saledi::variability
