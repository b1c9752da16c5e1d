#include "saledi/tailfit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "saledi/rng.hpp"

namespace saledi::tailfit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> sorted_copy(const Eigen::ArrayXd& values) {
  std::vector<double> v(values.data(), values.data() + values.size());
  std::sort(v.begin(), v.end());
  return v;
}

// log of the standard normal survival function
double log_norm_sf(double z) {
  const double sf = 0.5 * std::erfc(z / std::numbers::sqrt2);
  if (sf <= 0.0) return -kInf;
  return std::log(sf);
}

// Minimal Nelder-Mead on R^2, enough for the 2-parameter likelihoods here.
template <typename F>
std::pair<Eigen::Vector2d, double> nelder_mead2(F f, Eigen::Vector2d x0,
                                                double scale, int max_iter) {
  std::array<Eigen::Vector2d, 3> x = {x0, x0, x0};
  x[1][0] += scale;
  x[2][1] += scale;
  std::array<double, 3> fx = {f(x[0]), f(x[1]), f(x[2])};
  for (int it = 0; it < max_iter; ++it) {
    std::array<int, 3> ord = {0, 1, 2};
    std::sort(ord.begin(), ord.end(), [&](int a, int b) { return fx[a] < fx[b]; });
    const int lo = ord[0], mid = ord[1], hi = ord[2];
    if (std::abs(fx[hi] - fx[lo]) < 1e-12 * (1.0 + std::abs(fx[lo]))) break;
    const Eigen::Vector2d centroid = 0.5 * (x[lo] + x[mid]);
    const Eigen::Vector2d refl = centroid + (centroid - x[hi]);
    const double f_refl = f(refl);
    if (f_refl < fx[lo]) {
      const Eigen::Vector2d expd = centroid + 2.0 * (centroid - x[hi]);
      const double f_expd = f(expd);
      if (f_expd < f_refl) {
        x[hi] = expd;
        fx[hi] = f_expd;
      } else {
        x[hi] = refl;
        fx[hi] = f_refl;
      }
    } else if (f_refl < fx[mid]) {
      x[hi] = refl;
      fx[hi] = f_refl;
    } else {
      const Eigen::Vector2d contr = centroid + 0.5 * (x[hi] - centroid);
      const double f_contr = f(contr);
      if (f_contr < fx[hi]) {
        x[hi] = contr;
        fx[hi] = f_contr;
      } else {
        x[mid] = 0.5 * (x[lo] + x[mid]);
        x[hi] = 0.5 * (x[lo] + x[hi]);
        fx[mid] = f(x[mid]);
        fx[hi] = f(x[hi]);
      }
    }
  }
  const int best = static_cast<int>(
      std::min_element(fx.begin(), fx.end()) - fx.begin());
  return {x[best], fx[best]};
}

// KS distance of a sorted tail against a CDF given as a callable.
template <typename Cdf>
double ks_against(const std::vector<double>& sorted_tail, Cdf cdf) {
  const double n = static_cast<double>(sorted_tail.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted_tail.size();) {
    std::size_t j = i;
    while (j < sorted_tail.size() && sorted_tail[j] == sorted_tail[i]) ++j;
    // empirical CDF = fraction <= M_i
    const double f_emp = static_cast<double>(j) / n;
    d = std::max(d, std::abs(f_emp - cdf(sorted_tail[i])));
    i = j;
  }
  return d;
}

struct LnTailObjective {
  // y = ln M over the tail, la = ln a
  const std::vector<double>& y;
  double la;

  // negative conditional log-likelihood, constants dropped; x = (mu, ln sigma)
  double operator()(const Eigen::Vector2d& x) const {
    const double mu = x[0];
    const double sigma = std::exp(x[1]);
    if (!std::isfinite(sigma) || sigma <= 0.0) return kInf;
    const double n = static_cast<double>(y.size());
    double ss = 0.0;
    for (double yi : y) ss += (yi - mu) * (yi - mu);
    const double lsf = log_norm_sf((la - mu) / sigma);
    if (!std::isfinite(lsf)) return kInf;
    return n * std::log(sigma) + ss / (2.0 * sigma * sigma) - n * lsf;
  }
};

}  // namespace

double hill_alpha(const Eigen::ArrayXd& tail_values, double m_large) {
  if (m_large <= 0.0) throw ConfigError("hill_alpha: m_large must be positive");
  if (tail_values.size() < 2)
    throw DataError("hill_alpha: need at least 2 tail values");
  if ((tail_values < m_large).any())
    throw DataError("hill_alpha: value below m_large");
  const double sum_log = (tail_values / m_large).log().sum();
  if (sum_log <= 0.0)
    throw NumericalError("hill_alpha: all values at m_large (alpha infinite)");
  return static_cast<double>(tail_values.size()) / sum_log;
}

double ks_distance(const Eigen::ArrayXd& tail_values, double m_large,
                   double alpha) {
  if (m_large <= 0.0 || alpha <= 0.0)
    throw ConfigError("ks_distance: m_large and alpha must be positive");
  if (tail_values.size() < 2)
    throw DataError("ks_distance: need at least 2 tail values");
  if ((tail_values < m_large).any())
    throw DataError("ks_distance: value below m_large");
  const auto sorted = sorted_copy(tail_values);
  return ks_against(sorted, [&](double m) {
    return 1.0 - std::pow(m / m_large, -alpha);
  });
}

TailFit select_m_large(const Eigen::ArrayXd& all_event_cmip,
                       const CandidatePolicy& policy) {
  const auto sorted = sorted_copy(all_event_cmip);
  const std::size_t n = sorted.size();
  if (n < 100) throw DataError("select_m_large: need at least 100 events");

  // suffix sums of logs for O(1) Hill fits per candidate
  std::vector<double> suffix_log(n + 1, 0.0);
  for (std::size_t i = n; i-- > 0;) {
    if (sorted[i] <= 0.0)
      throw DataError("select_m_large: nonpositive event CMIp");
    suffix_log[i] = suffix_log[i + 1] + std::log(sorted[i]);
  }

  TailFit best;
  bool found = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0 && sorted[i] == sorted[i - 1]) continue;  // unique values only
    const double n_below = static_cast<double>(i);
    const std::size_t n_tail = n - i;
    if (n_below < policy.min_quantile * static_cast<double>(n) - 1e-9) continue;
    if (n_tail < static_cast<std::size_t>(std::max(policy.min_tail, 2))) break;
    const double m0 = sorted[i];
    const double sum_log = suffix_log[i] - static_cast<double>(n_tail) * std::log(m0);
    if (sum_log <= 0.0) continue;  // degenerate tail, alpha infinite
    const double alpha = static_cast<double>(n_tail) / sum_log;
    const std::vector<double> tail(sorted.begin() + static_cast<std::ptrdiff_t>(i),
                                   sorted.end());
    const double d = ks_against(
        tail, [&](double m) { return 1.0 - std::pow(m / m0, -alpha); });
    if (!found || d < best.ks_distance) {
      best = {m0, alpha, d, static_cast<int>(n_tail),
              n_below / static_cast<double>(n)};
      found = true;
    }
  }
  if (!found)
    throw DataError("select_m_large: no candidate satisfies the tail-size floor");
  return best;
}

GofResult gof_bootstrap(const Eigen::ArrayXd& all_event_cmip,
                        const TailFit& fit, int n_bootstrap,
                        std::uint64_t seed, const CandidatePolicy& policy) {
  if (n_bootstrap < 100)
    throw ConfigError("gof_bootstrap: need at least 100 replicates");
  const std::size_t n = static_cast<std::size_t>(all_event_cmip.size());
  std::vector<double> body;
  for (Eigen::Index i = 0; i < all_event_cmip.size(); ++i)
    if (all_event_cmip[i] < fit.m_large) body.push_back(all_event_cmip[i]);
  const double p_tail = static_cast<double>(fit.n_tail) / static_cast<double>(n);

  int exceed = 0;
  Eigen::ArrayXd replicate(static_cast<Eigen::Index>(n));
  for (int r = 0; r < n_bootstrap; ++r) {
    auto stream = rng::substream(seed, static_cast<std::uint64_t>(r));
    for (std::size_t i = 0; i < n; ++i) {
      if (body.empty() || stream.uniform() < p_tail) {
        replicate[static_cast<Eigen::Index>(i)] =
            fit.m_large * std::pow(stream.uniform(), -1.0 / fit.alpha);
      } else {
        const std::size_t idx = std::min(
            body.size() - 1,
            static_cast<std::size_t>(stream.uniform() *
                                     static_cast<double>(body.size())));
        replicate[static_cast<Eigen::Index>(i)] = body[idx];
      }
    }
    double d_rep;
    try {
      d_rep = select_m_large(replicate, policy).ks_distance;
    } catch (const DataError&) {
      d_rep = kInf;  // no admissible threshold on this replicate
    }
    if (d_rep >= fit.ks_distance) ++exceed;
  }
  return {static_cast<double>(exceed) / static_cast<double>(n_bootstrap),
          n_bootstrap, fit.ks_distance};
}

LognormalTailFit fit_truncated_lognormal(const Eigen::ArrayXd& all_event_cmip,
                                         const CandidatePolicy& policy,
                                         double sigma_floor) {
  const auto sorted = sorted_copy(all_event_cmip);
  const std::size_t n = sorted.size();
  if (n < 100)
    throw DataError("fit_truncated_lognormal: need at least 100 events");

  // candidate truncation points, same policy as select_m_large
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0 && sorted[i] == sorted[i - 1]) continue;
    if (static_cast<double>(i) < policy.min_quantile * static_cast<double>(n) - 1e-9)
      continue;
    if (n - i < static_cast<std::size_t>(std::max(policy.min_tail, 2))) break;
    if (sorted[i] <= 0.0)
      throw DataError("fit_truncated_lognormal: nonpositive event CMIp");
    candidates.push_back(i);
  }
  if (candidates.empty())
    throw DataError("fit_truncated_lognormal: no candidate truncation point");
  // the 2-D optimization is the expensive part; thin a dense candidate grid
  if (candidates.size() > 64) {
    std::vector<std::size_t> thinned;
    for (std::size_t k = 0; k < 64; ++k)
      thinned.push_back(candidates[k * (candidates.size() - 1) / 63]);
    thinned.erase(std::unique(thinned.begin(), thinned.end()), thinned.end());
    candidates = std::move(thinned);
  }

  LognormalTailFit best;
  bool found = false;
  for (const std::size_t i : candidates) {
    const double a = sorted[i];
    const double la = std::log(a);
    std::vector<double> y;
    y.reserve(n - i);
    for (std::size_t j = i; j < n; ++j) y.push_back(std::log(sorted[j]));
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= static_cast<double>(y.size());
    double var = 0.0;
    for (double v : y) var += (v - mean) * (v - mean);
    var /= static_cast<double>(y.size());
    const double sd = std::sqrt(std::max(var, 1e-12));

    const LnTailObjective obj{y, la};
    // moment-matched start plus wider starts; truncation biases sd low
    const std::array<Eigen::Vector2d, 3> starts = {
        Eigen::Vector2d(mean, std::log(sd)),
        Eigen::Vector2d(mean, std::log(2.0 * sd)),
        Eigen::Vector2d(mean - 2.0 * sd, std::log(4.0 * sd))};
    Eigen::Vector2d arg;
    double val = kInf;
    for (const auto& s : starts) {
      auto [x, fx] = nelder_mead2(obj, s, 0.5, 400);
      if (fx < val) {
        val = fx;
        arg = x;
      }
    }
    if (!std::isfinite(val)) continue;
    const double mu = arg[0];
    const double sigma = std::exp(arg[1]);
    const double sf_a = 0.5 * std::erfc((la - mu) / sigma / std::numbers::sqrt2);
    if (sf_a <= 0.0) continue;
    std::vector<double> tail(sorted.begin() + static_cast<std::ptrdiff_t>(i),
                             sorted.end());
    const double d = ks_against(tail, [&](double m) {
      const double z = (std::log(m) - mu) / sigma;
      const double za = (la - mu) / sigma;
      return (rng::norm_cdf(z) - rng::norm_cdf(za)) / sf_a;
    });
    if (!found || d < best.ks_distance) {
      best = {a, mu, sigma, d};
      found = true;
    }
  }
  if (!found)
    throw NumericalError(
        "fit_truncated_lognormal: optimizer failed for every candidate");
  if (best.sigma <= sigma_floor)
    throw NumericalError(
        "fit_truncated_lognormal: fitted sigma at or below the floor (" +
        std::to_string(sigma_floor) + "); data is degenerate");
  return best;
}

LrResult likelihood_ratio_test(const Eigen::ArrayXd& tail_values,
                               const TailFit& pareto,
                               const LognormalTailFit& lognormal) {
  const double support = std::max(pareto.m_large, lognormal.a);
  std::vector<double> diff;
  const double log_sf_a =
      log_norm_sf((std::log(lognormal.a) - lognormal.mu) / lognormal.sigma);
  const double half_log_2pi = 0.5 * std::log(2.0 * std::numbers::pi);
  for (Eigen::Index i = 0; i < tail_values.size(); ++i) {
    const double m = tail_values[i];
    if (m < support) continue;
    const double lp = std::log(pareto.alpha) +
                      pareto.alpha * std::log(pareto.m_large) -
                      (pareto.alpha + 1.0) * std::log(m);
    const double z = (std::log(m) - lognormal.mu) / lognormal.sigma;
    const double ll = -std::log(lognormal.sigma) - std::log(m) -
                      0.5 * z * z - half_log_2pi - log_sf_a;
    diff.push_back(lp - ll);
  }
  if (diff.empty())
    throw DataError("likelihood_ratio_test: common support is empty");

  const double n = static_cast<double>(diff.size());
  double sum = 0.0;
  for (double d : diff) sum += d;
  const double mean = sum / n;
  double var = 0.0;
  for (double d : diff) var += (d - mean) * (d - mean);
  const double sd = std::sqrt(var / n);
  if (sd == 0.0) {
    if (sum == 0.0) return {0.0, 1.0};
    return {sum > 0.0 ? kInf : -kInf, 0.0};
  }
  const double normalized = sum / (sd * std::sqrt(n));
  const double p = std::erfc(std::abs(normalized) / std::numbers::sqrt2);
  return {normalized, p};
}

}  // namespace saledi::tailfit
