#pragma once

#include "saledi/types.hpp"

namespace saledi::variability {

// Default CMIp bound: every customer out for one month.
inline constexpr double kDefaultMMax = 43830.0;

enum class CompoundMode { sum, mean };

struct RsePlan {
  double f_large_all = 0.0;
  double rse_target = 0.0;
  int n_year = 0;
  double n_large_bar = 0.0;
  double rse_achieved = 0.0;
};

// RSE of a compound-Poisson sum (Wald / Blackwell-Girshick):
//   sum  -> sqrt(1 + rse_x^2) / sqrt(n_large_bar)   (SALEDI, SPLEDI)
//   mean -> rse_x / sqrt(n_large_bar)               (ALED, SPALED)
double rse_compound(double rse_x, double n_large_bar, CompoundMode mode);

// E[(Pb)^k] for the bounded Pareto on [1, p_max], k = 1 or 2.
// The alpha -> k singularity is evaluated by its analytic limit.
double bounded_pareto_moment(double alpha, double p_max, int k);

// E[(LNb)^k] for the lognormal conditioned on [1, p_max], k = 1 or 2.
double bounded_lognormal_moment(double mu, double sigma, double p_max, int k);

// RSE[Y] = sqrt(E[Y^2]/E[Y]^2 - 1) from the two moments.
double bounded_pareto_rse(double alpha, double p_max);
double bounded_lognormal_rse(double mu, double sigma, double p_max);

// (1 + rse_y^2)/2: how many times more large events the un-logged index
// needs than its logarithmic counterpart for equal accuracy.
double data_requirement_factor(double rse_y);

// Minimum integer years so that sqrt(2)/sqrt(f * n_year) <= rse_target.
RsePlan plan_n_year(double f_large_all, double rse_target);

}  // namespace saledi::variability
