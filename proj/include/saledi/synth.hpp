#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "saledi/tailfit.hpp"
#include "saledi/types.hpp"

namespace saledi::synth {

enum class TailModel { pareto, bounded_pareto, bounded_lognormal };

// Spliced body/tail magnitude model plus the outage-level realization knobs.
// The body is a lognormal conditioned below `threshold`; a draw lands in the
// tail with probability tail_fraction and is then `threshold` times a
// normalized tail sample.
struct SyntheticSpec {
  std::uint64_t seed = 1;
  double years = 1.0;
  double event_rate = 100.0;  // events per year

  double body_mu = -4.0;  // of ln CMIp, conditioned below threshold
  double body_sigma = 1.5;

  TailModel tail_model = TailModel::pareto;
  double alpha = 1.0;       // pareto / bounded_pareto
  double tail_mu = 0.0;     // bounded_lognormal, of ln(M/threshold)
  double tail_sigma = 1.0;  // bounded_lognormal
  double p_max = 1e6;       // bounded models only

  double tail_fraction = 0.3;
  double threshold = 0.1;  // M_large used for splicing

  double mean_outages_per_event = 3.0;  // geometric member count, capped
  std::int64_t n_customer = 1000000;

  void validate() const;
};

// One normalized tail sample p >= 1 by CDF inversion.
double sample_tail_normalized(const SyntheticSpec& spec, double u);

// n event CMIp draws from the spliced model; draw i uses substream(seed, i),
// so extending n does not perturb earlier draws.
Eigen::ArrayXd sample_magnitudes(const SyntheticSpec& spec, std::int64_t n);

struct Synthesis {
  std::vector<OutageRecord> records;  // sorted, all sustained
  EventCatalog catalog;
  SystemProfile profile;
  tailfit::TailFit ground_truth;  // model parameters, not an estimate
  std::int64_t n_tail_events = 0;
};

// Draws a Poisson(event_rate * years) number of events, realizes each as a
// group of member outages whose CMIp sum to the drawn magnitude, and places
// events with inter-event gaps wide enough that grouping reconstructs them
// exactly. The catalog is built through the real grouping pipeline.
Synthesis generate_catalog(const SyntheticSpec& spec);

}  // namespace saledi::synth
