#include "saledi/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "saledi/events.hpp"
#include "saledi/rng.hpp"

namespace saledi::synth {

namespace {

constexpr int kMaxMembers = 20;
constexpr std::int64_t kMemberStartStride = 5;  // < 6-minute minimum duration
constexpr std::int64_t kMaxMemberDuration = 360;

// Largest member start offset plus the grouping cap: events separated by
// more than this can never be merged by the 3-hour sweep.
constexpr std::int64_t kEventMargin =
    kMemberStartStride * (kMaxMembers - 1) + 181;

double sample_body(const SyntheticSpec& spec, rng::Stream& stream) {
  const double c_hi =
      rng::norm_cdf((std::log(spec.threshold) - spec.body_mu) / spec.body_sigma);
  if (c_hi < 1e-12)
    throw NumericalError("synth: body model has no mass below the threshold");
  const double q = stream.uniform() * c_hi;
  return std::exp(spec.body_mu + spec.body_sigma * rng::norm_quantile(q));
}

}  // namespace

void SyntheticSpec::validate() const {
  if (years <= 0.0) throw ConfigError("synth: years must be positive");
  if (event_rate <= 0.0) throw ConfigError("synth: event_rate must be positive");
  if (tail_fraction < 0.0 || tail_fraction > 1.0)
    throw ConfigError("synth: tail_fraction must be in [0,1]");
  if (threshold <= 0.0) throw ConfigError("synth: threshold must be positive");
  if (body_sigma <= 0.0) throw ConfigError("synth: body_sigma must be positive");
  if (tail_model != TailModel::bounded_lognormal && alpha <= 0.0)
    throw ConfigError("synth: alpha must be positive");
  if (tail_model == TailModel::bounded_lognormal && tail_sigma <= 0.0)
    throw ConfigError("synth: tail_sigma must be positive");
  if (tail_model != TailModel::pareto && p_max <= 1.0)
    throw ConfigError("synth: p_max must exceed 1");
  if (mean_outages_per_event < 1.0)
    throw ConfigError("synth: mean_outages_per_event must be at least 1");
  if (n_customer <= 0) throw ConfigError("synth: n_customer must be positive");
}

double sample_tail_normalized(const SyntheticSpec& spec, double u) {
  switch (spec.tail_model) {
    case TailModel::pareto:
      return std::pow(u, -1.0 / spec.alpha);
    case TailModel::bounded_pareto: {
      // inversion of the bounded exceedance: u = 1 -> p = 1, u -> 0 -> p_max
      const double pma = std::pow(spec.p_max, -spec.alpha);
      return std::pow(u * (1.0 - pma) + pma, -1.0 / spec.alpha);
    }
    case TailModel::bounded_lognormal: {
      const double c_lo = rng::norm_cdf(-spec.tail_mu / spec.tail_sigma);
      const double c_hi = rng::norm_cdf(
          (std::log(spec.p_max) - spec.tail_mu) / spec.tail_sigma);
      const double q = c_lo + u * (c_hi - c_lo);
      return std::exp(spec.tail_mu + spec.tail_sigma * rng::norm_quantile(q));
    }
  }
  throw ConfigError("synth: unknown tail model");
}

Eigen::ArrayXd sample_magnitudes(const SyntheticSpec& spec, std::int64_t n) {
  spec.validate();
  if (n < 0) throw ConfigError("synth: n must be nonnegative");
  Eigen::ArrayXd m(n);
  for (std::int64_t i = 0; i < n; ++i) {
    auto stream = rng::substream(spec.seed, static_cast<std::uint64_t>(i));
    if (stream.uniform() < spec.tail_fraction)
      m[i] = spec.threshold * sample_tail_normalized(spec, stream.uniform());
    else
      m[i] = sample_body(spec, stream);
  }
  return m;
}

Synthesis generate_catalog(const SyntheticSpec& spec) {
  spec.validate();
  const EpochMinutes base = parse_iso_minute("2010-01-01T00:00");
  const std::int64_t span =
      static_cast<std::int64_t>(std::llround(spec.years * kMinutesPerYear));

  Synthesis out;
  out.profile = {spec.n_customer, base, base + span};

  auto count_stream = rng::substream(spec.seed, 0);
  const std::int64_t n_events =
      count_stream.poisson(spec.event_rate * spec.years);

  const double slot =
      n_events > 0 ? static_cast<double>(span) / static_cast<double>(n_events)
                   : 0.0;
  const double jitter_room = slot - static_cast<double>(kEventMargin + 1);

  for (std::int64_t i = 0; i < n_events; ++i) {
    auto stream = rng::substream(spec.seed, static_cast<std::uint64_t>(i) + 1);

    const bool in_tail = stream.uniform() < spec.tail_fraction;
    const double magnitude =
        in_tail ? spec.threshold * sample_tail_normalized(spec, stream.uniform())
                : sample_body(spec, stream);
    if (in_tail) ++out.n_tail_events;

    int n_members = 1;
    if (spec.mean_outages_per_event > 1.0) {
      const double p = 1.0 / spec.mean_outages_per_event;
      n_members = 1 + static_cast<int>(std::log(stream.uniform()) /
                                       std::log(1.0 - p));
      n_members = std::clamp(n_members, 1, kMaxMembers);
    }

    EpochMinutes t0;
    if (jitter_room > 1.0) {
      t0 = base + static_cast<std::int64_t>(static_cast<double>(i) * slot) +
           static_cast<std::int64_t>(stream.uniform() * jitter_room);
    } else {
      // dense regime: fixed spacing still keeps events separable
      t0 = base + i * (kEventMargin + 1);
    }

    // random simplex split of the magnitude across members
    std::vector<double> weights(static_cast<std::size_t>(n_members));
    double weight_sum = 0.0;
    for (auto& w : weights) {
      w = stream.exponential(1.0);
      weight_sum += w;
    }

    for (int j = 0; j < n_members; ++j) {
      const double target = magnitude * weights[static_cast<std::size_t>(j)] /
                            weight_sum;
      const std::int64_t duration =
          6 + static_cast<std::int64_t>(stream.uniform() *
                                        static_cast<double>(kMaxMemberDuration - 6));
      const std::int64_t customers = std::llround(
          target * static_cast<double>(spec.n_customer) /
          static_cast<double>(duration));
      char id[32];
      std::snprintf(id, sizeof(id), "e%08lld-%02d", static_cast<long long>(i),
                    j);
      OutageRecord rec;
      rec.outage_id = id;
      rec.start = t0 + kMemberStartStride * j;
      rec.restore = rec.start + duration;
      // tiny body draws can round to zero customers; keep magnitudes positive
      rec.customers_interrupted = std::max<std::int64_t>(customers, 1);
      out.records.push_back(std::move(rec));
    }
  }

  out.catalog = events::group_events(out.records, out.profile);
  out.ground_truth.m_large = spec.threshold;
  out.ground_truth.alpha =
      spec.tail_model == TailModel::bounded_lognormal ? 0.0 : spec.alpha;
  out.ground_truth.ks_distance = 0.0;
  out.ground_truth.n_tail = static_cast<int>(out.n_tail_events);
  out.ground_truth.quantile_q = 1.0 - spec.tail_fraction;
  return out;
}

}  // namespace saledi::synth
