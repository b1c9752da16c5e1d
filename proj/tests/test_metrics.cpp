#include <doctest.h>

#include <cmath>
#include <numeric>

#include "saledi/metrics.hpp"
#include "saledi/rng.hpp"
#include "saledi/synth.hpp"
#include "saledi/tailfit.hpp"

using namespace saledi;
using metrics::ExceedanceCurve;

namespace {

// Catalog with one single-outage event per magnitude, spread over `years`.
EventCatalog make_catalog(const std::vector<double>& magnitudes, double years) {
  EventCatalog catalog;
  catalog.profile = {1000, 0,
                     static_cast<EpochMinutes>(years * kMinutesPerYear)};
  const EpochMinutes span = catalog.profile.span_end;
  const EpochMinutes step =
      span / static_cast<EpochMinutes>(magnitudes.size() + 1);
  for (std::size_t i = 0; i < magnitudes.size(); ++i) {
    const EpochMinutes t = static_cast<EpochMinutes>(i + 1) * step;
    catalog.outages.push_back(
        {"o" + std::to_string(i), t, t + 60, magnitudes[i]});
    Event ev;
    ev.event_id = static_cast<int>(i) + 1;
    ev.first_outage = i;
    ev.n_outage = 1;
    ev.start = t;
    ev.end = t + 60;
    ev.cmip = magnitudes[i];
    catalog.events.push_back(ev);
  }
  return catalog;
}

Eigen::ArrayXd to_array(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::ArrayXd>(v.data(),
                                          static_cast<Eigen::Index>(v.size()));
}

}  // namespace

TEST_CASE("saidi_with_med sums the year's outage CMIp") {
  CHECK(metrics::saidi_with_med(to_array({0.5, 1.2})) == doctest::Approx(1.7));
  CHECK(metrics::saidi_with_med(Eigen::ArrayXd()) == 0.0);
}

TEST_CASE("saidi equals the area under the outage frequency exceedance curve") {
  rng::Stream stream(77);
  std::vector<double> year;
  for (int i = 0; i < 500; ++i) year.push_back(std::exp(stream.normal()) * 0.01);
  double brute = std::accumulate(year.begin(), year.end(), 0.0);
  const double saidi = metrics::saidi_with_med(to_array(year));
  CHECK(saidi == doctest::Approx(brute).epsilon(1e-12));
  const auto curve =
      metrics::exceedance(to_array(year), ExceedanceCurve::Kind::frequency, 1.0);
  CHECK(metrics::area_under_exceedance(curve) ==
        doctest::Approx(saidi).epsilon(1e-9));
}

TEST_CASE("resilience metrics on analytic logs") {
  const double ml = 0.25;
  const double e = std::exp(1.0);
  const auto catalog = make_catalog({e * ml, e * e * ml, e * e * e * ml}, 1.0);
  const auto rep = metrics::resilience_metrics(catalog, ml, 0,
                                               catalog.profile.span_end);
  CHECK(rep.saledi == doctest::Approx(6.0).epsilon(1e-12));
  REQUIRE(rep.aled);
  CHECK(*rep.aled == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(rep.f_large == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(rep.n_large == 3);
}

TEST_CASE("no events above M_large reports SALEDI 0 and ALED absent") {
  const auto catalog = make_catalog({0.1, 0.2}, 1.0);
  const auto rep =
      metrics::resilience_metrics(catalog, 1.0, 0, catalog.profile.span_end);
  CHECK(rep.saledi == 0.0);
  CHECK(!rep.aled);
  CHECK(rep.n_large == 0);
}

TEST_CASE("scaling all large events by 0.9 shifts ALED by ln 0.9") {
  std::vector<double> m = {2.0, 3.5, 8.0, 21.0};
  const auto rep1 = metrics::resilience_metrics(make_catalog(m, 1.0), 1.0, 0,
                                                kMinutesPerYear);
  for (auto& v : m) v *= 0.9;  // none fall below M_large = 1
  const auto rep2 = metrics::resilience_metrics(make_catalog(m, 1.0), 1.0, 0,
                                                kMinutesPerYear);
  CHECK(*rep2.aled - *rep1.aled ==
        doctest::Approx(std::log(0.9)).epsilon(1e-12));
}

TEST_CASE("window validation") {
  const auto catalog = make_catalog({1.0}, 1.0);
  CHECK_THROWS_AS(metrics::resilience_metrics(catalog, -1.0, 0, 100),
                  ConfigError);
  CHECK_THROWS_AS(metrics::resilience_metrics(catalog, 1.0, 100, 100),
                  ConfigError);
  CHECK_THROWS_AS(
      metrics::resilience_metrics(catalog, 1.0, -5, kMinutesPerYear),
      DataError);
}

TEST_CASE("seemingly plausible metrics") {
  const auto catalog = make_catalog({2.0, 4.0, 6.0}, 1.0);
  const auto [spledi, spaled] =
      metrics::seemingly_plausible_metrics(catalog, 1.0, 0, kMinutesPerYear);
  CHECK(spledi == doctest::Approx(12.0).epsilon(1e-12));
  REQUIRE(spaled);
  CHECK(*spaled == doctest::Approx(4.0).epsilon(1e-12));

  SUBCASE("all large events exactly at M_large give SPALED 1") {
    const auto boundary = make_catalog({1.0, 1.0}, 1.0);
    const auto [s, sa] =
        metrics::seemingly_plausible_metrics(boundary, 1.0, 0, kMinutesPerYear);
    CHECK(*sa == doctest::Approx(1.0));
    CHECK(s == doctest::Approx(2.0));
  }
}

TEST_CASE("SPALED fluctuates across seeds far more than ALED on a heavy tail") {
  // 200 Pareto(0.8) tail samples per seed
  std::vector<double> aled, spaled;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto stream = rng::substream(1234, seed);
    double sum_log = 0.0, sum_norm = 0.0;
    for (int i = 0; i < 200; ++i) {
      const double p = std::pow(stream.uniform(), -1.0 / 0.8);
      sum_log += std::log(p);
      sum_norm += p;
    }
    aled.push_back(sum_log / 200.0);
    spaled.push_back(sum_norm / 200.0);
  }
  auto cv = [](const std::vector<double>& v) {
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / (v.size() - 1)) / mean;
  };
  // ALED averages logs (finite variance); SPALED averages raw Pareto(0.8)
  // draws (infinite variance) and should be far noisier across seeds.
  CHECK(cv(spaled) > 3.0 * cv(aled));
  CHECK(cv(aled) < 0.25);
}

TEST_CASE("cvar transforms") {
  const auto values = to_array({2.0, 4.0, 6.0});
  metrics::CvarSpec spec;
  spec.transform = metrics::CvarTransform::identity;
  CHECK(metrics::cvar(values, spec, 1.0) == doctest::Approx(4.0));

  SUBCASE("log-normalized equals ALED bit for bit") {
    const std::vector<double> m = {0.7, 1.3, 5.0, 9.1};
    const auto catalog = make_catalog(m, 1.0);
    const auto rep =
        metrics::resilience_metrics(catalog, 0.5, 0, kMinutesPerYear);
    spec.transform = metrics::CvarTransform::log_normalized;
    // same tail set, mean of the same logs
    CHECK(metrics::cvar(to_array(m), spec, 0.5) ==
          doctest::Approx(*rep.aled).epsilon(1e-13));
  }
  SUBCASE("log10 cost") {
    spec.transform = metrics::CvarTransform::log10_cost;
    spec.cost_factor_k = 10.0;
    CHECK(metrics::cvar(to_array({1.0, 10.0}), spec, 1.0) ==
          doctest::Approx(1.5).epsilon(1e-14));
  }
  SUBCASE("empty tail is an error") {
    CHECK_THROWS_AS(metrics::cvar(Eigen::ArrayXd(), spec, 1.0), DataError);
  }
  SUBCASE("value below threshold is an error") {
    CHECK_THROWS_AS(metrics::cvar(values, spec, 3.0), DataError);
  }
}

TEST_CASE("exceedance staircase hand counts") {
  const auto curve = metrics::exceedance(to_array({1.0, 2.0, 3.0}),
                                         ExceedanceCurve::Kind::probability);
  CHECK(curve.value_at(0.5) == doctest::Approx(1.0));
  CHECK(curve.value_at(1.0) == doctest::Approx(2.0 / 3.0));
  CHECK(curve.value_at(2.5) == doctest::Approx(1.0 / 3.0));
  CHECK(curve.value_at(3.0) == 0.0);
}

TEST_CASE("frequency exceedance at 0 equals count over n_year") {
  const auto curve = metrics::exceedance(to_array({0.4, 1.0, 2.2, 9.0}),
                                         ExceedanceCurve::Kind::frequency, 2.0);
  CHECK(curve.value_at(0.0) == doctest::Approx(4.0 / 2.0));
}

TEST_CASE("exceedance matches the brute-force indicator double loop") {
  rng::Stream stream(5);
  std::vector<double> values;
  for (int i = 0; i < 1000; ++i)
    values.push_back(std::floor(stream.uniform() * 200.0) / 10.0);
  const auto curve = metrics::exceedance(to_array(values),
                                         ExceedanceCurve::Kind::probability);
  for (double x : {-1.0, 0.0, 0.35, 5.0, 10.05, 19.9, 25.0}) {
    double count = 0;
    for (double v : values)
      if (v > x) count += 1.0;
    CHECK(curve.value_at(x) == doctest::Approx(count / 1000.0).epsilon(1e-12));
  }
  SUBCASE("exceedance is nonincreasing in value") {
    for (std::size_t i = 1; i < curve.points.size(); ++i)
      CHECK(curve.points[i].second <= curve.points[i - 1].second);
  }
}

TEST_CASE("area under exceedance small cases") {
  const auto freq = metrics::exceedance(to_array({1.0, 2.0, 3.0}),
                                        ExceedanceCurve::Kind::frequency, 1.0);
  CHECK(metrics::area_under_exceedance(freq) == doctest::Approx(6.0));

  const auto prob = metrics::exceedance(to_array({0.0, std::log(2.0)}),
                                        ExceedanceCurve::Kind::probability);
  CHECK(metrics::area_under_exceedance(prob) ==
        doctest::Approx(std::log(2.0) / 2.0).epsilon(1e-14));
}

TEST_CASE("area identities tie the curves to SALEDI and ALED") {
  synth::SyntheticSpec spec;
  spec.seed = 31;
  spec.years = 4.0;
  spec.event_rate = 150.0;
  spec.alpha = 0.9;
  spec.tail_fraction = 0.5;
  const auto synthesis = synth::generate_catalog(spec);
  const auto rep = metrics::resilience_metrics(
      synthesis.catalog, spec.threshold, synthesis.catalog.profile.span_start,
      synthesis.catalog.profile.span_end);

  std::vector<double> log_tail;
  for (const auto& ev : synthesis.catalog.events)
    if (ev.cmip >= spec.threshold)
      log_tail.push_back(std::log(ev.cmip / spec.threshold));

  const auto freq = metrics::exceedance(
      to_array(log_tail), ExceedanceCurve::Kind::frequency, rep.n_year);
  CHECK(metrics::area_under_exceedance(freq) ==
        doctest::Approx(rep.saledi).epsilon(1e-9));

  const auto prob = metrics::exceedance(to_array(log_tail),
                                        ExceedanceCurve::Kind::probability);
  CHECK(metrics::area_under_exceedance(prob) ==
        doctest::Approx(*rep.aled).epsilon(1e-9));
}

TEST_CASE("duplicating large events doubles f_large and SALEDI, not ALED") {
  const std::vector<double> m = {0.3, 2.0, 5.0};
  auto doubled = m;
  doubled.insert(doubled.end(), m.begin(), m.end());
  const auto rep1 = metrics::resilience_metrics(make_catalog(m, 1.0), 1.0, 0,
                                                kMinutesPerYear);
  const auto rep2 = metrics::resilience_metrics(make_catalog(doubled, 1.0),
                                                1.0, 0, kMinutesPerYear);
  CHECK(rep2.f_large == doctest::Approx(2.0 * rep1.f_large).epsilon(1e-12));
  CHECK(rep2.saledi == doctest::Approx(2.0 * rep1.saledi).epsilon(1e-12));
  CHECK(*rep2.aled == doctest::Approx(*rep1.aled).epsilon(1e-12));
}

TEST_CASE("raising M_large never increases n_large") {
  const auto catalog = make_catalog({0.1, 0.5, 1.0, 2.0, 8.0}, 1.0);
  int prev = 1 << 20;
  for (double ml : {0.05, 0.1, 0.4, 1.0, 3.0, 10.0}) {
    const auto rep =
        metrics::resilience_metrics(catalog, ml, 0, kMinutesPerYear);
    CHECK(rep.n_large <= prev);
    prev = rep.n_large;
  }
}

TEST_CASE("ALED inverse equals the Hill estimate on the same tail") {
  const std::vector<double> m = {1.5, 2.0, 7.7, 31.0, 120.0};
  const auto rep = metrics::resilience_metrics(make_catalog(m, 1.0), 1.0, 0,
                                               kMinutesPerYear);
  const double alpha = tailfit::hill_alpha(to_array(m), 1.0);
  CHECK(1.0 / *rep.aled == doctest::Approx(alpha).epsilon(1e-12));
}

TEST_CASE("track_sliding window arithmetic") {
  synth::SyntheticSpec spec;
  spec.seed = 4;
  spec.years = 6.0;
  spec.event_rate = 50.0;
  const auto synthesis = synth::generate_catalog(spec);

  CHECK(metrics::track_sliding(synthesis.catalog, 0.1, 2, 12).size() == 5);
  CHECK_THROWS_AS(metrics::track_sliding(synthesis.catalog, 0.1, 7, 1),
                  DataError);

  SUBCASE("span exactly one window yields a single report") {
    synth::SyntheticSpec one = spec;
    one.years = 2.0;
    const auto s = synth::generate_catalog(one);
    CHECK(metrics::track_sliding(s.catalog, 0.1, 2, 1).size() == 1);
  }
  SUBCASE("factorization holds in every window") {
    for (const auto& rep :
         metrics::track_sliding(synthesis.catalog, 0.05, 1, 3)) {
      if (rep.aled)
        CHECK(rep.saledi ==
              doctest::Approx(rep.f_large * *rep.aled).epsilon(1e-12));
    }
  }
}

TEST_CASE("sliding-window SALEDI variability matches the compound-Poisson law") {
  // stationary catalog; non-overlapping 1-year windows are independent
  synth::SyntheticSpec spec;
  spec.seed = 321;
  spec.years = 40.0;
  spec.event_rate = 120.0;
  spec.alpha = 0.8;
  spec.tail_fraction = 0.8;
  const auto synthesis = synth::generate_catalog(spec);
  const auto reports =
      metrics::track_sliding(synthesis.catalog, spec.threshold, 1, 12);
  REQUIRE(reports.size() == 40);
  double mean = 0.0;
  for (const auto& r : reports) mean += r.saledi;
  mean /= static_cast<double>(reports.size());
  double var = 0.0;
  for (const auto& r : reports) var += (r.saledi - mean) * (r.saledi - mean);
  var /= static_cast<double>(reports.size() - 1);
  const double rse = std::sqrt(var) / mean;
  const double expected = std::sqrt(2.0 / (spec.event_rate * spec.tail_fraction));
  CHECK(rse > 0.7 * expected);
  CHECK(rse < 1.3 * expected);
}

TEST_CASE("saidi_without_med") {
  SUBCASE("identical days exclude nothing") {
    std::vector<double> history(400, 2.0);
    std::vector<double> year(365, 2.0);
    CHECK(metrics::saidi_without_med(year, history) ==
          doctest::Approx(730.0).epsilon(1e-12));
  }
  SUBCASE("an enormous day is excluded") {
    rng::Stream stream(8);
    std::vector<double> history;
    for (int i = 0; i < 1000; ++i)
      history.push_back(std::exp(0.2 * stream.normal()));
    std::vector<double> year(history.begin(), history.begin() + 365);
    const double baseline = metrics::saidi_without_med(year, history);
    auto spiked = year;
    spiked.push_back(1e6);
    CHECK(metrics::saidi_without_med(spiked, history) ==
          doctest::Approx(baseline).epsilon(1e-12));
  }
  SUBCASE("insufficient history is an error") {
    std::vector<double> history(100, 1.0);
    std::vector<double> year(365, 1.0);
    CHECK_THROWS_AS(metrics::saidi_without_med(year, history), DataError);
  }
  SUBCASE("lognormal exclusion fraction is about the 2.5-sigma upper tail") {
    rng::Stream stream(99);
    std::vector<double> days;
    for (int i = 0; i < 40000; ++i)
      days.push_back(std::exp(1.0 + 0.8 * stream.normal()));
    // threshold fitted on the whole history; count the excluded fraction
    const double kept = metrics::saidi_without_med(days, days);
    double total = 0.0;
    for (double d : days) total += d;
    // ~0.62% of days excluded, but they carry the heaviest values
    int excluded = 0;
    double sum_log = 0.0;
    for (double d : days) sum_log += std::log(d);
    const double mu = sum_log / days.size();
    double ss = 0.0;
    for (double d : days) ss += (std::log(d) - mu) * (std::log(d) - mu);
    const double t_med = std::exp(mu + 2.5 * std::sqrt(ss / (days.size() - 1)));
    for (double d : days)
      if (d > t_med) ++excluded;
    const double fraction = static_cast<double>(excluded) / days.size();
    CHECK(fraction > 0.0035);
    CHECK(fraction < 0.0095);
    CHECK(kept < total);
  }
}
