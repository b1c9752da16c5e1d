// Command-line front end: validate -> events -> threshold -> metrics ->
// track -> plan -> rse -> simulate -> exceedance over the outage CSV schema.

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "saledi/events.hpp"
#include "saledi/ingest.hpp"
#include "saledi/metrics.hpp"
#include "saledi/synth.hpp"
#include "saledi/tailfit.hpp"
#include "saledi/types.hpp"
#include "saledi/variability.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace saledi;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitNumerical = 4;
constexpr const char* kSchemaVersion = "1";

struct RunConfig {
  std::string input;
  std::string output;  // empty = stdout
  std::int64_t n_customer = 0;
  std::string span_start;  // optional override, ISO minute
  std::string span_end;
  std::int64_t cap_minutes = 180;
  std::int64_t sustained_minutes = 5;
  double m_large = 0.0;  // 0 = select automatically
  double m_max = variability::kDefaultMMax;
  double rse_target = 0.1;
  int n_bootstrap = 1000;
  std::uint64_t seed = 1;
  bool no_timestamp = false;
};

std::ostream& open_output(const RunConfig& cfg, std::ofstream& file) {
  if (cfg.output.empty()) return std::cout;
  file.open(cfg.output);
  if (!file) throw DataError("cannot open output file: " + cfg.output);
  return file;
}

json config_json(const RunConfig& cfg) {
  json j;
  j["input"] = cfg.input;
  j["n_customer"] = cfg.n_customer;
  j["grouping_cap_minutes"] = cfg.cap_minutes;
  j["sustained_threshold_minutes"] = cfg.sustained_minutes;
  j["m_large_override"] = cfg.m_large > 0.0 ? json(cfg.m_large) : json(nullptr);
  j["m_max"] = cfg.m_max;
  j["rse_target"] = cfg.rse_target;
  j["n_bootstrap"] = cfg.n_bootstrap;
  j["seed"] = cfg.seed;
  return j;
}

json report_shell(const RunConfig& cfg) {
  json j;
  j["schema_version"] = kSchemaVersion;
  if (!cfg.no_timestamp) {
    const auto now = std::chrono::system_clock::now();
    j["generated_at"] = format_iso_minute(
        std::chrono::duration_cast<std::chrono::minutes>(now.time_since_epoch())
            .count());
  }
  j["config"] = config_json(cfg);
  return j;
}

struct LoadedData {
  std::vector<OutageRecord> all_records;
  std::vector<OutageRecord> sustained;
  SystemProfile profile;
  EventCatalog catalog;
};

LoadedData load(const RunConfig& cfg) {
  if (cfg.n_customer <= 0)
    throw ConfigError("--n-customer is required and must be positive");
  LoadedData d;
  d.all_records = ingest::parse_outage_csv(cfg.input);
  d.sustained = ingest::filter_sustained(d.all_records, cfg.sustained_minutes);
  d.profile.n_customer = cfg.n_customer;
  d.profile.span_start = cfg.span_start.empty()
                             ? d.all_records.front().start
                             : parse_iso_minute(cfg.span_start);
  EpochMinutes last = d.all_records.front().start;
  for (const auto& r : d.all_records) last = std::max(last, r.start);
  d.profile.span_end =
      cfg.span_end.empty() ? last + 1 : parse_iso_minute(cfg.span_end);
  d.profile.validate();
  d.catalog = events::group_events(d.sustained, d.profile, cfg.cap_minutes);
  return d;
}

double resolve_m_large(const RunConfig& cfg, const LoadedData& d,
                       tailfit::TailFit* fit_out = nullptr) {
  if (cfg.m_large > 0.0) return cfg.m_large;
  const auto fit = tailfit::select_m_large(d.catalog.event_magnitudes());
  if (fit_out) *fit_out = fit;
  return fit.m_large;
}

void emit(const RunConfig& cfg, const json& j) {
  std::ofstream file;
  std::ostream& out = open_output(cfg, file);
  out << j.dump(2) << '\n';
}

int cmd_validate(const RunConfig& cfg) {
  const auto d = load(cfg);
  json j = report_shell(cfg);
  j["n_rows"] = d.all_records.size();
  j["n_sustained"] = d.sustained.size();
  j["n_events"] = d.catalog.events.size();
  j["span_start"] = format_iso_minute(d.profile.span_start);
  j["span_end"] = format_iso_minute(d.profile.span_end);
  j["n_year_all"] = d.profile.n_year_all();
  emit(cfg, j);
  return kExitOk;
}

int cmd_events(const RunConfig& cfg) {
  const auto d = load(cfg);
  std::ofstream file;
  std::ostream& out = open_output(cfg, file);
  out << "event_id,start,end,n_outages,M\n";
  for (const auto& ev : d.catalog.events) {
    char m[32];
    std::snprintf(m, sizeof(m), "%.12g", ev.cmip);
    out << ev.event_id << ',' << format_iso_minute(ev.start) << ','
        << format_iso_minute(ev.end) << ',' << ev.n_outage << ',' << m << '\n';
  }
  return kExitOk;
}

int cmd_threshold(const RunConfig& cfg, bool with_gof) {
  const auto d = load(cfg);
  const auto magnitudes = d.catalog.event_magnitudes();
  const auto fit = tailfit::select_m_large(magnitudes);
  json j = report_shell(cfg);
  j["M_large"] = fit.m_large;
  j["alpha"] = fit.alpha;
  j["ks_distance"] = fit.ks_distance;
  j["quantile_q"] = fit.quantile_q;
  j["n_tail"] = fit.n_tail;
  if (with_gof) {
    const auto gof =
        tailfit::gof_bootstrap(magnitudes, fit, cfg.n_bootstrap, cfg.seed);
    j["gof_p_value"] = gof.p_value;
    j["gof_n_bootstrap"] = gof.n_bootstrap;
  } else {
    j["gof_p_value"] = nullptr;
  }
  emit(cfg, j);
  return kExitOk;
}

json metrics_json(const metrics::MetricsReport& r) {
  json j;
  j["window_start"] = format_iso_minute(r.window_start);
  j["window_end"] = format_iso_minute(r.window_end);
  j["n_year"] = r.n_year;
  j["M_large"] = r.m_large;
  j["n_large"] = r.n_large;
  j["f_large"] = r.f_large;
  j["SALEDI"] = r.saledi;
  j["ALED"] = r.aled ? json(*r.aled) : json(nullptr);
  j["SPLEDI"] = r.spledi;
  j["SPALED"] = r.spaled ? json(*r.spaled) : json(nullptr);
  json saidi = json::object();
  for (const auto& [year, value] : r.saidi_with_med_by_year)
    saidi[std::to_string(year)] = value;
  j["SAIDI_with_MED_by_year"] = saidi;
  return j;
}

int cmd_metrics(const RunConfig& cfg) {
  const auto d = load(cfg);
  tailfit::TailFit fit{};
  const double m_large = resolve_m_large(cfg, d, &fit);
  const auto rep = metrics::resilience_metrics(
      d.catalog, m_large, d.profile.span_start, d.profile.span_end);
  json j = report_shell(cfg);
  j["m_large_source"] = cfg.m_large > 0.0 ? "override" : "selected";
  if (cfg.m_large <= 0.0) {
    j["threshold_fit"] = {{"M_large", fit.m_large},
                          {"alpha", fit.alpha},
                          {"ks_distance", fit.ks_distance},
                          {"quantile_q", fit.quantile_q},
                          {"n_tail", fit.n_tail}};
  }
  j["metrics"] = metrics_json(rep);
  emit(cfg, j);
  return kExitOk;
}

int cmd_track(const RunConfig& cfg, int window_years, int step_months) {
  const auto d = load(cfg);
  const double m_large = resolve_m_large(cfg, d);
  const auto reports =
      metrics::track_sliding(d.catalog, m_large, window_years, step_months);
  std::ofstream file;
  std::ostream& out = open_output(cfg, file);
  out << "window_start,window_end,n_large,f_large,ALED,SALEDI\n";
  for (const auto& r : reports) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%.12g",
                  r.f_large, r.aled ? *r.aled : std::nan(""), r.saledi);
    out << format_iso_minute(r.window_start) << ','
        << format_iso_minute(r.window_end) << ',' << r.n_large << ',' << buf
        << '\n';
  }
  return kExitOk;
}

int cmd_exceedance(const RunConfig& cfg, const std::string& kind,
                   bool log_tail) {
  const auto d = load(cfg);
  const auto curve_kind = kind == "probability"
                              ? metrics::ExceedanceCurve::Kind::probability
                              : metrics::ExceedanceCurve::Kind::frequency;
  Eigen::ArrayXd values = d.catalog.event_magnitudes();
  if (log_tail) {
    const double m_large = resolve_m_large(cfg, d);
    std::vector<double> tail;
    for (Eigen::Index i = 0; i < values.size(); ++i)
      if (values[i] >= m_large) tail.push_back(std::log(values[i] / m_large));
    values = Eigen::Map<const Eigen::ArrayXd>(
        tail.data(), static_cast<Eigen::Index>(tail.size()));
  }
  const auto curve =
      metrics::exceedance(values, curve_kind, d.profile.n_year_all());
  std::ofstream file;
  std::ostream& out = open_output(cfg, file);
  out << "value,exceedance\n";
  char buf[64];
  for (const auto& [value, exceed] : curve.points) {
    std::snprintf(buf, sizeof(buf), "%.12g,%.12g", value, exceed);
    out << buf << '\n';
  }
  return kExitOk;
}

int cmd_plan(const RunConfig& cfg, double f_large_all) {
  const auto plan = variability::plan_n_year(f_large_all, cfg.rse_target);
  json j = report_shell(cfg);
  j["f_large_all"] = plan.f_large_all;
  j["rse_target"] = plan.rse_target;
  j["n_year"] = plan.n_year;
  j["n_large_bar"] = plan.n_large_bar;
  j["rse_achieved"] = plan.rse_achieved;
  emit(cfg, j);
  return kExitOk;
}

int cmd_rse(const RunConfig& cfg, double alpha, double m_large, double mu,
            double sigma) {
  if (m_large <= 0.0) throw ConfigError("rse: --m-large must be positive");
  const double p_max = cfg.m_max / m_large;
  json j = report_shell(cfg);
  j["m_large"] = m_large;
  j["m_max"] = cfg.m_max;
  j["p_max"] = p_max;
  j["rse_saledi_numerator"] = std::sqrt(2.0);
  if (alpha > 0.0) {
    const double rse = variability::bounded_pareto_rse(alpha, p_max);
    j["bounded_pareto"] = {
        {"alpha", alpha},
        {"E1", variability::bounded_pareto_moment(alpha, p_max, 1)},
        {"E2", variability::bounded_pareto_moment(alpha, p_max, 2)},
        {"rse", rse},
        {"data_requirement_factor", variability::data_requirement_factor(rse)}};
  }
  if (sigma > 0.0) {
    const double rse = variability::bounded_lognormal_rse(mu, sigma, p_max);
    j["bounded_lognormal"] = {
        {"mu", mu},
        {"sigma", sigma},
        {"E1", variability::bounded_lognormal_moment(mu, sigma, p_max, 1)},
        {"E2", variability::bounded_lognormal_moment(mu, sigma, p_max, 2)},
        {"rse", rse},
        {"data_requirement_factor", variability::data_requirement_factor(rse)}};
  }
  emit(cfg, j);
  return kExitOk;
}

int cmd_simulate(const RunConfig& cfg, const synth::SyntheticSpec& spec) {
  if (cfg.output.empty())
    throw ConfigError("simulate: --output is required");
  const auto synthesis = synth::generate_catalog(spec);
  ingest::write_outage_csv(synthesis.records, cfg.output);
  json truth = report_shell(cfg);
  truth["n_events"] = synthesis.catalog.events.size();
  truth["n_tail_events"] = synthesis.n_tail_events;
  truth["ground_truth"] = {{"M_large", synthesis.ground_truth.m_large},
                           {"alpha", synthesis.ground_truth.alpha},
                           {"quantile_q", synthesis.ground_truth.quantile_q}};
  truth["profile"] = {{"n_customer", synthesis.profile.n_customer},
                      {"span_start", format_iso_minute(synthesis.profile.span_start)},
                      {"span_end", format_iso_minute(synthesis.profile.span_end)}};
  std::ofstream sidecar(cfg.output + ".truth.json");
  if (!sidecar) throw DataError("cannot open sidecar: " + cfg.output + ".truth.json");
  sidecar << truth.dump(2) << '\n';
  return kExitOk;
}

void add_common(CLI::App* cmd, RunConfig& cfg, bool needs_input) {
  auto* in = cmd->add_option("-i,--input", cfg.input, "Outage CSV path")
                 ->envname("SALEDI_INPUT");
  if (needs_input) in->required();
  cmd->add_option("-o,--output", cfg.output, "Output path (default stdout)")
      ->envname("SALEDI_OUTPUT");
  cmd->add_option("--n-customer", cfg.n_customer, "Customers served")
      ->envname("SALEDI_N_CUSTOMER");
  cmd->add_option("--span-start", cfg.span_start, "Observation span start override")
      ->envname("SALEDI_SPAN_START");
  cmd->add_option("--span-end", cfg.span_end, "Observation span end override")
      ->envname("SALEDI_SPAN_END");
  cmd->add_option("--cap-minutes", cfg.cap_minutes, "Event grouping cap")
      ->envname("SALEDI_CAP_MINUTES");
  cmd->add_option("--sustained-minutes", cfg.sustained_minutes,
                  "Sustained outage duration threshold")
      ->envname("SALEDI_SUSTAINED_MINUTES");
  cmd->add_option("--m-large", cfg.m_large, "Large-event threshold override")
      ->envname("SALEDI_M_LARGE");
  cmd->add_option("--m-max", cfg.m_max, "Maximum credible CMIp")
      ->envname("SALEDI_M_MAX");
  cmd->add_option("--rse-target", cfg.rse_target, "Target relative standard error")
      ->envname("SALEDI_RSE_TARGET");
  cmd->add_option("--bootstrap", cfg.n_bootstrap, "Bootstrap replicate count")
      ->envname("SALEDI_BOOTSTRAP");
  cmd->add_option("--seed", cfg.seed, "Random seed")->envname("SALEDI_SEED");
  cmd->add_flag("--no-timestamp", cfg.no_timestamp,
                "Omit generated_at for byte-identical reruns")
      ->envname("SALEDI_NO_TIMESTAMP");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distribution-system resilience metrics from outage records"};
  app.require_subcommand(1);

  RunConfig cfg;
  int window_years = 1;
  int step_months = 1;
  std::string exceed_kind = "probability";
  bool exceed_log_tail = false;
  bool threshold_gof = false;
  double plan_f_large = 0.0;
  double rse_alpha = 0.0, rse_m_large = 0.0, rse_mu = 0.0, rse_sigma = 0.0;
  synth::SyntheticSpec spec;
  std::string tail_model = "pareto";

  auto* validate = app.add_subcommand("validate", "Parse and summarize a CSV");
  add_common(validate, cfg, true);

  auto* events_cmd = app.add_subcommand("events", "Emit the event catalog CSV");
  add_common(events_cmd, cfg, true);

  auto* threshold = app.add_subcommand("threshold", "Select M_large and fit the tail");
  add_common(threshold, cfg, true);
  threshold->add_flag("--gof", threshold_gof, "Run the bootstrap goodness-of-fit test");

  auto* metrics_cmd = app.add_subcommand("metrics", "Full-span resilience metrics");
  add_common(metrics_cmd, cfg, true);

  auto* track = app.add_subcommand("track", "Sliding-window SALEDI time series");
  add_common(track, cfg, true);
  track->add_option("--window-years", window_years, "Window length in years")
      ->required();
  track->add_option("--step-months", step_months, "Window step in months");

  auto* exceed = app.add_subcommand("exceedance", "Exceedance curve CSV");
  add_common(exceed, cfg, true);
  exceed->add_option("--kind", exceed_kind, "probability|frequency")
      ->check(CLI::IsMember({"probability", "frequency"}));
  exceed->add_flag("--log-tail", exceed_log_tail,
                   "Curve of ln(M/M_large) over large events");

  auto* plan = app.add_subcommand("plan", "Minimum years for a target RSE");
  add_common(plan, cfg, false);
  plan->add_option("--f-large", plan_f_large, "Annual large-event frequency")
      ->required();
  plan->add_option("--rse", cfg.rse_target, "Target RSE (default 0.1)");

  auto* rse = app.add_subcommand("rse", "Bounded-model RSE comparison table");
  add_common(rse, cfg, false);
  rse->add_option("--alpha", rse_alpha, "Bounded-Pareto slope magnitude");
  rse->add_option("--fit-m-large", rse_m_large, "Large-event threshold")->required();
  rse->add_option("--mu", rse_mu, "Bounded-lognormal mu");
  rse->add_option("--sigma", rse_sigma, "Bounded-lognormal sigma");

  auto* simulate = app.add_subcommand("simulate", "Write a synthetic outage CSV");
  add_common(simulate, cfg, false);
  simulate->add_option("--years", spec.years, "Span in years");
  simulate->add_option("--rate", spec.event_rate, "Events per year");
  simulate->add_option("--alpha", spec.alpha, "Tail slope magnitude");
  simulate->add_option("--tail-model", tail_model,
                       "pareto|bounded-pareto|bounded-lognormal")
      ->check(CLI::IsMember({"pareto", "bounded-pareto", "bounded-lognormal"}));
  simulate->add_option("--tail-fraction", spec.tail_fraction, "Tail mass");
  simulate->add_option("--threshold", spec.threshold, "Splicing threshold");
  simulate->add_option("--p-max", spec.p_max, "Normalized upper bound");
  simulate->add_option("--tail-mu", spec.tail_mu, "Bounded-lognormal tail mu");
  simulate->add_option("--tail-sigma", spec.tail_sigma, "Bounded-lognormal tail sigma");
  simulate->add_option("--body-mu", spec.body_mu, "Body lognormal mu");
  simulate->add_option("--body-sigma", spec.body_sigma, "Body lognormal sigma");
  simulate->add_option("--outages-per-event", spec.mean_outages_per_event,
                       "Mean member outages per event");
  simulate->add_option("--sim-n-customer", spec.n_customer, "Customers served");

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) return cmd_validate(cfg);
    if (events_cmd->parsed()) return cmd_events(cfg);
    if (threshold->parsed()) return cmd_threshold(cfg, threshold_gof);
    if (metrics_cmd->parsed()) return cmd_metrics(cfg);
    if (track->parsed()) return cmd_track(cfg, window_years, step_months);
    if (exceed->parsed()) return cmd_exceedance(cfg, exceed_kind, exceed_log_tail);
    if (plan->parsed()) return cmd_plan(cfg, plan_f_large);
    if (rse->parsed()) return cmd_rse(cfg, rse_alpha, rse_m_large, rse_mu, rse_sigma);
    if (simulate->parsed()) {
      spec.seed = cfg.seed;
      if (tail_model == "bounded-pareto")
        spec.tail_model = synth::TailModel::bounded_pareto;
      else if (tail_model == "bounded-lognormal")
        spec.tail_model = synth::TailModel::bounded_lognormal;
      return cmd_simulate(cfg, spec);
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: config: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: config: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DataError& e) {
    std::cerr << "error: data: " << e.what() << '\n';
    return kExitData;
  } catch (const NumericalError& e) {
    std::cerr << "error: numerical: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitConfig;
}
