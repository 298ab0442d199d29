#include "ruinlab/harness.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <spdlog/spdlog.h>

#include "ruinlab/asymptotics.hpp"
#include "ruinlab/errors.hpp"
#include "ruinlab/ladder.hpp"
#include "ruinlab/quadrature.hpp"
#include "ruinlab/rare_event.hpp"

namespace ruinlab {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kZ95 = 1.959963984540054;

json estimate_json(const Estimate& e) {
  json streams = json::array();
  for (const StreamBlock& b : e.streams) streams.push_back({b.stream_index, b.count});
  return {{"mean", e.mean}, {"std_error", e.std_error}, {"n", e.n}, {"streams", streams}};
}

json report_json(const HypothesisReport& report) {
  json items = json::array();
  for (const HypothesisItem& item : report.items) {
    items.push_back({{"name", item.name}, {"passed", item.passed}, {"reason", item.reason}});
  }
  return {{"theorem", to_string(report.theorem)}, {"passed", report.passed}, {"items", items}};
}

json rows_json(const std::vector<ComparisonRow>& rows) {
  json out = json::array();
  for (const ComparisonRow& r : rows) {
    out.push_back({{"u", r.u},
                   {"mean", r.mean},
                   {"std_error", r.std_error},
                   {"prediction", r.prediction},
                   {"ratio", r.ratio},
                   {"ci_low", r.ci_low},
                   {"ci_high", r.ci_high},
                   {"method", to_string(r.method)}});
  }
  return out;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

struct Prediction {
  double modified = kNaN;
  double classical = kNaN;
  double ratio = kNaN;
};

Prediction predict(const RiskModel& model, const BoundaryFunction& rule, TheoremId theorem,
                   double u) {
  switch (theorem) {
    case TheoremId::Heavy: {
      const double v = heavy_prediction(model, rule, u);
      return {v, v, 1.0};
    }
    case TheoremId::LightFixed: {
      const FixedPrediction p =
          light_fixed_prediction(model, model.mixing.upper_endpoint(), rule, u);
      return {p.value_modified, p.value_classical, p.ratio_constant};
    }
    case TheoremId::LightAtom: {
      const AtomPrediction p = atom_prediction(model, rule, u);
      return {p.value, p.value_classical, p.ratio_constant};
    }
    case TheoremId::LightSharp: {
      if (!(u > 0.0)) return {};
      const SharpPrediction p = sharp_prediction(model, rule, u);
      return {p.value_modified, p.value_classical, p.ratio_constant};
    }
  }
  return {};
}

// (modified, classical, ratio) estimates at one u.
struct Measured {
  Estimate modified;
  Estimate classical;
  double ratio = kNaN;
  double ratio_std_error = kNaN;
  std::optional<double> refinement_proxy;
};

Measured measure(const ExperimentConfig& config, const RiskModel& model, double u) {
  switch (config.method) {
    case Method::LadderMc: {
      EstimatorOptions opts;
      opts.n = config.n;
      opts.seed = config.seed;
      opts.workers = config.workers;
      const PairedEstimate p = estimate_pair(model, config.rule, u, opts);
      return {p.modified, p.classical, p.ratio, p.ratio_std_error, std::nullopt};
    }
    case Method::TiltedIs: {
      if (model.mixing.is_point_mass()) {
        EstimatorOptions opts;
        opts.n = config.n;
        opts.seed = config.seed;
        opts.workers = config.workers;
        const PairedEstimate p =
            is_estimate(model, model.mixing.upper_endpoint(), u, config.rule, opts);
        return {p.modified, p.classical, p.ratio, p.ratio_std_error, std::nullopt};
      }
      StrataOptions opts;
      opts.cells = config.strata_cells;
      opts.n_per_stratum = config.n_per_stratum;
      opts.seed = config.seed;
      opts.workers = config.workers;
      opts.tolerance = config.stratification_tolerance;
      const MixedEstimate m = is_estimate_mixed(model, config.rule, u, opts);
      return {m.estimate.modified, m.estimate.classical, m.estimate.ratio,
              m.estimate.ratio_std_error, m.refinement_proxy};
    }
    case Method::QuadratureExact: {
      Measured out;
      out.modified.mean = quadrature_exact_mixed(model, config.rule, u);
      out.classical.mean = quadrature_exact_mixed(model, BoundaryFunction::classical(), u);
      out.ratio = out.classical.mean > 0.0 ? out.modified.mean / out.classical.mean : kNaN;
      out.ratio_std_error = 0.0;
      return out;
    }
  }
  return {};
}

void validate_method(const ExperimentConfig& config, const RiskModel& model) {
  if (config.method == Method::TiltedIs && !model.claim.is_light_tailed()) {
    throw ConfigError("method tilted_is needs a light-tailed claim law");
  }
  if (config.method == Method::QuadratureExact &&
      !std::holds_alternative<ExponentialClaims>(model.claim.kind())) {
    throw ConfigError("method quadrature_exact needs exponential claims");
  }
}

json constants_json(const RiskModel& model, const BoundaryFunction& rule, TheoremId theorem) {
  json out;
  const double l1 = model.mixing.upper_endpoint();
  out["upper_endpoint"] = l1;
  out["endpoint_mass"] = model.mixing.endpoint_mass();
  if (theorem == TheoremId::Heavy) {
    out["heavy_prefactor_mean"] = heavy_prefactor_mean(model);
    out["heavy_prefactor_at_endpoint"] = heavy_prefactor(model, l1);
    return out;
  }
  const AsymptoticConstants k = fixed_intensity_constants(model, l1, rule);
  out["intensity"] = k.intensity;
  out["adjustment_coefficient"] = k.adjustment_coefficient;
  out["cramer_constant"] = k.cramer_constant;
  out["heavy_prefactor"] = k.heavy_prefactor;
  out["ratio_constant"] = k.ratio_constant;
  if (theorem == TheoremId::LightSharp) {
    const EndpointRegularity e = endpoint_regularity(model);
    out["endpoint_regularity"] = {{"endpoint", e.endpoint},  {"r1", e.r1},
                                  {"c1", e.c1},              {"d1", e.d1},
                                  {"b_coefficient", e.b_coefficient},
                                  {"b_exponent", e.b_exponent},
                                  {"delta", e.delta},        {"eta", e.eta},
                                  {"gamma_b", gamma_function(e.b_exponent)}};
  }
  return out;
}

json header_json(const ExperimentConfig& config) {
  return {{"schema_version", kSchemaVersion},
          {"mode", to_string(config.mode)},
          {"method", to_string(config.method)},
          {"config", config.echo}};
}

}  // namespace

double exponential_deficit_weight(const RiskModel& model, const BoundaryFunction& rule) {
  const auto* e = std::get_if<ExponentialClaims>(&model.claim.kind());
  if (e == nullptr) throw DomainError("exact quadrature needs exponential claims");
  if (rule.is_classical()) return 1.0;
  const double mu = e->mean;
  const auto f = [&](double x) { return rule.weight_at_deficit(x) * std::exp(-x / mu) / mu; };
  std::vector<double> points{0.0};
  for (const double b : rule.deficit_breakpoints()) {
    if (b > points.back()) points.push_back(b);
  }
  QuadratureOptions opts;
  opts.abs_tol = 1e-14;
  double total = 0.0;
  if (points.size() > 1) total += integrate_partition(f, points, opts).value;
  total += integrate_to_infinity(f, points.back(), mu, opts).value;
  return total;
}

double quadrature_exact_mixed(const RiskModel& model, const BoundaryFunction& rule, double u) {
  const auto* e = std::get_if<ExponentialClaims>(&model.claim.kind());
  if (e == nullptr) throw DomainError("exact quadrature needs exponential claims");
  if (!(u >= 0.0)) throw DomainError("initial capital must be nonnegative");
  model.require_net_profit();
  const double mu = e->mean;
  const double c = model.premium_rate;
  const double l1 = model.mixing.upper_endpoint();
  // e^{-(1/mu - l/c) u} = e^{-R_1 u} e^{-(l_1 - l) u / c}; the first factor is pulled out
  // so that the integrand stays O(1) at large u.
  const double r1 = 1.0 / mu - l1 / c;
  QuadratureOptions opts;
  opts.abs_tol = 0.0;
  opts.rel_tol = 1e-11;
  const double inner = model.mixing.integrate(
      [&](double l) { return (l * mu / c) * std::exp(-(l1 - l) * u / c); }, opts);
  return exponential_deficit_weight(model, rule) * inner * std::exp(-r1 * u);
}

RiskModel effective_model(const ExperimentConfig& config) {
  if (!config.fixed_intensity) return config.model;
  return RiskModel(config.model.premium_rate, config.model.claim,
                   MixingDistribution::point_mass(*config.fixed_intensity));
}

TheoremId select_theorem(const RiskModel& model, TheoremChoice choice) {
  switch (choice) {
    case TheoremChoice::Heavy:
      return TheoremId::Heavy;
    case TheoremChoice::LightFixed:
      return TheoremId::LightFixed;
    case TheoremChoice::LightAtom:
      return TheoremId::LightAtom;
    case TheoremChoice::LightSharp:
      return TheoremId::LightSharp;
    case TheoremChoice::Auto:
      break;
  }
  if (!model.claim.is_light_tailed()) return TheoremId::Heavy;
  if (model.mixing.is_point_mass()) return TheoremId::LightFixed;
  if (model.mixing.endpoint_mass() > 0.0) return TheoremId::LightAtom;
  if (model.mixing.endpoint_expansion()) return TheoremId::LightSharp;
  throw HypothesisViolation(
      "no theorem applies: light-tailed claims with neither an atom at the mixing endpoint nor a "
      "declared endpoint expansion");
}

HypothesisReport full_hypothesis_report(const RiskModel& model, const BoundaryFunction& rule,
                                        TheoremId theorem) {
  HypothesisReport report = check_hypotheses(rule, theorem);
  const auto add = [&](std::string name, bool ok, std::string reason) {
    report.items.push_back({std::move(name), ok, std::move(reason)});
    report.passed = report.passed && ok;
  };
  const bool light = model.claim.is_light_tailed();
  add("net_profit", model.net_profit(),
      model.net_profit() ? "l_1 mu < c" : "l_1 mu >= c");
  if (theorem == TheoremId::Heavy) {
    add("subexponential_integrated_tail", !light,
        light ? "claim law is declared light-tailed" : "declared subexponential");
    return report;
  }
  add("light_tailed_claims", light,
      light ? "mgf finite near 0" : "claim law is declared subexponential");
  const double p1 = model.mixing.endpoint_mass();
  switch (theorem) {
    case TheoremId::LightFixed:
      add("fixed_intensity", model.mixing.is_point_mass(),
          model.mixing.is_point_mass() ? "mixing law is a point mass"
                                       : "mixing law is not a point mass");
      break;
    case TheoremId::LightAtom:
      add("endpoint_atom", p1 > 0.0,
          p1 > 0.0 ? "p_1 > 0" : "p_1 = 0: no atom at the upper endpoint");
      break;
    case TheoremId::LightSharp: {
      add("no_endpoint_atom", p1 == 0.0, p1 == 0.0 ? "p_1 = 0" : "p_1 > 0");
      const bool expansion = model.mixing.endpoint_expansion().has_value();
      add("endpoint_expansion", expansion,
          expansion ? "declared and checked" : "no density reaching l_1 with a declared expansion");
      break;
    }
    case TheoremId::Heavy:
      break;
  }
  return report;
}

ComparisonRow make_row(double u, double mean, double std_error, double prediction,
                       Method method) {
  ComparisonRow row;
  row.u = u;
  row.mean = mean;
  row.std_error = std_error;
  row.prediction = prediction;
  row.method = method;
  if (prediction > 0.0 && std::isfinite(prediction)) {
    row.ratio = mean / prediction;
    row.ci_low = (mean - kZ95 * std_error) / prediction;
    row.ci_high = (mean + kZ95 * std_error) / prediction;
  } else {
    row.ratio = row.ci_low = row.ci_high = kNaN;
  }
  return row;
}

double trend_statistic(const std::vector<ComparisonRow>& rows) {
  if (rows.size() < 2) return kNaN;
  std::size_t toward = 0;
  std::size_t pairs = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (!std::isfinite(rows[i - 1].ratio) || !std::isfinite(rows[i].ratio)) continue;
    ++pairs;
    if (std::abs(rows[i].ratio - 1.0) < std::abs(rows[i - 1].ratio - 1.0)) ++toward;
  }
  return pairs == 0 ? kNaN : static_cast<double>(toward) / static_cast<double>(pairs);
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string comparison_csv(const std::vector<ComparisonRow>& rows) {
  std::string out = "u,mean,std_error,prediction,ratio,ci_low,ci_high,method\n";
  for (const ComparisonRow& r : rows) {
    out += format_number(r.u) + ',' + format_number(r.mean) + ',' + format_number(r.std_error) +
           ',' + format_number(r.prediction) + ',' + format_number(r.ratio) + ',' +
           format_number(r.ci_low) + ',' + format_number(r.ci_high) + ',' + to_string(r.method) +
           '\n';
  }
  return out;
}

RunOutput compute(const ExperimentConfig& config, std::optional<HypothesisReport>* report_out) {
  const RiskModel model = effective_model(config);
  validate_method(config, model);
  RunOutput out;

  if (config.mode == Mode::Simulate) {
    model.require_net_profit();
    std::string csv =
        "u,mean,std_error,classical_mean,classical_std_error,ratio,ratio_std_error,n,method\n";
    json rows = json::array();
    for (const double u : config.u_grid) {
      spdlog::info("simulate u={} method={}", u, to_string(config.method));
      const Measured m = measure(config, model, u);
      csv += format_number(u) + ',' + format_number(m.modified.mean) + ',' +
             format_number(m.modified.std_error) + ',' + format_number(m.classical.mean) + ',' +
             format_number(m.classical.std_error) + ',' + format_number(m.ratio) + ',' +
             format_number(m.ratio_std_error) + ',' + std::to_string(m.modified.n) + ',' +
             to_string(config.method) + '\n';
      json row = {{"u", u},
                  {"modified", estimate_json(m.modified)},
                  {"classical", estimate_json(m.classical)},
                  {"ratio", m.ratio},
                  {"ratio_std_error", m.ratio_std_error}};
      if (m.refinement_proxy) row["refinement_proxy"] = *m.refinement_proxy;
      rows.push_back(row);
    }
    json sidecar = header_json(config);
    sidecar["estimates"] = rows;
    out.files.emplace_back("simulate.csv", csv);
    out.files.emplace_back("simulate.json", dump(sidecar));
    return out;
  }

  model.require_net_profit();
  const TheoremId theorem = select_theorem(model, config.theorem);
  const HypothesisReport report = full_hypothesis_report(model, config.rule, theorem);
  if (report_out != nullptr) *report_out = report;
  if (!report.passed) throw HypothesisViolation(report.summary());
  spdlog::info("theorem {}: hypotheses hold", to_string(theorem));

  const json constants = constants_json(model, config.rule, theorem);
  json sidecar = header_json(config);
  sidecar["theorem"] = to_string(theorem);
  sidecar["hypotheses"] = report_json(report);
  sidecar["constants"] = constants;

  if (config.mode == Mode::Asymptotics) {
    json predictions = json::array();
    for (const double u : config.u_grid) {
      const Prediction p = predict(model, config.rule, theorem, u);
      predictions.push_back({{"u", u},
                             {"modified", p.modified},
                             {"classical", p.classical},
                             {"ratio", p.ratio}});
    }
    sidecar["predictions"] = predictions;
    out.files.emplace_back("asymptotics.json", dump(sidecar));
    return out;
  }

  std::vector<ComparisonRow> rows;
  std::vector<ComparisonRow> ratio_rows;
  json proxies = json::array();
  for (const double u : config.u_grid) {
    spdlog::info("{} u={} method={}", to_string(config.mode), u, to_string(config.method));
    const Prediction p = predict(model, config.rule, theorem, u);
    const Measured m = measure(config, model, u);
    rows.push_back(make_row(u, m.modified.mean, m.modified.std_error, p.modified, config.method));
    ratio_rows.push_back(make_row(u, m.ratio, m.ratio_std_error, p.ratio, config.method));
    if (m.refinement_proxy) proxies.push_back({{"u", u}, {"refinement_proxy", *m.refinement_proxy}});
  }
  sidecar["rows"] = rows_json(rows);
  sidecar["ratio_rows"] = rows_json(ratio_rows);
  if (!proxies.empty()) sidecar["refinement_proxies"] = proxies;

  const ComparisonRow& last = rows.back();
  const bool covered = last.ci_low <= 1.0 && 1.0 <= last.ci_high;
  sidecar["summary"] = {{"trend_statistic", trend_statistic(rows)},
                        {"largest_u", last.u},
                        {"largest_u_ratio", last.ratio},
                        {"largest_u_ci_covers_one", covered},
                        {"ratio_trend_statistic", trend_statistic(ratio_rows)}};

  if (config.mode == Mode::Compare) {
    out.files.emplace_back("compare.csv", comparison_csv(rows));
    out.files.emplace_back("compare_ratio.csv", comparison_csv(ratio_rows));
    out.files.emplace_back("compare.json", dump(sidecar));
  } else {
    out.files.emplace_back("table.csv", comparison_csv(rows));
    out.files.emplace_back("table.json", dump(sidecar));
  }
  return out;
}

void run(const ExperimentConfig& config, const std::filesystem::path& out_dir) {
  std::optional<HypothesisReport> report;
  RunOutput output;
  try {
    output = compute(config, &report);
  } catch (const HypothesisViolation&) {
    if (report) {
      std::filesystem::create_directories(out_dir);
      std::ofstream(out_dir / "hypothesis_report.json") << dump(report_json(*report));
    }
    throw;
  }
  std::filesystem::create_directories(out_dir);
  for (const auto& [name, contents] : output.files) {
    std::ofstream file(out_dir / name, std::ios::binary);
    if (!file) throw Error("cannot write " + (out_dir / name).string());
    file << contents;
  }
}

}  // namespace ruinlab
