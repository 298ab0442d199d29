#ifndef RUINLAB_HARNESS_HPP
#define RUINLAB_HARNESS_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ruinlab/boundary.hpp"
#include "ruinlab/config.hpp"
#include "ruinlab/model.hpp"

namespace ruinlab {

// psi_w(u) for exponential claims by quadrature over G:
//   int C_w (l mu / c) e^{-(1/mu - l/c) u} G(dl),  C_w = int w(-x) (1/mu) e^{-x/mu} dx.
// The deficit at ruin is Exponential(mu) for every u and l, so this is exact
// up to quadrature error. DomainError for other claim laws.
double quadrature_exact_mixed(const RiskModel& model, const BoundaryFunction& rule, double u);

// C_w of the formula above.
double exponential_deficit_weight(const RiskModel& model, const BoundaryFunction& rule);

// The model a run operates on: the configured one, or a point mass at the
// fixed intensity when one is given.
RiskModel effective_model(const ExperimentConfig& config);

// Theorem implied by the model when the config says "auto".
TheoremId select_theorem(const RiskModel& model, TheoremChoice choice);

// Rule-side and model-side assumptions of `theorem` for this model.
HypothesisReport full_hypothesis_report(const RiskModel& model, const BoundaryFunction& rule,
                                        TheoremId theorem);

struct ComparisonRow {
  double u = 0.0;
  double mean = 0.0;
  double std_error = 0.0;
  double prediction = 0.0;
  double ratio = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  Method method = Method::LadderMc;
};

ComparisonRow make_row(double u, double mean, double std_error, double prediction, Method method);

// Fraction of successive ratios that move toward 1.
double trend_statistic(const std::vector<ComparisonRow>& rows);

std::string format_number(double x);
std::string comparison_csv(const std::vector<ComparisonRow>& rows);

struct RunOutput {
  // File name relative to the output directory, and its contents.
  std::vector<std::pair<std::string, std::string>> files;
};

// Computes everything for the configured mode without touching the disk.
// Throws ConfigError, HypothesisViolation, NetProfitViolation or a
// NumericFailure. On a hypothesis failure the thrown message names the
// failed item and `report` (when given) receives the full report.
RunOutput compute(const ExperimentConfig& config,
                  std::optional<HypothesisReport>* report = nullptr);

// compute() then writes every file into `out_dir`.
void run(const ExperimentConfig& config, const std::filesystem::path& out_dir);

}  // namespace ruinlab

#endif  // RUINLAB_HARNESS_HPP
