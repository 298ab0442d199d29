#include "ruinlab/ladder.hpp"

#include <cmath>
#include <sstream>

#include "ruinlab/asymptotics.hpp"
#include "ruinlab/errors.hpp"

namespace ruinlab {

RiskModel::RiskModel(double c, ClaimDistribution f, MixingDistribution g)
    : premium_rate(c), claim(std::move(f)), mixing(std::move(g)) {
  if (!(premium_rate > 0.0) || !std::isfinite(premium_rate)) {
    throw DomainError("premium rate must be finite and positive");
  }
}

void RiskModel::require_net_profit() const {
  if (!net_profit()) {
    std::ostringstream os;
    os << "net-profit condition fails: l_1 mu = " << mixing.upper_endpoint() * claim.mean()
       << " >= c = " << premium_rate;
    throw NetProfitViolation(os.str());
  }
}

std::string RiskModel::describe() const {
  std::ostringstream os;
  os << "c=" << premium_rate << ", F=" << claim.describe() << ", " << mixing.describe();
  return os.str();
}

namespace {

void check_intensity(const RiskModel& model, double intensity) {
  if (!(intensity > 0.0) || !std::isfinite(intensity)) {
    throw DomainError("intensity must be positive");
  }
  if (!(model.safety_loading(intensity) < 1.0)) {
    throw DomainError("intensity violates l mu < c");
  }
}

// Ladder walk with the safety loading precomputed; shared by the estimators.
RuinSample ladder_walk(const ClaimDistribution& claim, double rho, double u, Stream& stream) {
  double level = 0.0;
  for (;;) {
    if (stream.uniform() >= rho) return {};
    level += claim.sample_integrated_tail(stream);
    if (level > u) return {true, level - u};
  }
}

}  // namespace

RuinSample sample_ruin_ladder(const RiskModel& model, double intensity, double u, Stream& stream) {
  check_intensity(model, intensity);
  if (!(u >= 0.0)) throw DomainError("initial capital must be nonnegative");
  return ladder_walk(model.claim, model.safety_loading(intensity), u, stream);
}

PathResult simulate_path(const RiskModel& model, double intensity, double u,
                         const PathLimits& limits, Stream& stream) {
  if (!(intensity > 0.0) || !std::isfinite(intensity)) {
    throw DomainError("intensity must be positive");
  }
  if (!(u >= 0.0)) throw DomainError("initial capital must be nonnegative");
  if (!(limits.upper_barrier > u)) throw DomainError("upper barrier must exceed initial capital");
  if (!(limits.horizon >= 0.0)) throw DomainError("horizon must be nonnegative");
  if (std::isinf(limits.upper_barrier) && std::isinf(limits.horizon)) {
    throw DomainError("need a finite upper barrier or a finite horizon");
  }
  const double c = model.premium_rate;
  double t = 0.0;
  double level = u;
  PathResult result;
  for (;;) {
    const double wait = stream.standard_exponential() / intensity;
    const double barrier_time = t + (limits.upper_barrier - level) / c;
    if (t + wait > limits.horizon) {
      if (barrier_time <= limits.horizon) {
        result.outcome = PathOutcome::Survived;
        result.time = barrier_time;
      } else {
        result.outcome = PathOutcome::Censored;
        result.time = limits.horizon;
      }
      break;
    }
    if (barrier_time <= t + wait) {
      result.outcome = PathOutcome::Survived;
      result.time = barrier_time;
      break;
    }
    t += wait;
    level += c * wait - model.claim.sample(stream);
    if (level < 0.0) {
      result.outcome = PathOutcome::Ruined;
      result.deficit = -level;
      result.time = t;
      return result;
    }
  }
  if (result.outcome == PathOutcome::Survived && model.claim.is_light_tailed() &&
      model.safety_loading(intensity) < 1.0) {
    const double r = adjustment_coefficient(model.claim, c, intensity);
    result.residual_bound = std::exp(-r * limits.upper_barrier);
  }
  return result;
}

PairedEstimate estimate_pair(const RiskModel& model, const BoundaryFunction& rule, double u,
                             const EstimatorOptions& options) {
  if (!(u >= 0.0)) throw DomainError("initial capital must be nonnegative");
  const double mu = model.claim.mean();
  const double c = model.premium_rate;
  PairKernel kernel;
  if (options.fixed_intensity) {
    const double l = *options.fixed_intensity;
    if (!(l >= 0.0)) throw DomainError("intensity must be nonnegative");
    if (!(l * mu < c)) throw NetProfitViolation("fixed intensity violates l mu < c");
    const double rho = l * mu / c;
    kernel = [&, rho](Stream& s) {
      const RuinSample r = ladder_walk(model.claim, rho, u, s);
      if (!r.ruined) return std::pair{0.0, 0.0};
      return std::pair{rule.weight_at_deficit(r.deficit), 1.0};
    };
  } else {
    model.require_net_profit();
    kernel = [&](Stream& s) {
      const double l = model.mixing.sample(s);
      if (l <= 0.0) return std::pair{0.0, 0.0};
      const RuinSample r = ladder_walk(model.claim, l * mu / c, u, s);
      if (!r.ruined) return std::pair{0.0, 0.0};
      return std::pair{rule.weight_at_deficit(r.deficit), 1.0};
    };
  }
  std::vector<StreamBlock> streams;
  const PairedMoments m =
      run_blocks({options.n, options.seed, 0, options.workers}, kernel, &streams);
  return make_paired_estimate(m, std::move(streams));
}

Estimate estimate_classical(const RiskModel& model, double u, const EstimatorOptions& options) {
  return estimate_pair(model, BoundaryFunction::classical(), u, options).classical;
}

Estimate estimate_modified(const RiskModel& model, const BoundaryFunction& rule, double u,
                           const EstimatorOptions& options) {
  return estimate_pair(model, rule, u, options).modified;
}

}  // namespace ruinlab
