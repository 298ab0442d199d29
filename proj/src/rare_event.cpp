#include "ruinlab/rare_event.hpp"

#include <cmath>
#include <sstream>

#include "ruinlab/asymptotics.hpp"
#include "ruinlab/errors.hpp"
#include "ruinlab/quadrature.hpp"

namespace ruinlab {

TiltedEstimator::TiltedEstimator(const RiskModel& model, double l)
    : model_(model), intensity_(l) {
  if (!model.claim.is_light_tailed()) {
    throw DomainError("importance sampling needs a light-tailed claim law");
  }
  if (!(l > 0.0) || !(model.safety_loading(l) < 1.0)) {
    throw DomainError("importance sampling needs 0 < l mu < c");
  }
  r_ = ruinlab::adjustment_coefficient(model, l);
  const double c = model.premium_rate;
  exponential_ = std::holds_alternative<ExponentialClaims>(model.claim.kind());
  if (exponential_) {
    acceptance_ = 1.0;
    exponential_step_mean_ = c / l;
  } else {
    acceptance_ = c * r_ / (l + c * r_);
    if (acceptance_ < kAcceptanceFloor) {
      std::ostringstream os;
      os << "tilted step sampler acceptance rate " << acceptance_ << " below floor "
         << kAcceptanceFloor << " at l = " << l;
      throw AcceptanceRateError(os.str());
    }
  }
  const double mass = step_mass();
  if (std::abs(mass - 1.0) > 1e-9) {
    std::ostringstream os;
    os << "tilted step density integrates to " << mass;
    throw NumericFailure(os.str());
  }
}

double TiltedEstimator::step_mass() const {
  const ClaimDistribution& claim = model_.claim;
  const double r = r_;
  const Integrand f = [&](double x) {
    const double t = claim.tail(x);
    return t == 0.0 ? 0.0 : std::exp(r * x) * t;
  };
  QuadratureOptions opts;
  opts.abs_tol = 1e-13;
  opts.rel_tol = 1e-13;
  const double scale = 1.0 / (claim.r_max() - r);
  return intensity_ / model_.premium_rate * integrate_to_infinity(f, 0.0, scale, opts).value;
}

double TiltedEstimator::sample_step(Stream& stream) const {
  if (exponential_) return exponential_step_mean_ * stream.standard_exponential();
  const ClaimDistribution& claim = model_.claim;
  for (;;) {
    const double y = claim.sample_esscher(r_, stream);
    if (stream.uniform() < -std::expm1(-r_ * y)) {
      return std::log1p(stream.uniform() * std::expm1(r_ * y)) / r_;
    }
  }
}

TiltedScore TiltedEstimator::sample(double u, const BoundaryFunction& rule, Stream& stream) const {
  double level = 0.0;
  do {
    level += sample_step(stream);
  } while (!(level > u));
  const double deficit = level - u;
  const double lr = std::exp(-r_ * level);
  return {rule.weight_at_deficit(deficit) * lr, lr, deficit};
}

double TiltedEstimator::sample_conditional_deficit(double u, Stream& stream) const {
  // Tilted deficits reweighted by e^{-R xi} <= 1 have the conditional law.
  const BoundaryFunction classical = BoundaryFunction::classical();
  for (;;) {
    const TiltedScore s = sample(u, classical, stream);
    if (stream.uniform() < std::exp(-r_ * s.deficit)) return s.deficit;
  }
}

TiltedScore is_sample(const RiskModel& model, double l, double u, const BoundaryFunction& rule,
                      Stream& stream) {
  if (!(u >= 0.0)) throw DomainError("initial capital must be nonnegative");
  return TiltedEstimator(model, l).sample(u, rule, stream);
}

PairedEstimate is_estimate(const RiskModel& model, double l, double u, const BoundaryFunction& rule,
                           const EstimatorOptions& options, std::uint64_t stream_base) {
  if (!(u >= 0.0)) throw DomainError("initial capital must be nonnegative");
  const TiltedEstimator estimator(model, l);
  const PairKernel kernel = [&](Stream& s) {
    const TiltedScore score = estimator.sample(u, rule, s);
    return std::pair{score.modified, score.classical};
  };
  std::vector<StreamBlock> streams;
  const PairedMoments m =
      run_blocks({options.n, options.seed, stream_base, options.workers}, kernel, &streams);
  return make_paired_estimate(m, std::move(streams));
}

std::vector<double> endpoint_cells(double width, std::size_t cells) {
  if (cells < 2) throw DomainError("stratification needs at least two cells");
  // Innermost cell has width width * 2^-16.
  const double ratio = std::pow(2.0, 16.0 / static_cast<double>(cells - 1));
  std::vector<double> z(cells + 1);
  z[0] = 0.0;
  for (std::size_t i = 1; i <= cells; ++i) {
    z[i] = width * std::pow(ratio, -static_cast<double>(cells - i));
  }
  z[cells] = width;
  return z;
}

namespace {

struct Cell {
  double representative;
  double mass;
};

std::vector<Cell> density_cells(const DensityPart& d, std::size_t cells) {
  const std::vector<double> z = endpoint_cells(d.width(), cells);
  std::vector<Cell> out;
  out.reserve(cells);
  for (std::size_t i = 0; i < cells; ++i) {
    out.push_back({d.upper() - 0.5 * (z[i] + z[i + 1]), d.cell_mass(z[i], z[i + 1])});
  }
  return out;
}

double cramer_surrogate(const RiskModel& model, const std::vector<Cell>& cells, double u) {
  double total = 0.0;
  for (const Cell& c : cells) {
    const double r = adjustment_coefficient(model, c.representative);
    total += c.mass * cramer_constant(model, c.representative) * std::exp(-r * u);
  }
  return total;
}

}  // namespace

MixedEstimate is_estimate_mixed(const RiskModel& model, const BoundaryFunction& rule, double u,
                                const StrataOptions& options) {
  model.require_net_profit();
  if (!(u >= 0.0)) throw DomainError("initial capital must be nonnegative");
  std::vector<Cell> strata;
  for (const Atom& a : model.mixing.atoms()) strata.push_back({a.location, a.mass});
  double proxy = 0.0;
  if (const auto& d = model.mixing.density_part()) {
    const std::vector<Cell> coarse = density_cells(*d, options.cells);
    const std::vector<Cell> fine = density_cells(*d, 2 * options.cells);
    const double q_coarse = cramer_surrogate(model, coarse, u);
    const double q_fine = cramer_surrogate(model, fine, u);
    double atoms = 0.0;
    for (const Atom& a : model.mixing.atoms()) {
      if (a.location > 0.0) {
        atoms += a.mass * cramer_constant(model, a.location) *
                 std::exp(-adjustment_coefficient(model, a.location) * u);
      }
    }
    proxy = std::abs(q_coarse - q_fine) / (atoms + q_fine);
    if (proxy > options.tolerance) {
      std::ostringstream os;
      os << "stratification refinement proxy " << proxy << " exceeds tolerance "
         << options.tolerance;
      throw StratificationError(os.str());
    }
    strata.insert(strata.end(), coarse.begin(), coarse.end());
  }

  double mean_mod = 0.0;
  double mean_cl = 0.0;
  double var_mod = 0.0;
  double var_cl = 0.0;
  double cov = 0.0;
  std::uint64_t total_n = 0;
  std::vector<StreamBlock> streams;
  for (std::size_t s = 0; s < strata.size(); ++s) {
    const Cell& cell = strata[s];
    if (cell.representative <= 0.0 || cell.mass == 0.0) continue;
    EstimatorOptions opts;
    opts.n = options.n_per_stratum;
    opts.seed = options.seed;
    opts.workers = options.workers;
    const TiltedEstimator estimator(model, cell.representative);
    const PairKernel kernel = [&](Stream& st) {
      const TiltedScore score = estimator.sample(u, rule, st);
      return std::pair{score.modified, score.classical};
    };
    const PairedMoments m = run_blocks(
        {opts.n, opts.seed, static_cast<std::uint64_t>(s) << 32, opts.workers}, kernel, &streams);
    const double n = static_cast<double>(m.count());
    const double w = cell.mass;
    mean_mod += w * m.mean_x();
    mean_cl += w * m.mean_y();
    var_mod += w * w * m.variance_x() / n;
    var_cl += w * w * m.variance_y() / n;
    cov += w * w * m.covariance() / n;
    total_n += m.count();
  }

  MixedEstimate out;
  out.strata = strata.size();
  out.refinement_proxy = proxy;
  out.estimate.modified = Estimate{mean_mod, std::sqrt(var_mod), total_n, streams};
  out.estimate.classical = Estimate{mean_cl, std::sqrt(var_cl), total_n, std::move(streams)};
  if (mean_cl > 0.0) {
    const double r = mean_mod / mean_cl;
    out.estimate.ratio = r;
    out.estimate.ratio_std_error =
        std::sqrt(std::max(0.0, var_mod - 2.0 * r * cov + r * r * var_cl)) / mean_cl;
  }
  return out;
}

}  // namespace ruinlab
