#ifndef RUINLAB_RARE_EVENT_HPP
#define RUINLAB_RARE_EVENT_HPP

#include <cstdint>

#include "ruinlab/boundary.hpp"
#include "ruinlab/estimate.hpp"
#include "ruinlab/ladder.hpp"
#include "ruinlab/model.hpp"
#include "ruinlab/rng.hpp"

namespace ruinlab {

struct TiltedScore {
  double modified;   // w(-xi) e^{-R S_N}
  double classical;  // e^{-R S_N}
  double deficit;    // xi = S_N - u
};

// Ladder walk under the exponentially tilted (Siegmund) measure. The
// defective ladder-height law rho F_I(dx) is tilted by e^{R x}; at the
// Lundberg root this is the proper density (l / c) e^{R x} tail_F(x), with
// positive mean, so every tilted walk crosses u and the likelihood ratio at
// the crossing is e^{-R S_N}.
//
// Tilted steps: closed form for exponential claims (Exponential with mean
// c / l). Otherwise acceptance-rejection on the pair (Y, X): Y from the
// Esscher transform of F accepted with probability 1 - e^{-R Y}, then X
// given Y with density proportional to e^{R x} on (0, Y). The acceptance
// rate is exactly c R / (l + c R); below 0.1 construction fails with
// AcceptanceRateError.
class TiltedEstimator {
 public:
  static constexpr double kAcceptanceFloor = 0.1;

  TiltedEstimator(const RiskModel& model, double intensity);

  double intensity() const noexcept { return intensity_; }
  double adjustment_coefficient() const noexcept { return r_; }
  double acceptance_rate() const noexcept { return acceptance_; }
  // Numeric integral of the tilted step density; 1 up to quadrature error.
  double step_mass() const;

  double sample_step(Stream& stream) const;
  TiltedScore sample(double u, const BoundaryFunction& rule, Stream& stream) const;
  // Exact draw from the law of the deficit at ruin given ruin, from capital u.
  double sample_conditional_deficit(double u, Stream& stream) const;

 private:
  RiskModel model_;
  double intensity_;
  double r_;
  double acceptance_;
  bool exponential_;
  double exponential_step_mean_ = 0.0;
};

// One importance-sampling replication at fixed intensity.
TiltedScore is_sample(const RiskModel& model, double intensity, double u,
                      const BoundaryFunction& rule, Stream& stream);

// Importance-sampling estimate at a fixed intensity (options.fixed_intensity
// is ignored); replications use streams stream_base + block.
PairedEstimate is_estimate(const RiskModel& model, double intensity, double u,
                           const BoundaryFunction& rule, const EstimatorOptions& options,
                           std::uint64_t stream_base = 0);

struct StrataOptions {
  std::size_t cells = 256;
  std::uint64_t n_per_stratum = 10000;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  // Largest accepted relative refinement proxy.
  double tolerance = 0.05;
};

struct MixedEstimate {
  PairedEstimate estimate;
  // |Q_K - Q_2K| / Q_2K for the Cramer surrogate c_l e^{-R(l) u}
  // integrated with K and 2K cells.
  double refinement_proxy = 0.0;
  std::size_t strata = 0;
};

// Stratified estimate of psi(u) = int psi_l(u) G(dl): one stratum per atom
// and `cells` geometric cells of the density part shrinking toward l_1.
// Each stratum is estimated by importance sampling at its representative
// (atom location or cell midpoint) and weighted by its exact mass.
MixedEstimate is_estimate_mixed(const RiskModel& model, const BoundaryFunction& rule, double u,
                                const StrataOptions& options);

// Geometric cell boundaries in z = l_1 - l: 0, then width * ratio^(cells - i).
std::vector<double> endpoint_cells(double width, std::size_t cells);

}  // namespace ruinlab

#endif  // RUINLAB_RARE_EVENT_HPP
