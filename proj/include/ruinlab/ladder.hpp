#ifndef RUINLAB_LADDER_HPP
#define RUINLAB_LADDER_HPP

#include <cstdint>
#include <limits>
#include <optional>

#include "ruinlab/boundary.hpp"
#include "ruinlab/estimate.hpp"
#include "ruinlab/model.hpp"
#include "ruinlab/rng.hpp"

namespace ruinlab {

struct RuinSample {
  bool ruined = false;
  // -U_T > 0 when ruined, 0 otherwise.
  double deficit = 0.0;
};

// Exact draw of (1{T < inf}, -U_T) at fixed intensity through the
// compound-geometric ladder representation: each ladder epoch occurs with
// probability rho = l mu / c and adds an F_I-distributed height; ruin is the
// first ladder height sum exceeding u. DomainError unless 0 < l mu < c, u >= 0.
RuinSample sample_ruin_ladder(const RiskModel& model, double intensity, double initial_capital,
                              Stream& stream);

enum class PathOutcome { Ruined, Survived, Censored };

struct PathLimits {
  double upper_barrier = std::numeric_limits<double>::infinity();
  double horizon = std::numeric_limits<double>::infinity();
};

struct PathResult {
  PathOutcome outcome = PathOutcome::Censored;
  double deficit = 0.0;
  double time = 0.0;
  // Survived on a light-tailed model: Lundberg bound e^{-R M} on the ruin
  // probability still ahead when the barrier M is reached.
  std::optional<double> residual_bound;
};

// Event-driven simulation of the surplus path with exponential inter-arrival
// times. Stops at ruin, at the upper barrier, or at the horizon.
PathResult simulate_path(const RiskModel& model, double intensity, double initial_capital,
                         const PathLimits& limits, Stream& stream);

struct EstimatorOptions {
  std::uint64_t n = 100000;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  // Replace the mixing law by a point mass at this intensity.
  std::optional<double> fixed_intensity;
};

// Crude Monte Carlo over (Lambda, ladder path). Each replication draws
// Lambda ~ G (or uses the fixed intensity) and one ladder sample, scoring
// 1{ruined} (classical) and w(-deficit) 1{ruined} (modified) on the same draw.
// Intensity 0 scores 0. NetProfitViolation if l mu >= c somewhere in the support.
PairedEstimate estimate_pair(const RiskModel& model, const BoundaryFunction& rule,
                             double initial_capital, const EstimatorOptions& options);
Estimate estimate_classical(const RiskModel& model, double initial_capital,
                            const EstimatorOptions& options);
Estimate estimate_modified(const RiskModel& model, const BoundaryFunction& rule,
                           double initial_capital, const EstimatorOptions& options);

}  // namespace ruinlab

#endif  // RUINLAB_LADDER_HPP
