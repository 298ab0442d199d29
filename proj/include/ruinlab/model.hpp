#ifndef RUINLAB_MODEL_HPP
#define RUINLAB_MODEL_HPP

#include <string>

#include "ruinlab/distributions.hpp"
#include "ruinlab/mixing.hpp"

namespace ruinlab {

// Surplus U_t = u + c t - sum_{i <= N_t} X_i with N a mixed Poisson process
// of random intensity Lambda ~ G, independent of the claims X_i ~ F.
struct RiskModel {
  RiskModel(double premium_rate, ClaimDistribution claim, MixingDistribution mixing);

  double premium_rate;
  ClaimDistribution claim;
  MixingDistribution mixing;

  // rho(l) = l mu / c.
  double safety_loading(double intensity) const noexcept {
    return intensity * claim.mean() / premium_rate;
  }
  // l_1 mu < c.
  bool net_profit() const noexcept { return safety_loading(mixing.upper_endpoint()) < 1.0; }
  // Throws NetProfitViolation naming the offending intensity.
  void require_net_profit() const;
  std::string describe() const;
};

}  // namespace ruinlab

#endif  // RUINLAB_MODEL_HPP
