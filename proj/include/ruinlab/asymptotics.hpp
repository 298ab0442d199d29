#ifndef RUINLAB_ASYMPTOTICS_HPP
#define RUINLAB_ASYMPTOTICS_HPP

#include <optional>
#include <vector>

#include "ruinlab/boundary.hpp"
#include "ruinlab/model.hpp"

namespace ruinlab {

// l (M(r) - 1) - c r.
double lundberg_function(const ClaimDistribution& claim, double premium_rate, double intensity,
                         double r);

// Positive root R(l) of the Lundberg equation l (M(r) - 1) = c r on (0, r_max),
// by bracketing and safeguarded Newton. NoRoot if l mu >= c, DomainError for
// heavy tails or l <= 0.
double adjustment_coefficient(const ClaimDistribution& claim, double premium_rate,
                              double intensity);
double adjustment_coefficient(const RiskModel& model, double intensity);

// c_l = (c - l mu) / (l M'(R) - c), the prefactor in psi_cl(u, l) ~ c_l e^{-R u}.
double cramer_constant(const RiskModel& model, double intensity);

// a(l) = l mu / (c - l mu); 0 at l = 0.
double heavy_prefactor(const RiskModel& model, double intensity);

// Limit law nu_l of the deficit at ruin given ruin, as u -> inf, at fixed
// intensity l of a light-tailed model. Its tail is evaluated as
//   (l / (c - l mu)) int_x^inf (e^{R (z - x)} - 1) tail_F(z) dz,
// which equals the three-term display for the Cramer-Lundberg overshoot once
// the Lundberg identity int_0^inf e^{R z} tail_F(z) dz = c / l is used.
class OvershootLaw {
 public:
  OvershootLaw(const RiskModel& model, double intensity);

  double intensity() const noexcept { return intensity_; }
  double adjustment_coefficient() const noexcept { return r_; }
  // nu_l((-inf, -x]) for x >= 0.
  double tail(double x) const;
  double cdf(double x) const { return 1.0 - tail(x); }

 private:
  ClaimDistribution claim_;
  double premium_rate_;
  double intensity_;
  double r_;
  double decay_scale_;
};

double overshoot_limit_tail(const RiskModel& model, double intensity, double x);

// C_l = int w(y) nu_l(dy) by a midpoint Stieltjes sum on a geometric grid
// (rule discontinuities inserted as nodes), refined until successive
// estimates differ by less than 1e-6. HypothesisViolation if the rule is
// neither continuous nor monotone.
double limiting_ratio_constant(const RiskModel& model, double intensity,
                               const BoundaryFunction& rule);

struct AsymptoticConstants {
  double intensity;
  double adjustment_coefficient;  // R
  double cramer_constant;         // c_l
  double heavy_prefactor;         // a(l)
  double ratio_constant;          // C_l
};

AsymptoticConstants fixed_intensity_constants(const RiskModel& model, double intensity,
                                              const BoundaryFunction& rule);

struct EndpointRegularity {
  double endpoint;  // l_1
  double r1;        // R(l_1)
  double c1;        // c_{l_1}
  double d1;        // -R'(l_1)
  double b_coefficient;
  double b_exponent;
  double delta;
  double eta;  // R(l_1 - delta) - R(l_1)
};

// Requires a light tail, l_1 mu < c, no atom at l_1 and a declared endpoint
// expansion. D_1 is a Richardson-extrapolated central difference with
// h = 1e-4 and 5e-5; the two differences must agree to 1e-6 relative.
EndpointRegularity endpoint_regularity(const RiskModel& model);

// E[a(Lambda)] tail_{F_I}(u).
double heavy_prediction(const RiskModel& model, const BoundaryFunction& rule, double u);
double heavy_prefactor_mean(const RiskModel& model);

struct FixedPrediction {
  double value_modified;
  double value_classical;
  double ratio_constant;
};

// C_l c_l e^{-R u} at a fixed intensity.
FixedPrediction light_fixed_prediction(const RiskModel& model, double intensity,
                                       const BoundaryFunction& rule, double u);

struct AtomPrediction {
  double value;           // p_1 C_{l_1} c_{l_1} e^{-R_1 u}
  double ratio_constant;  // C_{l_1}
  double value_classical; // p_1 c_{l_1} e^{-R_1 u}
};

AtomPrediction atom_prediction(const RiskModel& model, const BoundaryFunction& rule, double u);

struct SharpPrediction {
  double value_modified;
  double value_classical;
  double ratio_constant;
};

SharpPrediction sharp_prediction(const RiskModel& model, const BoundaryFunction& rule, double u);

// Gamma(b) for b > 0.
double gamma_function(double b);

struct UniformityCell {
  double u;
  double v;
  double ratio;  // psi_cl(u, l_1 - v / (D_1 u)) / (C_1 e^{-R_1 u} e^{-v})
};

// Local-uniformity diagnostic for the endpoint window, exponential claims only.
std::vector<UniformityCell> local_uniformity_diagnostic(const RiskModel& model,
                                                        const std::vector<double>& us,
                                                        const std::vector<double>& vs);

}  // namespace ruinlab

#endif  // RUINLAB_ASYMPTOTICS_HPP
