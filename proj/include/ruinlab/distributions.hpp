#ifndef RUINLAB_DISTRIBUTIONS_HPP
#define RUINLAB_DISTRIBUTIONS_HPP

#include <string>
#include <variant>
#include <vector>

#include "ruinlab/rng.hpp"

namespace ruinlab {

// Declared tail regime of a claim law. Not inferred from data.
enum class TailClass { LightTailed, SubexponentialIntegratedTail };

const char* to_string(TailClass tail_class);

class ClaimDistribution;

struct ExponentialClaims {
  double mean;
};

// Lomax form: tail (1 + x / scale)^(-shape), shape > 1.
struct ParetoClaims {
  double shape;
  double scale;
};

struct GammaClaims {
  double shape;
  double scale;
};

struct MixtureClaims {
  std::vector<double> weights;
  std::vector<ClaimDistribution> components;
};

// Positive claim-size law F together with the functionals the ruin
// machinery needs: tail, integrated tail F_I, moment generating function,
// and exact samplers for F, F_I and the Esscher transform of F.
// Immutable after construction.
class ClaimDistribution {
 public:
  using Kind = std::variant<ExponentialClaims, ParetoClaims, GammaClaims, MixtureClaims>;

  static ClaimDistribution exponential(double mean);
  static ClaimDistribution pareto(double shape, double scale);
  static ClaimDistribution gamma(double shape, double scale);
  static ClaimDistribution mixture(std::vector<double> weights,
                                   std::vector<ClaimDistribution> components);

  const Kind& kind() const noexcept { return kind_; }
  TailClass tail_class() const noexcept { return tail_class_; }
  bool is_light_tailed() const noexcept { return tail_class_ == TailClass::LightTailed; }
  double mean() const noexcept { return mean_; }
  // Right end of the mgf domain; +inf never occurs in the catalog, 0 for heavy tails.
  double r_max() const noexcept { return r_max_; }
  std::string describe() const;

  double cdf(double x) const;
  double tail(double x) const;
  double density(double x) const;
  // Tail of the integrated-tail law, 1 - (1/mu) int_0^x tail(y) dy.
  double integrated_tail(double x) const;

  // E[e^{rX}] and E[X e^{rX}]; DomainError outside [0, r_max) or for heavy tails.
  double mgf(double r) const;
  double mgf_derivative(double r) const;

  double sample(Stream& stream) const;
  double sample_integrated_tail(Stream& stream) const;
  // Draw from the density e^{rx} f(x) / M(r).
  double sample_esscher(double r, Stream& stream) const;

 private:
  explicit ClaimDistribution(Kind kind);

  Kind kind_;
  TailClass tail_class_;
  double mean_;
  double r_max_;
  // Mixture only: component selection cdf weighted by w_i and by w_i mu_i / mu.
  std::vector<double> cumulative_;
  std::vector<double> cumulative_integrated_;
};

// Marsaglia-Tsang gamma variate with unit scale.
double sample_standard_gamma(double shape, Stream& stream);

}  // namespace ruinlab

#endif  // RUINLAB_DISTRIBUTIONS_HPP
