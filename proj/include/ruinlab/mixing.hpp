#ifndef RUINLAB_MIXING_HPP
#define RUINLAB_MIXING_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ruinlab/quadrature.hpp"
#include "ruinlab/rng.hpp"

namespace ruinlab {

struct Atom {
  double location;
  double mass;
};

// g(upper - z) ~ coefficient * z^(exponent - 1) as z -> 0, on a window of width `window`.
struct EndpointExpansion {
  double coefficient;  // B
  double exponent;     // b
  double window;       // delta
};

// Absolutely continuous part of the mixing law on (lower, upper).
// The density is stored as a function of the distance z = upper - l to the
// right end of the support, which keeps endpoint singularities resolvable.
class DensityPart {
 public:
  enum class Shape { Uniform, PowerEndpoint, Custom };

  // Constant density carrying `mass`; expansion (B = mass / width, b = 1, delta = width / 2).
  static DensityPart uniform(double lower, double upper, double mass = 1.0);
  // g(l) = K (upper - l)^(b - 1) with K = mass * b / width^b; expansion (K, b, width / 2).
  static DensityPart power_endpoint(double lower, double upper, double exponent, double mass = 1.0);
  // Arbitrary density g(l) on (lower, upper); the mass is computed by quadrature.
  static DensityPart custom(double lower, double upper, std::function<double(double)> density,
                            std::optional<EndpointExpansion> expansion = std::nullopt);

  Shape shape() const noexcept { return shape_; }
  double lower() const noexcept { return lower_; }
  double upper() const noexcept { return upper_; }
  double width() const noexcept { return upper_ - lower_; }
  double mass() const noexcept { return mass_; }
  // Only meaningful for PowerEndpoint.
  double exponent() const noexcept { return exponent_; }
  const std::optional<EndpointExpansion>& expansion() const noexcept { return expansion_; }
  DensityPart with_window(double window) const;

  double density(double l) const;
  double density_from_endpoint(double z) const;
  // Mass of (lower, upper) ∩ (upper - z_hi, upper - z_lo).
  double cell_mass(double z_lo, double z_hi) const;
  // Draw from the normalized density part.
  double sample(Stream& stream) const;

  double integrate(const std::function<double(double)>& f, const QuadratureOptions& options) const;

 private:
  DensityPart() = default;
  void build_inverse_table();

  Shape shape_ = Shape::Uniform;
  double lower_ = 0.0;
  double upper_ = 0.0;
  double mass_ = 0.0;
  double exponent_ = 1.0;
  std::function<double(double)> custom_;
  std::optional<EndpointExpansion> expansion_;
  // Custom only: cumulative mass measured from the right endpoint on a z-grid.
  std::vector<double> z_grid_;
  std::vector<double> z_cumulative_;
};

// Law G of the random intensity: finitely many atoms plus an optional
// density part. Immutable after construction.
class MixingDistribution {
 public:
  MixingDistribution(std::vector<Atom> atoms, std::optional<DensityPart> density = std::nullopt);

  static MixingDistribution point_mass(double location);

  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  const std::optional<DensityPart>& density_part() const noexcept { return density_; }
  // l_1 = sup of the support.
  double upper_endpoint() const noexcept { return upper_endpoint_; }
  // p_1 = G({l_1}).
  double endpoint_mass() const noexcept;
  bool is_point_mass() const noexcept { return !density_ && atoms_.size() == 1; }
  // Endpoint expansion if the density part reaches l_1 and declares one.
  std::optional<EndpointExpansion> endpoint_expansion() const;
  std::string describe() const;

  // sum_j p_j f(l_j) + int f g. Throws QuadratureFailure.
  double integrate(const std::function<double(double)>& f,
                   const QuadratureOptions& options = {}) const;
  double sample(Stream& stream) const;

 private:
  std::vector<Atom> atoms_;
  std::optional<DensityPart> density_;
  double upper_endpoint_ = 0.0;
  std::vector<double> cumulative_;
};

}  // namespace ruinlab

#endif  // RUINLAB_MIXING_HPP
