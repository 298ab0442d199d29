#include "ruinlab/mixing.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ruinlab/errors.hpp"

namespace ruinlab {

namespace {

constexpr int kEndpointRefinements = 30;
constexpr std::size_t kInverseCells = 512;

void check_interval(double lower, double upper) {
  if (!(lower >= 0.0) || !(upper > lower) || !std::isfinite(upper)) {
    throw DomainError("density support must satisfy 0 <= lower < upper < inf");
  }
}

}  // namespace

DensityPart DensityPart::uniform(double lower, double upper, double mass) {
  check_interval(lower, upper);
  if (!(mass > 0.0)) throw DomainError("density mass must be positive");
  DensityPart d;
  d.shape_ = Shape::Uniform;
  d.lower_ = lower;
  d.upper_ = upper;
  d.mass_ = mass;
  d.exponent_ = 1.0;
  d.expansion_ = EndpointExpansion{mass / (upper - lower), 1.0, 0.5 * (upper - lower)};
  return d;
}

DensityPart DensityPart::power_endpoint(double lower, double upper, double exponent, double mass) {
  check_interval(lower, upper);
  if (!(mass > 0.0)) throw DomainError("density mass must be positive");
  if (!(exponent > 0.0) || !std::isfinite(exponent)) {
    throw DomainError("endpoint exponent must be positive");
  }
  DensityPart d;
  d.shape_ = Shape::PowerEndpoint;
  d.lower_ = lower;
  d.upper_ = upper;
  d.mass_ = mass;
  d.exponent_ = exponent;
  const double width = upper - lower;
  d.expansion_ = EndpointExpansion{mass * exponent / std::pow(width, exponent), exponent,
                                   0.5 * width};
  return d;
}

DensityPart DensityPart::custom(double lower, double upper, std::function<double(double)> density,
                                std::optional<EndpointExpansion> expansion) {
  check_interval(lower, upper);
  if (!density) throw DomainError("custom density function is empty");
  DensityPart d;
  d.shape_ = Shape::Custom;
  d.lower_ = lower;
  d.upper_ = upper;
  d.custom_ = std::move(density);
  d.expansion_ = expansion;
  d.mass_ = 1.0;  // placeholder so integrate() does not reject the part
  d.build_inverse_table();
  d.mass_ = d.z_cumulative_.back();
  if (!(d.mass_ > 0.0)) throw DomainError("custom density has no mass");
  return d;
}

DensityPart DensityPart::with_window(double window) const {
  if (!expansion_) throw DomainError("density part declares no endpoint expansion");
  if (!(window > 0.0) || window > width()) throw DomainError("expansion window outside support");
  DensityPart d = *this;
  d.expansion_->window = window;
  return d;
}

double DensityPart::density_from_endpoint(double z) const {
  if (!(z > 0.0) || z > width()) return 0.0;
  switch (shape_) {
    case Shape::Uniform:
      return mass_ / width();
    case Shape::PowerEndpoint:
      return expansion_->coefficient * std::pow(z, exponent_ - 1.0);
    case Shape::Custom:
      return custom_(upper_ - z);
  }
  return 0.0;
}

double DensityPart::density(double l) const { return density_from_endpoint(upper_ - l); }

double DensityPart::integrate(const std::function<double(double)>& f,
                              const QuadratureOptions& options) const {
  const double w = width();
  const bool stretch = expansion_ && expansion_->exponent < 1.0;
  const double b = stretch ? expansion_->exponent : 1.0;
  // Geometric partition toward the endpoint, in the stretched variable t = z^b.
  std::vector<double> points;
  points.push_back(0.0);
  for (int k = kEndpointRefinements; k >= 0; --k) {
    points.push_back(std::pow(std::ldexp(w, -k), b));
  }
  Integrand integrand;
  if (stretch) {
    integrand = [&](double t) {
      const double z = std::pow(t, 1.0 / b);
      const double g = density_from_endpoint(z);
      if (g == 0.0) return 0.0;
      return f(upper_ - z) * g * std::pow(t, 1.0 / b - 1.0) / b;
    };
  } else {
    integrand = [&](double z) {
      const double g = density_from_endpoint(z);
      if (g == 0.0) return 0.0;
      return f(upper_ - z) * g;
    };
  }
  return integrate_partition(integrand, points, options).value;
}

void DensityPart::build_inverse_table() {
  const double w = width();
  z_grid_.resize(kInverseCells + 1);
  z_cumulative_.assign(kInverseCells + 1, 0.0);
  for (std::size_t i = 0; i <= kInverseCells; ++i) {
    z_grid_[i] = w * static_cast<double>(i) / kInverseCells;
  }
  const Integrand g = [this](double z) { return density_from_endpoint(z); };
  QuadratureOptions opts;
  opts.abs_tol = 1e-14;
  for (std::size_t i = 0; i < kInverseCells; ++i) {
    z_cumulative_[i + 1] = z_cumulative_[i] + ruinlab::integrate(g, z_grid_[i], z_grid_[i + 1], opts).value;
  }
}

double DensityPart::cell_mass(double z_lo, double z_hi) const {
  const double w = width();
  z_lo = std::clamp(z_lo, 0.0, w);
  z_hi = std::clamp(z_hi, 0.0, w);
  if (z_hi <= z_lo) return 0.0;
  switch (shape_) {
    case Shape::Uniform:
      return mass_ * (z_hi - z_lo) / w;
    case Shape::PowerEndpoint:
      return mass_ * (std::pow(z_hi / w, exponent_) - std::pow(z_lo / w, exponent_));
    case Shape::Custom: {
      const Integrand g = [this](double z) { return density_from_endpoint(z); };
      QuadratureOptions opts;
      opts.abs_tol = 1e-14;
      return ruinlab::integrate(g, z_lo, z_hi, opts).value;
    }
  }
  return 0.0;
}

double DensityPart::sample(Stream& stream) const {
  const double v = stream.uniform();
  switch (shape_) {
    case Shape::Uniform:
      return upper_ - width() * v;
    case Shape::PowerEndpoint:
      return upper_ - width() * std::pow(v, 1.0 / exponent_);
    case Shape::Custom: {
      const double target = v * mass_;
      const auto it = std::upper_bound(z_cumulative_.begin(), z_cumulative_.end(), target);
      const std::size_t cell =
          std::min<std::size_t>(static_cast<std::size_t>(it - z_cumulative_.begin()), kInverseCells) - 1;
      double lo = z_grid_[cell];
      double hi = z_grid_[cell + 1];
      const double base = z_cumulative_[cell];
      const Integrand g = [this](double z) { return density_from_endpoint(z); };
      QuadratureOptions opts;
      opts.abs_tol = 1e-15;
      while (hi - lo > 1e-14 * std::max(1.0, hi)) {
        const double mid = 0.5 * (lo + hi);
        const double m = base + ruinlab::integrate(g, z_grid_[cell], mid, opts).value;
        (m < target ? lo : hi) = mid;
      }
      return upper_ - 0.5 * (lo + hi);
    }
  }
  return upper_;
}

MixingDistribution::MixingDistribution(std::vector<Atom> atoms, std::optional<DensityPart> density)
    : atoms_(std::move(atoms)), density_(std::move(density)) {
  if (atoms_.empty() && !density_) throw DomainError("mixing law has no mass");
  double total = 0.0;
  upper_endpoint_ = 0.0;
  for (const Atom& a : atoms_) {
    if (!(a.location >= 0.0) || !std::isfinite(a.location)) {
      throw DomainError("atom location must be finite and nonnegative");
    }
    if (!(a.mass > 0.0)) throw DomainError("atom mass must be positive");
    total += a.mass;
    cumulative_.push_back(total);
    upper_endpoint_ = std::max(upper_endpoint_, a.location);
  }
  if (density_) {
    total += density_->mass();
    cumulative_.push_back(total);
    upper_endpoint_ = std::max(upper_endpoint_, density_->upper());
  }
  if (std::abs(total - 1.0) > 1e-8) {
    std::ostringstream os;
    os << "mixing law total mass " << total << " differs from 1";
    throw DomainError(os.str());
  }
  if (const auto e = endpoint_expansion()) {
    if (!(e->coefficient > 0.0) || !(e->exponent > 0.0) || !(e->window > 0.0) ||
        e->window > density_->width()) {
      throw DomainError("endpoint expansion needs B, b, delta > 0 and delta within the support");
    }
    for (int k = 0; k <= 20; ++k) {
      const double z = std::ldexp(e->window / 10.0, -k);
      const double ratio = density_->density_from_endpoint(z) / (e->coefficient * std::pow(z, e->exponent - 1.0));
      if (!(ratio >= 0.9 && ratio <= 1.1)) {
        std::ostringstream os;
        os << "declared endpoint expansion fails at z = " << z << " (ratio " << ratio << ")";
        throw DomainError(os.str());
      }
    }
  }
}

MixingDistribution MixingDistribution::point_mass(double location) {
  return MixingDistribution({Atom{location, 1.0}});
}

double MixingDistribution::endpoint_mass() const noexcept {
  double p = 0.0;
  for (const Atom& a : atoms_) {
    if (a.location == upper_endpoint_) p += a.mass;
  }
  return p;
}

std::optional<EndpointExpansion> MixingDistribution::endpoint_expansion() const {
  if (!density_ || density_->upper() != upper_endpoint_) return std::nullopt;
  return density_->expansion();
}

std::string MixingDistribution::describe() const {
  std::ostringstream os;
  os << "G = ";
  bool first = true;
  for (const Atom& a : atoms_) {
    os << (first ? "" : " + ") << a.mass << "*delta(" << a.location << ")";
    first = false;
  }
  if (density_) {
    os << (first ? "" : " + ") << density_->mass() << "*density(" << density_->lower() << ", "
       << density_->upper() << ")";
  }
  return os.str();
}

double MixingDistribution::integrate(const std::function<double(double)>& f,
                                     const QuadratureOptions& options) const {
  double total = 0.0;
  for (const Atom& a : atoms_) total += a.mass * f(a.location);
  if (density_) total += density_->integrate(f, options);
  return total;
}

double MixingDistribution::sample(Stream& stream) const {
  if (cumulative_.size() == 1) {
    return density_ ? density_->sample(stream) : atoms_.front().location;
  }
  const double u = stream.uniform() * cumulative_.back();
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative_.begin()),
                                              cumulative_.size() - 1);
  if (i < atoms_.size()) return atoms_[i].location;
  return density_->sample(stream);
}

}  // namespace ruinlab
