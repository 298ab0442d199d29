#include "ruinlab/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <boost/math/special_functions/gamma.hpp>

#include "ruinlab/errors.hpp"

namespace ruinlab {

namespace {

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

constexpr double kInf = std::numeric_limits<double>::infinity();

std::size_t pick(const std::vector<double>& cumulative, double u) {
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()),
                               cumulative.size() - 1);
}

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string(what) + " must be finite and positive");
  }
}

}  // namespace

const char* to_string(TailClass tail_class) {
  return tail_class == TailClass::LightTailed ? "light" : "subexponential";
}

ClaimDistribution::ClaimDistribution(Kind kind) : kind_(std::move(kind)) {
  std::visit(
      Overloaded{
          [&](const ExponentialClaims& e) {
            require_positive(e.mean, "exponential mean");
            tail_class_ = TailClass::LightTailed;
            mean_ = e.mean;
            r_max_ = 1.0 / e.mean;
          },
          [&](const ParetoClaims& p) {
            require_positive(p.scale, "pareto scale");
            if (!(p.shape > 1.0) || !std::isfinite(p.shape)) {
              throw DomainError("pareto shape must exceed 1 for a finite mean");
            }
            tail_class_ = TailClass::SubexponentialIntegratedTail;
            mean_ = p.scale / (p.shape - 1.0);
            r_max_ = 0.0;
          },
          [&](const GammaClaims& g) {
            require_positive(g.shape, "gamma shape");
            require_positive(g.scale, "gamma scale");
            tail_class_ = TailClass::LightTailed;
            mean_ = g.shape * g.scale;
            r_max_ = 1.0 / g.scale;
          },
          [&](const MixtureClaims& m) {
            if (m.weights.empty() || m.weights.size() != m.components.size()) {
              throw DomainError("mixture needs one weight per component");
            }
            double total = 0.0;
            for (double w : m.weights) {
              require_positive(w, "mixture weight");
              total += w;
            }
            if (std::abs(total - 1.0) > 1e-12) throw DomainError("mixture weights must sum to 1");
            tail_class_ = TailClass::LightTailed;
            mean_ = 0.0;
            r_max_ = kInf;
            for (std::size_t i = 0; i < m.weights.size(); ++i) {
              const ClaimDistribution& c = m.components[i];
              mean_ += m.weights[i] * c.mean();
              if (!c.is_light_tailed()) tail_class_ = TailClass::SubexponentialIntegratedTail;
              r_max_ = std::min(r_max_, c.r_max());
            }
            if (tail_class_ != TailClass::LightTailed) r_max_ = 0.0;
            double acc = 0.0;
            double acc_i = 0.0;
            for (std::size_t i = 0; i < m.weights.size(); ++i) {
              acc += m.weights[i];
              acc_i += m.weights[i] * m.components[i].mean() / mean_;
              cumulative_.push_back(acc);
              cumulative_integrated_.push_back(acc_i);
            }
          }},
      kind_);
}

ClaimDistribution ClaimDistribution::exponential(double mean) {
  return ClaimDistribution(ExponentialClaims{mean});
}
ClaimDistribution ClaimDistribution::pareto(double shape, double scale) {
  return ClaimDistribution(ParetoClaims{shape, scale});
}
ClaimDistribution ClaimDistribution::gamma(double shape, double scale) {
  return ClaimDistribution(GammaClaims{shape, scale});
}
ClaimDistribution ClaimDistribution::mixture(std::vector<double> weights,
                                             std::vector<ClaimDistribution> components) {
  return ClaimDistribution(MixtureClaims{std::move(weights), std::move(components)});
}

std::string ClaimDistribution::describe() const {
  std::ostringstream os;
  std::visit(Overloaded{
                 [&](const ExponentialClaims& e) { os << "Exponential(mean=" << e.mean << ")"; },
                 [&](const ParetoClaims& p) {
                   os << "Pareto(shape=" << p.shape << ", scale=" << p.scale << ")";
                 },
                 [&](const GammaClaims& g) {
                   os << "Gamma(shape=" << g.shape << ", scale=" << g.scale << ")";
                 },
                 [&](const MixtureClaims& m) {
                   os << "Mixture(";
                   for (std::size_t i = 0; i < m.weights.size(); ++i) {
                     os << (i ? ", " : "") << m.weights[i] << "*" << m.components[i].describe();
                   }
                   os << ")";
                 }},
             kind_);
  return os.str();
}

double ClaimDistribution::tail(double x) const {
  if (x <= 0.0) return 1.0;
  return std::visit(Overloaded{
                        [&](const ExponentialClaims& e) { return std::exp(-x / e.mean); },
                        [&](const ParetoClaims& p) { return std::pow(1.0 + x / p.scale, -p.shape); },
                        [&](const GammaClaims& g) {
                          return boost::math::gamma_q(g.shape, x / g.scale);
                        },
                        [&](const MixtureClaims& m) {
                          double t = 0.0;
                          for (std::size_t i = 0; i < m.weights.size(); ++i) {
                            t += m.weights[i] * m.components[i].tail(x);
                          }
                          return t;
                        }},
                    kind_);
}

double ClaimDistribution::cdf(double x) const {
  if (x <= 0.0) return 0.0;
  return std::visit(Overloaded{
                        [&](const ExponentialClaims& e) { return -std::expm1(-x / e.mean); },
                        [&](const ParetoClaims&) { return 1.0 - tail(x); },
                        [&](const GammaClaims& g) {
                          return boost::math::gamma_p(g.shape, x / g.scale);
                        },
                        [&](const MixtureClaims& m) {
                          double t = 0.0;
                          for (std::size_t i = 0; i < m.weights.size(); ++i) {
                            t += m.weights[i] * m.components[i].cdf(x);
                          }
                          return t;
                        }},
                    kind_);
}

double ClaimDistribution::density(double x) const {
  if (x < 0.0) return 0.0;
  return std::visit(
      Overloaded{
          [&](const ExponentialClaims& e) { return std::exp(-x / e.mean) / e.mean; },
          [&](const ParetoClaims& p) {
            return p.shape / p.scale * std::pow(1.0 + x / p.scale, -p.shape - 1.0);
          },
          [&](const GammaClaims& g) {
            if (x == 0.0) {
              if (g.shape < 1.0) return kInf;
              return g.shape == 1.0 ? 1.0 / g.scale : 0.0;
            }
            return boost::math::gamma_p_derivative(g.shape, x / g.scale) / g.scale;
          },
          [&](const MixtureClaims& m) {
            double t = 0.0;
            for (std::size_t i = 0; i < m.weights.size(); ++i) {
              t += m.weights[i] * m.components[i].density(x);
            }
            return t;
          }},
      kind_);
}

double ClaimDistribution::integrated_tail(double x) const {
  if (x <= 0.0) return 1.0;
  return std::visit(
      Overloaded{
          [&](const ExponentialClaims& e) { return std::exp(-x / e.mean); },
          [&](const ParetoClaims& p) { return std::pow(1.0 + x / p.scale, 1.0 - p.shape); },
          [&](const GammaClaims& g) {
            // int_z^inf Q(k, t) dt = k Q(k+1, z) - z Q(k, z)
            const double z = x / g.scale;
            const double v = boost::math::gamma_q(g.shape + 1.0, z) -
                             z / g.shape * boost::math::gamma_q(g.shape, z);
            return std::clamp(v, 0.0, 1.0);
          },
          [&](const MixtureClaims& m) {
            double t = 0.0;
            for (std::size_t i = 0; i < m.weights.size(); ++i) {
              const ClaimDistribution& c = m.components[i];
              t += m.weights[i] * c.mean() * c.integrated_tail(x);
            }
            return t / mean_;
          }},
      kind_);
}

double ClaimDistribution::mgf(double r) const {
  if (!is_light_tailed()) throw DomainError("mgf requested for a heavy-tailed claim law");
  if (!(r >= 0.0 && r < r_max_)) throw DomainError("mgf argument outside [0, r_max)");
  return std::visit(Overloaded{
                        [&](const ExponentialClaims& e) { return 1.0 / (1.0 - e.mean * r); },
                        [&](const ParetoClaims&) { return kInf; },
                        [&](const GammaClaims& g) {
                          return std::pow(1.0 - g.scale * r, -g.shape);
                        },
                        [&](const MixtureClaims& m) {
                          double t = 0.0;
                          for (std::size_t i = 0; i < m.weights.size(); ++i) {
                            t += m.weights[i] * m.components[i].mgf(r);
                          }
                          return t;
                        }},
                    kind_);
}

double ClaimDistribution::mgf_derivative(double r) const {
  if (!is_light_tailed()) throw DomainError("mgf requested for a heavy-tailed claim law");
  if (!(r >= 0.0 && r < r_max_)) throw DomainError("mgf argument outside [0, r_max)");
  return std::visit(Overloaded{
                        [&](const ExponentialClaims& e) {
                          const double d = 1.0 - e.mean * r;
                          return e.mean / (d * d);
                        },
                        [&](const ParetoClaims&) { return kInf; },
                        [&](const GammaClaims& g) {
                          return g.shape * g.scale * std::pow(1.0 - g.scale * r, -g.shape - 1.0);
                        },
                        [&](const MixtureClaims& m) {
                          double t = 0.0;
                          for (std::size_t i = 0; i < m.weights.size(); ++i) {
                            t += m.weights[i] * m.components[i].mgf_derivative(r);
                          }
                          return t;
                        }},
                    kind_);
}

double sample_standard_gamma(double shape, Stream& stream) {
  if (shape < 1.0) {
    // Gamma(k) = Gamma(k + 1) * U^{1/k}
    const double g = sample_standard_gamma(shape + 1.0, stream);
    return g * std::pow(stream.uniform(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x;
    double v;
    do {
      x = stream.standard_normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = stream.uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double ClaimDistribution::sample(Stream& stream) const {
  return std::visit(
      Overloaded{
          [&](const ExponentialClaims& e) { return e.mean * stream.standard_exponential(); },
          [&](const ParetoClaims& p) {
            return p.scale * std::expm1(-std::log(stream.uniform()) / p.shape);
          },
          [&](const GammaClaims& g) { return g.scale * sample_standard_gamma(g.shape, stream); },
          [&](const MixtureClaims& m) {
            return m.components[pick(cumulative_, stream.uniform())].sample(stream);
          }},
      kind_);
}

double ClaimDistribution::sample_integrated_tail(Stream& stream) const {
  return std::visit(
      Overloaded{
          [&](const ExponentialClaims& e) { return e.mean * stream.standard_exponential(); },
          [&](const ParetoClaims& p) {
            // F_I is Lomax(shape - 1, scale).
            return p.scale * std::expm1(-std::log(stream.uniform()) / (p.shape - 1.0));
          },
          [&](const GammaClaims& g) {
            // Equilibrium law = uniform fraction of the size-biased law Gamma(k + 1, s).
            const double biased = g.scale * sample_standard_gamma(g.shape + 1.0, stream);
            return stream.uniform() * biased;
          },
          [&](const MixtureClaims& m) {
            return m.components[pick(cumulative_integrated_, stream.uniform())]
                .sample_integrated_tail(stream);
          }},
      kind_);
}

double ClaimDistribution::sample_esscher(double r, Stream& stream) const {
  if (!is_light_tailed()) throw DomainError("Esscher transform of a heavy-tailed claim law");
  if (!(r >= 0.0 && r < r_max_)) throw DomainError("Esscher parameter outside [0, r_max)");
  return std::visit(
      Overloaded{
          [&](const ExponentialClaims& e) {
            return e.mean / (1.0 - e.mean * r) * stream.standard_exponential();
          },
          [&](const ParetoClaims&) { return 0.0; },
          [&](const GammaClaims& g) {
            return g.scale / (1.0 - g.scale * r) * sample_standard_gamma(g.shape, stream);
          },
          [&](const MixtureClaims& m) {
            const double total = mgf(r);
            const double u = stream.uniform() * total;
            double acc = 0.0;
            std::size_t i = 0;
            for (; i + 1 < m.weights.size(); ++i) {
              acc += m.weights[i] * m.components[i].mgf(r);
              if (u < acc) break;
            }
            return m.components[i].sample_esscher(r, stream);
          }},
      kind_);
}

}  // namespace ruinlab
