#include "ruinlab/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <unordered_map>

#include "ruinlab/errors.hpp"
#include "ruinlab/quadrature.hpp"

namespace ruinlab {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void require_light(const ClaimDistribution& claim, const char* what) {
  if (!claim.is_light_tailed()) {
    throw DomainError(std::string(what) + " requires a light-tailed claim law");
  }
}

void require_light_hypothesis(const RiskModel& model, TheoremId theorem) {
  if (!model.claim.is_light_tailed()) {
    throw HypothesisViolation(std::string(to_string(theorem)) +
                              ": claim law is declared subexponential, the Cramer-type results "
                              "need a light tail");
  }
}

void require_rule(const BoundaryFunction& rule, TheoremId theorem) {
  const HypothesisReport report = check_hypotheses(rule, theorem);
  if (!report.passed) throw HypothesisViolation(report.summary());
}

}  // namespace

double lundberg_function(const ClaimDistribution& claim, double c, double l, double r) {
  return l * (claim.mgf(r) - 1.0) - c * r;
}

double adjustment_coefficient(const ClaimDistribution& claim, double c, double l) {
  require_light(claim, "adjustment coefficient");
  if (!(l > 0.0) || !std::isfinite(l)) throw DomainError("intensity must be positive");
  if (!(c > 0.0)) throw DomainError("premium rate must be positive");
  if (!(l * claim.mean() < c)) throw NoRoot("no positive Lundberg root: l mu >= c");

  const double r_max = claim.r_max();
  auto h = [&](double r) { return lundberg_function(claim, c, l, r); };
  auto dh = [&](double r) { return l * claim.mgf_derivative(r) - c; };

  // h(0) = 0, h'(0) < 0, h convex and unbounded at r_max.
  double lo = 0.0;
  double hi = 0.5 * r_max;
  int k = 1;
  while (h(hi) <= 0.0) {
    lo = hi;
    if (++k > 60) throw NoRoot("Lundberg function does not change sign below r_max");
    hi = r_max * (1.0 - std::ldexp(1.0, -k));
  }

  double r = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    const double value = h(r);
    if (value < 0.0) {
      lo = r;
    } else if (value > 0.0) {
      hi = r;
    } else {
      break;
    }
    const double slope = dh(r);
    double next = slope > 0.0 ? r - value / slope : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double step = std::abs(next - r);
    r = next;
    if (step <= 4.0 * kEps * r || hi - lo <= 4.0 * kEps * r) break;
  }
  if (!(std::abs(h(r)) < 1e-12 * c * r)) {
    std::ostringstream os;
    os << "Lundberg root residual " << h(r) << " exceeds tolerance at r = " << r;
    throw NoRoot(os.str());
  }
  return r;
}

double adjustment_coefficient(const RiskModel& model, double l) {
  return adjustment_coefficient(model.claim, model.premium_rate, l);
}

double cramer_constant(const RiskModel& model, double l) {
  const double r = adjustment_coefficient(model, l);
  const double c = model.premium_rate;
  const double denominator = l * model.claim.mgf_derivative(r) - c;
  if (!(denominator > 0.0)) {
    throw DegenerateDenominator("l M'(R) - c is not positive at the Lundberg root");
  }
  return (c - l * model.claim.mean()) / denominator;
}

double heavy_prefactor(const RiskModel& model, double l) {
  if (l <= 0.0) return 0.0;
  const double lm = l * model.claim.mean();
  if (!(lm < model.premium_rate)) throw NetProfitViolation("a(l) needs l mu < c");
  return lm / (model.premium_rate - lm);
}

OvershootLaw::OvershootLaw(const RiskModel& model, double l)
    : claim_(model.claim),
      premium_rate_(model.premium_rate),
      intensity_(l),
      r_(ruinlab::adjustment_coefficient(model, l)) {
  // e^{R z} tail_F(z) decays roughly like e^{-(r_max - R) z}.
  decay_scale_ = 1.0 / (claim_.r_max() - r_);
}

double OvershootLaw::tail(double x) const {
  if (!(x >= 0.0)) throw DomainError("overshoot tail needs x >= 0");
  const double r = r_;
  const ClaimDistribution& claim = claim_;
  const Integrand f = [&](double s) {
    const double t = claim.tail(x + s);
    if (t == 0.0) return 0.0;
    const double rs = r * s;
    return rs < 500.0 ? std::expm1(rs) * t : std::exp(rs + std::log(t));
  };
  QuadratureOptions opts;
  opts.abs_tol = 1e-300;
  opts.rel_tol = 1e-12;
  const double integral = integrate_to_infinity(f, 0.0, decay_scale_, opts).value;
  double value = intensity_ / (premium_rate_ - intensity_ * claim.mean()) * integral;
  if (value > 1.0) {
    if (value > 1.0 + 1e-9) {
      throw QuadratureFailure("overshoot tail exceeds 1 beyond tolerance");
    }
    value = 1.0;
  }
  return value;
}

double overshoot_limit_tail(const RiskModel& model, double l, double x) {
  return OvershootLaw(model, l).tail(x);
}

double limiting_ratio_constant(const RiskModel& model, double l, const BoundaryFunction& rule) {
  require_rule(rule, TheoremId::LightFixed);
  const OvershootLaw law(model, l);
  constexpr double kTailCut = 1e-8;
  constexpr double kConverged = 1e-6;
  constexpr std::size_t kInitialCells = std::size_t{1} << 12;
  constexpr int kMaxRefinements = 8;

  double x_max = 8.0 * model.claim.mean();
  while (law.tail(x_max) >= kTailCut) {
    x_max *= 2.0;
    if (x_max > 1e12 * model.claim.mean()) {
      throw QuadratureFailure("overshoot law tail does not fall below 1e-8");
    }
  }
  const double x_min = x_max * 1e-7;
  const double log_span = std::log(x_max / x_min);
  std::vector<double> breaks;
  for (double d : rule.deficit_breakpoints()) {
    if (d > 0.0 && d < x_max) breaks.push_back(d);
  }

  std::unordered_map<double, double> cache;
  auto tail_at = [&](double x) {
    if (x == 0.0) return 1.0;
    const auto it = cache.find(x);
    if (it != cache.end()) return it->second;
    const double t = law.tail(x);
    cache.emplace(x, t);
    return t;
  };

  auto stieltjes = [&](std::size_t cells) {
    std::vector<double> nodes;
    nodes.reserve(cells + breaks.size() + 2);
    nodes.push_back(0.0);
    for (std::size_t j = 0; j <= cells; ++j) {
      const double frac = static_cast<double>(j) / static_cast<double>(cells);
      nodes.push_back(j == cells ? x_max : x_min * std::exp(log_span * frac));
    }
    nodes.insert(nodes.end(), breaks.begin(), breaks.end());
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    double sum = 0.0;
    double previous = tail_at(nodes.front());
    for (std::size_t i = 1; i < nodes.size(); ++i) {
      const double current = tail_at(nodes[i]);
      const double mid = 0.5 * (nodes[i - 1] + nodes[i]);
      sum += rule.weight_at_deficit(mid) * (previous - current);
      previous = current;
    }
    return sum + rule.weight_at_deficit(x_max) * previous;
  };

  std::size_t cells = kInitialCells;
  double coarse = stieltjes(cells);
  for (int k = 0; k < kMaxRefinements; ++k) {
    cells *= 2;
    const double fine = stieltjes(cells);
    if (std::abs(fine - coarse) < kConverged) return std::clamp(fine, 0.0, 1.0);
    coarse = fine;
  }
  throw QuadratureFailure("limiting ratio constant did not converge under grid refinement");
}

AsymptoticConstants fixed_intensity_constants(const RiskModel& model, double l,
                                              const BoundaryFunction& rule) {
  AsymptoticConstants k{};
  k.intensity = l;
  k.heavy_prefactor = heavy_prefactor(model, l);
  k.adjustment_coefficient = adjustment_coefficient(model, l);
  k.cramer_constant = cramer_constant(model, l);
  k.ratio_constant = limiting_ratio_constant(model, l, rule);
  return k;
}

EndpointRegularity endpoint_regularity(const RiskModel& model) {
  require_light_hypothesis(model, TheoremId::LightSharp);
  model.require_net_profit();
  const MixingDistribution& g = model.mixing;
  if (g.endpoint_mass() > 0.0) {
    throw HypothesisViolation("light_sharp: G({l_1}) > 0; the endpoint-atom result applies instead");
  }
  const auto expansion = g.endpoint_expansion();
  if (!expansion) {
    throw HypothesisViolation(
        "light_sharp endpoint_expansion: no density with a declared expansion g(l_1 - z) ~ B z^(b-1) at l_1");
  }
  EndpointRegularity e{};
  e.endpoint = g.upper_endpoint();
  e.b_coefficient = expansion->coefficient;
  e.b_exponent = expansion->exponent;
  e.delta = expansion->window;
  e.r1 = adjustment_coefficient(model, e.endpoint);
  e.c1 = cramer_constant(model, e.endpoint);

  const double h1 = 1e-4;
  const double h2 = 5e-5;
  const double l1 = e.endpoint;
  if (!(model.safety_loading(l1 + h1) < 1.0) || !(l1 - h1 > 0.0)) {
    throw DerivativeUnstable("central difference for R'(l_1) leaves the admissible intensities");
  }
  auto central = [&](double h) {
    return -(adjustment_coefficient(model, l1 + h) - adjustment_coefficient(model, l1 - h)) /
           (2.0 * h);
  };
  const double d_coarse = central(h1);
  const double d_fine = central(h2);
  if (!(std::abs(d_coarse - d_fine) <= 1e-6 * std::abs(d_fine))) {
    std::ostringstream os;
    os << "central differences for R'(l_1) disagree: " << d_coarse << " vs " << d_fine;
    throw DerivativeUnstable(os.str());
  }
  e.d1 = (4.0 * d_fine - d_coarse) / 3.0;
  if (!(e.d1 > 0.0)) throw HypothesisViolation("light_sharp negative_derivative: R'(l_1) is not negative");

  const double lower = l1 - e.delta;
  if (!(lower > 0.0)) {
    throw HypothesisViolation("light_sharp lundberg_gap: window delta reaches l = 0; choose a smaller delta");
  }
  e.eta = adjustment_coefficient(model, lower) - e.r1;
  if (!(e.eta > 0.0)) {
    std::ostringstream os;
    os << "light_sharp lundberg_gap: no Lundberg gap, R(l_1 - delta) - R(l_1) = " << e.eta;
    throw HypothesisViolation(os.str());
  }
  return e;
}

double heavy_prefactor_mean(const RiskModel& model) {
  model.require_net_profit();
  QuadratureOptions opts;
  opts.abs_tol = 1e-13;
  opts.rel_tol = 1e-12;
  return model.mixing.integrate([&](double l) { return heavy_prefactor(model, l); }, opts);
}

double heavy_prediction(const RiskModel& model, const BoundaryFunction& rule, double u) {
  model.require_net_profit();
  if (model.claim.tail_class() != TailClass::SubexponentialIntegratedTail) {
    throw HypothesisViolation("heavy: claim law is not declared to have a subexponential integrated tail");
  }
  require_rule(rule, TheoremId::Heavy);
  if (!(u >= 0.0)) throw DomainError("initial capital must be nonnegative");
  return heavy_prefactor_mean(model) * model.claim.integrated_tail(u);
}

FixedPrediction light_fixed_prediction(const RiskModel& model, double l,
                                       const BoundaryFunction& rule, double u) {
  require_light_hypothesis(model, TheoremId::LightFixed);
  require_rule(rule, TheoremId::LightFixed);
  if (!(l > 0.0) || !(model.safety_loading(l) < 1.0)) {
    throw NetProfitViolation("light_fixed: intensity must lie in (0, c / mu)");
  }
  const double r = adjustment_coefficient(model, l);
  const double classical = cramer_constant(model, l) * std::exp(-r * u);
  const double ratio = rule.is_classical() ? 1.0 : limiting_ratio_constant(model, l, rule);
  return {ratio * classical, classical, ratio};
}

AtomPrediction atom_prediction(const RiskModel& model, const BoundaryFunction& rule, double u) {
  require_light_hypothesis(model, TheoremId::LightAtom);
  model.require_net_profit();
  require_rule(rule, TheoremId::LightAtom);
  const MixingDistribution& g = model.mixing;
  const double p1 = g.endpoint_mass();
  if (!(p1 > 0.0)) throw HypothesisViolation("light_atom: p_1 = G({l_1}) is zero");
  const double l1 = g.upper_endpoint();
  const double r1 = adjustment_coefficient(model, l1);

  auto gap = [&](double l) {
    if (!(l > 0.0) || !(l < l1)) return;
    const double r = adjustment_coefficient(model, l);
    if (!(r > r1)) {
      std::ostringstream os;
      os << "light_atom sub-endpoint gap: R(" << l << ") = " << r << " is not above R(l_1) = " << r1;
      throw HypothesisViolation(os.str());
    }
  };
  for (const Atom& a : g.atoms()) gap(a.location);
  if (const auto& d = g.density_part()) {
    constexpr int kGrid = 64;
    for (int i = 0; i < kGrid; ++i) {
      gap(d->lower() + (d->upper() - d->lower()) * (i + 0.5) / kGrid);
    }
  }

  const double c1 = cramer_constant(model, l1);
  const double ratio = rule.is_classical() ? 1.0 : limiting_ratio_constant(model, l1, rule);
  const double classical = p1 * c1 * std::exp(-r1 * u);
  return {ratio * classical, ratio, classical};
}

SharpPrediction sharp_prediction(const RiskModel& model, const BoundaryFunction& rule, double u) {
  require_rule(rule, TheoremId::LightSharp);
  if (!(u > 0.0)) throw DomainError("sharp prediction needs u > 0");
  const EndpointRegularity e = endpoint_regularity(model);
  const double classical = e.b_coefficient * e.c1 * gamma_function(e.b_exponent) /
                           std::pow(e.d1 * u, e.b_exponent) * std::exp(-e.r1 * u);
  const double ratio =
      rule.is_classical() ? 1.0 : limiting_ratio_constant(model, e.endpoint, rule);
  return {ratio * classical, classical, ratio};
}

double gamma_function(double b) {
  if (!(b > 0.0) || !std::isfinite(b)) throw DomainError("gamma function needs b > 0");
  return std::tgamma(b);
}

std::vector<UniformityCell> local_uniformity_diagnostic(const RiskModel& model,
                                                        const std::vector<double>& us,
                                                        const std::vector<double>& vs) {
  const auto* exp_claims = std::get_if<ExponentialClaims>(&model.claim.kind());
  if (!exp_claims) throw DomainError("local uniformity diagnostic needs exponential claims");
  model.require_net_profit();
  const double mu = exp_claims->mean;
  const double c = model.premium_rate;
  const double l1 = model.mixing.upper_endpoint();
  const double r1 = adjustment_coefficient(model, l1);
  const double c1 = cramer_constant(model, l1);
  const double d1 = 1.0 / c;
  std::vector<UniformityCell> out;
  for (double u : us) {
    for (double v : vs) {
      const double l = l1 - v / (d1 * u);
      const double psi = l > 0.0 ? (l * mu / c) * std::exp(-(1.0 / mu - l / c) * u) : 0.0;
      out.push_back({u, v, psi / (c1 * std::exp(-r1 * u) * std::exp(-v))});
    }
  }
  return out;
}

}  // namespace ruinlab
