#include "catch_amalgamated.hpp"

#include <cmath>
#include <cstring>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "ruinlab/asymptotics.hpp"
#include "ruinlab/errors.hpp"
#include "ruinlab/harness.hpp"
#include "ruinlab/rare_event.hpp"
#include "support.hpp"

using namespace ruinlab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

RiskModel exponential_fixed() {
  return RiskModel(2.0, ClaimDistribution::exponential(1.0), MixingDistribution::point_mass(1.0));
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST_CASE("Tilted step law for exponential claims", "[rare_event]") {
  const auto model = exponential_fixed();
  const TiltedEstimator est(model, 1.0);
  CHECK_THAT(est.adjustment_coefficient(), WithinRel(0.5, 1e-12));
  CHECK_THAT(est.step_mass(), WithinAbs(1.0, 1e-9));
  Stream s(1, 0);
  std::vector<double> xs(50000);
  for (double& x : xs) x = est.sample_step(s);
  // (l/c) e^{Rx} e^{-x} = 0.5 e^{-x/2}: exponential with mean c / l = 2.
  CHECK(testing::kolmogorov_distance(xs, [](double x) { return 1.0 - std::exp(-0.5 * x); }) <
        1.63 / std::sqrt(5e4));
}

TEST_CASE("Tilted step law by pair rejection", "[rare_event][property]") {
  const std::vector<RiskModel> models{
      RiskModel(1.0, ClaimDistribution::gamma(2.0, 0.25), MixingDistribution::point_mass(1.2)),
      RiskModel(1.0, ClaimDistribution::gamma(0.5, 1.0), MixingDistribution::point_mass(1.0)),
      RiskModel(1.0,
                ClaimDistribution::mixture({0.5, 0.5}, {ClaimDistribution::exponential(0.5),
                                                        ClaimDistribution::gamma(3.0, 0.3)}),
                MixingDistribution::point_mass(1.1)),
  };
  for (const auto& model : models) {
    INFO(model.describe());
    const double l = model.mixing.upper_endpoint();
    const TiltedEstimator est(model, l);
    const double r = est.adjustment_coefficient();
    const double c = model.premium_rate;
    CHECK_THAT(est.acceptance_rate(), WithinRel(c * r / (l + c * r), 1e-12));
    CHECK_THAT(est.step_mass(), WithinAbs(1.0, 1e-9));
    const auto cdf = [&](double x) {
      // z = s^2 keeps the integrand smooth for gamma shapes below 1.
      return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
          [&](double s) { return 2.0 * s * (l / c) * std::exp(r * s * s) * model.claim.tail(s * s); },
          0.0, std::sqrt(x), 15, 1e-12);
    };
    Stream s(2, 0);
    std::vector<double> xs(30000);
    for (double& x : xs) x = est.sample_step(s);
    CHECK(testing::kolmogorov_distance(xs, cdf) < 1.63 / std::sqrt(3e4));
  }
}

TEST_CASE("Acceptance rate floor", "[rare_event]") {
  // l mu / c = 0.975 leaves a tiny adjustment coefficient.
  const RiskModel model(1.0, ClaimDistribution::gamma(2.0, 0.5), MixingDistribution::point_mass(0.975));
  CHECK_THROWS_AS(TiltedEstimator(model, 0.975), AcceptanceRateError);
  const RiskModel heavy(1.0, ClaimDistribution::pareto(2.5, 1.0), MixingDistribution::point_mass(0.5));
  CHECK_THROWS_AS(TiltedEstimator(heavy, 0.5), DomainError);
}

TEST_CASE("Importance sampling is unbiased for exponential claims", "[rare_event]") {
  const auto model = exponential_fixed();
  EstimatorOptions opts;
  opts.n = 100000;
  opts.seed = 3;
  for (double u : {0.0, 5.0, 20.0, 50.0}) {
    INFO("u = " << u);
    const PairedEstimate p = is_estimate(model, 1.0, u, BoundaryFunction::classical(), opts);
    const double exact = 0.5 * std::exp(-0.5 * u);
    CHECK(std::abs(p.classical.mean - exact) < 3.5 * p.classical.std_error);
    // Score e^{-R (u + xi)} with xi ~ Exp(1): squared coefficient of variation 1/3.
    const double cv2 = std::pow(p.classical.std_error * std::sqrt(static_cast<double>(opts.n)) /
                                    p.classical.mean, 2);
    CHECK_THAT(cv2, WithinRel(1.0 / 3.0, 0.03));
  }
}

TEST_CASE("Importance sampling for gamma claims agrees with plain Monte Carlo", "[rare_event]") {
  const RiskModel model(1.0, ClaimDistribution::gamma(2.0, 0.25), MixingDistribution::point_mass(1.2));
  EstimatorOptions opts;
  opts.n = 200000;
  opts.seed = 4;
  const auto rule = BoundaryFunction::exponential_absorption(2.0);
  const PairedEstimate is = is_estimate(model, 1.2, 3.0, rule, opts);
  opts.fixed_intensity = 1.2;
  opts.seed = 5;
  const PairedEstimate mc = estimate_pair(model, rule, 3.0, opts);
  const double se = std::hypot(is.modified.std_error, mc.modified.std_error);
  CHECK(std::abs(is.modified.mean - mc.modified.mean) < 3.5 * se);
  const double se_c = std::hypot(is.classical.std_error, mc.classical.std_error);
  CHECK(std::abs(is.classical.mean - mc.classical.mean) < 3.5 * se_c);
}

TEST_CASE("Threshold ratio under importance sampling", "[rare_event]") {
  const auto model = exponential_fixed();
  EstimatorOptions opts;
  opts.n = 100000;
  opts.seed = 6;
  for (double u : {5.0, 30.0}) {
    const PairedEstimate p = is_estimate(model, 1.0, u, BoundaryFunction::deficit_threshold(1.0), opts);
    CHECK(std::abs(p.ratio - std::exp(-1.0)) < 3.5 * p.ratio_std_error);
  }
}

TEST_CASE("Conditional deficit sampler", "[rare_event]") {
  {
    const TiltedEstimator est(exponential_fixed(), 1.0);
    Stream s(7, 0);
    std::vector<double> xs(10000);
    for (double& x : xs) x = est.sample_conditional_deficit(30.0, s);
    CHECK(testing::kolmogorov_distance(xs, [](double x) { return 1.0 - std::exp(-x); }) < 0.02);
  }
  {
    const RiskModel model(1.0, ClaimDistribution::gamma(2.0, 0.25), MixingDistribution::point_mass(1.2));
    const TiltedEstimator est(model, 1.2);
    const OvershootLaw nu(model, 1.2);
    Stream s(8, 0);
    std::vector<double> xs(10000);
    for (double& x : xs) x = est.sample_conditional_deficit(30.0, s);
    CHECK(testing::kolmogorov_distance(xs, [&](double x) { return nu.cdf(x); }) < 0.02);
  }
}

TEST_CASE("Endpoint cells", "[rare_event]") {
  const auto z = endpoint_cells(0.2, 64);
  REQUIRE(z.size() == 65);
  CHECK(z.front() == 0.0);
  CHECK(z.back() == 0.2);
  CHECK_THAT(z[1], WithinRel(0.2 * std::pow(2.0, -16), 1e-12));
  for (std::size_t i = 2; i < z.size(); ++i) {
    CHECK_THAT(z[i] / z[i - 1], WithinRel(std::pow(2.0, 16.0 / 63.0), 1e-12));
  }
  CHECK_THROWS_AS(endpoint_cells(0.2, 1), DomainError);
}

TEST_CASE("Stratified estimate over atoms", "[rare_event]") {
  const RiskModel model(2.0, ClaimDistribution::exponential(1.0),
                        MixingDistribution({{1.0, 0.3}, {0.5, 0.7}}));
  StrataOptions opts;
  opts.n_per_stratum = 50000;
  opts.seed = 9;
  const auto rule = BoundaryFunction::deficit_threshold(1.0);
  for (double u : {2.0, 20.0}) {
    const MixedEstimate m = is_estimate_mixed(model, rule, u, opts);
    CHECK(m.strata == 2);
    const double exact = quadrature_exact_mixed(model, rule, u);
    CHECK(std::abs(m.estimate.modified.mean - exact) < 3.5 * m.estimate.modified.std_error);
  }
}

TEST_CASE("Stratified estimate over an endpoint density", "[rare_event]") {
  const RiskModel model(2.0, ClaimDistribution::exponential(1.0),
                        MixingDistribution({}, DensityPart::power_endpoint(0.6, 0.8, 2.0)));
  StrataOptions opts;
  opts.cells = 128;
  opts.n_per_stratum = 2000;
  opts.seed = 10;
  const double u = 50.0;
  const MixedEstimate m = is_estimate_mixed(model, BoundaryFunction::classical(), u, opts);
  CHECK(m.strata == 128);
  CHECK(m.refinement_proxy < opts.tolerance);
  const double exact = quadrature_exact_mixed(model, BoundaryFunction::classical(), u);
  // Midpoint representatives add a deterministic bias bounded by the refinement proxy.
  CHECK(std::abs(m.estimate.classical.mean - exact) <
        3.5 * m.estimate.classical.std_error + m.refinement_proxy * exact);

  opts.workers = 3;
  const MixedEstimate again = is_estimate_mixed(model, BoundaryFunction::classical(), u, opts);
  CHECK(same_bits(again.estimate.classical.mean, m.estimate.classical.mean));
  CHECK(same_bits(again.estimate.classical.std_error, m.estimate.classical.std_error));

  opts.cells = 2;
  opts.workers = 1;
  opts.tolerance = 1e-6;
  CHECK_THROWS_AS(is_estimate_mixed(model, BoundaryFunction::classical(), u, opts),
                  StratificationError);
}
