#include "catch_amalgamated.hpp"

#include <cmath>
#include <cstring>
#include <vector>

#include "ruinlab/errors.hpp"
#include "ruinlab/ladder.hpp"
#include "ruinlab/rng.hpp"
#include "support.hpp"

using namespace ruinlab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

RiskModel exponential_model(double c, double mu, MixingDistribution g) {
  return RiskModel(c, ClaimDistribution::exponential(mu), std::move(g));
}

// Exponential claims, fixed intensity: psi(u) = (l mu / c) e^{-(1/mu - l/c) u}.
double exponential_ruin(double c, double mu, double l, double u) {
  return (l * mu / c) * std::exp(-(1.0 / mu - l / c) * u);
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST_CASE("Ladder estimator recovers the exponential ruin law", "[ladder]") {
  const auto model = exponential_model(2.0, 1.0, MixingDistribution::point_mass(1.0));
  EstimatorOptions opts;
  opts.n = 200000;
  opts.seed = 1;
  for (double u : {0.0, 1.0, 5.0, 10.0}) {
    INFO("u = " << u);
    const Estimate e = estimate_classical(model, u, opts);
    CHECK(e.n == opts.n);
    CHECK(std::abs(e.mean - exponential_ruin(2.0, 1.0, 1.0, u)) < 4.0 * e.std_error);
  }
}

TEST_CASE("Ladder estimator under a mixing law with two atoms", "[ladder]") {
  const auto model = exponential_model(2.0, 1.0, MixingDistribution({{1.0, 0.3}, {0.5, 0.7}}));
  EstimatorOptions opts;
  opts.n = 400000;
  opts.seed = 2;
  for (double u : {1.0, 4.0}) {
    const double exact =
        0.3 * exponential_ruin(2.0, 1.0, 1.0, u) + 0.7 * exponential_ruin(2.0, 1.0, 0.5, u);
    const Estimate e = estimate_classical(model, u, opts);
    CHECK(std::abs(e.mean - exact) < 4.0 * e.std_error);
  }
}

TEST_CASE("The classical rule reproduces the classical estimator draw by draw", "[ladder][property]") {
  const RiskModel model(1.5, ClaimDistribution::gamma(2.0, 0.5),
                        MixingDistribution({}, DensityPart::uniform(0.5, 1.2)));
  EstimatorOptions opts;
  opts.n = 50000;
  opts.seed = 77;
  const PairedEstimate p = estimate_pair(model, BoundaryFunction::classical(), 2.0, opts);
  CHECK(same_bits(p.modified.mean, p.classical.mean));
  CHECK(same_bits(p.modified.std_error, p.classical.std_error));
  CHECK(p.ratio == 1.0);
  for (std::uint64_t i = 0; i < 200; ++i) {
    Stream a(5, i);
    const RuinSample r = sample_ruin_ladder(model, 1.0, 2.0, a);
    if (r.ruined) {
      REQUIRE(BoundaryFunction::classical().weight_at_deficit(r.deficit) == 1.0);
    }
  }
}

TEST_CASE("Deficit threshold ratio is exact for exponential claims", "[ladder]") {
  const auto model = exponential_model(2.0, 1.0, MixingDistribution::point_mass(1.0));
  EstimatorOptions opts;
  opts.n = 400000;
  opts.seed = 3;
  for (double u : {1.0, 5.0}) {
    const PairedEstimate p = estimate_pair(model, BoundaryFunction::deficit_threshold(1.0), u, opts);
    CHECK(std::abs(p.ratio - std::exp(-1.0)) < 4.0 * p.ratio_std_error);
  }
}

TEST_CASE("Results do not depend on the worker count", "[ladder][property]") {
  const RiskModel model(1.0, ClaimDistribution::pareto(2.5, 1.0),
                        MixingDistribution({}, DensityPart::uniform(0.2, 0.5)));
  EstimatorOptions opts;
  opts.n = 3 * kBlockSize + 123;
  opts.seed = 9;
  const auto rule = BoundaryFunction::exponential_absorption(1.0);
  opts.workers = 1;
  const PairedEstimate a = estimate_pair(model, rule, 5.0, opts);
  opts.workers = 4;
  const PairedEstimate b = estimate_pair(model, rule, 5.0, opts);
  CHECK(same_bits(a.modified.mean, b.modified.mean));
  CHECK(same_bits(a.modified.std_error, b.modified.std_error));
  CHECK(same_bits(a.classical.mean, b.classical.mean));
  CHECK(same_bits(a.ratio_std_error, b.ratio_std_error));
  REQUIRE(a.modified.streams.size() == 4);
  CHECK(a.modified.streams.back().count == 123);
}

TEST_CASE("Path simulation agrees with the ladder representation", "[ladder]") {
  const auto model = exponential_model(2.0, 1.0, MixingDistribution::point_mass(1.0));
  const double u = 2.0;
  PathLimits limits;
  limits.upper_barrier = 40.0;
  std::size_t ruined = 0;
  const std::size_t n = 100000;
  std::vector<double> deficits;
  for (std::uint64_t i = 0; i < n; ++i) {
    Stream s(4, i);
    const PathResult r = simulate_path(model, 1.0, u, limits, s);
    if (r.outcome == PathOutcome::Ruined) {
      ++ruined;
      deficits.push_back(r.deficit);
      REQUIRE(r.time > 0.0);
    } else {
      REQUIRE(r.outcome == PathOutcome::Survived);
      REQUIRE(r.residual_bound);
      // Lundberg bound e^{-R M} with R = 1/2.
      REQUIRE_THAT(*r.residual_bound, WithinRel(std::exp(-20.0), 1e-9));
    }
  }
  const double p = static_cast<double>(ruined) / n;
  const double se = std::sqrt(p * (1 - p) / n);
  CHECK(std::abs(p - exponential_ruin(2.0, 1.0, 1.0, u)) < 4.0 * se + std::exp(-20.0));
  // Deficit given ruin is Exponential(mu) for every u.
  CHECK(testing::kolmogorov_distance(deficits, [](double x) { return 1.0 - std::exp(-x); }) <
        1.63 / std::sqrt(static_cast<double>(deficits.size())));
}

TEST_CASE("Gamma claims: ladder and path simulation agree", "[ladder]") {
  const RiskModel model(1.0, ClaimDistribution::gamma(2.0, 0.25),
                        MixingDistribution::point_mass(1.2));
  const double u = 1.0;
  const std::size_t n = 100000;
  std::size_t ruined_path = 0;
  std::size_t ruined_ladder = 0;
  PathLimits limits;
  limits.upper_barrier = 60.0;
  for (std::uint64_t i = 0; i < n; ++i) {
    Stream a(6, i);
    if (simulate_path(model, 1.2, u, limits, a).outcome == PathOutcome::Ruined) ++ruined_path;
    Stream b(7, i);
    if (sample_ruin_ladder(model, 1.2, u, b).ruined) ++ruined_ladder;
  }
  const double p1 = static_cast<double>(ruined_path) / n;
  const double p2 = static_cast<double>(ruined_ladder) / n;
  const double se = std::sqrt(p1 * (1 - p1) / n + p2 * (1 - p2) / n);
  CHECK(std::abs(p1 - p2) < 4.0 * se);
}

TEST_CASE("Horizon censoring", "[ladder]") {
  const auto model = exponential_model(2.0, 1.0, MixingDistribution::point_mass(1.0));
  PathLimits limits;
  limits.horizon = 1e-9;
  Stream s(1, 0);
  const PathResult r = simulate_path(model, 1.0, 50.0, limits, s);
  CHECK(r.outcome == PathOutcome::Censored);
  CHECK_THROWS_AS(simulate_path(model, 1.0, 5.0, PathLimits{}, s), DomainError);
  PathLimits low;
  low.upper_barrier = 4.0;
  CHECK_THROWS_AS(simulate_path(model, 1.0, 5.0, low, s), DomainError);
}

TEST_CASE("Net-profit violations are rejected", "[ladder]") {
  const auto model = exponential_model(2.0, 1.0, MixingDistribution({{2.5, 0.5}, {1.0, 0.5}}));
  Stream s(1, 0);
  CHECK_THROWS_AS(sample_ruin_ladder(model, 2.0, 1.0, s), DomainError);
  CHECK_THROWS_AS(sample_ruin_ladder(model, 1.0, -1.0, s), DomainError);
  EstimatorOptions opts;
  opts.n = 10;
  CHECK_THROWS_AS(estimate_classical(model, 1.0, opts), NetProfitViolation);
  opts.fixed_intensity = 1.0;
  CHECK_NOTHROW(estimate_classical(model, 1.0, opts));
}

TEST_CASE("Zero intensity never ruins", "[ladder]") {
  const auto model = exponential_model(2.0, 1.0, MixingDistribution({{0.0, 0.5}, {1.0, 0.5}}));
  EstimatorOptions opts;
  opts.n = 100000;
  opts.seed = 8;
  const Estimate e = estimate_classical(model, 0.0, opts);
  CHECK(std::abs(e.mean - 0.25) < 4.0 * e.std_error);
}
