#include "catch_amalgamated.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "ruinlab/errors.hpp"
#include "ruinlab/quadrature.hpp"

using namespace ruinlab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("Smooth integrands on a finite interval", "[quadrature]") {
  CHECK_THAT(integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi).value,
             WithinAbs(2.0, 1e-12));
  CHECK_THAT(integrate([](double x) { return x * x; }, -1.0, 2.0).value, WithinAbs(3.0, 1e-12));
  CHECK(integrate([](double) { return 1.0; }, 1.0, 1.0).value == 0.0);
}

TEST_CASE("Integrable endpoint singularity agrees with tanh-sinh", "[quadrature]") {
  const auto f = [](double x) { return std::pow(x, -0.5) * std::exp(-x); };
  boost::math::quadrature::tanh_sinh<double> oracle;
  const double expected = oracle.integrate(f, 0.0, 1.0);
  QuadratureOptions opts;
  opts.abs_tol = 1e-11;
  const QuadratureResult r = integrate(f, 0.0, 1.0, opts);
  CHECK_THAT(r.value, WithinAbs(expected, 1e-9));
  CHECK(r.subdivisions > 1);
}

TEST_CASE("Kinks handled through partition points", "[quadrature]") {
  const auto f = [](double x) { return std::abs(x - 0.3); };
  const std::vector<double> pts{0.0, 0.3, 1.0};
  CHECK_THAT(integrate_partition(f, pts).value, WithinAbs(0.5 * (0.09 + 0.49), 1e-13));
}

TEST_CASE("Semi-infinite integrals", "[quadrature]") {
  CHECK_THAT(integrate_to_infinity([](double x) { return std::exp(-x); }, 0.0).value,
             WithinAbs(1.0, 1e-10));
  CHECK_THAT(integrate_to_infinity([](double x) { return std::pow(1.0 + x, -2.5); }, 3.0, 4.0).value,
             WithinRel(std::pow(4.0, -1.5) / 1.5, 1e-9));
}

TEST_CASE("Relative tolerance reaches tiny magnitudes", "[quadrature]") {
  QuadratureOptions opts;
  opts.abs_tol = 0.0;
  opts.rel_tol = 1e-10;
  const double r = integrate([](double x) { return 1e-200 * x; }, 0.0, 2.0, opts).value;
  CHECK_THAT(r, WithinRel(2e-200, 1e-10));
}

TEST_CASE("Non-finite integrand values fail loudly", "[quadrature]") {
  CHECK_THROWS_AS(integrate([](double x) { return x > 0.5 ? std::nan("") : x; }, 0.0, 1.0),
                  QuadratureFailure);
}

TEST_CASE("Subdivision budget exhaustion is a quadrature failure", "[quadrature]") {
  QuadratureOptions opts;
  opts.abs_tol = 1e-15;
  opts.max_subdivisions = 4;
  CHECK_THROWS_AS(integrate([](double x) { return std::sin(1.0 / x); }, 1e-6, 1.0, opts),
                  QuadratureFailure);
}
