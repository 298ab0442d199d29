#ifndef RUINLAB_QUADRATURE_HPP
#define RUINLAB_QUADRATURE_HPP

#include <cstddef>
#include <functional>
#include <span>

namespace ruinlab {

struct QuadratureOptions {
  double abs_tol = 1e-10;
  double rel_tol = 0.0;
  std::size_t max_subdivisions = std::size_t{1} << 15;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  std::size_t subdivisions = 0;
};

using Integrand = std::function<double(double)>;

// Globally adaptive Gauss-Kronrod (7/15) quadrature on [a, b]. Intervals are
// bisected worst-first until the summed error estimate drops below
// max(abs_tol, rel_tol * |I|). Throws QuadratureFailure when
// max_subdivisions is exhausted or the integrand produces a non-finite value.
QuadratureResult integrate(const Integrand& f, double a, double b,
                           const QuadratureOptions& options = {});

// Same, with the initial partition given by the sorted points
// a = p[0] < p[1] < ... < p[n-1] = b. Discontinuities of f belong here.
QuadratureResult integrate_partition(const Integrand& f, std::span<const double> points,
                                     const QuadratureOptions& options = {});

// Integral over [a, inf) via x = a + scale * t / (1 - t).
QuadratureResult integrate_to_infinity(const Integrand& f, double a, double scale = 1.0,
                                       const QuadratureOptions& options = {});

}  // namespace ruinlab

#endif  // RUINLAB_QUADRATURE_HPP
