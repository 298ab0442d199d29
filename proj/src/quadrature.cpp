#include "ruinlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "ruinlab/errors.hpp"

namespace ruinlab {

namespace {

// Kronrod abscissae (descending), Kronrod weights, and Gauss weights of the
// embedded 7-point rule, which uses the odd-indexed abscissae.
constexpr double kNodes[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kKronrod[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kGauss[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a;
  double b;
  double value;
  double error;
  double abs_value;
};

struct WorseFirst {
  bool operator()(const Panel& x, const Panel& y) const { return x.error < y.error; }
};

double checked(const Integrand& f, double x) {
  const double y = f(x);
  if (!std::isfinite(y)) {
    throw QuadratureFailure("integrand is not finite at x = " + std::to_string(x));
  }
  return y;
}

Panel kronrod15(const Integrand& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = checked(f, center);
  double kronrod = fc * kKronrod[7];
  double gauss = fc * kGauss[3];
  double abs_sum = std::abs(kronrod);
  double f1[7];
  double f2[7];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kNodes[j];
    f1[j] = checked(f, center - dx);
    f2[j] = checked(f, center + dx);
    const double pair = f1[j] + f2[j];
    kronrod += kKronrod[j] * pair;
    abs_sum += kKronrod[j] * (std::abs(f1[j]) + std::abs(f2[j]));
    if (j % 2 == 1) gauss += kGauss[j / 2] * pair;
  }
  // QUADPACK's error heuristic.
  const double mean = 0.5 * kronrod;
  double asc = kKronrod[7] * std::abs(fc - mean);
  for (int j = 0; j < 7; ++j) {
    asc += kKronrod[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
  }
  asc *= std::abs(half);
  double err = std::abs((kronrod - gauss) * half);
  if (asc != 0.0 && err != 0.0) {
    err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
  }
  const double abs_value = abs_sum * std::abs(half);
  const double floor = 50.0 * std::numeric_limits<double>::epsilon() * abs_value;
  if (abs_value > std::numeric_limits<double>::min() / (50.0 * std::numeric_limits<double>::epsilon())) {
    err = std::max(err, floor);
  }
  return {a, b, kronrod * half, err, abs_value};
}

QuadratureResult adapt(const Integrand& f, std::span<const double> points,
                       const QuadratureOptions& options) {
  if (points.size() < 2) throw DomainError("quadrature needs at least one interval");
  std::priority_queue<Panel, std::vector<Panel>, WorseFirst> heap;
  double value = 0.0;
  double error = 0.0;
  double abs_value = 0.0;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    if (!(points[i] < points[i + 1])) {
      if (points[i] == points[i + 1]) continue;
      throw DomainError("quadrature partition must be increasing");
    }
    Panel p = kronrod15(f, points[i], points[i + 1]);
    value += p.value;
    error += p.error;
    abs_value += p.abs_value;
    heap.push(p);
  }
  std::size_t splits = 0;
  const double eps = std::numeric_limits<double>::epsilon();
  while (!heap.empty()) {
    const double target = std::max(options.abs_tol, options.rel_tol * std::abs(value));
    if (error <= target || error <= 100.0 * eps * abs_value) break;
    if (splits >= options.max_subdivisions) {
      throw QuadratureFailure("tolerance " + std::to_string(target) + " not reached after " +
                              std::to_string(splits) + " subdivisions (error " +
                              std::to_string(error) + ")");
    }
    Panel worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(worst.a < mid && mid < worst.b)) {
      throw QuadratureFailure("interval collapsed to machine resolution near x = " +
                              std::to_string(mid));
    }
    heap.pop();
    Panel left = kronrod15(f, worst.a, mid);
    Panel right = kronrod15(f, mid, worst.b);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    abs_value += left.abs_value + right.abs_value - worst.abs_value;
    heap.push(left);
    heap.push(right);
    ++splits;
  }
  // Resum to remove drift from the incremental updates.
  value = 0.0;
  error = 0.0;
  while (!heap.empty()) {
    value += heap.top().value;
    error += heap.top().error;
    heap.pop();
  }
  return {value, error, splits};
}

}  // namespace

QuadratureResult integrate(const Integrand& f, double a, double b,
                           const QuadratureOptions& options) {
  if (a == b) return {};
  if (a > b) {
    QuadratureResult r = integrate(f, b, a, options);
    r.value = -r.value;
    return r;
  }
  const double points[2] = {a, b};
  return adapt(f, points, options);
}

QuadratureResult integrate_partition(const Integrand& f, std::span<const double> points,
                                     const QuadratureOptions& options) {
  return adapt(f, points, options);
}

QuadratureResult integrate_to_infinity(const Integrand& f, double a, double scale,
                                       const QuadratureOptions& options) {
  if (!(scale > 0.0)) throw DomainError("integrate_to_infinity: scale must be positive");
  const Integrand g = [&](double t) {
    const double s = 1.0 - t;
    const double x = a + scale * t / s;
    if (!std::isfinite(x)) return 0.0;
    const double y = f(x);
    return y == 0.0 ? 0.0 : y * scale / (s * s);
  };
  // Split [0, 1) so the slowly decaying far tail gets its own panels.
  const double points[] = {0.0, 0.5, 0.75, 0.9, 0.97, 0.99, 1.0};
  return adapt(g, points, options);
}

}  // namespace ruinlab
