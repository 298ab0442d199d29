#include "catch_amalgamated.hpp"

#include <cmath>
#include <vector>

#include "ruinlab/estimate.hpp"
#include "ruinlab/rng.hpp"

using namespace ruinlab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

struct Direct {
  double mx, my, vx, vy, cxy;
};

Direct two_pass(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  return {mx, my, sxx / (n - 1.0), syy / (n - 1.0), sxy / (n - 1.0)};
}

}  // namespace

TEST_CASE("merged moments agree with a two-pass computation", "[estimate]") {
  Stream s(3, 0);
  std::vector<double> x, y;
  for (int i = 0; i < 5000; ++i) {
    const double a = 1e6 + s.uniform();
    x.push_back(a);
    y.push_back(a * a * 1e-6 + s.uniform());
  }
  const Direct d = two_pass(x, y);

  // Uneven split points, including an empty and a single-element part.
  const std::vector<std::size_t> cuts{0, 0, 1, 777, 2500, 4999, 5000};
  PairedMoments total;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    PairedMoments part;
    for (std::size_t i = cuts[k]; i < cuts[k + 1]; ++i) part.add(x[i], y[i]);
    total.merge(part);
  }
  REQUIRE(total.count() == 5000);
  CHECK_THAT(total.mean_x(), WithinRel(d.mx, 1e-14));
  CHECK_THAT(total.mean_y(), WithinRel(d.my, 1e-14));
  CHECK_THAT(total.variance_x(), WithinRel(d.vx, 1e-8));
  CHECK_THAT(total.variance_y(), WithinRel(d.vy, 1e-8));
  CHECK_THAT(total.covariance(), WithinRel(d.cxy, 1e-8));
}

TEST_CASE("merging estimates matches pooling the replications", "[estimate]") {
  Stream s(9, 1);
  std::vector<double> a, b, all;
  for (int i = 0; i < 300; ++i) a.push_back(s.uniform() < 0.2 ? 1.0 : 0.0);
  for (int i = 0; i < 700; ++i) b.push_back(s.standard_exponential());
  all = a;
  all.insert(all.end(), b.begin(), b.end());

  auto summarise = [](const std::vector<double>& v, std::uint64_t stream) {
    const Direct d = two_pass(v, v);
    const double n = static_cast<double>(v.size());
    return Estimate{d.mx, std::sqrt(d.vx / n), v.size(), {{1, stream, v.size()}}};
  };
  const Estimate merged = merge(summarise(a, 0), summarise(b, 1));
  const Estimate pooled = summarise(all, 0);
  CHECK(merged.n == 1000);
  CHECK_THAT(merged.mean, WithinRel(pooled.mean, 1e-13));
  CHECK_THAT(merged.std_error, WithinRel(pooled.std_error, 1e-10));
  REQUIRE(merged.streams.size() == 2);
  CHECK(merged.streams[1].stream_index == 1);

  CHECK(merge(Estimate{}, pooled).mean == pooled.mean);
}

TEST_CASE("paired estimate ratio and delta-method error", "[estimate]") {
  PairedMoments m;
  m.add(1.0, 2.0);
  m.add(3.0, 2.0);
  m.add(2.0, 4.0);
  m.add(2.0, 4.0);
  const PairedEstimate p = make_paired_estimate(m, {});
  CHECK_THAT(p.ratio, WithinAbs(8.0 / 12.0, 1e-15));
  // var_x = 2/3, var_y = 4/3, cov = 0; se = sqrt((2/3 + r^2 4/3) / 4) / 3.
  const double r = 2.0 / 3.0;
  CHECK_THAT(p.ratio_std_error, WithinRel(std::sqrt((2.0 / 3.0 + r * r * 4.0 / 3.0) / 4.0) / 3.0, 1e-14));
  CHECK_THAT(p.modified.std_error, WithinRel(std::sqrt(2.0 / 3.0 / 4.0), 1e-14));
}

TEST_CASE("run_blocks rejects an empty plan", "[estimate]") {
  RunPlan plan;
  plan.n = 0;
  CHECK_THROWS(run_blocks(plan, [](Stream&) { return std::pair{0.0, 0.0}; }));
}
