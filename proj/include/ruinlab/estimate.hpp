#ifndef RUINLAB_ESTIMATE_HPP
#define RUINLAB_ESTIMATE_HPP

#include <cstdint>
#include <exception>
#include <functional>
#include <utility>
#include <vector>

#include "ruinlab/rng.hpp"

namespace ruinlab {

// Replications [first, first + count) of an estimator ran on stream `stream_index` of `seed`.
struct StreamBlock {
  std::uint64_t seed;
  std::uint64_t stream_index;
  std::uint64_t count;
};

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t n = 0;
  std::vector<StreamBlock> streams;
};

// Pools two estimates of the same quantity as if their replications had
// been accumulated together.
Estimate merge(const Estimate& a, const Estimate& b);

// Running first and second moments of paired scores (x, y) in Chan's
// mergeable form. Merging is deterministic for a fixed fold order.
class PairedMoments {
 public:
  void add(double x, double y) noexcept;
  void merge(const PairedMoments& other) noexcept;

  std::uint64_t count() const noexcept { return n_; }
  double mean_x() const noexcept { return mean_x_; }
  double mean_y() const noexcept { return mean_y_; }
  // Sample (n - 1) variances and covariance.
  double variance_x() const noexcept;
  double variance_y() const noexcept;
  double covariance() const noexcept;

 private:
  std::uint64_t n_ = 0;
  double mean_x_ = 0.0;
  double mean_y_ = 0.0;
  double m2_x_ = 0.0;
  double m2_y_ = 0.0;
  double c_xy_ = 0.0;
};

// Modified and classical estimates from common random numbers, plus the
// ratio modified / classical with a delta-method standard error.
struct PairedEstimate {
  Estimate modified;
  Estimate classical;
  double ratio = 0.0;
  double ratio_std_error = 0.0;
};

PairedEstimate make_paired_estimate(const PairedMoments& m, std::vector<StreamBlock> streams);

// Replications are cut into blocks of this size; block j runs on stream
// (stream_base + j). The partition does not depend on the worker count.
inline constexpr std::uint64_t kBlockSize = 1u << 14;

struct RunPlan {
  std::uint64_t n = 1;
  std::uint64_t seed = 0;
  std::uint64_t stream_base = 0;
  unsigned workers = 1;
};

// A replication kernel returns the (modified, classical) scores of one draw.
using PairKernel = std::function<std::pair<double, double>(Stream&)>;

// Runs `kernel` n times over the block plan, possibly on several threads,
// and folds block partials in block order.
PairedMoments run_blocks(const RunPlan& plan, const PairKernel& kernel,
                         std::vector<StreamBlock>* streams = nullptr);

}  // namespace ruinlab

#endif  // RUINLAB_ESTIMATE_HPP
