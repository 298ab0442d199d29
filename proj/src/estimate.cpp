#include "ruinlab/estimate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

#include "ruinlab/errors.hpp"

namespace ruinlab {

void PairedMoments::add(double x, double y) noexcept {
  ++n_;
  const double n = static_cast<double>(n_);
  const double dx = x - mean_x_;
  const double dy = y - mean_y_;
  mean_x_ += dx / n;
  mean_y_ += dy / n;
  m2_x_ += dx * (x - mean_x_);
  m2_y_ += dy * (y - mean_y_);
  c_xy_ += dx * (y - mean_y_);
}

void PairedMoments::merge(const PairedMoments& o) noexcept {
  if (o.n_ == 0) return;
  if (n_ == 0) {
    *this = o;
    return;
  }
  const double na = static_cast<double>(n_);
  const double nb = static_cast<double>(o.n_);
  const double n = na + nb;
  const double dx = o.mean_x_ - mean_x_;
  const double dy = o.mean_y_ - mean_y_;
  mean_x_ += dx * nb / n;
  mean_y_ += dy * nb / n;
  m2_x_ += o.m2_x_ + dx * dx * na * nb / n;
  m2_y_ += o.m2_y_ + dy * dy * na * nb / n;
  c_xy_ += o.c_xy_ + dx * dy * na * nb / n;
  n_ += o.n_;
}

double PairedMoments::variance_x() const noexcept {
  return n_ > 1 ? m2_x_ / static_cast<double>(n_ - 1) : 0.0;
}
double PairedMoments::variance_y() const noexcept {
  return n_ > 1 ? m2_y_ / static_cast<double>(n_ - 1) : 0.0;
}
double PairedMoments::covariance() const noexcept {
  return n_ > 1 ? c_xy_ / static_cast<double>(n_ - 1) : 0.0;
}

Estimate merge(const Estimate& a, const Estimate& b) {
  if (a.n == 0) return b;
  if (b.n == 0) return a;
  auto sums = [](const Estimate& e) {
    const double n = static_cast<double>(e.n);
    const double var = e.std_error * e.std_error * n;
    return std::pair{e.mean * n, var * (n - 1.0) + e.mean * e.mean * n};
  };
  const auto [sa, qa] = sums(a);
  const auto [sb, qb] = sums(b);
  Estimate out;
  out.n = a.n + b.n;
  const double n = static_cast<double>(out.n);
  out.mean = (sa + sb) / n;
  const double var = std::max(0.0, (qa + qb - n * out.mean * out.mean) / (n - 1.0));
  out.std_error = std::sqrt(var / n);
  out.streams = a.streams;
  out.streams.insert(out.streams.end(), b.streams.begin(), b.streams.end());
  return out;
}

PairedEstimate make_paired_estimate(const PairedMoments& m, std::vector<StreamBlock> streams) {
  PairedEstimate out;
  const double n = static_cast<double>(std::max<std::uint64_t>(m.count(), 1));
  out.modified = Estimate{m.mean_x(), std::sqrt(m.variance_x() / n), m.count(), streams};
  out.classical = Estimate{m.mean_y(), std::sqrt(m.variance_y() / n), m.count(), std::move(streams)};
  if (m.mean_y() > 0.0) {
    const double r = m.mean_x() / m.mean_y();
    out.ratio = r;
    const double v = m.variance_x() - 2.0 * r * m.covariance() + r * r * m.variance_y();
    out.ratio_std_error = std::sqrt(std::max(0.0, v) / n) / m.mean_y();
  }
  return out;
}

PairedMoments run_blocks(const RunPlan& plan, const PairKernel& kernel,
                         std::vector<StreamBlock>* streams) {
  if (plan.n == 0) throw DomainError("replication count must be at least 1");
  const std::uint64_t blocks = (plan.n + kBlockSize - 1) / kBlockSize;
  std::vector<PairedMoments> partial(blocks);
  auto block_count = [&](std::uint64_t j) { return std::min(kBlockSize, plan.n - j * kBlockSize); };
  auto run_block = [&](std::uint64_t j) {
    Stream stream(plan.seed, plan.stream_base + j);
    PairedMoments m;
    const std::uint64_t count = block_count(j);
    for (std::uint64_t i = 0; i < count; ++i) {
      const auto [x, y] = kernel(stream);
      m.add(x, y);
    }
    partial[j] = m;
  };

  const unsigned workers =
      static_cast<unsigned>(std::clamp<std::uint64_t>(plan.workers, 1, blocks));
  if (workers == 1) {
    for (std::uint64_t j = 0; j < blocks; ++j) run_block(j);
  } else {
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::uint64_t j = next++; j < blocks; j = next++) {
          try {
            run_block(j);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next = blocks;
          }
        }
      });
    }
    pool.clear();
    if (failure) std::rethrow_exception(failure);
  }

  PairedMoments total;
  for (const auto& m : partial) total.merge(m);
  if (streams) {
    for (std::uint64_t j = 0; j < blocks; ++j) {
      streams->push_back({plan.seed, plan.stream_base + j, block_count(j)});
    }
  }
  return total;
}

}  // namespace ruinlab
