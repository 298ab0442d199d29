#ifndef RUINLAB_RNG_HPP
#define RUINLAB_RNG_HPP

#include <array>
#include <cstdint>

namespace ruinlab {

// Philox4x32-10 counter-based generator.
//
// Stream `index` of seed `seed` is the sequence of blocks
//   philox(key = (lo32(seed), hi32(seed)), counter = (lo32(k), hi32(k), lo32(index), hi32(index)))
// for k = 0, 1, 2, ... . The map (seed, index) -> (key, counter prefix) is the
// identity on bits, hence injective, and distinct streams never share a
// counter value. Each block yields two 64-bit outputs.
class Stream {
 public:
  using result_type = std::uint64_t;

  Stream(std::uint64_t seed, std::uint64_t index) noexcept : seed_(seed), index_(index) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t index() const noexcept { return index_; }
  // Number of 64-bit words drawn so far.
  std::uint64_t position() const noexcept { return 2 * block_ - (have_ ? 1 : 0); }

  std::uint64_t next_u64() noexcept;
  // Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform() noexcept {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }
  // Exponential with unit mean.
  double standard_exponential() noexcept;
  double standard_normal() noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }
  result_type operator()() noexcept { return next_u64(); }

  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;
  static Block philox4x32_10(Block counter, Key key) noexcept;

 private:
  std::uint64_t seed_;
  std::uint64_t index_;
  std::uint64_t block_ = 0;
  std::uint64_t spare_ = 0;
  bool have_ = false;
};

}  // namespace ruinlab

#endif  // RUINLAB_RNG_HPP
