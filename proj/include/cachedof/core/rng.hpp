#pragma once

#include <cstdint>
#include <limits>

namespace cachedof {

/// Counter-based generator: the n-th output is a pure function of
/// (key, n), so independent streams can be split off by index and trial t
/// is reproducible regardless of evaluation order.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return next(); }
  result_type next();

  /// Uniform on [lo, hi], unbiased.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
  /// Uniform on [lo, hi).
  double uniform_real(double lo, double hi);

  /// Independent child stream; does not advance this generator.
  CounterRng split(std::uint64_t stream) const;

  std::uint64_t key() const { return key_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t x);

}  // namespace cachedof
