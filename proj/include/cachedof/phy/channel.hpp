#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "cachedof/core/rational.hpp"
#include "cachedof/core/scalar.hpp"

namespace cachedof::phy {

struct ChannelConfig {
  int n_rx = 1;
  int n_tx = 1;
  std::size_t slots = 1;
  ScalarMode mode = ScalarMode::ExactRational;
  std::uint64_t seed = 1;
  /// Exact mode draws p/q with p, q uniform on [1, rational_range].
  std::int64_t rational_range = 1 << 16;
};

/// Time-varying diagonal channel: h(i, j, tau) is the gain from transmitter
/// j to receiver i in slot tau (all 1-based). Every coefficient is nonzero;
/// in exact mode all coefficients are pairwise distinct.
class ChannelRealization {
 public:
  /// Draws coefficients; a degenerate draw is resampled on the next stream
  /// and counted in regenerations().
  static ChannelRealization draw(const ChannelConfig& config);
  /// Explicit coefficients in (i, j, tau) order, tau fastest. No
  /// distinctness requirement, so degenerate channels can be built.
  static ChannelRealization exact(int n_rx, int n_tx, std::size_t slots, std::vector<Rational> coefficients);
  static ChannelRealization real(int n_rx, int n_tx, std::size_t slots, std::vector<double> coefficients);

  ScalarMode mode() const { return mode_; }
  int n_rx() const { return n_rx_; }
  int n_tx() const { return n_tx_; }
  std::size_t slots() const { return slots_; }
  std::uint64_t seed() const { return seed_; }
  int regenerations() const { return regenerations_; }

  Scalar h(int rx, int tx, std::size_t tau) const;
  const Rational& h_exact(int rx, int tx, std::size_t tau) const;
  const double& h_real(int rx, int tx, std::size_t tau) const;

  template <class T>
  const T& coefficient(int rx, int tx, std::size_t tau) const;

  /// Hash of mode, dimensions and coefficient values.
  std::uint64_t fingerprint() const;

  /// Draws `count` generator values from a stream of this channel's seed
  /// that is disjoint from the coefficient streams, in the same distribution.
  std::vector<Rational> exact_generators(std::uint64_t stream, std::size_t count, std::int64_t range) const;
  std::vector<double> real_generators(std::uint64_t stream, std::size_t count) const;

 private:
  std::size_t index(int rx, int tx, std::size_t tau) const;

  ScalarMode mode_ = ScalarMode::ExactRational;
  int n_rx_ = 0;
  int n_tx_ = 0;
  std::size_t slots_ = 0;
  std::uint64_t seed_ = 0;
  int regenerations_ = 0;
  std::vector<Rational> exact_;
  std::vector<double> real_;
};

template <>
inline const Rational& ChannelRealization::coefficient<Rational>(int rx, int tx, std::size_t tau) const {
  return h_exact(rx, tx, tau);
}
template <>
inline const double& ChannelRealization::coefficient<double>(int rx, int tx, std::size_t tau) const {
  return h_real(rx, tx, tau);
}

}  // namespace cachedof::phy
