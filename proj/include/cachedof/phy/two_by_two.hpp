#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "cachedof/core/matrix.hpp"
#include "cachedof/core/rational.hpp"
#include "cachedof/phy/alignment.hpp"
#include "cachedof/phy/channel.hpp"

namespace cachedof::phy {

/// Three-slot extraction scheme for two transmitters and two receivers.
/// Receiver 1 sees its own messages on two dimensions and v_21 + v_22
/// aligned on the third; receiver 2 symmetrically.
template <class T>
struct Directions2x2 {
  std::vector<T> a11, a12, a21, a22;
  /// psi[0] = [H_11 a_11, H_12 a_12, H_11 a_21]; psi[1] = [H_21 a_21, H_22 a_22, H_21 a_11].
  std::array<Dense<T>, 2> psi;
};

struct Plan2x2 {
  ScalarMode mode;
  std::uint64_t channel_fingerprint;
  Directions2x2<Rational> exact;
  Directions2x2<double> real;

  template <class T>
  const Directions2x2<T>& directions() const;
};

/// a_11 = [1,1,0], a_21 = [1,0,1], a_12 = H_22^{-1} H_21 a_11,
/// a_22 = H_12^{-1} H_11 a_21. Needs a 2x2 channel with at least 3 slots.
Plan2x2 build_plan_2x2(const ChannelRealization& channel);

DecodabilityCertificate certify_2x2(const Plan2x2& plan, int receiver, double tol = 1e-8);

/// One symbol per message; returns y_1 and y_2 over the three slots.
template <class T>
std::array<std::vector<T>, 2> transmit_2x2(const Plan2x2& plan, const ChannelRealization& channel, const T& v11,
                                           const T& v12, const T& v21, const T& v22);

/// Receiver 1 returns (v_11, v_12, v_21 + v_22); receiver 2 returns
/// (v_21, v_22, v_11 + v_12).
template <class T>
std::array<T, 3> decode_2x2(const Plan2x2& plan, int receiver, const std::vector<T>& observation);

}  // namespace cachedof::phy
