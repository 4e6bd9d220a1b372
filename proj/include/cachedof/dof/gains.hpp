#pragma once

#include <optional>

#include "cachedof/core/params.hpp"

namespace cachedof::dof {

enum class GainRegime {
  /// K_r/(kappa+1) <= N: the three-factor multicast decomposition.
  Multicast,
  /// File-partition interface (few files): no global caching gain.
  FilePartition,
};

/// Factorisation of the approximate sum DoF into the interference
/// alignment, local caching and global caching gains. g_lc and sum_dof are
/// empty when M_r = N, where both diverge; `reciprocal` (1/d) stays finite.
struct GainBreakdown {
  GainRegime regime = GainRegime::Multicast;
  Rational g_ia;
  std::optional<Rational> g_lc;
  Rational g_gc;
  std::optional<Rational> sum_dof;
  Rational reciprocal;
};

/// Three-factor decomposition at M_r = kappa*N/K_r. Requires
/// K_r/(kappa+1) <= N; otherwise file_partition_gains applies.
GainBreakdown gain_decomposition(const SystemParams& params, int kappa);

/// Two-factor decomposition of the file-partition interface at the params'
/// M_r. The sum DoF counted here is min{K_r, N} * DoF; g_gc is fixed to 1.
GainBreakdown file_partition_gains(const SystemParams& params);

/// Whether gain_decomposition accepts (params, kappa).
bool multicast_regime(const SystemParams& params, int kappa);

}  // namespace cachedof::dof
