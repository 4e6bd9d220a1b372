#pragma once

#include <vector>

#include "cachedof/core/params.hpp"
#include "cachedof/core/piecewise_linear.hpp"

namespace cachedof::dof {

/// Optimal per-message DoF of the symmetric multiple multicast X-channel:
/// 1 / (K_t*C(K_r-1, sigma-1) + C(K_r-1, sigma)).
Rational phy_dof_optimal(int k_tx, int k_rx, int sigma);

/// Sum DoF over all K_t*C(K_r, sigma) messages: K_t*K_r / ((K_t-1)*sigma + K_r).
Rational phy_sum_dof(int k_tx, int k_rx, int sigma);

/// Per-message DoF of the compound X-channel used by the file-partition
/// interface with `distinct_files` demand groups: 1/(K_t + groups - 1).
Rational compound_dof(int k_tx, int distinct_files);

/// One cut-set term s*(1 - M_r/floor(N/s)) / min{s, K_t}, clamped below at 0.
Rational cutset_term(const SystemParams& params, int s);

/// Lower bound on 1/DoF: the max of cutset_term over s = 1..min{K_r, N}.
Rational cutset_bound(const SystemParams& params);

/// The same bound as a convex piecewise-linear function of M_r on [0, N]
/// (upper envelope of the cut-set lines and zero).
PiecewiseLinear cutset_curve(int n_files, int n_tx, int n_rx);

}  // namespace cachedof::dof
