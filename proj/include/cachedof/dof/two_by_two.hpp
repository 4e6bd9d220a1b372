#pragma once

#include "cachedof/core/piecewise_linear.hpp"
#include "cachedof/core/rational.hpp"

namespace cachedof::dof {

/// Reciprocal DoF of the interference-extraction scheme for K_t = K_r = N = 2,
/// M_t = 1: max{3/2 - 3/2 M_r, 9/7 - 6/7 M_r, 1 - M_r/2}.
Rational dof_2x2_curve(const Rational& m_rx);

/// Reciprocal DoF of the separated multicast scheme on the same network:
/// max{3/2 - M_r, 1 - M_r/2}.
Rational dof_2x2_baseline(const Rational& m_rx);

/// Cut-set reciprocal bound for the 2x2 network: 1 - M_r/2.
Rational dof_2x2_cutset(const Rational& m_rx);

/// Lower bound on the sum network load of the extraction architecture:
/// max{2 - 2M_r, 12/7 - 8/7 M_r, 4/3 - 2/3 M_r}.
Rational net2x2_lower_bound(const Rational& m_rx);

struct ImprovementPeak {
  Rational ratio;
  Rational argmax_m_rx;  // smallest maximiser
};

/// max over M_r in [0, 2) of baseline / extraction curve. Both curves are
/// piecewise linear, so the ratio is monotone between consecutive
/// breakpoints and the maximum sits on one of them.
ImprovementPeak improvement_2x2();

}  // namespace cachedof::dof
