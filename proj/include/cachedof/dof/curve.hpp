#pragma once

#include <vector>

#include "cachedof/core/params.hpp"
#include "cachedof/core/piecewise_linear.hpp"

namespace cachedof::dof {

/// Achievable reciprocal DoF at the integer point M_r = kappa*N/K_r:
///
///   (K_t - 1 + min{K_r/(kappa+1), N}) / K_t * (1 - kappa/K_r)
///
/// The min with N folds in the file-partition interface used when few
/// distinct files can be requested. Zero at kappa = K_r.
Rational reciprocal_corner(const SystemParams& params, int kappa);

/// Reciprocal DoF curve 1/d as a function of M_r in [0, N]; M_t and the
/// params' own M_r are ignored.
class DofCurve {
 public:
  explicit DofCurve(const SystemParams& params);

  const SystemParams& params() const { return params_; }
  /// (kappa*N/K_r, reciprocal_corner(kappa)) for kappa = 0..K_r.
  const std::vector<Point>& corners() const { return corners_; }
  const PiecewiseLinear& envelope() const { return envelope_; }

  /// Envelope value 1/d(M_r).
  Rational reciprocal(const Rational& m_rx) const { return envelope_(m_rx); }
  /// d(M_r); M_r must be below N (d is unbounded at M_r = N).
  Rational dof(const Rational& m_rx) const;

 private:
  SystemParams params_;
  std::vector<Point> corners_;
  PiecewiseLinear envelope_;
};

DofCurve dof_curve(const SystemParams& params);

}  // namespace cachedof::dof
