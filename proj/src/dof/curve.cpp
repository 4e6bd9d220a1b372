#include "cachedof/dof/curve.hpp"

#include <stdexcept>

namespace cachedof::dof {

Rational reciprocal_corner(const SystemParams& params, int kappa) {
  const int kr = params.n_rx();
  if (kappa < 0 || kappa > kr) throw std::domain_error("kappa must lie in [0, K_r]");
  const Rational groups = min(frac(kr, kappa + 1), Rational(params.n_files()));
  Rational value = (Rational(params.n_tx() - 1) + groups) / params.n_tx() * (Rational(1) - frac(kappa, kr));
  value.canonicalize();
  return value;
}

namespace {

std::vector<Point> corner_points(const SystemParams& params) {
  std::vector<Point> out;
  out.reserve(params.n_rx() + 1);
  for (int kappa = 0; kappa <= params.n_rx(); ++kappa) {
    Rational x(kappa * params.n_files(), params.n_rx());
    x.canonicalize();
    out.push_back({x, reciprocal_corner(params, kappa)});
  }
  return out;
}

}  // namespace

DofCurve::DofCurve(const SystemParams& params)
    : params_(params), corners_(corner_points(params)), envelope_(lower_convex_envelope(corners_)) {}

Rational DofCurve::dof(const Rational& m_rx) const {
  const Rational r = reciprocal(m_rx);
  if (r == 0) throw std::domain_error("DoF is unbounded at M_r = N");
  return 1 / r;
}

DofCurve dof_curve(const SystemParams& params) { return DofCurve(params); }

}  // namespace cachedof::dof
