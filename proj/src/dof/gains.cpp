#include "cachedof/dof/gains.hpp"

#include <algorithm>
#include <stdexcept>

#include "cachedof/dof/curve.hpp"

namespace cachedof::dof {

bool multicast_regime(const SystemParams& params, int kappa) {
  return frac(params.n_rx(), kappa + 1) <= params.n_files();
}

GainBreakdown gain_decomposition(const SystemParams& params, int kappa) {
  const int kt = params.n_tx();
  const int kr = params.n_rx();
  if (kappa < 0 || kappa > kr) throw std::domain_error("kappa must lie in [0, K_r]");
  if (!multicast_regime(params, kappa))
    throw std::domain_error("K_r/(kappa+1) > N: file-partition regime, use file_partition_gains");

  GainBreakdown g;
  g.regime = GainRegime::Multicast;
  g.g_ia = frac(kt * kr, kt + kr - 1);
  g.g_ia.canonicalize();

  const Rational fraction = frac(kappa, kr);  // M_r / N
  // (1/K_r + 1/(K_t-1))^-1, which vanishes for a single transmitter.
  Rational harmonic = kt == 1 ? Rational(0) : frac(kr * (kt - 1), kt - 1 + kr);
  harmonic.canonicalize();
  g.g_gc = (kr * fraction + 1) / (fraction * harmonic + 1);
  g.g_gc.canonicalize();

  g.reciprocal = reciprocal_corner(params, kappa);
  if (kappa < kr) {
    Rational lc = 1 / (1 - fraction);
    lc.canonicalize();
    g.g_lc = lc;
    Rational total = g.g_ia * lc * g.g_gc;
    total.canonicalize();
    g.sum_dof = total;
  }
  return g;
}

GainBreakdown file_partition_gains(const SystemParams& params) {
  const int kt = params.n_tx();
  const int groups = std::min(params.n_rx(), params.n_files());
  GainBreakdown g;
  g.regime = GainRegime::FilePartition;
  g.g_ia = frac(kt * groups, kt + groups - 1);
  g.g_ia.canonicalize();
  g.g_gc = 1;
  const Rational fraction = params.m_rx() / params.n_files();
  g.reciprocal = frac(kt + groups - 1, kt) * (1 - fraction);
  g.reciprocal.canonicalize();
  if (fraction < 1) {
    Rational lc = 1 / (1 - fraction);
    lc.canonicalize();
    g.g_lc = lc;
    Rational total = g.g_ia * lc;
    total.canonicalize();
    g.sum_dof = total;
  }
  return g;
}

}  // namespace cachedof::dof
