#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "cachedof/dof/bounds.hpp"
#include "cachedof/dof/curve.hpp"
#include "cachedof/dof/gains.hpp"
#include "cachedof/dof/gap_scan.hpp"
#include "cachedof/dof/two_by_two.hpp"

using namespace cachedof;
using namespace cachedof::dof;

namespace {

// Corner value rebuilt from its two interfaces: multicast pipes
// (load (K_r-k)/(k+1) over K_t*C(K_r,k+1) links at the optimal phy DoF)
// and the file-partition interface; the better of the two wins.
Rational corner_oracle(int n, int kt, int kr, int kappa) {
  if (kappa == kr) return 0;
  const Rational load = frac(kr - kappa, kappa + 1);
  const Rational dims = Rational(kt * binomial(kr - 1, kappa) + binomial(kr - 1, kappa + 1));
  const Rational links = Rational(kt * binomial(kr, kappa + 1));
  Rational multicast = load * dims / links;
  Rational partition = frac(kt + std::min(kr, n) - 1, kt) * (1 - frac(kappa, kr));
  return std::min(multicast, partition);
}

}  // namespace

TEST_CASE("reciprocal_corner examples") {
  CHECK(reciprocal_corner(SystemParams(4, 2, 4, 0), 0) == frac(5, 2));
  CHECK(reciprocal_corner(SystemParams(2, 2, 2, 0), 0) == frac(3, 2));
  CHECK(reciprocal_corner(SystemParams(7, 3, 5, 0), 5) == 0);
  CHECK_THROWS_AS(reciprocal_corner(SystemParams(4, 2, 4, 0), 5), std::domain_error);
  CHECK_THROWS_AS(reciprocal_corner(SystemParams(4, 2, 4, 0), -1), std::domain_error);
}

TEST_CASE("reciprocal_corner agrees with the two-interface oracle") {
  for (int n = 1; n <= 9; ++n)
    for (int kt = 1; kt <= 6; ++kt)
      for (int kr = 1; kr <= 9; ++kr)
        for (int kappa = 0; kappa <= kr; ++kappa)
          CHECK(reciprocal_corner(SystemParams(n, kt, kr, 0), kappa) == corner_oracle(n, kt, kr, kappa));
}

TEST_CASE("dof_curve for the 2x4 network with four files") {
  const DofCurve c(SystemParams(4, 2, 4, 0));
  CHECK(c.reciprocal(1) == frac(9, 8));
  CHECK(c.reciprocal(frac(1, 2)) == frac(29, 16));
  CHECK(c.reciprocal(4) == 0);
  CHECK(c.dof(1) == frac(8, 9));
  CHECK_THROWS_AS(c.dof(4), std::domain_error);
  CHECK(c.envelope().breakpoints().size() == 5);
}

TEST_CASE("dof_curve is convex, non-increasing and zero at N") {
  for (int n = 1; n <= 8; ++n)
    for (int kt = 1; kt <= 5; ++kt)
      for (int kr = 1; kr <= 8; ++kr) {
        const DofCurve c(SystemParams(n, kt, kr, 0));
        CHECK(c.envelope().is_convex());
        CHECK(c.envelope().is_non_increasing());
        CHECK(c.reciprocal(n) == 0);
        for (const auto& p : c.corners()) CHECK(c.reciprocal(p.x) <= p.y);
      }
}

TEST_CASE("gain decomposition example") {
  const auto g = gain_decomposition(SystemParams(4, 2, 4, 0), 1);
  CHECK(g.g_ia == frac(8, 5));
  REQUIRE(g.g_lc);
  CHECK(*g.g_lc == frac(4, 3));
  CHECK(g.g_gc == frac(5, 3));
  REQUIRE(g.sum_dof);
  CHECK(*g.sum_dof == frac(32, 9));
  CHECK(Rational(4) / frac(9, 8) == *g.sum_dof);
}

TEST_CASE("no caching gains without receiver memory") {
  for (int kt = 1; kt <= 5; ++kt)
    for (int kr = 1; kr <= 6; ++kr) {
      const auto g = gain_decomposition(SystemParams(kr, kt, kr, 0), 0);
      CHECK(*g.g_lc == 1);
      CHECK(g.g_gc == 1);
      CHECK(*g.sum_dof == g.g_ia);
    }
}

TEST_CASE("many transmitters: sum DoF approaches K_r/(1 - M_r/N)") {
  const auto g = gain_decomposition(SystemParams(4, 1000000, 4, 0), 1);
  CHECK(std::abs(to_double(*g.sum_dof) - 16.0 / 3.0) < 1e-4);
  CHECK(std::abs(to_double(g.g_gc) - 1.0) < 1e-5);
}

TEST_CASE("gain product times reciprocal corner equals K_r") {
  for (int n = 1; n <= 8; ++n)
    for (int kt = 1; kt <= 6; ++kt)
      for (int kr = 1; kr <= 8; ++kr)
        for (int kappa = 0; kappa < kr; ++kappa) {
          const SystemParams p(n, kt, kr, 0);
          if (!multicast_regime(p, kappa)) {
            CHECK_THROWS_AS(gain_decomposition(p, kappa), std::domain_error);
            continue;
          }
          const auto g = gain_decomposition(p, kappa);
          CHECK(g.g_ia * *g.g_lc * g.g_gc * reciprocal_corner(p, kappa) == kr);
        }
}

TEST_CASE("kappa = K_r: local gain diverges, reciprocal is zero") {
  const auto g = gain_decomposition(SystemParams(4, 2, 4, 0), 4);
  CHECK_FALSE(g.g_lc);
  CHECK_FALSE(g.sum_dof);
  CHECK(g.reciprocal == 0);
}

TEST_CASE("file-partition gains") {
  const auto single = file_partition_gains(SystemParams(1, 1, 100, 0));
  CHECK(single.g_ia == 1);
  CHECK(*single.sum_dof == 1);
  CHECK(single.reciprocal == 1);
  const auto two = file_partition_gains(SystemParams(2, 2, 5, 0));
  CHECK(two.g_ia == frac(4, 3));
  CHECK(two.g_gc == 1);
  const auto full = file_partition_gains(SystemParams(2, 2, 5, 2));
  CHECK_FALSE(full.g_lc);
  CHECK(full.reciprocal == 0);
  const auto half = file_partition_gains(SystemParams(2, 2, 5, 1));
  CHECK(*half.sum_dof * half.reciprocal == 2);
}

TEST_CASE("physical-layer DoF") {
  CHECK(phy_dof_optimal(2, 2, 1) == frac(1, 3));
  CHECK(phy_sum_dof(3, 5, 5) == 1);
  CHECK(phy_sum_dof(2, 4, 2) == frac(4, 3));
  CHECK_THROWS_AS(phy_dof_optimal(2, 2, 0), std::domain_error);
  CHECK_THROWS_AS(phy_dof_optimal(2, 2, 3), std::domain_error);
  for (int kt = 1; kt <= 5; ++kt)
    for (int kr = 1; kr <= 7; ++kr)
      for (int sigma = 1; sigma <= kr; ++sigma)
        CHECK(phy_dof_optimal(kt, kr, sigma) * Rational(kt * binomial(kr, sigma)) == phy_sum_dof(kt, kr, sigma));
  CHECK(compound_dof(3, 2) == frac(1, 4));
}

TEST_CASE("cut-set bound examples") {
  const SystemParams p(4, 2, 4, 1);
  CHECK(cutset_term(p, 1) == frac(3, 4));
  CHECK(cutset_term(p, 2) == frac(1, 2));
  CHECK(cutset_term(p, 3) == 0);
  CHECK(cutset_term(p, 4) == 0);
  CHECK(cutset_bound(p) == frac(3, 4));
  for (int k = 0; k <= 20; ++k) {
    const Rational m = frac(k, 10);
    CHECK(cutset_bound(SystemParams(2, 2, 2, m)) == 1 - m / 2);
  }
  for (int n = 1; n <= 6; ++n)
    for (int kr = 1; kr <= 6; ++kr)
      for (int kt = std::min(kr, n); kt <= 7; ++kt) CHECK(cutset_bound(SystemParams(n, kt, kr, 0)) == 1);
}

TEST_CASE("cut-set curve matches the direct maximum and dominates the s=1 term") {
  for (int n = 1; n <= 12; ++n)
    for (int kt = 1; kt <= 6; ++kt)
      for (int kr = 1; kr <= 12; kr += 1) {
        const auto curve = cutset_curve(n, kt, kr);
        CHECK(curve.is_convex());
        for (int k = 0; k <= 48; ++k) {
          const Rational m = frac(n * k, 48);
          const SystemParams p(n, kt, kr, m);
          const Rational direct = cutset_bound(p);
          CHECK(curve(m) == direct);
          CHECK(direct >= 1 - m / n);
        }
      }
}

TEST_CASE("gap at a single point") {
  CHECK(gap_ratio({4, 2, 4}, 1) == frac(3, 2));
  CHECK_THROWS_AS(gap_ratio({4, 2, 4}, 4), std::domain_error);
}

TEST_CASE("small gap scan stays within the gap bound") {
  const auto report = gap_scan(grid_tuples(4, 4, 4));
  CHECK(report.tuples == 64);
  CHECK(report.violations == 0);
  CHECK(report.max_ratio >= 1);
  CHECK(report.max_ratio <= kGapBound);
  CHECK(report.min_ratio >= 1);
}

TEST_CASE("scan maximum is not exceeded on a dense grid") {
  for (const auto& t : sample_tuples(15, 15, 15, 25, 99)) {
    const auto tg = scan_tuple(t);
    for (int k = 0; k < 400; ++k) {
      const Rational m = frac(t.n_files * k, 400);
      CHECK(gap_ratio(t, m) <= tg.max_ratio);
    }
    CHECK(gap_ratio(t, tg.argmax_m_rx) == tg.max_ratio);
  }
}

TEST_CASE("scan reduction is deterministic across thread counts") {
  const auto tuples = grid_tuples(6, 5, 6);
  ScanOptions one;
  one.threads = 1;
  ScanOptions many;
  many.threads = 4;
  const auto a = gap_scan(tuples, one);
  const auto b = gap_scan(tuples, many);
  CHECK(a.max_ratio == b.max_ratio);
  CHECK(a.argmax_tuple == b.argmax_tuple);
  CHECK(a.argmax_m_rx == b.argmax_m_rx);
  CHECK(a.points == b.points);
}

TEST_CASE("2x2 curves") {
  CHECK(dof_2x2_curve(frac(1, 3)) == 1);
  CHECK(dof_2x2_curve(frac(4, 5)) == frac(3, 5));
  CHECK(dof_2x2_curve(frac(4, 5)) == dof_2x2_cutset(frac(4, 5)));
  CHECK(dof_2x2_curve(2) == 0);
  CHECK(dof_2x2_baseline(0) == frac(3, 2));
  CHECK_THROWS_AS(dof_2x2_curve(frac(21, 10)), std::domain_error);
  CHECK(net2x2_lower_bound(0) == 2);
  CHECK(net2x2_lower_bound(frac(4, 5)) == frac(4, 5));
  CHECK(net2x2_lower_bound(2) == 0);
  CHECK_THROWS_AS(net2x2_lower_bound(-1), std::domain_error);
}

TEST_CASE("extraction curve never exceeds the baseline; peak improvement 7/6") {
  bool strict = false;
  for (int k = 0; k <= 200; ++k) {
    const Rational m = frac(k, 100);
    CHECK(dof_2x2_curve(m) <= dof_2x2_baseline(m));
    CHECK(dof_2x2_curve(m) >= dof_2x2_cutset(m));
    if (dof_2x2_curve(m) < dof_2x2_baseline(m)) strict = true;
  }
  CHECK(strict);
  const auto peak = improvement_2x2();
  CHECK(peak.ratio == frac(7, 6));
  CHECK(peak.argmax_m_rx == frac(1, 3));
  for (int k = 0; k < 200; ++k) {
    const Rational m = frac(k, 100);
    CHECK(dof_2x2_baseline(m) / dof_2x2_curve(m) <= peak.ratio);
  }
}
