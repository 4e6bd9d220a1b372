#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cachedof/core/errors.hpp"
#include "cachedof/core/exact_linalg.hpp"
#include "cachedof/core/rng.hpp"
#include "cachedof/dof/bounds.hpp"
#include "cachedof/phy/alignment.hpp"
#include "cachedof/phy/certify.hpp"
#include "cachedof/phy/two_by_two.hpp"

using namespace cachedof;
using namespace cachedof::phy;

namespace {

ChannelRealization exact_channel(int kr, int kt, std::size_t slots, std::uint64_t seed) {
  ChannelConfig c;
  c.n_rx = kr;
  c.n_tx = kt;
  c.slots = slots;
  c.seed = seed;
  return ChannelRealization::draw(c);
}

Dense<Rational> random_matrix(std::size_t n, std::uint64_t seed) {
  CounterRng rng(seed);
  Dense<Rational> m(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) m(r, c) = frac(rng.uniform_int(-20, 20), rng.uniform_int(1, 6));
  return m;
}

std::size_t ipow(std::size_t b, int e) {
  std::size_t out = 1;
  while (e-- > 0) out *= b;
  return out;
}

}  // namespace

TEST_CASE("primality agrees with trial division") {
  for (std::uint64_t n = 0; n < 3000; ++n) {
    bool prime = n >= 2;
    for (std::uint64_t d = 2; d * d <= n && prime; ++d) prime = n % d != 0;
    CHECK(is_prime_u64(n) == prime);
  }
  CHECK(is_prime_u64((std::uint64_t{1} << 61) - 1));
  CHECK_FALSE(is_prime_u64(3215031751ull));  // strong pseudoprime to bases 2, 3, 5, 7
  const auto& primes = certificate_primes(4);
  CHECK(primes[0] < (std::uint64_t{1} << 62));
  CHECK(primes[0] > primes[1]);
}

TEST_CASE("modular determinant matches exact elimination") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto m = random_matrix(6, seed);
    const Rational det = det_exact(m);
    // Cofactor-free oracle: product of pivots from plain rational elimination.
    Dense<Rational> a = m;
    Rational prod = 1;
    for (std::size_t k = 0; k < 6 && prod != 0; ++k) {
      std::size_t piv = k;
      while (piv < 6 && a(piv, k) == 0) ++piv;
      if (piv == 6) {
        prod = 0;
        break;
      }
      if (piv != k) {
        for (std::size_t c = 0; c < 6; ++c) std::swap(a(k, c), a(piv, c));
        prod = -prod;
      }
      prod *= a(k, k);
      for (std::size_t r = k + 1; r < 6; ++r) {
        const Rational f = a(r, k) / a(k, k);
        for (std::size_t c = k; c < 6; ++c) a(r, c) -= f * a(k, c);
      }
    }
    CHECK(det == prod);
    const auto p = certificate_primes(1)[0];
    CHECK(det_mod(m, p) == residue(det, p));
  }
}

TEST_CASE("singular matrices are recognised") {
  auto m = random_matrix(5, 3);
  for (std::size_t c = 0; c < 5; ++c) m(4, c) = m(0, c) * 3 - m(1, c);
  CHECK(det_exact(m) == 0);
  CHECK(rank_exact(m) == 4);
  auto cert = certify_full_rank(m);
  CHECK_FALSE(cert.full_rank);
  CHECK(cert.exact_rank == 4u);
  CHECK_FALSE(solve_exact(m, std::vector<Rational>(5, 1)).has_value());
}

TEST_CASE("exact solve agrees with Gaussian elimination") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto m = random_matrix(8, seed + 100);
    CounterRng rng(seed);
    std::vector<Rational> b(8);
    for (auto& v : b) v = frac(rng.uniform_int(-1000, 1000), rng.uniform_int(1, 1000));
    const auto x = solve_exact(m, b);
    REQUIRE(x.has_value());
    CHECK(m * *x == b);
    CHECK(*x == *solve_gauss(m, b));
  }
}

TEST_CASE("rational reconstruction") {
  const Integer mod("1000000007");
  const Rational q = frac(-17, 23);
  Integer inv;
  Integer den = 23;
  mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), mod.get_mpz_t());
  Integer a = ((-17 * inv) % mod + mod) % mod;
  CHECK(rational_reconstruct(a, mod) == q);
}

TEST_CASE("block length and per-message DoF") {
  CHECK(block_length(2, 2, 1, 1) == 5);
  CHECK(block_length(3, 3, 2, 1) == 16);
  for (int kt = 1; kt <= 4; ++kt)
    for (int kr = 1; kr <= 4; ++kr) CHECK(block_length(kt, kr, kr, 3) == kt);
  CHECK(achieved_dof(2, 2, 1, 1).first == frac(2, 5));
  CHECK(achieved_dof(2, 2, 1, 1).rest == frac(1, 5));
  CHECK(achieved_dof(3, 3, 2, 1).first == frac(4, 16));
  CHECK(achieved_dof(3, 3, 2, 1).rest == frac(1, 16));
  CHECK_THROWS_AS(block_length(2, 2, 3, 1), std::domain_error);
  CHECK_THROWS_AS(block_length(2, 2, 1, 0), std::domain_error);
}

TEST_CASE("column count audit of Psi") {
  for (int kt = 1; kt <= 3; ++kt)
    for (int kr = 1; kr <= 3; ++kr)
      for (int sigma = 1; sigma <= kr; ++sigma)
        for (int n = 1; n <= 2; ++n) {
          const int gamma = (kr - sigma) * (kt - 1);
          const auto t = block_length(kt, kr, sigma, n).get_ui();
          const auto ch = exact_channel(kr, kt, t, 7);
          const auto plan = build_plan(kt, kr, sigma, n, ch);
          std::size_t containing = 0, other = 0;
          for (const auto& s : subsets_of_size(kr, sigma)) (s.contains(1) ? containing : other)++;
          const std::size_t desired = containing * (ipow(n + 1, gamma) + (kt - 1) * ipow(n, gamma));
          const std::size_t aligned = other * ipow(n + 1, gamma);
          CHECK(desired + aligned == t);
          const auto cert = build_psi(plan, ch, 1);
          CHECK(cert.psi_exact.rows() == t);
          CHECK(cert.psi_exact.cols() == t);
        }
}

TEST_CASE("plan shapes") {
  const auto ch = exact_channel(2, 2, 5, 1);
  const auto plan = build_plan(2, 2, 1, 1, ch);
  CHECK(plan.gamma() == 1);
  CHECK(plan.block_length() == 5);
  CHECK(plan.subsets()[0].a1_exact.cols() == 2);
  CHECK(plan.subsets()[0].a2_exact.cols() == 1);
  CHECK(plan.subsets()[0].pairs == std::vector<RatioPair>{{2, 2}});
  CHECK_THROWS_AS(build_plan(2, 2, 1, 2, ch), std::domain_error);

  const auto ch3 = exact_channel(3, 3, 16, 2);
  const auto p3 = build_plan(3, 3, 2, 1, ch3);
  CHECK(p3.gamma() == 2);
  CHECK(p3.block_length() == 16);
  CHECK(p3.subsets()[0].alpha1.front() == std::vector<int>{1, 1});
  CHECK(p3.subsets()[0].alpha1[1] == std::vector<int>{1, 2});
}

TEST_CASE("a beam column is the stated monomial") {
  const auto ch = exact_channel(3, 2, 31, 4);
  const auto plan = build_plan(2, 3, 1, 2, ch);
  const auto& sp = plan.subsets()[1];  // S = {2}; ratios for receivers 1 and 3
  CHECK(sp.pairs == std::vector<RatioPair>{{1, 2}, {3, 2}});
  const std::size_t col = 5;  // alpha = (2, 3)
  REQUIRE(sp.alpha1[col] == std::vector<int>{2, 3});
  for (std::size_t tau = 1; tau <= 31; ++tau) {
    Rational g1 = ch.h_exact(1, 2, tau) / ch.h_exact(1, 1, tau);
    Rational g3 = ch.h_exact(3, 2, tau) / ch.h_exact(3, 1, tau);
    CHECK(sp.a1_exact(tau - 1, col) == sp.b_exact[tau - 1] * g1 * g1 * g3 * g3 * g3);
  }
}

TEST_CASE("alignment holds and a perturbation is caught") {
  const auto ch = exact_channel(4, 2, 27, 5);
  const auto plan = build_plan(2, 4, 2, 1, ch);
  const auto check = verify_alignment(plan, ch);
  CHECK(check.aligned);
  CHECK(check.columns_checked > 0);

  auto subsets = plan.subsets();
  subsets[2].a2_exact(3, 0) += 1;
  const AlignmentPlan broken(2, 4, 2, 1, plan.mode(), plan.channel_fingerprint(), subsets);
  const auto bad = verify_alignment(broken, ch);
  CHECK_FALSE(bad.aligned);
  REQUIRE(bad.witness.has_value());
  CHECK(bad.witness->subset == subsets[2].subset);
  CHECK(bad.witness->column == 0);

  const auto other = exact_channel(4, 2, 27, 6);
  CHECK_THROWS_AS(verify_alignment(plan, other), IntegrityError);
}

TEST_CASE("alignment over many channels") {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto ch = exact_channel(4, 2, 27, seed);
    CHECK(verify_alignment(build_plan(2, 4, 2, 1, ch), ch).aligned);
  }
}

TEST_CASE("Psi certificates") {
  SUBCASE("generic channel") {
    const auto ch = exact_channel(2, 2, 5, 11);
    const auto plan = build_plan(2, 2, 1, 1, ch);
    for (int k = 1; k <= 2; ++k) {
      const auto cert = build_psi(plan, ch, k);
      CHECK(cert.full_rank);
      CHECK(cert.exact.witness_prime.has_value());
      CHECK(det_exact(cert.psi_exact) != 0);
    }
  }
  SUBCASE("equal coefficients are rank deficient") {
    const auto ch = ChannelRealization::exact(2, 2, 5, std::vector<Rational>(20, frac(3, 2)));
    const auto plan = build_plan(2, 2, 1, 1, ch);
    const auto cert = build_psi(plan, ch, 1);
    CHECK_FALSE(cert.full_rank);
    CHECK(cert.exact.exact_rank.has_value());
    const std::vector<Rational> y(5, 1);
    CHECK_THROWS_AS(decode_at(plan, cert, y), DecodeInfeasible);
  }
  SUBCASE("sigma equal to K_r") {
    const auto ch = exact_channel(3, 3, 3, 2);
    const auto plan = build_plan(3, 3, 3, 1, ch);
    for (int k = 1; k <= 3; ++k) {
      const auto cert = build_psi(plan, ch, k);
      CHECK(cert.side == 3);
      CHECK(cert.full_rank);
    }
  }
}

TEST_CASE("transmission is linear") {
  const auto ch = exact_channel(2, 2, 5, 3);
  const auto plan = build_plan(2, 2, 1, 1, ch);
  MessageBlocks<Rational> zero{{{0, 0}, {0}}, {{0, 0}, {0}}};
  for (const auto& y : transmit_receive(plan, ch, zero))
    for (const auto& v : y) CHECK(v == 0);

  MessageBlocks<Rational> single{{{frac(2, 3), 5}, {0}}, {{0, 0}, {0}}};
  const auto y = transmit_receive(plan, ch, single);
  const auto& a = plan.subsets()[0].a1_exact;
  for (int i = 1; i <= 2; ++i)
    for (std::size_t tau = 1; tau <= 5; ++tau)
      CHECK(y[i - 1][tau - 1] == ch.h_exact(i, 1, tau) * (a(tau - 1, 0) * frac(2, 3) + a(tau - 1, 1) * 5));

  MessageBlocks<Rational> wrong{{{1}, {0}}, {{0, 0}, {0}}};
  CHECK_THROWS_AS(transmit_receive(plan, ch, wrong), std::domain_error);
}

TEST_CASE("round trips recover the desired messages exactly") {
  for (auto [kt, kr, sigma] : {std::tuple{2, 2, 1}, std::tuple{2, 4, 2}, std::tuple{3, 2, 1}}) {
    const auto t = block_length(kt, kr, sigma, 1).get_ui();
    const auto ch = exact_channel(kr, kt, t, 21);
    const auto plan = build_plan(kt, kr, sigma, 1, ch);
    CounterRng rng(5);
    MessageBlocks<Rational> msgs(plan.subsets().size());
    for (auto& g : msgs)
      for (int j = 1; j <= kt; ++j) {
        std::vector<Rational> v(plan.streams(j));
        for (auto& x : v) x = frac(rng.uniform_int(-50, 50), rng.uniform_int(1, 7));
        g.push_back(v);
      }
    const auto y = transmit_receive(plan, ch, msgs);
    for (int k = 1; k <= kr; ++k) {
      const auto cert = build_psi(plan, ch, k);
      const auto d = decode_at(plan, cert, y[k - 1]);
      for (std::size_t s = 0; s < msgs.size(); ++s) {
        if (plan.subsets()[s].subset.contains(k)) {
          CHECK(d.desired[s] == msgs[s]);
        } else {
          // Aligned coordinates: v_{S1} plus every shifted v_{Sj}.
          const auto& sp = plan.subsets()[s];
          std::vector<Rational> w = msgs[s][0];
          for (std::size_t g = 0; g < sp.pairs.size(); ++g) {
            if (sp.pairs[g].rx != k) continue;
            for (std::size_t c = 0; c < sp.alpha2.size(); ++c) {
              auto alpha = sp.alpha2[c];
              ++alpha[g];
              const auto idx = std::find(sp.alpha1.begin(), sp.alpha1.end(), alpha) - sp.alpha1.begin();
              w[idx] += msgs[s][sp.pairs[g].tx - 1][c];
            }
          }
          CHECK(d.aligned[s] == w);
        }
      }
    }
  }
}

TEST_CASE("float mode") {
  ChannelConfig c;
  c.n_rx = 2;
  c.n_tx = 2;
  c.slots = 13;
  c.mode = ScalarMode::Float64;
  c.seed = 4;
  const auto ch = ChannelRealization::draw(c);
  for (std::size_t tau = 1; tau <= 13; ++tau) {
    CHECK(ch.h_real(1, 1, tau) >= 0.5);
    CHECK(ch.h_real(1, 1, tau) < 2.0);
  }
  const auto plan = build_plan(2, 2, 1, 2, ch);
  CHECK(verify_alignment(plan, ch).aligned);
  const auto cert = build_psi(plan, ch, 1);
  CHECK(cert.full_rank);
  CHECK(*cert.sigma_min > 0);
  const auto report = certify_phy(2, 2, 1, 2, 5, 9, ScalarMode::Float64, 1);
  CHECK(report.passed());
}

TEST_CASE("monomials in a row of Psi are distinct") {
  for (int kt = 1; kt <= 3; ++kt)
    for (int kr = 1; kr <= 3; ++kr)
      for (int sigma = 1; sigma <= kr; ++sigma) {
        const auto t = block_length(kt, kr, sigma, 2).get_ui();
        const auto ch = exact_channel(kr, kt, t, 1);
        const auto plan = build_plan(kt, kr, sigma, 2, ch);
        for (int k = 1; k <= kr; ++k) {
          const auto m = psi_monomials(plan, k);
          CHECK(m.size() == t);
          CHECK(monomials_distinct(m));
        }
      }
  std::vector<Monomial> dup(2);
  dup[0][{'h', 1, 1}] = 1;
  dup[1][{'h', 1, 1}] = 1;
  CHECK_FALSE(monomials_distinct(dup));
}

TEST_CASE("certification harness is reproducible") {
  const auto a = certify_phy(2, 2, 1, 1, 6, 42, ScalarMode::ExactRational, 1);
  const auto b = certify_phy(2, 2, 1, 1, 6, 42, ScalarMode::ExactRational, 3);
  CHECK(a.passed());
  CHECK(to_json(a) == to_json(b));
  CHECK(to_json(a)["plan"]["block_length"] == 5);
  CHECK(trial_seed(42, 0) != trial_seed(42, 1));
}

TEST_CASE("per-message DoF converges monotonically") {
  const auto depths = doubling_depths(200);
  CHECK(depths.back() == 200);
  CHECK(depths[7] == 128);
  for (auto [kt, kr] : {std::pair{2, 2}, std::pair{2, 4}, std::pair{3, 3}})
    for (int sigma = 1; sigma <= kr; ++sigma) {
      const auto rows = convergence_table(kt, kr, sigma, depths);
      for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(rows[i].error_first <= rows[i - 1].error_first);
        CHECK(rows[i].error_rest <= rows[i - 1].error_rest);
      }
      CHECK(rows.front().target == dof::phy_dof_optimal(kt, kr, sigma));
    }
  const auto rows = convergence_table(2, 2, 1, {200});
  CHECK(rows[0].error_first < frac(1, 100));
  CHECK(rows[0].error_rest < frac(1, 100));
  CHECK(convergence_csv(rows).rfind("n,delta_1", 0) == 0);
}

TEST_CASE("2x2 extraction plan") {
  const auto ch = exact_channel(2, 2, 3, 8);
  const auto plan = build_plan_2x2(ch);
  auto h = [&](int i, int j, std::size_t t) { return ch.h_exact(i, j, t); };
  const auto& psi1 = plan.exact.psi[0];
  CHECK(psi1(0, 0) == h(1, 1, 1));
  CHECK(psi1(0, 1) == h(1, 2, 1) * h(2, 1, 1) / h(2, 2, 1));
  CHECK(psi1(0, 2) == h(1, 1, 1));
  CHECK(psi1(1, 0) == h(1, 1, 2));
  CHECK(psi1(1, 1) == h(1, 2, 2) * h(2, 1, 2) / h(2, 2, 2));
  CHECK(psi1(1, 2) == 0);
  CHECK(psi1(2, 0) == 0);
  CHECK(psi1(2, 1) == 0);
  CHECK(psi1(2, 2) == h(1, 1, 3));
  for (int k = 1; k <= 2; ++k) CHECK(certify_2x2(plan, k).full_rank);

  const Rational v11 = frac(3, 7), v12 = -2, v21 = frac(5, 2), v22 = frac(1, 9);
  const auto y = transmit_2x2(plan, ch, v11, v12, v21, v22);
  CHECK(decode_2x2(plan, 1, y[0]) == std::array<Rational, 3>{v11, v12, v21 + v22});
  CHECK(decode_2x2(plan, 2, y[1]) == std::array<Rational, 3>{v21, v22, v11 + v12});

  const auto cancel = transmit_2x2(plan, ch, v11, v12, v21, Rational(-v21));
  CHECK(decode_2x2(plan, 1, cancel[0])[2] == 0);

  CHECK_THROWS_AS(build_plan_2x2(exact_channel(2, 2, 2, 1)), std::domain_error);
}
