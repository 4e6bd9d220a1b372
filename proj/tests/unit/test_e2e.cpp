#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cachedof/core/rng.hpp"
#include "cachedof/e2e/end_to_end.hpp"
#include "cachedof/net/scheme.hpp"
#include "cachedof/phy/certify.hpp"

#include <algorithm>

using namespace cachedof;
using namespace cachedof::e2e;

namespace {

void check_all_recovered(const EndToEndReport& r) {
  CHECK(r.aligned);
  REQUIRE(static_cast<int>(r.receivers.size()) == r.params.n_rx());
  for (const auto& v : r.receivers) {
    INFO("receiver " << v.receiver << ": " << v.error);
    CHECK(v.full_rank);
    CHECK(v.symbols_valid);
    CHECK(v.recovered);
  }
  CHECK(r.passed());
}

}  // namespace

TEST_CASE("chunk packing keeps bits in base-4 digits") {
  net::Bits bits(10);
  bits[0] = bits[2] = bits[9] = true;
  CHECK(pack_chunk(bits, 0, 4) == 1 + 16);
  CHECK(pack_chunk(bits, 8, 4) == 4);
  auto d = unpack_chunk(Rational(17), 4);
  REQUIRE(d);
  CHECK(*d == std::vector<bool>{true, false, true, false});
  CHECK_FALSE(unpack_chunk(Rational(2), 4));
  CHECK_FALSE(unpack_chunk(frac(1, 2), 4));
  CHECK_FALSE(unpack_chunk(Rational(-1), 4));
  CHECK_FALSE(unpack_chunk(Rational(256), 4));
  // 1 + 2*4: digits (1, 2) reduce to (1, 0) under the sum reading.
  auto s = unpack_chunk(Rational(9), 2, true);
  REQUIRE(s);
  CHECK(*s == std::vector<bool>{true, false});
  CHECK(unpack_chunk(16.9999999, 4) == unpack_chunk(Rational(17), 4));
  CHECK_FALSE(unpack_chunk(16.5, 4));
}

TEST_CASE("sum of packed chunks is the XOR under the sum reading") {
  CounterRng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    net::Bits a(8), b(8);
    for (int t = 0; t < 8; ++t) {
      a[t] = rng.uniform_int(0, 1);
      b[t] = rng.uniform_int(0, 1);
    }
    const auto x = a ^ b;
    auto d = unpack_chunk(Rational(Integer(static_cast<unsigned long>(pack_chunk(a, 0, 8) + pack_chunk(b, 0, 8)))), 8, true);
    REQUIRE(d);
    for (int t = 0; t < 8; ++t) CHECK((*d)[t] == x[t]);
  }
}

TEST_CASE("target matches the closed form at hand-computed points") {
  CHECK(multicast_reciprocal(2, 4, 1) == frac(9, 8));
  CHECK(multicast_reciprocal(2, 2, 0) == frac(3, 2));
  CHECK(multicast_reciprocal(2, 4, 0) == frac(5, 2));
  CHECK(multicast_reciprocal(3, 3, 3) == 0);
}

TEST_CASE("four receivers recover distinct files over one alignment block length") {
  const SystemParams p = SystemParams(4, 2, 4, Rational(0)).with_kappa(1);
  // F = 128 bits: payloads of 16 bits, two 8-bit symbols each.
  const auto library = net::Library::random(4, 128, 3);
  const auto r = run_end_to_end(p, library, {1, 2, 3, 4}, 1, 11);
  check_all_recovered(r);
  CHECK(r.sigma == 2);
  CHECK(r.block_length == 27);
  CHECK(r.streams == std::vector<std::size_t>{4, 1});
  CHECK(r.payload_symbols == 2);
  CHECK(r.blocks == 2);
  // delta = (4/27, 1/27); sum DoF = 6 * 5/27; L = 3/2.
  CHECK(r.delta_first == frac(4, 27));
  CHECK(r.delta_rest == frac(1, 27));
  CHECK(r.sum_dof == frac(10, 9));
  CHECK(r.reciprocal_dof == frac(27, 20));
  CHECK(r.reciprocal_worst == frac(27, 8));
  CHECK(r.reciprocal_realized == frac(2 * 27 * 8, 128));
  CHECK(r.target == frac(9, 8));
}

TEST_CASE("recovery holds across seeds and demands") {
  const SystemParams p = SystemParams(4, 2, 4, Rational(0)).with_kappa(1);
  const auto library = net::Library::random(4, 64, 5);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto demand = net::demand_at(4, 4, seed * 37);
    check_all_recovered(run_end_to_end(p, library, demand, 1, seed));
  }
}

TEST_CASE("small grid recovers every demand at depth one") {
  for (int n_files = 1; n_files <= 3; ++n_files)
    for (int kt = 1; kt <= 2; ++kt)
      for (int kr = 1; kr <= 3; ++kr)
        for (int kappa = 0; kappa <= kr; ++kappa) {
          const SystemParams p = SystemParams(n_files, kt, kr, Rational(0)).with_kappa(kappa);
          const auto library = net::Library::random(n_files, net::min_file_bits(p) * 8, kappa + 10 * kr);
          net::for_each_demand(n_files, kr, [&](const std::vector<int>& demand) {
            INFO(p.to_string());
            check_all_recovered(run_end_to_end(p, library, demand, 1, 1));
          });
        }
}

TEST_CASE("two-by-two unicast accounting is within 5 percent at depth 8") {
  const SystemParams p(2, 2, 2, Rational(0));
  const auto library = net::Library::random(2, 256, 9);
  const auto r = run_end_to_end(p, library, {1, 2}, 8, 4);
  check_all_recovered(r);
  CHECK(r.block_length == 26);
  CHECK(r.reciprocal_dof == frac(26, 17));
  CHECK(r.target == frac(3, 2));
  CHECK(abs(r.reciprocal_dof - r.target) / r.target < frac(5, 100));
  CHECK(r.reciprocal_worst == frac(13, 8));
}

TEST_CASE("full receiver caches leave the physical layer idle") {
  const SystemParams p = SystemParams(3, 2, 3, Rational(0)).with_kappa(3);
  const auto library = net::Library::random(3, 12, 2);
  const auto r = run_end_to_end(p, library, {3, 1, 2}, 1, 1);
  check_all_recovered(r);
  CHECK(r.block_length == 0);
  CHECK(r.blocks == 0);
  CHECK(r.sum_load == 0);
  CHECK(r.target == 0);
}

TEST_CASE("float mode recovers the same files") {
  const SystemParams p = SystemParams(2, 2, 2, Rational(0)).with_kappa(1);
  const auto library = net::Library::random(2, 64, 4);
  check_all_recovered(run_end_to_end(p, library, {2, 1}, 2, 3, ScalarMode::Float64));
}

TEST_CASE("accounting approaches the target as depth grows") {
  const auto rows = accounting_table(2, 4, 1, phy::doubling_depths(200));
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].error <= rows[i - 1].error);
  CHECK(rows.front().reciprocal_dof == frac(27, 20));
  CHECK(rows.back().error < frac(1, 100));
  const auto csv = accounting_csv(rows);
  CHECK(csv.rfind("n,block_length,", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == static_cast<long>(rows.size() + 1));
  // Exact limit: delta replaced by its limit gives the target.
  for (int kappa = 0; kappa < 4; ++kappa) {
    const int sigma = kappa + 1;
    const Rational d = 1 / (2 * Rational(binomial(3, sigma - 1)) + Rational(binomial(3, sigma)));
    const Rational limit = frac(4 - kappa, kappa + 1) / (Rational(binomial(4, sigma)) * 2 * d);
    CHECK(limit == multicast_reciprocal(2, 4, kappa));
  }
}

TEST_CASE("extraction carries the table payloads at both corners") {
  for (auto corner : {net::Corner2x2::M13, net::Corner2x2::M45})
    for (const auto& demand : net::kDemandPairs) {
      const auto r = run_end_to_end_2x2(corner, demand, 17);
      INFO(r.scheme << " " << net::demand_label(demand));
      check_all_recovered(r);
      for (const auto& v : r.receivers) CHECK(v.sum_recovered.value_or(false));
      CHECK(r.reciprocal_worst == r.target);
      CHECK(r.reciprocal_realized == r.target);
    }
  CHECK(run_end_to_end_2x2(net::Corner2x2::M13, {1, 2}, 1).target == 1);
  CHECK(run_end_to_end_2x2(net::Corner2x2::M45, {1, 1}, 1).target == frac(3, 5));
  CHECK(run_end_to_end_2x2(net::Corner2x2::M45, {2, 2}, 1, ScalarMode::Float64).passed());
  CHECK_THROWS_AS(run_end_to_end_2x2(net::Corner2x2::M0, {1, 2}, 1), std::domain_error);
}

TEST_CASE("report serializes with exact accounting") {
  const SystemParams p = SystemParams(2, 2, 2, Rational(0)).with_kappa(0);
  const auto r = run_end_to_end(p, net::Library::random(2, 32, 1), {1, 2}, 8, 1);
  const auto j = to_json(r);
  CHECK(j["accounting"]["reciprocal_dof"]["exact"] == "26/17");
  CHECK(j["accounting"]["target"]["exact"] == "3/2");
  CHECK(j["passed"] == true);
  CHECK(j["receivers"].size() == 2);
  CHECK(to_json(r).dump() == j.dump());
}
