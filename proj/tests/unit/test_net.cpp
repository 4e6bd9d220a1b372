#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>

#include "cachedof/core/errors.hpp"
#include "cachedof/net/scheme.hpp"
#include "cachedof/net/two_by_two.hpp"

using namespace cachedof;
using namespace cachedof::net;

namespace {

SystemParams at_kappa(int n, int kt, int kr, int kappa) { return SystemParams(n, kt, kr, frac(kappa * n, kr)); }

}  // namespace

TEST_CASE("hex round trip keeps odd lengths") {
  Bits b(11);
  b[0] = b[3] = b[10] = true;
  CHECK(to_hex(b) == "902");
  CHECK(from_hex("902", 11) == b);
  CHECK_THROWS(from_hex("903", 11));
}

TEST_CASE("placement budgets") {
  auto p = at_kappa(4, 2, 4, 1);
  CHECK(min_file_bits(p) == 8);
  auto scheme = place(p, Library::random(4, 8, 3));
  CHECK(scheme.subpart_bits() == 1);
  for (int i = 1; i <= 4; ++i) CHECK(scheme.rx_cache_bits(i) == 8);
  for (int j = 1; j <= 2; ++j) CHECK(scheme.tx_cache_bits(j) == 16);

  SUBCASE("kappa zero leaves receivers empty") {
    auto s0 = place(at_kappa(4, 2, 4, 0), Library::random(4, 2, 3));
    for (int i = 1; i <= 4; ++i) CHECK(s0.rx_cache_bits(i) == 0);
    CHECK(s0.tx_cache_bits(1) == 4);
  }
  SUBCASE("kappa K_r caches everything and sends nothing") {
    auto lib = Library::random(4, 2, 3);
    auto s4 = place(at_kappa(4, 2, 4, 4), lib);
    for (int i = 1; i <= 4; ++i) CHECK(s4.rx_cache_bits(i) == 8);
    auto d = deliver(s4, {1, 2, 3, 4});
    CHECK(d.payloads.empty());
    CHECK(d.sum_load == 0);
    for (int i = 1; i <= 4; ++i) CHECK(decode(s4, d, i) == lib.file(i));
  }
  SUBCASE("granularity errors name the multiple") {
    try {
      place(p, Library::random(4, 12, 1));
      FAIL("expected a domain error");
    } catch (const std::domain_error& e) {
      CHECK(std::string(e.what()).find("= 8 bits") != std::string::npos);
    }
    CHECK_THROWS_AS(place(SystemParams(4, 2, 4, frac(1, 2)), Library::random(4, 8, 1)), std::domain_error);
  }
}

TEST_CASE("delivery loads and payload counts") {
  auto p = at_kappa(4, 2, 4, 1);
  auto lib = Library::random(4, 16, 9);
  auto scheme = place(p, lib);
  auto d = deliver(scheme, {1, 2, 3, 4});
  CHECK(d.payloads.size() == 12);
  CHECK(d.payload_bits == 2);
  CHECK(d.link_load == frac(1, 8));
  CHECK(d.sum_load == frac(3, 2));
  for (int i = 1; i <= 4; ++i) CHECK(decode(scheme, d, i) == lib.file(i));

  auto same = deliver(scheme, {2, 2, 2, 2});
  CHECK(same.sum_load == frac(3, 2));
  for (int i = 1; i <= 4; ++i) CHECK(decode(scheme, same, i) == lib.file(2));

  auto s0 = place(at_kappa(4, 2, 4, 0), lib);
  auto d0 = deliver(s0, {4, 3, 2, 1});
  CHECK(d0.sum_load == 4);
  CHECK(d0.payloads.at(PipeKey{ReceiverSubset({2}, 4), 1}) == slice(lib.file(3), 0, 8));

  CHECK_THROWS_AS(deliver(scheme, {1, 2, 3}), std::domain_error);
  CHECK_THROWS_AS(deliver(scheme, {1, 2, 3, 5}), std::domain_error);
}

TEST_CASE("a payload is the XOR of the missing subparts") {
  // Hand computation for N=2, K_t=1, K_r=2, kappa=1, F=2: subpart T={1} is
  // bit 0, T={2} is bit 1. V_{12} = W_{u_1,{2}} ^ W_{u_2,{1}}.
  Bits a(2), b(2);
  a[0] = true;
  b[0] = b[1] = true;
  Library lib({a, b});
  auto scheme = place(at_kappa(2, 1, 2, 1), lib);
  auto d = deliver(scheme, {1, 2});
  const Bits& v = d.payloads.at(PipeKey{ReceiverSubset({1, 2}, 2), 1});
  CHECK(v.size() == 1);
  CHECK(v[0] == (a[1] ^ b[0]));
}

TEST_CASE("exhaustive decode over small configurations") {
  for (int n = 1; n <= 3; ++n)
    for (int kt = 1; kt <= 2; ++kt)
      for (int kr = 1; kr <= 3; ++kr)
        for (int kappa = 0; kappa <= kr; ++kappa) {
          auto p = at_kappa(n, kt, kr, kappa);
          auto lib = Library::random(n, 2 * min_file_bits(p), 17 + n * 100 + kr);
          auto scheme = place(p, lib);
          for_each_demand(n, kr, [&](const std::vector<int>& u) {
            auto d = deliver(scheme, u);
            CHECK(d.sum_load == frac(kr - kappa, kappa + 1));
            for (int i = 1; i <= kr; ++i) CHECK(decode(scheme, d, i) == lib.file(u[i - 1]));
          });
        }
}

TEST_CASE("payloads are GF(2)-linear in the library") {
  auto p = at_kappa(3, 2, 3, 1);
  auto l1 = Library::random(3, 12, 1);
  auto l2 = Library::random(3, 12, 2);
  auto d1 = deliver(place(p, l1), {3, 1, 1});
  auto d2 = deliver(place(p, l2), {3, 1, 1});
  auto d12 = deliver(place(p, l1 ^ l2), {3, 1, 1});
  for (const auto& [key, bits] : d12.payloads) CHECK(bits == (d1.payloads.at(key) ^ d2.payloads.at(key)));
}

TEST_CASE("decode rejects foreign payloads") {
  auto lib = Library::random(4, 16, 5);
  auto s1 = place(at_kappa(4, 2, 4, 1), lib);
  auto s2 = place(at_kappa(4, 2, 4, 2), Library::random(4, 24, 5));
  auto d2 = deliver(s2, {1, 2, 3, 4});
  CHECK_THROWS_AS(decode(s1, d2, 1), IntegrityError);

  auto d1 = deliver(s1, {1, 2, 3, 4});
  d1.payloads.erase(d1.payloads.begin());
  CHECK_THROWS_AS(decode(s1, d1, 1), IntegrityError);
}

TEST_CASE("payload JSON round trip") {
  auto lib = Library::random(4, 8, 5);
  auto scheme = place(at_kappa(4, 2, 4, 1), lib);
  auto d = deliver(scheme, {4, 1, 1, 2});
  auto doc = to_json(d);
  CHECK(doc["payloads"].contains("1,2|1"));
  auto back = payloads_from_json(nlohmann::json::parse(doc.dump()), 4);
  CHECK(back.payloads == d.payloads);
  for (int i = 1; i <= 4; ++i) CHECK(decode(scheme, back, i) == lib.file(d.demand[i - 1]));
  auto sj = to_json(scheme);
  CHECK(sj["rx_caches"][0].contains("1|1|1"));
  CHECK(sj["rx_caches"][0].size() == 8);
}

TEST_CASE("partition delivery") {
  SUBCASE("single file broadcast") {
    SystemParams p(1, 1, 5, Rational(0));
    auto lib = Library::random(1, 7, 1);
    auto d = partition_deliver(p, lib, {1, 1, 1, 1, 1});
    CHECK(d.groups.size() == 1);
    CHECK(d.payloads.size() == 1);
    CHECK(d.payload_bits == 7);
    for (int i = 1; i <= 5; ++i) CHECK(partition_decode(p, d, i) == lib.file(1));
  }
  SUBCASE("two groups, two transmitters") {
    SystemParams p(2, 2, 4, Rational(0));
    auto lib = Library::random(2, 10, 4);
    auto d = partition_deliver(p, lib, {1, 1, 2, 2});
    CHECK(d.groups.size() == 2);
    CHECK(d.groups[0].file == 1);
    CHECK(d.payloads.size() == 4);
    CHECK(d.payload_bits == 5);
    CHECK(d.sum_load == 2);
    for (int i = 1; i <= 4; ++i) CHECK(partition_decode(p, d, i) == lib.file(i <= 2 ? 1 : 2));
  }
  SUBCASE("groups follow file index, not receiver order") {
    SystemParams p(3, 1, 3, Rational(0));
    auto d = partition_deliver(p, Library::random(3, 3, 4), {3, 1, 3});
    REQUIRE(d.groups.size() == 2);
    CHECK(d.groups[0].file == 1);
    CHECK(d.groups[1].file == 3);
    CHECK(d.groups[1].receivers == ReceiverSubset({1, 3}, 3));
  }
  SUBCASE("exhaustive") {
    for (int n = 1; n <= 3; ++n)
      for (int kt = 1; kt <= 3; ++kt)
        for (int kr = 1; kr <= 5; ++kr) {
          SystemParams p(n, kt, kr, Rational(0));
          auto lib = Library::random(n, 2 * kt, n * 31 + kt * 7 + kr);
          for_each_demand(n, kr, [&](const std::vector<int>& u) {
            auto d = partition_deliver(p, lib, u);
            CHECK(d.payloads.size() == static_cast<std::size_t>(kt * distinct_demands(u)));
            for (int i = 1; i <= kr; ++i) CHECK(partition_decode(p, d, i) == lib.file(u[i - 1]));
          });
        }
  }
  CHECK_THROWS_AS(partition_deliver(SystemParams(2, 1, 2, Rational(1)), Library::random(2, 2, 1), {1, 2}),
                  std::domain_error);
}

TEST_CASE("demand enumeration") {
  std::vector<std::vector<int>> seen;
  CHECK(for_each_demand(2, 3, [&](const std::vector<int>& u) { seen.push_back(u); }) == 8);
  CHECK(seen.front() == std::vector<int>{1, 1, 1});
  CHECK(seen[1] == std::vector<int>{1, 1, 2});
  for (std::size_t k = 0; k < seen.size(); ++k) CHECK(demand_at(2, 3, k) == seen[k]);
}

TEST_CASE("combination names") {
  CHECK(parse_combo("B5^S1", 5) == parse_combo("A4^B2^B5", 5));
  CHECK(combo_name(parse_combo("A1^A3", 3), 3) == "A1^A3");
  CHECK(combo_name(0, 3) == "0");
  CHECK_THROWS(parse_combo("A4", 3));
  CHECK_THROWS(parse_combo("S1", 3));
  CHECK(in_span({parse_combo("A1^B1", 3), parse_combo("B1", 3)}, parse_combo("A1", 3)));
  CHECK_FALSE(in_span({parse_combo("A1^B1", 3)}, parse_combo("A1", 3)));
}

TEST_CASE("2x2 tables match the golden transcription") {
  std::ifstream in(CACHEDOF_GOLDEN_DIR "/tables_2x2.json");
  REQUIRE(in);
  const auto golden = nlohmann::json::parse(in);
  for (const auto& [corner_key, table] : golden.items()) {
    CAPTURE(corner_key);
    const auto s = scheme_2x2(parse_corner(corner_key));
    const int parts = table["parts"].get<int>();
    REQUIRE(s.parts == parts);
    for (int side = 0; side < 2; ++side) {
      std::vector<Combo> tx, rx;
      for (const auto& t : table["tx_caches"][side]) tx.push_back(parse_combo(t.get<std::string>(), parts));
      for (const auto& t : table["rx_caches"][side]) rx.push_back(parse_combo(t.get<std::string>(), parts));
      CHECK(s.tx_cache[side] == tx);
      CHECK(s.rx_cache[side] == rx);
    }
    for (int col = 0; col < 4; ++col) {
      const auto label = table["columns"][col].get<std::string>();
      const auto row = deliver_2x2(s, kDemandPairs[col]);
      CAPTURE(label);
      CHECK(demand_label(row.demand) == label);
      auto cell = [&](const char* name) { return parse_combo(table[name][col].get<std::string>(), parts); };
      CHECK(row.v[0][0] == cell("V11"));
      CHECK(row.v[1][0] == cell("V21"));
      CHECK(row.v[0][1] == cell("V12"));
      CHECK(row.v[1][1] == cell("V22"));
      CHECK(row.aligned(1) == cell("V21^V22"));
      CHECK(row.aligned(2) == cell("V11^V12"));
    }
  }
}

TEST_CASE("2x2 corners decode and meet their loads") {
  const std::array<Rational, 4> loads{Rational(2), frac(4, 3), frac(4, 5), Rational(0)};
  const std::array<Corner2x2, 4> corners{Corner2x2::M0, Corner2x2::M13, Corner2x2::M45, Corner2x2::M2};
  for (std::size_t c = 0; c < 4; ++c) {
    const auto s = scheme_2x2(corners[c]);
    CAPTURE(corner_name(s.corner));
    CHECK(audit_2x2(s).empty());
    CHECK(s.sum_load == loads[c]);
    const auto lib = Library::random(2, 30, 77);
    for (const auto& demand : kDemandPairs) {
      const auto row = deliver_2x2(s, demand);
      for (int i = 1; i <= 2; ++i) CHECK(decode_2x2(s, row, i, lib) == lib.file(demand[i - 1]));
    }
  }
  CHECK_THROWS_AS(parse_corner("M1"), std::domain_error);
}

TEST_CASE("2x2 worked columns") {
  const auto m13 = scheme_2x2(Corner2x2::M13);
  const auto ab = deliver_2x2(m13, {1, 2});
  CHECK(combo_name(ab.v[0][0], 3) == "A3");
  CHECK(combo_name(ab.v[1][0], 3) == "B1^B3");
  CHECK(combo_name(ab.v[0][1], 3) == "A2^A3");
  CHECK(combo_name(ab.v[1][1], 3) == "B3");
  CHECK(combo_name(ab.aligned(1), 3) == "B1");
  CHECK(combo_name(ab.aligned(2), 3) == "A2");

  const auto m45 = scheme_2x2(Corner2x2::M45);
  const auto bb = deliver_2x2(m45, {2, 2});
  CHECK(bb.aligned(1) == parse_combo("S4", 5));
  CHECK(bb.aligned(2) == parse_combo("S3", 5));

  const auto m2 = scheme_2x2(Corner2x2::M2);
  for (const auto& row : m2.rows)
    for (const auto& vi : row.v)
      for (Combo c : vi) CHECK(c == 0);
}

TEST_CASE("a broken table is caught by the audit") {
  auto s = scheme_2x2(Corner2x2::M13);
  s.rows[1].v[1][0] = parse_combo("B1", 3);
  CHECK_FALSE(audit_2x2(s).empty());
}
