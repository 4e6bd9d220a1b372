#include "verify.hpp"

#include <sstream>
#include <stdexcept>
#include <vector>

#include "cachedof/core/parallel.hpp"
#include "cachedof/core/rational.hpp"
#include "cachedof/core/rng.hpp"
#include "cachedof/dof/two_by_two.hpp"
#include "cachedof/e2e/end_to_end.hpp"
#include "cachedof/net/scheme.hpp"
#include "cachedof/net/two_by_two.hpp"
#include "cachedof/phy/certify.hpp"

namespace cachedof::cli {

using nlohmann::json;

namespace {

struct NetConfig {
  int n_files, n_tx, n_rx, kappa;
};

VerifyResult verify_net(const VerifyArgs& a, std::uint64_t seed, unsigned threads) {
  const int n_max = a.grid == "full" ? 4 : 3;
  const int kr_max = a.grid == "full" ? 4 : 3;
  std::vector<NetConfig> configs;
  for (int n = 1; n <= n_max; ++n)
    for (int kt = 1; kt <= 2; ++kt)
      for (int kr = 1; kr <= kr_max; ++kr)
        for (int kappa = 0; kappa <= kr; ++kappa) configs.push_back({n, kt, kr, kappa});

  std::vector<std::uint64_t> demands(configs.size());
  std::vector<json> failures(configs.size(), json::array());
  parallel_for(
      configs.size(),
      [&](std::size_t i) {
        const auto& cf = configs[i];
        const auto p = SystemParams(cf.n_files, cf.n_tx, cf.n_rx, Rational(0)).with_kappa(cf.kappa);
        const auto library = net::Library::random(cf.n_files, net::min_file_bits(p) * 2, mix64(seed + i));
        const auto scheme = net::place(p, library);
        const Rational load = frac(cf.n_rx - cf.kappa, cf.kappa + 1);
        demands[i] = net::for_each_demand(cf.n_files, cf.n_rx, [&](const std::vector<int>& demand) {
          const auto payloads = net::deliver(scheme, demand);
          if (payloads.sum_load != load)
            failures[i].push_back({{"params", p.to_string()},
                                   {"demand", demand},
                                   {"reason", "sum load " + to_exact_string(payloads.sum_load) + " != " +
                                                  to_exact_string(load)}});
          for (int k = 1; k <= cf.n_rx; ++k) {
            std::string reason;
            try {
              if (net::decode(scheme, payloads, k) != library.file(demand[k - 1])) reason = "decoded file differs";
            } catch (const std::exception& e) {
              reason = e.what();
            }
            if (!reason.empty())
              failures[i].push_back({{"params", p.to_string()}, {"demand", demand}, {"receiver", k}, {"reason", reason}});
          }
        });
      },
      threads);

  json all = json::array();
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    total += demands[i];
    for (auto& f : failures[i]) all.push_back(std::move(f));
  }
  VerifyResult r;
  r.passed = all.empty();
  r.summary = std::to_string(configs.size()) + " schemes, " + std::to_string(total) + " demand vectors, " +
              std::to_string(all.size()) + " failures";
  r.report = {{"suite", "net"},
              {"grid", a.grid},
              {"seed", seed},
              {"schemes", configs.size()},
              {"demand_vectors", total},
              {"failures", all},
              {"passed", r.passed}};
  return r;
}

VerifyResult verify_phy(const VerifyArgs& a, std::uint64_t seed, unsigned threads, ScalarMode mode) {
  struct Point {
    int kt, kr, sigma, depth;
  };
  std::vector<Point> points;
  if (a.kt || a.kr || a.sigma || a.depth) {
    if (a.kt < 1 || a.kr < 1 || a.sigma < 1 || a.sigma > a.kr || a.depth < 1)
      throw std::domain_error("a pinned point needs --kt, --kr, --sigma in 1..K_r and --depth");
    points.push_back({a.kt, a.kr, a.sigma, a.depth});
  } else {
    const int depth_max = a.grid == "full" ? 2 : 1;
    for (int kt = 1; kt <= 8; ++kt)
      for (int kr = 1; kt * kr <= 8; ++kr)
        for (int sigma = 1; sigma <= kr; ++sigma)
          for (int n = 1; n <= depth_max; ++n) points.push_back({kt, kr, sigma, n});
  }
  const std::size_t trials = a.trials ? a.trials : 100;

  json rows = json::array();
  bool passed = true;
  std::size_t failed_trials = 0;
  for (const auto& pt : points) {
    const auto rep = phy::certify_phy(pt.kt, pt.kr, pt.sigma, pt.depth, trials, seed, mode, threads);
    const auto full = phy::to_json(rep);
    json failing = json::array();
    for (std::size_t t = 0; t < rep.trials.size(); ++t) {
      const auto& tr = rep.trials[t];
      bool ok = tr.aligned && tr.round_trip;
      for (bool f : tr.full_rank) ok = ok && f;
      if (!ok) failing.push_back(full["trials"][t]);
    }
    failed_trials += failing.size();
    passed = passed && rep.passed();
    rows.push_back({{"kt", pt.kt},
                    {"kr", pt.kr},
                    {"sigma", pt.sigma},
                    {"depth", pt.depth},
                    {"block_length", rep.block_length},
                    {"trials", rep.trials.size()},
                    {"aligned", rep.aligned_count()},
                    {"full_rank", rep.full_rank_count()},
                    {"round_trip", rep.round_trip_count()},
                    {"monomials_distinct", rep.monomials_distinct},
                    {"failing_trials", failing}});
  }
  VerifyResult r;
  r.passed = passed;
  r.summary = std::to_string(points.size()) + " grid points x " + std::to_string(trials) + " channels, " +
              std::to_string(failed_trials) + " failing trials";
  r.report = {{"suite", "phy"}, {"grid", a.grid}, {"mode", mode_name(mode)}, {"seed", seed}, {"points", rows}, {"passed", passed}};
  return r;
}

std::vector<int> permutation(int n, std::uint64_t seed) {
  CounterRng rng(seed, 0x5045524d);
  std::vector<int> out(n);
  for (int i = 0; i < n; ++i) out[i] = i + 1;
  for (int i = n - 1; i > 0; --i) std::swap(out[i], out[rng.uniform_int(0, i)]);
  return out;
}

VerifyResult verify_e2e(const VerifyArgs& a, std::uint64_t seed, unsigned threads, ScalarMode mode) {
  const std::size_t trials = a.trials ? a.trials : 20;
  json failures = json::array();
  auto record = [&](const e2e::EndToEndReport& rep) {
    if (!rep.passed()) failures.push_back(e2e::to_json(rep));
  };

  const SystemParams four = SystemParams(4, 2, 4, Rational(0)).with_kappa(1);
  std::vector<e2e::EndToEndReport> runs(trials, e2e::EndToEndReport(four));
  parallel_for(
      trials,
      [&](std::size_t t) {
        const std::uint64_t s = phy::trial_seed(seed, t);
        const auto library = net::Library::random(4, net::min_file_bits(four) * e2e::kDefaultChunkBits * 2, s);
        runs[t] = e2e::run_end_to_end(four, library, permutation(4, s), 1, s, mode);
      },
      threads);
  for (const auto& rep : runs) record(rep);

  const SystemParams unicast(2, 2, 2, Rational(0));
  const auto u = e2e::run_end_to_end(unicast, net::Library::random(2, 256, seed), {1, 2}, 8, seed, mode);
  record(u);
  const Rational error = abs(u.reciprocal_dof - u.target) / u.target;
  const bool accounting_ok = error <= frac(5, 100);

  std::size_t extraction = 0;
  for (auto corner : {net::Corner2x2::M13, net::Corner2x2::M45})
    for (const auto& d : net::kDemandPairs) {
      const auto rep = e2e::run_end_to_end_2x2(corner, d, seed, mode);
      record(rep);
      if (rep.reciprocal_worst != rep.target) failures.push_back({{"scheme", rep.scheme}, {"reason", "accounting != 3/4 L"}});
      ++extraction;
    }

  std::size_t grid_runs = 0;
  const int n_max = a.grid == "full" ? 4 : 3;
  const int kr_max = a.grid == "full" ? 4 : 3;
  for (int n = 1; n <= n_max; ++n)
    for (int kt = 1; kt <= 2; ++kt)
      for (int kr = 1; kr <= kr_max; ++kr)
        for (int kappa = 0; kappa <= kr; ++kappa) {
          const auto p = SystemParams(n, kt, kr, Rational(0)).with_kappa(kappa);
          const auto library = net::Library::random(n, net::min_file_bits(p) * e2e::kDefaultChunkBits, seed);
          std::vector<std::vector<int>> demands;
          net::for_each_demand(n, kr, [&](const std::vector<int>& d) { demands.push_back(d); });
          std::vector<e2e::EndToEndReport> reps(demands.size(), e2e::EndToEndReport(p));
          parallel_for(
              demands.size(),
              [&](std::size_t i) { reps[i] = e2e::run_end_to_end(p, library, demands[i], 1, seed, mode); },
              threads);
          for (const auto& rep : reps) record(rep);
          grid_runs += demands.size();
        }

  VerifyResult r;
  r.passed = failures.empty() && accounting_ok;
  r.summary = std::to_string(trials) + " four-receiver channels, " + std::to_string(extraction) + " extraction runs, " +
              std::to_string(grid_runs) + " grid runs, accounting " + to_exact_string(u.reciprocal_dof) + " vs " +
              to_exact_string(u.target) + ", " + std::to_string(failures.size()) + " failures";
  r.report = {{"suite", "e2e"},
              {"grid", a.grid},
              {"mode", mode_name(mode)},
              {"seed", seed},
              {"four_receiver_runs", trials},
              {"unicast_accounting",
               {{"depth", 8},
                {"reciprocal", to_exact_string(u.reciprocal_dof)},
                {"target", to_exact_string(u.target)},
                {"relative_error", to_decimal_string(error)},
                {"within_5_percent", accounting_ok}}},
              {"extraction_runs", extraction},
              {"grid_runs", grid_runs},
              {"failures", failures},
              {"passed", r.passed}};
  return r;
}

VerifyResult verify_2x2(std::uint64_t seed) {
  json failures = json::array();
  json corners = json::array();
  const Rational expected_load[] = {2, frac(4, 3), frac(4, 5), 0};
  int k = 0;
  std::size_t decodes = 0;
  for (auto corner : {net::Corner2x2::M0, net::Corner2x2::M13, net::Corner2x2::M45, net::Corner2x2::M2}) {
    const auto s = net::scheme_2x2(corner);
    const auto name = net::corner_name(corner);
    for (const auto& v : net::audit_2x2(s)) failures.push_back({{"corner", name}, {"reason", v}});
    if (s.sum_load != expected_load[k]) failures.push_back({{"corner", name}, {"reason", "unexpected sum load"}});
    if (dof::dof_2x2_curve(s.m_rx) != frac(3, 4) * s.sum_load)
      failures.push_back({{"corner", name}, {"reason", "curve differs from 3/4 of the load"}});
    if (dof::net2x2_lower_bound(s.m_rx) != s.sum_load)
      failures.push_back({{"corner", name}, {"reason", "load lower bound not met"}});
    const auto library = net::Library::random(2, static_cast<std::size_t>(s.parts) * 16, mix64(seed + k));
    for (const auto& d : net::kDemandPairs) {
      const auto row = net::deliver_2x2(s, d);
      for (int rx = 1; rx <= 2; ++rx) {
        std::string reason;
        try {
          if (net::decode_2x2(s, row, rx, library) != library.file(d[rx - 1])) reason = "decoded file differs";
        } catch (const std::exception& e) {
          reason = e.what();
        }
        if (!reason.empty())
          failures.push_back({{"corner", name}, {"demand", net::demand_label(d)}, {"receiver", rx}, {"reason", reason}});
        ++decodes;
      }
    }
    corners.push_back({{"corner", name},
                       {"parts", s.parts},
                       {"m_rx", to_exact_string(s.m_rx)},
                       {"sum_load", to_exact_string(s.sum_load)},
                       {"reciprocal_dof", to_exact_string(dof::dof_2x2_curve(s.m_rx))}});
    ++k;
  }
  const auto peak = dof::improvement_2x2();
  VerifyResult r;
  r.passed = failures.empty();
  r.summary = "4 corners x 4 demand pairs, " + std::to_string(decodes) + " decodes, " +
              std::to_string(failures.size()) + " failures";
  r.report = {{"suite", "2x2"},
              {"seed", seed},
              {"corners", corners},
              {"improvement", {{"ratio", to_exact_string(peak.ratio)}, {"m_r", to_exact_string(peak.argmax_m_rx)}}},
              {"failures", failures},
              {"passed", r.passed}};
  return r;
}

}  // namespace

VerifyResult run_verify(const VerifyArgs& given, std::uint64_t seed, unsigned threads, ScalarMode mode) {
  VerifyArgs args = given;
  if (args.grid.empty()) args.grid = args.suite == "phy" ? "small" : "full";
  if (args.suite == "net") return verify_net(args, seed, threads);
  if (args.suite == "phy") return verify_phy(args, seed, threads, mode);
  if (args.suite == "e2e") return verify_e2e(args, seed, threads, mode);
  if (args.suite == "2x2") return verify_2x2(seed);
  throw std::domain_error("unknown suite " + args.suite);
}

}  // namespace cachedof::cli
