#include "cachedof/phy/certify.hpp"

#include <cmath>
#include <sstream>

#include "cachedof/core/parallel.hpp"
#include "cachedof/core/rng.hpp"
#include "cachedof/dof/bounds.hpp"

namespace cachedof::phy {
namespace {

constexpr std::uint64_t kMessageStream = 0x6d657373;

template <class T>
MessageBlocks<T> random_messages(const AlignmentPlan& plan, std::uint64_t seed) {
  CounterRng rng(seed, kMessageStream);
  MessageBlocks<T> out(plan.subsets().size());
  for (auto& group : out) {
    for (int j = 1; j <= plan.n_tx(); ++j) {
      std::vector<T> v(plan.streams(j));
      for (auto& x : v) {
        if constexpr (std::is_same_v<T, Rational>) x = frac(rng.uniform_int(-99, 99), rng.uniform_int(1, 9));
        else x = rng.uniform_real(-1.0, 1.0);
      }
      group.push_back(std::move(v));
    }
  }
  return out;
}

bool same(const std::vector<Rational>& a, const std::vector<Rational>& b) { return a == b; }

bool same(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!(std::abs(a[i] - b[i]) <= 1e-6 * std::max(1.0, std::abs(b[i])))) return false;
  return true;
}

template <class T>
bool round_trip(const AlignmentPlan& plan, const ChannelRealization& channel,
                const std::vector<DecodabilityCertificate>& certs, std::uint64_t seed) {
  const auto messages = random_messages<T>(plan, seed);
  const auto y = transmit_receive(plan, channel, messages);
  for (int k = 1; k <= plan.n_rx(); ++k) {
    if (!certs[k - 1].full_rank) return false;
    const auto decoded = decode_at(plan, certs[k - 1], y[k - 1]);
    for (std::size_t s = 0; s < plan.subsets().size(); ++s) {
      if (!plan.subsets()[s].subset.contains(k)) continue;
      for (int j = 1; j <= plan.n_tx(); ++j)
        if (!same(decoded.desired[s][j - 1], messages[s][j - 1])) return false;
    }
  }
  return true;
}

PhyTrial run_trial(int n_tx, int n_rx, int sigma, int depth, std::size_t slots, std::uint64_t seed, ScalarMode mode) {
  PhyTrial trial;
  trial.channel_seed = seed;
  ChannelConfig config;
  config.n_rx = n_rx;
  config.n_tx = n_tx;
  config.slots = slots;
  config.mode = mode;
  config.seed = seed;
  const auto channel = ChannelRealization::draw(config);
  trial.regenerations = channel.regenerations();
  const auto plan = build_plan(n_tx, n_rx, sigma, depth, channel);
  const auto check = verify_alignment(plan, channel);
  trial.aligned = check.aligned;
  trial.witness = check.witness;
  std::vector<DecodabilityCertificate> certs;
  for (int k = 1; k <= n_rx; ++k) {
    certs.push_back(build_psi(plan, channel, k));
    trial.full_rank.push_back(certs.back().full_rank);
    trial.witness_prime.push_back(certs.back().exact.witness_prime);
    trial.sigma_min.push_back(certs.back().sigma_min);
  }
  trial.round_trip = mode == ScalarMode::ExactRational ? round_trip<Rational>(plan, channel, certs, seed)
                                                       : round_trip<double>(plan, channel, certs, seed);
  return trial;
}

}  // namespace

std::size_t PhyReport::aligned_count() const {
  std::size_t n = 0;
  for (const auto& t : trials) n += t.aligned;
  return n;
}

std::size_t PhyReport::full_rank_count() const {
  std::size_t n = 0;
  for (const auto& t : trials) n += std::all_of(t.full_rank.begin(), t.full_rank.end(), [](bool b) { return b; });
  return n;
}

std::size_t PhyReport::round_trip_count() const {
  std::size_t n = 0;
  for (const auto& t : trials) n += t.round_trip;
  return n;
}

bool PhyReport::passed() const {
  return monomials_distinct && aligned_count() == trials.size() && full_rank_count() == trials.size() &&
         round_trip_count() == trials.size();
}

std::uint64_t trial_seed(std::uint64_t seed, std::size_t trial) {
  return CounterRng(seed, 0x747269616c).split(trial).next();
}

PhyReport certify_phy(int n_tx, int n_rx, int sigma, int depth, std::size_t trials, std::uint64_t seed,
                      ScalarMode mode, unsigned threads) {
  PhyReport report;
  report.n_tx = n_tx;
  report.n_rx = n_rx;
  report.sigma = sigma;
  report.depth = depth;
  report.mode = mode;
  report.seed = seed;
  report.gamma = alignment_gamma(n_tx, n_rx, sigma);
  const Integer t = block_length(n_tx, n_rx, sigma, depth);
  if (!t.fits_ulong_p()) throw std::overflow_error("block length too large");
  report.block_length = t.get_ui();
  report.dof = achieved_dof(n_tx, n_rx, sigma, depth);
  report.target = dof::phy_dof_optimal(n_tx, n_rx, sigma);

  report.trials.resize(trials);
  parallel_for(
      trials,
      [&](std::size_t i) {
        report.trials[i] = run_trial(n_tx, n_rx, sigma, depth, report.block_length, trial_seed(seed, i), mode);
      },
      threads);

  // Exponent structure does not depend on the draw; any channel of the right shape will do.
  ChannelConfig config{n_rx, n_tx, report.block_length, mode, seed};
  const auto channel = ChannelRealization::draw(config);
  const auto plan = build_plan(n_tx, n_rx, sigma, depth, channel);
  report.monomials_distinct = true;
  for (int k = 1; k <= n_rx; ++k) report.monomials_distinct &= monomials_distinct(psi_monomials(plan, k));
  return report;
}

nlohmann::json to_json(const PhyReport& report) {
  nlohmann::json trials = nlohmann::json::array();
  for (const auto& t : report.trials) {
    nlohmann::json receivers = nlohmann::json::array();
    for (std::size_t k = 0; k < t.full_rank.size(); ++k) {
      nlohmann::json r = {{"receiver", k + 1}, {"full_rank", static_cast<bool>(t.full_rank[k])}};
      if (t.witness_prime[k]) r["witness_prime"] = *t.witness_prime[k];
      if (t.sigma_min[k]) r["sigma_min"] = *t.sigma_min[k];
      receivers.push_back(std::move(r));
    }
    nlohmann::json entry = {{"channel_seed", t.channel_seed},
                            {"regenerations", t.regenerations},
                            {"aligned", t.aligned},
                            {"receivers", std::move(receivers)},
                            {"round_trip", t.round_trip}};
    if (t.witness)
      entry["alignment_witness"] = {{"subset", t.witness->subset.to_string()},
                                    {"rx", t.witness->rx},
                                    {"tx", t.witness->tx},
                                    {"column", t.witness->column},
                                    {"residual", t.witness->residual}};
    trials.push_back(std::move(entry));
  }
  return {{"plan",
           {{"n_tx", report.n_tx},
            {"n_rx", report.n_rx},
            {"sigma", report.sigma},
            {"depth", report.depth},
            {"gamma", report.gamma},
            {"block_length", report.block_length},
            {"delta_first", to_exact_string(report.dof.first)},
            {"delta_rest", to_exact_string(report.dof.rest)},
            {"target", to_exact_string(report.target)}}},
          {"mode", mode_name(report.mode)},
          {"seed", report.seed},
          {"monomials_distinct", report.monomials_distinct},
          {"summary",
           {{"trials", report.trials.size()},
            {"aligned", report.aligned_count()},
            {"full_rank", report.full_rank_count()},
            {"round_trip", report.round_trip_count()},
            {"passed", report.passed()}}},
          {"trials", std::move(trials)}};
}

std::vector<ConvergenceRow> convergence_table(int n_tx, int n_rx, int sigma, const std::vector<int>& depths) {
  const Rational target = dof::phy_dof_optimal(n_tx, n_rx, sigma);
  std::vector<ConvergenceRow> rows;
  for (int n : depths) {
    const auto d = achieved_dof(n_tx, n_rx, sigma, n);
    rows.push_back(ConvergenceRow{n, d.first, d.rest, target, abs(d.first - target) / target,
                                  abs(d.rest - target) / target});
  }
  return rows;
}

std::string convergence_csv(const std::vector<ConvergenceRow>& rows) {
  std::ostringstream out;
  out << "n,delta_1,delta_1_decimal,delta_2,delta_2_decimal,target,target_decimal,rel_error_1,rel_error_2\n";
  for (const auto& r : rows)
    out << r.depth << ',' << to_exact_string(r.delta_first) << ',' << to_decimal_string(r.delta_first) << ','
        << to_exact_string(r.delta_rest) << ',' << to_decimal_string(r.delta_rest) << ','
        << to_exact_string(r.target) << ',' << to_decimal_string(r.target) << ','
        << to_decimal_string(r.error_first) << ',' << to_decimal_string(r.error_rest) << '\n';
  return out.str();
}

std::vector<int> doubling_depths(int last) {
  if (last < 1) throw std::domain_error("depth must be at least 1");
  std::vector<int> out;
  for (int n = 1; n < last; n *= 2) out.push_back(n);
  out.push_back(last);
  return out;
}

}  // namespace cachedof::phy
