#include "cachedof/e2e/end_to_end.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "cachedof/core/errors.hpp"
#include "cachedof/net/scheme.hpp"
#include "cachedof/phy/alignment.hpp"
#include "cachedof/phy/channel.hpp"
#include "cachedof/phy/two_by_two.hpp"

namespace cachedof::e2e {

namespace {

std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

void check_chunk(std::size_t chunk_bits) {
  if (chunk_bits == 0 || chunk_bits > 24) throw std::domain_error("chunk size must be 1..24 bits");
}

template <class T>
T symbol_of(std::uint64_t value) {
  if constexpr (std::is_same_v<T, Rational>)
    return Rational(Integer(static_cast<unsigned long>(value)));
  else
    return static_cast<double>(value);
}

std::optional<std::vector<bool>> digits_of(std::uint64_t value, std::size_t chunk_bits, bool sum) {
  std::vector<bool> out(chunk_bits);
  for (std::size_t t = 0; t < chunk_bits; ++t) {
    const auto d = value & 3u;
    if (d == 3 || (d == 2 && !sum)) return std::nullopt;
    out[t] = d == 1;
    value >>= 2;
  }
  if (value != 0) return std::nullopt;
  return out;
}

/// Writes `digits` into `bits` at `offset`, dropping anything past the end.
void write_chunk(net::Bits& bits, std::size_t offset, const std::vector<bool>& digits) {
  for (std::size_t t = 0; t < digits.size() && offset + t < bits.size(); ++t) bits[offset + t] = digits[t];
}

template <class T>
std::optional<std::vector<bool>> unpack_any(const T& symbol, std::size_t chunk_bits, bool sum) {
  return unpack_chunk(symbol, chunk_bits, sum);
}

void record_certificate(ReceiverVerdict& v, const phy::DecodabilityCertificate& cert) {
  v.full_rank = cert.full_rank;
  v.witness_prime = cert.exact.witness_prime;
  v.exact_rank = cert.exact.exact_rank;
  v.sigma_min = cert.sigma_min;
}

template <class T>
void run_multicast_phy(EndToEndReport& report, const net::CachingScheme& scheme, const net::DeliveryPayloads& sent,
                       const net::Library& library) {
  const auto& p = report.params;
  const int kt = p.n_tx();
  const int kr = p.n_rx();
  const std::size_t c = report.chunk_bits;

  phy::ChannelConfig config;
  config.n_rx = kr;
  config.n_tx = kt;
  config.slots = report.block_length;
  config.mode = report.mode;
  config.seed = report.seed;
  const auto channel = phy::ChannelRealization::draw(config);
  report.regenerations = channel.regenerations();
  const auto plan = phy::build_plan(kt, kr, report.sigma, report.depth, channel);
  report.aligned = phy::verify_alignment(plan, channel).aligned;

  const auto& subsets = plan.subsets();
  for (int j = 1; j <= kt; ++j) report.streams.push_back(plan.streams(j));
  std::size_t blocks = 0;
  for (int j = 1; j <= kt; ++j) blocks = std::max(blocks, ceil_div(report.payload_symbols, plan.streams(j)));
  report.blocks = blocks;

  // Symbol index q of V_{S,j} rides in block q / streams(j), stream q % streams(j).
  std::vector<std::vector<std::vector<T>>> observations(blocks);
  for (std::size_t b = 0; b < blocks; ++b) {
    phy::MessageBlocks<T> messages(subsets.size(), std::vector<std::vector<T>>(kt));
    for (std::size_t s = 0; s < subsets.size(); ++s) {
      for (int j = 1; j <= kt; ++j) {
        const auto& bits = sent.payloads.at(net::PipeKey{subsets[s].subset, j});
        const std::size_t d = plan.streams(j);
        auto& vec = messages[s][j - 1];
        vec.reserve(d);
        for (std::size_t u = 0; u < d; ++u) {
          const std::size_t q = b * d + u;
          vec.push_back(q < report.payload_symbols ? symbol_of<T>(pack_chunk(bits, q * c, c)) : symbol_of<T>(0));
        }
      }
    }
    observations[b] = phy::transmit_receive(plan, channel, messages);
  }

  for (int k = 1; k <= kr; ++k) {
    ReceiverVerdict v;
    v.receiver = k;
    const auto cert = phy::build_psi(plan, channel, k);
    record_certificate(v, cert);
    if (!cert.full_rank) {
      v.error = "Psi not full rank at receiver " + std::to_string(k);
      report.receivers.push_back(std::move(v));
      continue;
    }
    net::DeliveryPayloads heard;
    heard.demand = sent.demand;
    heard.payload_bits = sent.payload_bits;
    heard.link_load = sent.link_load;
    heard.sum_load = sent.sum_load;
    heard.scheme_fingerprint = sent.scheme_fingerprint;
    for (std::size_t s = 0; s < subsets.size(); ++s)
      if (subsets[s].subset.contains(k))
        for (int j = 1; j <= kt; ++j) heard.payloads[net::PipeKey{subsets[s].subset, j}] = net::Bits(sent.payload_bits);

    v.symbols_valid = true;
    for (std::size_t b = 0; b < blocks; ++b) {
      const auto decoded = phy::decode_at<T>(plan, cert, observations[b][k - 1]);
      for (std::size_t s = 0; s < subsets.size(); ++s) {
        if (!subsets[s].subset.contains(k)) continue;
        for (int j = 1; j <= kt; ++j) {
          auto& bits = heard.payloads[net::PipeKey{subsets[s].subset, j}];
          const std::size_t d = plan.streams(j);
          for (std::size_t u = 0; u < d; ++u) {
            const std::size_t q = b * d + u;
            const auto digits = unpack_any(decoded.desired[s][j - 1][u], c, false);
            if (!digits || (q >= report.payload_symbols && std::find(digits->begin(), digits->end(), true) != digits->end())) {
              v.symbols_valid = false;
              continue;
            }
            if (q < report.payload_symbols) write_chunk(bits, q * c, *digits);
          }
        }
      }
    }
    try {
      v.recovered = v.symbols_valid && net::decode(scheme, heard, k) == library.file(sent.demand[k - 1]);
      if (!v.recovered && v.symbols_valid) v.error = "decoded file differs from the demanded file";
    } catch (const std::exception& e) {
      v.error = e.what();
    }
    if (!v.symbols_valid) v.error = "decoded symbol is not a valid chunk";
    report.receivers.push_back(std::move(v));
  }
}

template <class T>
void run_2x2_phy(EndToEndReport& report, const net::Scheme2x2& scheme, const net::DeliveryRow2x2& row,
                 const net::Library& library) {
  const std::size_t c = report.chunk_bits;
  const int parts = scheme.parts;

  phy::ChannelConfig config;
  config.n_rx = 2;
  config.n_tx = 2;
  config.slots = 3;
  config.mode = report.mode;
  config.seed = report.seed;
  const auto channel = phy::ChannelRealization::draw(config);
  report.regenerations = channel.regenerations();
  const auto plan = phy::build_plan_2x2(channel);

  std::array<std::array<net::Bits, 2>, 2> sent;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) sent[i][j] = net::evaluate_combo(row.v[i][j], parts, library);

  for (int rx = 1; rx <= 2; ++rx) {
    ReceiverVerdict v;
    v.receiver = rx;
    const auto cert = phy::certify_2x2(plan, rx);
    record_certificate(v, cert);
    if (!cert.full_rank) {
      v.error = "extraction matrix not full rank at receiver " + std::to_string(rx);
      report.receivers.push_back(std::move(v));
      continue;
    }
    const int other = 2 - rx;
    std::array<net::Bits, 3> got{net::Bits(report.payload_bits), net::Bits(report.payload_bits),
                                 net::Bits(report.payload_bits)};
    v.symbols_valid = true;
    v.sum_recovered = true;
    for (std::size_t q = 0; q < report.payload_symbols; ++q) {
      std::array<std::array<std::uint64_t, 2>, 2> sym;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) sym[i][j] = pack_chunk(sent[i][j], q * c, c);
      const auto y = phy::transmit_2x2<T>(plan, channel, symbol_of<T>(sym[0][0]), symbol_of<T>(sym[0][1]),
                                          symbol_of<T>(sym[1][0]), symbol_of<T>(sym[1][1]));
      const auto z = phy::decode_2x2<T>(plan, rx, y[rx - 1]);
      const std::uint64_t expected_sum = sym[other][0] + sym[other][1];
      if constexpr (std::is_same_v<T, Rational>) {
        if (z[2] != symbol_of<T>(expected_sum)) *v.sum_recovered = false;
      } else {
        if (std::llround(z[2]) != static_cast<long long>(expected_sum)) *v.sum_recovered = false;
      }
      for (int k = 0; k < 3; ++k) {
        const auto digits = unpack_any(z[k], c, k == 2);
        if (!digits) {
          v.symbols_valid = false;
          continue;
        }
        write_chunk(got[k], q * c, *digits);
      }
    }
    try {
      std::vector<net::Bits> observed;
      for (auto combo : scheme.rx_cache[rx - 1]) observed.push_back(net::evaluate_combo(combo, parts, library));
      for (auto& bits : got) observed.push_back(bits);
      v.recovered = v.symbols_valid && *v.sum_recovered &&
                    net::decode_2x2(scheme, row, rx, observed) == library.file(row.demand[rx - 1]);
      if (!v.recovered && v.symbols_valid && *v.sum_recovered) v.error = "decoded file differs from the demanded file";
    } catch (const std::exception& e) {
      v.error = e.what();
    }
    if (!v.symbols_valid) v.error = "decoded symbol is not a valid chunk";
    else if (!*v.sum_recovered) v.error = "aligned coordinate is not the interfering symbol sum";
    report.receivers.push_back(std::move(v));
  }
}

}  // namespace

std::uint64_t pack_chunk(const net::Bits& bits, std::size_t offset, std::size_t chunk_bits) {
  check_chunk(chunk_bits);
  std::uint64_t value = 0;
  for (std::size_t t = chunk_bits; t-- > 0;) {
    value <<= 2;
    if (offset + t < bits.size() && bits[offset + t]) value |= 1;
  }
  return value;
}

std::optional<std::vector<bool>> unpack_chunk(const Rational& symbol, std::size_t chunk_bits, bool sum) {
  check_chunk(chunk_bits);
  if (!is_integer(symbol) || sgn(symbol) < 0) return std::nullopt;
  const Integer& n = symbol.get_num();
  if (!n.fits_ulong_p()) return std::nullopt;
  return digits_of(n.get_ui(), chunk_bits, sum);
}

std::optional<std::vector<bool>> unpack_chunk(double symbol, std::size_t chunk_bits, bool sum) {
  check_chunk(chunk_bits);
  const double r = std::round(symbol);
  if (!std::isfinite(symbol) || r < 0 || std::abs(symbol - r) > 0.25 || r > 1e15) return std::nullopt;
  return digits_of(static_cast<std::uint64_t>(r), chunk_bits, sum);
}

bool EndToEndReport::passed() const {
  if (!aligned) return false;
  for (const auto& v : receivers)
    if (!v.recovered) return false;
  return static_cast<int>(receivers.size()) == params.n_rx();
}

Rational multicast_reciprocal(int n_tx, int n_rx, int kappa) {
  if (kappa < 0 || kappa > n_rx) throw std::domain_error("kappa must lie in 0..K_r");
  return (Rational(n_tx - 1) + frac(n_rx, kappa + 1)) / n_tx * (1 - frac(kappa, n_rx));
}

EndToEndReport run_end_to_end(const SystemParams& params, const net::Library& library, const std::vector<int>& demand,
                              int depth, std::uint64_t seed, ScalarMode mode, std::size_t chunk_bits) {
  check_chunk(chunk_bits);
  if (depth < 1) throw std::domain_error("alignment depth must be at least 1");
  const int kappa = params.integer_kappa();
  const int kt = params.n_tx();
  const int kr = params.n_rx();

  EndToEndReport report(params);
  report.scheme = "multicast";
  report.demand = demand;
  report.kappa = kappa;
  report.sigma = kappa + 1;
  report.depth = depth;
  report.mode = mode;
  report.seed = seed;
  report.file_bits = library.file_bits();
  report.chunk_bits = chunk_bits;
  report.target = multicast_reciprocal(kt, kr, kappa);

  const auto scheme = net::place(params, library);
  const auto sent = net::deliver(scheme, demand);
  report.payload_bits = sent.payload_bits;
  report.payload_symbols = ceil_div(sent.payload_bits, chunk_bits);
  report.link_load = sent.link_load;
  report.sum_load = sent.sum_load;

  if (kappa == kr) {
    for (int k = 1; k <= kr; ++k) {
      ReceiverVerdict v;
      v.receiver = k;
      v.full_rank = true;
      v.symbols_valid = true;
      try {
        v.recovered = net::decode(scheme, sent, k) == library.file(demand[k - 1]);
      } catch (const std::exception& e) {
        v.error = e.what();
      }
      report.receivers.push_back(std::move(v));
    }
    return report;
  }

  const auto md = phy::achieved_dof(kt, kr, report.sigma, depth);
  report.block_length = phy::block_length(kt, kr, report.sigma, depth).get_ui();
  report.delta_first = md.first;
  report.delta_rest = kt > 1 ? md.rest : md.first;
  report.sum_dof = Rational(binomial(kr, report.sigma)) * (md.first + (kt - 1) * md.rest);
  report.reciprocal_dof = report.sum_load / report.sum_dof;
  report.reciprocal_worst = report.link_load / min(report.delta_first, report.delta_rest);

  if (mode == ScalarMode::ExactRational)
    run_multicast_phy<Rational>(report, scheme, sent, library);
  else
    run_multicast_phy<double>(report, scheme, sent, library);

  report.reciprocal_realized =
      frac(static_cast<long>(report.blocks * report.block_length * chunk_bits), static_cast<long>(report.file_bits));
  return report;
}

EndToEndReport run_end_to_end_2x2(net::Corner2x2 corner, const std::array<int, 2>& demand, std::uint64_t seed,
                                  ScalarMode mode, std::size_t chunk_bits, std::size_t symbols) {
  check_chunk(chunk_bits);
  if (corner != net::Corner2x2::M13 && corner != net::Corner2x2::M45)
    throw std::domain_error("the extraction scheme runs at the M13 and M45 corners");
  if (symbols == 0) throw std::domain_error("at least one symbol per part is required");
  const auto scheme = net::scheme_2x2(corner);
  const auto row = net::deliver_2x2(scheme, demand);

  EndToEndReport report(SystemParams(2, 2, 2, scheme.m_tx, scheme.m_rx));
  report.scheme = "2x2:" + net::corner_name(corner);
  report.demand = {demand[0], demand[1]};
  report.mode = mode;
  report.seed = seed;
  report.chunk_bits = chunk_bits;
  report.payload_symbols = symbols;
  report.payload_bits = symbols * chunk_bits;
  report.file_bits = report.payload_bits * scheme.parts;
  report.streams = {1, 1};
  report.block_length = 3;
  report.blocks = symbols;
  report.link_load = scheme.link_load;
  report.sum_load = scheme.sum_load;
  report.delta_first = frac(1, 3);
  report.delta_rest = frac(1, 3);
  report.sum_dof = frac(4, 3);
  report.reciprocal_dof = report.sum_load / report.sum_dof;
  report.reciprocal_worst = report.link_load / report.delta_rest;
  report.reciprocal_realized = frac(static_cast<long>(3 * symbols * chunk_bits), static_cast<long>(report.file_bits));
  report.target = frac(3, 4) * scheme.sum_load;

  const auto library = net::Library::random(2, report.file_bits, seed);
  if (mode == ScalarMode::ExactRational)
    run_2x2_phy<Rational>(report, scheme, row, library);
  else
    run_2x2_phy<double>(report, scheme, row, library);
  return report;
}

nlohmann::json to_json(const EndToEndReport& r) {
  nlohmann::json receivers = nlohmann::json::array();
  for (const auto& v : r.receivers) {
    nlohmann::json e = {{"receiver", v.receiver},
                        {"full_rank", v.full_rank},
                        {"symbols_valid", v.symbols_valid},
                        {"recovered", v.recovered}};
    if (v.witness_prime) e["witness_prime"] = *v.witness_prime;
    if (v.exact_rank) e["exact_rank"] = *v.exact_rank;
    if (v.sigma_min) e["sigma_min"] = *v.sigma_min;
    if (v.sum_recovered) e["sum_recovered"] = *v.sum_recovered;
    if (!v.error.empty()) e["error"] = v.error;
    receivers.push_back(std::move(e));
  }
  auto q = [](const Rational& x) { return nlohmann::json{{"exact", to_exact_string(x)}, {"decimal", to_double(x)}}; };
  return {{"scheme", r.scheme},
          {"params", r.params.to_string()},
          {"demand", r.demand},
          {"kappa", r.kappa},
          {"sigma", r.sigma},
          {"depth", r.depth},
          {"mode", mode_name(r.mode)},
          {"seed", r.seed},
          {"regenerations", r.regenerations},
          {"aligned", r.aligned},
          {"framing",
           {{"file_bits", r.file_bits},
            {"payload_bits", r.payload_bits},
            {"chunk_bits", r.chunk_bits},
            {"payload_symbols", r.payload_symbols},
            {"streams", r.streams},
            {"block_length", r.block_length},
            {"blocks", r.blocks}}},
          {"accounting",
           {{"link_load", q(r.link_load)},
            {"sum_load", q(r.sum_load)},
            {"delta_first", q(r.delta_first)},
            {"delta_rest", q(r.delta_rest)},
            {"sum_dof", q(r.sum_dof)},
            {"reciprocal_dof", q(r.reciprocal_dof)},
            {"reciprocal_worst", q(r.reciprocal_worst)},
            {"reciprocal_realized", q(r.reciprocal_realized)},
            {"target", q(r.target)}}},
          {"receivers", std::move(receivers)},
          {"passed", r.passed()}};
}

std::vector<AccountingRow> accounting_table(int n_tx, int n_rx, int kappa, const std::vector<int>& depths) {
  if (kappa < 0 || kappa >= n_rx) throw std::domain_error("accounting needs integer kappa below K_r");
  const int sigma = kappa + 1;
  const Rational sum_load = frac(n_rx - kappa, kappa + 1);
  const Rational link_load = sum_load / (n_tx * Rational(binomial(n_rx, sigma)));
  const Rational target = multicast_reciprocal(n_tx, n_rx, kappa);
  std::vector<AccountingRow> rows;
  for (int n : depths) {
    const auto md = phy::achieved_dof(n_tx, n_rx, sigma, n);
    const Rational rest = n_tx > 1 ? md.rest : md.first;
    const Rational sum_dof = Rational(binomial(n_rx, sigma)) * (md.first + (n_tx - 1) * md.rest);
    AccountingRow row{n,
                      phy::block_length(n_tx, n_rx, sigma, n),
                      md.first,
                      rest,
                      sum_load / sum_dof,
                      link_load / min(md.first, rest),
                      target,
                      Rational(0)};
    if (sgn(target) != 0) row.error = abs(row.reciprocal_dof - target) / target;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string accounting_csv(const std::vector<AccountingRow>& rows) {
  std::ostringstream out;
  out << "n,block_length,delta_1,delta_1_decimal,delta_2,delta_2_decimal,reciprocal,reciprocal_decimal,"
         "reciprocal_worst,reciprocal_worst_decimal,target,target_decimal,rel_error\n";
  for (const auto& r : rows)
    out << r.depth << ',' << r.block_length.get_str() << ',' << to_exact_string(r.delta_first) << ','
        << to_decimal_string(r.delta_first) << ',' << to_exact_string(r.delta_rest) << ','
        << to_decimal_string(r.delta_rest) << ',' << to_exact_string(r.reciprocal_dof) << ','
        << to_decimal_string(r.reciprocal_dof) << ',' << to_exact_string(r.reciprocal_worst) << ','
        << to_decimal_string(r.reciprocal_worst) << ',' << to_exact_string(r.target) << ','
        << to_decimal_string(r.target) << ',' << to_decimal_string(r.error) << '\n';
  return out.str();
}

}  // namespace cachedof::e2e
