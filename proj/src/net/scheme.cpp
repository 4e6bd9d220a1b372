#include "cachedof/net/scheme.hpp"

#include <set>
#include <stdexcept>
#include <string>

#include "cachedof/core/errors.hpp"
#include "cachedof/core/json_io.hpp"
#include "cachedof/core/rng.hpp"

namespace cachedof::net {
namespace {

std::uint64_t hash_shape(std::uint64_t tag, const SystemParams& p, std::size_t file_bits) {
  std::uint64_t h = mix64(tag);
  for (std::uint64_t v : {std::uint64_t(p.n_files()), std::uint64_t(p.n_tx()), std::uint64_t(p.n_rx()),
                          std::uint64_t(file_bits)})
    h = mix64(h ^ v);
  h = mix64(h ^ std::hash<std::string>{}(to_exact_string(p.m_rx())));
  return h;
}

void check_demand(const SystemParams& p, const std::vector<int>& demand) {
  if (static_cast<int>(demand.size()) != p.n_rx())
    throw std::domain_error("demand vector must have one entry per receiver");
  for (int u : demand)
    if (u < 1 || u > p.n_files()) throw std::domain_error("demanded file index out of range");
}

std::string subpart_key_string(const SubpartKey& k) {
  return std::to_string(k.file) + "|" + k.subset.key() + "|" + std::to_string(k.tx);
}

std::string pipe_key_string(const PipeKey& k) { return k.subset.key() + "|" + std::to_string(k.tx); }

ReceiverSubset parse_subset(const std::string& text, int n_rx) {
  std::vector<int> members;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    members.push_back(std::stoi(text.substr(pos, comma - pos)));
    pos = comma + 1;
  }
  return ReceiverSubset(std::move(members), n_rx);
}

}  // namespace

CachingScheme::CachingScheme(SystemParams params, std::size_t file_bits, std::vector<std::vector<Bits>> tx_parts,
                             std::vector<std::map<SubpartKey, Bits>> rx_caches)
    : params_(std::move(params)),
      kappa_(params_.integer_kappa()),
      file_bits_(file_bits),
      tx_parts_(std::move(tx_parts)),
      rx_caches_(std::move(rx_caches)) {
  if (static_cast<int>(tx_parts_.size()) != params_.n_tx() || static_cast<int>(rx_caches_.size()) != params_.n_rx())
    throw std::domain_error("cache count does not match params");
}

std::size_t CachingScheme::part_bits() const { return file_bits_ / params_.n_tx(); }

std::size_t CachingScheme::subpart_bits() const { return part_bits() / binomial_u64(params_.n_rx(), kappa_); }

const Bits& CachingScheme::tx_part(int tx, int file) const {
  if (tx < 1 || tx > params_.n_tx()) throw std::out_of_range("transmitter index out of range");
  if (file < 1 || file > params_.n_files()) throw std::out_of_range("file index out of range");
  return tx_parts_[tx - 1][file - 1];
}

const std::map<SubpartKey, Bits>& CachingScheme::rx_cache(int receiver) const {
  if (receiver < 1 || receiver > params_.n_rx()) throw std::out_of_range("receiver index out of range");
  return rx_caches_[receiver - 1];
}

std::size_t CachingScheme::tx_cache_bits(int tx) const {
  std::size_t total = 0;
  for (int n = 1; n <= params_.n_files(); ++n) total += tx_part(tx, n).size();
  return total;
}

std::size_t CachingScheme::rx_cache_bits(int receiver) const {
  std::size_t total = 0;
  for (const auto& [key, bits] : rx_cache(receiver)) total += bits.size();
  return total;
}

std::uint64_t CachingScheme::fingerprint() const { return hash_shape(1, params_, file_bits_); }

CachingScheme place(const SystemParams& params, const Library& library) {
  if (library.n_files() != params.n_files()) throw std::domain_error("library size does not match N");
  const int kappa = params.integer_kappa();
  const int kt = params.n_tx();
  const int kr = params.n_rx();
  const std::size_t f = library.file_bits();
  const std::size_t unit = min_file_bits(params);
  if (f % unit != 0)
    throw std::domain_error("file size must be a multiple of K_t*C(K_r,kappa) = " + std::to_string(unit) + " bits");

  const std::size_t part = f / kt;
  const auto subsets = subsets_of_size(kr, kappa);
  const std::size_t sub = part / subsets.size();

  std::vector<std::vector<Bits>> tx_parts(kt);
  std::vector<std::map<SubpartKey, Bits>> rx_caches(kr);
  for (int j = 1; j <= kt; ++j) {
    for (int n = 1; n <= params.n_files(); ++n) {
      Bits w = slice(library.file(n), (j - 1) * part, part);
      for (std::size_t r = 0; r < subsets.size(); ++r)
        for (int i : subsets[r].members()) rx_caches[i - 1].emplace(SubpartKey{n, subsets[r], j}, slice(w, r * sub, sub));
      tx_parts[j - 1].push_back(std::move(w));
    }
  }
  return CachingScheme(params, f, std::move(tx_parts), std::move(rx_caches));
}

DeliveryPayloads deliver(const CachingScheme& scheme, const std::vector<int>& demand) {
  const auto& p = scheme.params();
  check_demand(p, demand);
  const int kappa = scheme.kappa();
  const int kr = p.n_rx();
  const std::size_t sub = scheme.subpart_bits();

  DeliveryPayloads out;
  out.demand = demand;
  out.payload_bits = sub;
  out.link_load = Rational(1) / (Integer(p.n_tx()) * binomial(kr, kappa));
  out.sum_load = Rational(p.n_tx()) * Rational(binomial(kr, kappa + 1)) * out.link_load;
  out.scheme_fingerprint = scheme.fingerprint();
  if (kappa == kr) return out;

  for (const auto& s : subsets_of_size(kr, kappa + 1)) {
    for (int j = 1; j <= p.n_tx(); ++j) {
      Bits v(sub);
      for (int i : s.members()) {
        const std::size_t rank = lex_rank(s.without(i), kr);
        v ^= slice(scheme.tx_part(j, demand[i - 1]), rank * sub, sub);
      }
      out.payloads.emplace(PipeKey{s, j}, std::move(v));
    }
  }
  return out;
}

Bits decode(const CachingScheme& scheme, const DeliveryPayloads& payloads, int receiver) {
  const auto& p = scheme.params();
  const int kappa = scheme.kappa();
  const int kr = p.n_rx();
  if (payloads.scheme_fingerprint != scheme.fingerprint()) throw IntegrityError("payloads belong to another scheme");
  if (!payloads.groups.empty()) throw IntegrityError("partition payloads passed to the multicast decoder");
  check_demand(p, payloads.demand);
  const std::size_t sub = scheme.subpart_bits();
  const std::size_t expected = kappa == kr ? 0 : p.n_tx() * binomial_u64(kr, kappa + 1);
  if (payloads.payloads.size() > expected) throw IntegrityError("more payloads than the scheme has pipes");
  for (const auto& [key, bits] : payloads.payloads)
    if (key.subset.size() != kappa + 1 || bits.size() != sub) throw IntegrityError("payload shape does not match the scheme");

  const auto& cache = scheme.rx_cache(receiver);
  const auto& demand = payloads.demand;
  auto cached = [&](const SubpartKey& key) -> const Bits& {
    auto it = cache.find(key);
    if (it == cache.end()) throw IntegrityError("receiver cache lacks subpart " + subpart_key_string(key));
    return it->second;
  };

  const int want = demand[receiver - 1];
  const std::size_t part = scheme.part_bits();
  Bits file(scheme.file_bits());
  const auto subsets = subsets_of_size(kr, kappa);
  for (int j = 1; j <= p.n_tx(); ++j) {
    for (std::size_t r = 0; r < subsets.size(); ++r) {
      const auto& t = subsets[r];
      Bits piece;
      if (t.contains(receiver)) {
        piece = cached(SubpartKey{want, t, j});
      } else {
        const ReceiverSubset s = t.with(receiver, kr);
        auto it = payloads.payloads.find(PipeKey{s, j});
        if (it == payloads.payloads.end()) throw IntegrityError("missing payload " + pipe_key_string(PipeKey{s, j}));
        piece = it->second;
        for (int k : s.members())
          if (k != receiver) piece ^= cached(SubpartKey{demand[k - 1], s.without(k), j});
      }
      splice(file, (j - 1) * part + r * sub, piece);
    }
  }
  return file;
}

DeliveryPayloads partition_deliver(const SystemParams& params, const Library& library, const std::vector<int>& demand) {
  if (params.m_rx() != 0) throw std::domain_error("partition delivery is defined for M_r = 0 only");
  if (library.n_files() != params.n_files()) throw std::domain_error("library size does not match N");
  check_demand(params, demand);
  const int kt = params.n_tx();
  const std::size_t f = library.file_bits();
  if (f % kt != 0) throw std::domain_error("file size must be a multiple of K_t = " + std::to_string(kt) + " bits");
  const std::size_t part = f / kt;

  DeliveryPayloads out;
  out.demand = demand;
  out.payload_bits = part;
  out.scheme_fingerprint = hash_shape(2, params, f);
  for (int n = 1; n <= params.n_files(); ++n) {
    std::vector<int> members;
    for (int i = 1; i <= params.n_rx(); ++i)
      if (demand[i - 1] == n) members.push_back(i);
    if (members.empty()) continue;
    ReceiverSubset group(std::move(members), params.n_rx());
    for (int j = 1; j <= kt; ++j) out.payloads.emplace(PipeKey{group, j}, slice(library.file(n), (j - 1) * part, part));
    out.groups.push_back(DemandGroup{n, std::move(group)});
  }
  out.link_load = frac(1, kt);
  out.sum_load = Rational(static_cast<long>(out.payloads.size())) * out.link_load;
  return out;
}

Bits partition_decode(const SystemParams& params, const DeliveryPayloads& payloads, int receiver) {
  if (receiver < 1 || receiver > params.n_rx()) throw std::out_of_range("receiver index out of range");
  check_demand(params, payloads.demand);
  const int kt = params.n_tx();
  const std::size_t f = payloads.payload_bits * kt;
  if (payloads.scheme_fingerprint != hash_shape(2, params, f)) throw IntegrityError("payloads belong to another scheme");
  if (payloads.payloads.size() != payloads.groups.size() * kt) throw IntegrityError("payload count does not match groups");

  for (const auto& g : payloads.groups) {
    if (!g.receivers.contains(receiver)) continue;
    if (g.file != payloads.demand[receiver - 1]) throw IntegrityError("demand group disagrees with the demand vector");
    Bits file(f);
    for (int j = 1; j <= kt; ++j) {
      auto it = payloads.payloads.find(PipeKey{g.receivers, j});
      if (it == payloads.payloads.end() || it->second.size() != payloads.payload_bits)
        throw IntegrityError("missing or malformed payload " + pipe_key_string(PipeKey{g.receivers, j}));
      splice(file, (j - 1) * payloads.payload_bits, it->second);
    }
    return file;
  }
  throw IntegrityError("receiver belongs to no demand group");
}

int distinct_demands(const std::vector<int>& demand) {
  return static_cast<int>(std::set<int>(demand.begin(), demand.end()).size());
}

std::uint64_t for_each_demand(int n_files, int n_rx, const std::function<void(const std::vector<int>&)>& visit) {
  if (n_files < 1 || n_rx < 1) throw std::domain_error("demand space needs N >= 1 and K_r >= 1");
  std::vector<int> u(n_rx, 1);
  std::uint64_t count = 0;
  while (true) {
    visit(u);
    ++count;
    int pos = n_rx - 1;
    while (pos >= 0 && u[pos] == n_files) u[pos--] = 1;
    if (pos < 0) return count;
    ++u[pos];
  }
}

std::vector<int> demand_at(int n_files, int n_rx, std::uint64_t index) {
  std::vector<int> u(n_rx, 1);
  for (int pos = n_rx - 1; pos >= 0; --pos) {
    u[pos] = 1 + static_cast<int>(index % n_files);
    index /= n_files;
  }
  if (index != 0) throw std::out_of_range("demand index out of range");
  return u;
}

nlohmann::json to_json(const CachingScheme& scheme) {
  nlohmann::json tx = nlohmann::json::array();
  for (int j = 1; j <= scheme.params().n_tx(); ++j) {
    nlohmann::json parts = nlohmann::json::object();
    for (int n = 1; n <= scheme.params().n_files(); ++n) parts[std::to_string(n)] = to_hex(scheme.tx_part(j, n));
    tx.push_back(std::move(parts));
  }
  nlohmann::json rx = nlohmann::json::array();
  for (int i = 1; i <= scheme.params().n_rx(); ++i) {
    nlohmann::json entries = nlohmann::json::object();
    for (const auto& [key, bits] : scheme.rx_cache(i)) entries[subpart_key_string(key)] = to_hex(bits);
    rx.push_back(std::move(entries));
  }
  return {{"params", params_to_json(scheme.params())},
          {"kappa", scheme.kappa()},
          {"file_bits", scheme.file_bits()},
          {"subpart_bits", scheme.subpart_bits()},
          {"tx_caches", std::move(tx)},
          {"rx_caches", std::move(rx)}};
}

nlohmann::json to_json(const DeliveryPayloads& payloads) {
  nlohmann::json map = nlohmann::json::object();
  for (const auto& [key, bits] : payloads.payloads) map[pipe_key_string(key)] = to_hex(bits);
  nlohmann::json groups = nlohmann::json::array();
  for (const auto& g : payloads.groups) groups.push_back({{"file", g.file}, {"receivers", g.receivers.members()}});
  return {{"demand", payloads.demand},
          {"payload_bits", payloads.payload_bits},
          {"link_load", to_exact_string(payloads.link_load)},
          {"sum_load", to_exact_string(payloads.sum_load)},
          {"fingerprint", payloads.scheme_fingerprint},
          {"payloads", std::move(map)},
          {"groups", std::move(groups)}};
}

DeliveryPayloads payloads_from_json(const nlohmann::json& doc, int n_rx) {
  DeliveryPayloads out;
  out.demand = doc.at("demand").get<std::vector<int>>();
  out.payload_bits = doc.at("payload_bits").get<std::size_t>();
  out.link_load = parse_rational(doc.at("link_load").get<std::string>());
  out.sum_load = parse_rational(doc.at("sum_load").get<std::string>());
  out.scheme_fingerprint = doc.at("fingerprint").get<std::uint64_t>();
  for (const auto& [key, hex] : doc.at("payloads").items()) {
    const auto bar = key.rfind('|');
    if (bar == std::string::npos) throw std::invalid_argument("payload key must be \"S|j\"");
    PipeKey pk{parse_subset(key.substr(0, bar), n_rx), std::stoi(key.substr(bar + 1))};
    out.payloads.emplace(std::move(pk), from_hex(hex.get<std::string>(), out.payload_bits));
  }
  for (const auto& g : doc.at("groups"))
    out.groups.push_back(DemandGroup{g.at("file").get<int>(),
                                     ReceiverSubset(g.at("receivers").get<std::vector<int>>(), n_rx)});
  return out;
}

}  // namespace cachedof::net
