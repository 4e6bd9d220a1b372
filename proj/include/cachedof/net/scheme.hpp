#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include <json.hpp>

#include "cachedof/core/params.hpp"
#include "cachedof/core/rational.hpp"
#include "cachedof/core/subsets.hpp"
#include "cachedof/net/bits.hpp"
#include "cachedof/net/library.hpp"

namespace cachedof::net {

/// Identifies subpart W_{n,T}^j: file n, transmitter part j, kappa-subset T.
struct SubpartKey {
  int file;
  ReceiverSubset subset;
  int tx;
  auto operator<=>(const SubpartKey&) const = default;
};

/// Identifies the bit pipe V_{Sj}.
struct PipeKey {
  ReceiverSubset subset;
  int tx;
  auto operator<=>(const PipeKey&) const = default;
};

class CachingScheme {
 public:
  CachingScheme(SystemParams params, std::size_t file_bits, std::vector<std::vector<Bits>> tx_parts,
                std::vector<std::map<SubpartKey, Bits>> rx_caches);

  const SystemParams& params() const { return params_; }
  int kappa() const { return kappa_; }
  std::size_t file_bits() const { return file_bits_; }
  /// F / K_t.
  std::size_t part_bits() const;
  /// F / (K_t * C(K_r, kappa)).
  std::size_t subpart_bits() const;

  /// W_n^j as held by transmitter j.
  const Bits& tx_part(int tx, int file) const;
  const std::map<SubpartKey, Bits>& rx_cache(int receiver) const;

  std::size_t tx_cache_bits(int tx) const;
  std::size_t rx_cache_bits(int receiver) const;

  /// Hash of (params, F); payloads carry it so a decoder can reject a
  /// mismatched pairing.
  std::uint64_t fingerprint() const;

 private:
  SystemParams params_;
  int kappa_;
  std::size_t file_bits_;
  std::vector<std::vector<Bits>> tx_parts_;
  std::vector<std::map<SubpartKey, Bits>> rx_caches_;
};

/// A demand group U_n: the receivers requesting file n.
struct DemandGroup {
  int file;
  ReceiverSubset receivers;
};

struct DeliveryPayloads {
  std::vector<int> demand;
  std::map<PipeKey, Bits> payloads;
  std::size_t payload_bits = 0;
  /// Per-pipe load in files.
  Rational link_load;
  /// Load summed over all pipes, in files.
  Rational sum_load;
  std::uint64_t scheme_fingerprint = 0;
  /// Non-empty only for partition delivery, ordered by file index.
  std::vector<DemandGroup> groups;
};

/// Splits every file into K_t parts, gives part j to transmitter j, then
/// splits each part into C(K_r, kappa) subparts indexed by kappa-subsets in
/// lexicographic rank order. Receiver i keeps every subpart whose subset
/// contains i.
CachingScheme place(const SystemParams& params, const Library& library);

/// V_{Sj} = XOR over i in S of W_{u_i, S\{i}}^j for every (kappa+1)-subset S.
DeliveryPayloads deliver(const CachingScheme& scheme, const std::vector<int>& demand);

/// Reconstructs W_{u_i} from receiver i's cache and the payloads alone.
/// Only pipes whose subset contains i are read; others may be absent.
Bits decode(const CachingScheme& scheme, const DeliveryPayloads& payloads, int receiver);

/// M_r = 0 only: V_{U_n j} = W_n^j for each nonempty demand group.
DeliveryPayloads partition_deliver(const SystemParams& params, const Library& library,
                                   const std::vector<int>& demand);

/// Receiver i concatenates the K_t parts sent on its group's pipes.
Bits partition_decode(const SystemParams& params, const DeliveryPayloads& payloads, int receiver);

/// Distinct demanded files.
int distinct_demands(const std::vector<int>& demand);

/// Calls `visit` on every vector in {1..n_files}^{n_rx}, in lexicographic
/// order. Returns the number of vectors visited.
std::uint64_t for_each_demand(int n_files, int n_rx, const std::function<void(const std::vector<int>&)>& visit);

/// The i-th demand vector of that enumeration.
std::vector<int> demand_at(int n_files, int n_rx, std::uint64_t index);

nlohmann::json to_json(const CachingScheme& scheme);
nlohmann::json to_json(const DeliveryPayloads& payloads);
/// Inverse of to_json for payloads.
DeliveryPayloads payloads_from_json(const nlohmann::json& doc, int n_rx);

}  // namespace cachedof::net
