#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cachedof/core/params.hpp"
#include "cachedof/core/rational.hpp"
#include "cachedof/core/scalar.hpp"
#include "cachedof/net/bits.hpp"
#include "cachedof/net/library.hpp"
#include "cachedof/net/two_by_two.hpp"

namespace cachedof::e2e {

/// Bits per physical symbol. Bit t of a chunk becomes base-4 digit t of the
/// symbol, so the sum of two symbols never carries and its digits mod 2
/// are the XOR of the chunks.
inline constexpr std::size_t kDefaultChunkBits = 8;

/// Chunk value: sum_t bits[offset + t] * 4^t, bits past the end read as 0.
std::uint64_t pack_chunk(const net::Bits& bits, std::size_t offset, std::size_t chunk_bits);

/// Inverse of pack_chunk for a symbol whose digits are 0 or 1; with
/// `sum` set, digits may also be 2 and are reduced mod 2. Returns nullopt
/// when the value is not such a symbol.
std::optional<std::vector<bool>> unpack_chunk(const Rational& symbol, std::size_t chunk_bits, bool sum = false);
std::optional<std::vector<bool>> unpack_chunk(double symbol, std::size_t chunk_bits, bool sum = false);

struct ReceiverVerdict {
  int receiver = 0;
  /// Every Psi (or 2x2 extraction matrix) certificate was full rank.
  bool full_rank = false;
  std::optional<std::uint64_t> witness_prime;
  std::optional<std::size_t> exact_rank;
  std::optional<double> sigma_min;
  /// Every decoded symbol was a valid chunk.
  bool symbols_valid = false;
  /// 2x2 only: the aligned coordinate equalled the other receiver's symbol sum.
  std::optional<bool> sum_recovered;
  /// The netlayer decode reproduced the demanded file bit for bit.
  bool recovered = false;
  std::string error;
};

struct EndToEndReport {
  explicit EndToEndReport(SystemParams p) : params(std::move(p)) {}

  /// "multicast" or "2x2:<corner>".
  std::string scheme;
  SystemParams params;
  std::vector<int> demand;
  int kappa = 0;
  int sigma = 0;
  int depth = 0;
  ScalarMode mode = ScalarMode::ExactRational;
  std::uint64_t seed = 0;
  int regenerations = 0;
  bool aligned = true;

  std::size_t file_bits = 0;
  std::size_t payload_bits = 0;
  std::size_t chunk_bits = 0;
  std::size_t payload_symbols = 0;
  /// Symbols each message carries per block, by transmitter.
  std::vector<std::size_t> streams;
  std::size_t block_length = 0;
  std::size_t blocks = 0;

  Rational link_load;
  Rational sum_load;
  /// Per-message DoF of transmitter 1 and of transmitters 2..K_t.
  Rational delta_first;
  Rational delta_rest;
  /// Sum over all messages of their per-message DoF.
  Rational sum_dof;
  /// L / sum_dof: the load split over the physical layer's sum DoF.
  Rational reciprocal_dof;
  /// l / min delta: every pipe run at the slowest message's rate.
  Rational reciprocal_worst;
  /// Channel uses per file symbol in this run, padding included.
  Rational reciprocal_realized;
  /// (K_t - 1 + K_r/(kappa+1)) / K_t * (1 - kappa/K_r); 3/4 L for 2x2.
  Rational target;

  std::vector<ReceiverVerdict> receivers;

  bool passed() const;
};

/// Places `library`, delivers for `demand`, frames each payload into
/// chunk-bit symbols, sends them over the alignment plan of depth `depth`
/// (sigma = kappa + 1) on a noiseless channel drawn from `seed`, decodes at
/// every receiver and runs the netlayer decode on what it recovered.
/// The same block-length plan is reused for as many blocks as the longest
/// message needs. At kappa = K_r the physical layer is idle.
EndToEndReport run_end_to_end(const SystemParams& params, const net::Library& library, const std::vector<int>& demand,
                              int depth, std::uint64_t seed, ScalarMode mode = ScalarMode::ExactRational,
                              std::size_t chunk_bits = kDefaultChunkBits);

/// Table payloads of `corner` (M13 or M45) carried over the three-slot
/// extraction plan. Files are random from `seed` with `symbols` chunks per
/// part.
EndToEndReport run_end_to_end_2x2(net::Corner2x2 corner, const std::array<int, 2>& demand, std::uint64_t seed,
                                  ScalarMode mode = ScalarMode::ExactRational,
                                  std::size_t chunk_bits = kDefaultChunkBits, std::size_t symbols = 4);

nlohmann::json to_json(const EndToEndReport& report);

struct AccountingRow {
  int depth;
  Integer block_length;
  Rational delta_first;
  Rational delta_rest;
  Rational reciprocal_dof;
  Rational reciprocal_worst;
  Rational target;
  /// |reciprocal_dof - target| / target; zero when target is zero.
  Rational error;
};

/// Closed-form accounting at each depth for the multicast scheme at
/// integer kappa < K_r.
std::vector<AccountingRow> accounting_table(int n_tx, int n_rx, int kappa, const std::vector<int>& depths);
/// Header plus one row per depth; rationals as exact and decimal columns.
std::string accounting_csv(const std::vector<AccountingRow>& rows);

/// (K_t - 1 + K_r/(kappa+1)) / K_t * (1 - kappa/K_r).
Rational multicast_reciprocal(int n_tx, int n_rx, int kappa);

}  // namespace cachedof::e2e
