#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cachedof/core/rational.hpp"
#include "cachedof/net/bits.hpp"
#include "cachedof/net/library.hpp"

namespace cachedof::net {

enum class Corner2x2 { M0, M13, M45, M2 };

Corner2x2 parse_corner(std::string_view name);
std::string corner_name(Corner2x2 corner);

/// GF(2) combination of file parts for a library {A, B} split into p parts:
/// bit k is A_{k+1} and bit p+k is B_{k+1}.
using Combo = std::uint32_t;

/// "A1^B3"; the empty combination renders as "0".
std::string combo_name(Combo combo, int parts);
/// Accepts A<k>, B<k> and, for five parts, the helpers S<k>, T<k>, joined
/// by '^'.
Combo parse_combo(std::string_view text, int parts);

/// Demand pairs in table order (A,A), (A,B), (B,A), (B,B); file 1 is A.
inline constexpr std::array<std::array<int, 2>, 4> kDemandPairs{{{1, 1}, {1, 2}, {2, 1}, {2, 2}}};
std::string demand_label(const std::array<int, 2>& demand);

struct DeliveryRow2x2 {
  std::array<int, 2> demand{};
  /// v[i][j] is V_{i+1, j+1}: intended for receiver i+1, sent by transmitter j+1.
  std::array<std::array<Combo, 2>, 2> v{};
  /// What the aligned interference delivers to `receiver`: the XOR of the
  /// other receiver's two messages.
  Combo aligned(int receiver) const;
};

struct Scheme2x2 {
  Corner2x2 corner;
  int parts;
  Rational m_tx;
  Rational m_rx;
  Rational link_load;
  Rational sum_load;
  std::array<std::vector<Combo>, 2> tx_cache;
  std::array<std::vector<Combo>, 2> rx_cache;
  std::array<DeliveryRow2x2, 4> rows;
};

Scheme2x2 scheme_2x2(Corner2x2 corner);
DeliveryRow2x2 deliver_2x2(const Scheme2x2& scheme, const std::array<int, 2>& demand);

/// True when `target` lies in the GF(2) span of `basis`.
bool in_span(const std::vector<Combo>& basis, Combo target);

/// Receiver's view: its cache, its two messages and the aligned sum.
std::vector<Combo> observations_2x2(const Scheme2x2& scheme, const DeliveryRow2x2& row, int receiver);

/// Every part of the demanded file lies in the receiver's observations.
bool decodable_2x2(const Scheme2x2& scheme, const DeliveryRow2x2& row, int receiver);

/// Bit-level decode: evaluates the receiver's observations on `library`
/// (two files, F divisible by the part count) and solves for the demanded
/// file by elimination on those values alone.
Bits decode_2x2(const Scheme2x2& scheme, const DeliveryRow2x2& row, int receiver, const Library& library);

/// Same elimination on values the receiver actually holds: `observed[k]`
/// carries the bits of observations_2x2(...)[k].
Bits decode_2x2(const Scheme2x2& scheme, const DeliveryRow2x2& row, int receiver, const std::vector<Bits>& observed);

/// Bits of a combination evaluated on `library`.
Bits evaluate_combo(Combo combo, int parts, const Library& library);

/// Structural audit: cache budgets, payload sizes, payloads computable from
/// the sending transmitter's cache, and decodability for every demand pair.
/// Returns a description of each violation; empty means the scheme is sound.
std::vector<std::string> audit_2x2(const Scheme2x2& scheme);

nlohmann::json to_json(const Scheme2x2& scheme);

}  // namespace cachedof::net
