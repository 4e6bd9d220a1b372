#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include <boost/dynamic_bitset.hpp>

namespace cachedof::net {

/// Bit i of a file is index i of the bitset; slices keep that order.
using Bits = boost::dynamic_bitset<std::uint64_t>;

Bits slice(const Bits& bits, std::size_t offset, std::size_t length);
/// Writes `part` into `dest` starting at `offset`.
void splice(Bits& dest, std::size_t offset, const Bits& part);

/// Lowercase hex, four bits per digit, first bit in the most significant
/// position of the first digit. Lengths that are not a multiple of four are
/// zero padded on the right; from_hex takes the true length back.
std::string to_hex(const Bits& bits);
Bits from_hex(const std::string& hex, std::size_t length);

}  // namespace cachedof::net
