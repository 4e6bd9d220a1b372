#include "cachedof/net/bits.hpp"

#include <stdexcept>

namespace cachedof::net {

Bits slice(const Bits& bits, std::size_t offset, std::size_t length) {
  if (offset + length > bits.size()) throw std::out_of_range("bit slice past end");
  Bits out(length);
  for (std::size_t i = 0; i < length; ++i) out[i] = bits[offset + i];
  return out;
}

void splice(Bits& dest, std::size_t offset, const Bits& part) {
  if (offset + part.size() > dest.size()) throw std::out_of_range("bit splice past end");
  for (std::size_t i = 0; i < part.size(); ++i) dest[offset + i] = part[i];
}

std::string to_hex(const Bits& bits) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out;
  out.reserve((bits.size() + 3) / 4);
  for (std::size_t i = 0; i < bits.size(); i += 4) {
    int nibble = 0;
    for (std::size_t b = 0; b < 4; ++b) {
      nibble <<= 1;
      if (i + b < bits.size() && bits[i + b]) nibble |= 1;
    }
    out += digits[nibble];
  }
  return out;
}

Bits from_hex(const std::string& hex, std::size_t length) {
  if (hex.size() != (length + 3) / 4) throw std::invalid_argument("hex length does not match bit length");
  Bits out(length);
  for (std::size_t d = 0; d < hex.size(); ++d) {
    char c = hex[d];
    int v;
    if (c >= '0' && c <= '9') v = c - '0';
    else if (c >= 'a' && c <= 'f') v = c - 'a' + 10;
    else if (c >= 'A' && c <= 'F') v = c - 'A' + 10;
    else throw std::invalid_argument("invalid hex digit");
    for (std::size_t b = 0; b < 4; ++b) {
      std::size_t idx = 4 * d + b;
      bool bit = (v >> (3 - b)) & 1;
      if (idx < length) out[idx] = bit;
      else if (bit) throw std::invalid_argument("nonzero hex padding");
    }
  }
  return out;
}

}  // namespace cachedof::net
