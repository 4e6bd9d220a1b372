#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "cachedof/core/params.hpp"
#include "cachedof/net/bits.hpp"

namespace cachedof::net {

/// N files of F bits each. Files are addressed 1..N.
class Library {
 public:
  explicit Library(std::vector<Bits> files);

  /// Files filled from a counter RNG; identical seeds give identical bits.
  static Library random(int n_files, std::size_t file_bits, std::uint64_t seed);

  int n_files() const { return static_cast<int>(files_.size()); }
  std::size_t file_bits() const { return file_bits_; }
  const Bits& file(int n) const;

  /// Bitwise XOR of two libraries of the same shape.
  Library operator^(const Library& other) const;
  bool operator==(const Library& other) const = default;

 private:
  std::vector<Bits> files_;
  std::size_t file_bits_ = 0;
};

/// Smallest F compatible with placement at the params' kappa:
/// K_t * C(K_r, kappa).
std::size_t min_file_bits(const SystemParams& params);

}  // namespace cachedof::net
