#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace cachedof {

/// A set of receiver indices (1-based), stored sorted. The only empty
/// instance is the marker returned for k = 0 enumerations.
class ReceiverSubset {
 public:
  ReceiverSubset() = default;
  /// Validates range [1, ground_size] and distinctness, then sorts.
  ReceiverSubset(std::vector<int> members, int ground_size);
  ReceiverSubset(std::initializer_list<int> members, int ground_size);

  const std::vector<int>& members() const { return members_; }
  int size() const { return static_cast<int>(members_.size()); }
  bool empty() const { return members_.empty(); }
  bool contains(int receiver) const;

  /// Subset with `receiver` removed; the receiver must be a member.
  ReceiverSubset without(int receiver) const;
  /// Subset with `receiver` added; the receiver must not be a member.
  ReceiverSubset with(int receiver, int ground_size) const;

  /// "{1,3,4}"
  std::string to_string() const;
  /// "1,3,4"; the empty marker renders as "".
  std::string key() const;

  auto operator<=>(const ReceiverSubset&) const = default;

 private:
  std::vector<int> members_;
};

/// All k-subsets of {1..ground_size} in lexicographic order. k = 0 yields a
/// single empty marker.
std::vector<ReceiverSubset> subsets_of_size(int ground_size, int k);

/// Position of `subset` in subsets_of_size(ground_size, subset.size()).
std::uint64_t lex_rank(const ReceiverSubset& subset, int ground_size);

}  // namespace cachedof
