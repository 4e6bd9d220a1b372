#include "cachedof/core/subsets.hpp"

#include <algorithm>
#include <stdexcept>

#include "cachedof/core/rational.hpp"

namespace cachedof {

ReceiverSubset::ReceiverSubset(std::vector<int> members, int ground_size) : members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  if (std::adjacent_find(members_.begin(), members_.end()) != members_.end())
    throw std::domain_error("receiver subset has repeated members");
  for (int m : members_)
    if (m < 1 || m > ground_size) throw std::domain_error("receiver index out of range");
}

ReceiverSubset::ReceiverSubset(std::initializer_list<int> members, int ground_size)
    : ReceiverSubset(std::vector<int>(members), ground_size) {}

bool ReceiverSubset::contains(int receiver) const {
  return std::binary_search(members_.begin(), members_.end(), receiver);
}

ReceiverSubset ReceiverSubset::without(int receiver) const {
  if (!contains(receiver)) throw std::domain_error("receiver not in subset");
  ReceiverSubset out;
  out.members_.reserve(members_.size() - 1);
  for (int m : members_)
    if (m != receiver) out.members_.push_back(m);
  return out;
}

ReceiverSubset ReceiverSubset::with(int receiver, int ground_size) const {
  if (contains(receiver)) throw std::domain_error("receiver already in subset");
  std::vector<int> m = members_;
  m.push_back(receiver);
  return ReceiverSubset(std::move(m), ground_size);
}

std::string ReceiverSubset::to_string() const { return "{" + key() + "}"; }

std::string ReceiverSubset::key() const {
  std::string out;
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(members_[i]);
  }
  return out;
}

std::vector<ReceiverSubset> subsets_of_size(int ground_size, int k) {
  if (ground_size < 0 || k < 0 || k > ground_size)
    throw std::domain_error("subset size must lie in [0, ground size]");
  std::vector<ReceiverSubset> out;
  out.reserve(binomial_u64(ground_size, k));
  std::vector<int> cur(k);
  for (int i = 0; i < k; ++i) cur[i] = i + 1;
  while (true) {
    out.emplace_back(cur, ground_size);
    int i = k - 1;
    while (i >= 0 && cur[i] == ground_size - k + i + 1) --i;
    if (i < 0) break;
    ++cur[i];
    for (int j = i + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

std::uint64_t lex_rank(const ReceiverSubset& subset, int ground_size) {
  // Count the k-subsets that precede `subset` position by position.
  const auto& m = subset.members();
  const int k = subset.size();
  std::uint64_t rank = 0;
  int prev = 0;
  for (int i = 0; i < k; ++i) {
    for (int v = prev + 1; v < m[i]; ++v) rank += binomial_u64(ground_size - v, k - i - 1);
    prev = m[i];
  }
  return rank;
}

}  // namespace cachedof
