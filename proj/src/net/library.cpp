#include "cachedof/net/library.hpp"

#include <stdexcept>

#include "cachedof/core/rng.hpp"

namespace cachedof::net {

Library::Library(std::vector<Bits> files) : files_(std::move(files)) {
  if (files_.empty()) throw std::domain_error("library needs at least one file");
  file_bits_ = files_.front().size();
  if (file_bits_ == 0) throw std::domain_error("files must be nonempty");
  for (const auto& f : files_)
    if (f.size() != file_bits_) throw std::domain_error("all files must have the same length");
}

Library Library::random(int n_files, std::size_t file_bits, std::uint64_t seed) {
  if (n_files < 1) throw std::domain_error("library needs at least one file");
  std::vector<Bits> files;
  files.reserve(n_files);
  for (int n = 0; n < n_files; ++n) {
    CounterRng rng(seed, static_cast<std::uint64_t>(n));
    Bits f(file_bits);
    std::uint64_t word = 0;
    for (std::size_t i = 0; i < file_bits; ++i) {
      if (i % 64 == 0) word = rng.next();
      f[i] = (word >> (i % 64)) & 1u;
    }
    files.push_back(std::move(f));
  }
  return Library(std::move(files));
}

const Bits& Library::file(int n) const {
  if (n < 1 || n > n_files()) throw std::out_of_range("file index out of range");
  return files_[n - 1];
}

Library Library::operator^(const Library& other) const {
  if (other.n_files() != n_files() || other.file_bits() != file_bits())
    throw std::domain_error("library shapes differ");
  std::vector<Bits> out;
  out.reserve(files_.size());
  for (std::size_t n = 0; n < files_.size(); ++n) out.push_back(files_[n] ^ other.files_[n]);
  return Library(std::move(out));
}

std::size_t min_file_bits(const SystemParams& params) {
  int kappa = params.integer_kappa();
  return static_cast<std::size_t>(params.n_tx()) * binomial_u64(params.n_rx(), kappa);
}

}  // namespace cachedof::net
