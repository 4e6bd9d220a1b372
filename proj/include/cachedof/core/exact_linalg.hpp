#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cachedof/core/matrix.hpp"
#include "cachedof/core/rational.hpp"

namespace cachedof {

/// Deterministic Miller-Rabin, exact for all 64-bit inputs.
bool is_prime_u64(std::uint64_t n);

/// The `count` largest primes below 2^62, descending.
const std::vector<std::uint64_t>& certificate_primes(std::size_t count);

/// value mod p, or nullopt when p divides the denominator.
std::optional<std::uint64_t> residue(const Rational& value, std::uint64_t p);

/// det(m) mod p, or nullopt when some entry is undefined mod p.
std::optional<std::uint64_t> det_mod(const Dense<Rational>& m, std::uint64_t p);

/// Exact determinant by fraction-free (Bareiss) elimination after clearing
/// row denominators.
Rational det_exact(const Dense<Rational>& m);

/// Exact rank by fraction-free elimination.
std::size_t rank_exact(const Dense<Rational>& m);

struct FullRankCertificate {
  bool full_rank = false;
  /// Prime at which the determinant residue was nonzero, when one was found.
  std::optional<std::uint64_t> witness_prime;
  std::size_t primes_tried = 0;
  /// Set when the modular test was inconclusive and exact elimination ran.
  std::optional<std::size_t> exact_rank;
};

/// Nonzero det mod any prime proves det != 0. After `max_primes`
/// inconclusive residues the exact rank decides.
FullRankCertificate certify_full_rank(const Dense<Rational>& m, std::size_t max_primes = 3);

/// Solves m x = b for square nonsingular m. Solutions mod successive primes
/// are combined by CRT and lifted by rational reconstruction; a candidate is
/// accepted only after m x = b is checked exactly. Falls back to exact
/// elimination. Returns nullopt when m is singular.
std::optional<std::vector<Rational>> solve_exact(const Dense<Rational>& m, const std::vector<Rational>& b);

/// Reference solver: Gaussian elimination over the rationals.
std::optional<std::vector<Rational>> solve_gauss(const Dense<Rational>& m, const std::vector<Rational>& b);

/// n/d with |n|, d <= sqrt(modulus/2) and n = a d mod modulus, if it exists.
std::optional<Rational> rational_reconstruct(const Integer& a, const Integer& modulus);

}  // namespace cachedof
