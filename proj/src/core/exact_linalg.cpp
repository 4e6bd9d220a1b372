#include "cachedof/core/exact_linalg.hpp"

#include <stdexcept>

namespace cachedof {
namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mulmod(u64 a, u64 b, u64 p) { return static_cast<u64>(static_cast<u128>(a) * b % p); }

u64 powmod(u64 base, u64 exp, u64 p) {
  u64 result = 1 % p;
  base %= p;
  while (exp) {
    if (exp & 1) result = mulmod(result, base, p);
    base = mulmod(base, base, p);
    exp >>= 1;
  }
  return result;
}

u64 invmod(u64 a, u64 p) { return powmod(a, p - 2, p); }

u64 mpz_mod_u64(const Integer& z, u64 p) {
  // mpz_fdiv_ui takes unsigned long, which is 64 bits on the supported targets.
  static_assert(sizeof(unsigned long) == sizeof(u64));
  return mpz_fdiv_ui(z.get_mpz_t(), p);
}

u64 submod(u64 a, u64 b, u64 p) { return a >= b ? a - b : a + (p - b); }

/// Entry residues with one modular inversion per matrix (batched).
std::optional<Dense<u64>> residue_matrix(const Dense<Rational>& m, u64 p) {
  const std::size_t count = m.rows() * m.cols();
  Dense<u64> out(m.rows(), m.cols(), 0);
  std::vector<u64> dens(count), prefix(count + 1, 1);
  for (std::size_t r = 0, k = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c, ++k) {
      dens[k] = mpz_mod_u64(m(r, c).get_den(), p);
      if (dens[k] == 0) return std::nullopt;
      prefix[k + 1] = mulmod(prefix[k], dens[k], p);
    }
  u64 inv = invmod(prefix[count], p);
  for (std::size_t k = count; k-- > 0;) {
    const std::size_t r = k / m.cols(), c = k % m.cols();
    const u64 inv_den = mulmod(inv, prefix[k], p);
    inv = mulmod(inv, dens[k], p);
    out(r, c) = mulmod(mpz_mod_u64(m(r, c).get_num(), p), inv_den, p);
  }
  return out;
}

/// Forward elimination and back substitution mod p; nullopt when m is
/// singular mod p.
std::optional<std::vector<u64>> solve_mod(Dense<u64> m, std::vector<u64> b, u64 p) {
  const std::size_t n = m.rows();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    while (piv < n && m(piv, k) == 0) ++piv;
    if (piv == n) return std::nullopt;
    if (piv != k) {
      for (std::size_t c = k; c < n; ++c) std::swap(m(k, c), m(piv, c));
      std::swap(b[k], b[piv]);
    }
    const u64 inv = invmod(m(k, k), p);
    for (std::size_t r = k + 1; r < n; ++r) {
      if (m(r, k) == 0) continue;
      const u64 f = mulmod(m(r, k), inv, p);
      for (std::size_t c = k + 1; c < n; ++c) m(r, c) = submod(m(r, c), mulmod(f, m(k, c), p), p);
      b[r] = submod(b[r], mulmod(f, b[k], p), p);
    }
  }
  std::vector<u64> x(n);
  for (std::size_t k = n; k-- > 0;) {
    u64 acc = b[k];
    for (std::size_t c = k + 1; c < n; ++c) acc = submod(acc, mulmod(m(k, c), x[c], p), p);
    x[k] = mulmod(acc, invmod(m(k, k), p), p);
  }
  return x;
}

Integer to_integer(u64 v) {
  Integer z;
  mpz_import(z.get_mpz_t(), 1, -1, sizeof(u64), 0, 0, &v);
  return z;
}

}  // namespace

bool is_prime_u64(u64 n) {
  if (n < 2) return false;
  for (u64 small : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % small == 0) return n == small;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

const std::vector<u64>& certificate_primes(std::size_t count) {
  static const std::vector<u64> primes = [] {
    std::vector<u64> out;
    for (u64 c = (u64{1} << 62) - 1; out.size() < 128; c -= 2)
      if (is_prime_u64(c)) out.push_back(c);
    return out;
  }();
  if (count > primes.size()) throw std::out_of_range("too many certificate primes requested");
  return primes;
}

std::optional<u64> residue(const Rational& value, u64 p) {
  const u64 den = mpz_mod_u64(value.get_den(), p);
  if (den == 0) return std::nullopt;
  return mulmod(mpz_mod_u64(value.get_num(), p), invmod(den, p), p);
}

std::optional<u64> det_mod(const Dense<Rational>& m, u64 p) {
  if (m.rows() != m.cols()) throw std::domain_error("determinant of a non-square matrix");
  auto res = residue_matrix(m, p);
  if (!res) return std::nullopt;
  Dense<u64>& a = *res;
  const std::size_t n = a.rows();
  u64 det = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    while (piv < n && a(piv, k) == 0) ++piv;
    if (piv == n) return u64{0};
    if (piv != k) {
      for (std::size_t c = k; c < n; ++c) std::swap(a(k, c), a(piv, c));
      det = (p - det) % p;
    }
    det = mulmod(det, a(k, k), p);
    const u64 inv = invmod(a(k, k), p);
    for (std::size_t r = k + 1; r < n; ++r) {
      if (a(r, k) == 0) continue;
      const u64 f = mulmod(a(r, k), inv, p);
      for (std::size_t c = k + 1; c < n; ++c) a(r, c) = submod(a(r, c), mulmod(f, a(k, c), p), p);
    }
  }
  return det;
}

Rational det_exact(const Dense<Rational>& m) {
  if (m.rows() != m.cols()) throw std::domain_error("determinant of a non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  Dense<Integer> a(n, n, 0);
  Integer scale = 1;
  for (std::size_t r = 0; r < n; ++r) {
    Integer l = 1;
    for (std::size_t c = 0; c < n; ++c) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m(r, c).get_den_mpz_t());
    scale *= l;
    for (std::size_t c = 0; c < n; ++c) a(r, c) = m(r, c).get_num() * (l / m(r, c).get_den());
  }
  Integer prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t piv = k + 1;
      while (piv < n && a(piv, k) == 0) ++piv;
      if (piv == n) return 0;
      for (std::size_t c = 0; c < n; ++c) std::swap(a(k, c), a(piv, c));
      sign = -sign;
    }
    for (std::size_t r = k + 1; r < n; ++r) {
      for (std::size_t c = k + 1; c < n; ++c) {
        Integer t = a(r, c) * a(k, k) - a(r, k) * a(k, c);
        mpz_divexact(a(r, c).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
      a(r, k) = 0;
    }
    prev = a(k, k);
  }
  Rational det(a(n - 1, n - 1) * sign, scale);
  det.canonicalize();
  return det;
}

std::size_t rank_exact(const Dense<Rational>& m) {
  Dense<Rational> a = m;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < a.cols() && rank < a.rows(); ++c) {
    std::size_t piv = rank;
    while (piv < a.rows() && a(piv, c) == 0) ++piv;
    if (piv == a.rows()) continue;
    for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(rank, j), a(piv, j));
    for (std::size_t r = rank + 1; r < a.rows(); ++r) {
      if (a(r, c) == 0) continue;
      const Rational f = a(r, c) / a(rank, c);
      for (std::size_t j = c; j < a.cols(); ++j) a(r, j) -= f * a(rank, j);
    }
    ++rank;
  }
  return rank;
}

FullRankCertificate certify_full_rank(const Dense<Rational>& m, std::size_t max_primes) {
  if (m.rows() != m.cols()) throw std::domain_error("full-rank certificate needs a square matrix");
  FullRankCertificate cert;
  const auto& primes = certificate_primes(max_primes);
  for (std::size_t i = 0; i < max_primes; ++i) {
    ++cert.primes_tried;
    auto d = det_mod(m, primes[i]);
    if (d && *d != 0) {
      cert.full_rank = true;
      cert.witness_prime = primes[i];
      return cert;
    }
  }
  cert.exact_rank = rank_exact(m);
  cert.full_rank = *cert.exact_rank == m.rows();
  return cert;
}

std::optional<Rational> rational_reconstruct(const Integer& a, const Integer& modulus) {
  Integer bound;
  Integer half = modulus / 2;
  mpz_sqrt(bound.get_mpz_t(), half.get_mpz_t());
  Integer r0 = modulus, r1 = a % modulus;
  if (r1 < 0) r1 += modulus;
  Integer t0 = 0, t1 = 1;
  while (r1 > bound) {
    Integer q = r0 / r1;
    Integer r2 = r0 - q * r1;
    Integer t2 = t0 - q * t1;
    r0 = r1;
    r1 = r2;
    t0 = t1;
    t1 = t2;
  }
  if (t1 == 0 || abs(t1) > bound) return std::nullopt;
  Integer g;
  mpz_gcd(g.get_mpz_t(), r1.get_mpz_t(), t1.get_mpz_t());
  if (g != 1) return std::nullopt;
  if (t1 < 0) {
    t1 = -t1;
    r1 = -r1;
  }
  return Rational(r1, t1);
}

std::optional<std::vector<Rational>> solve_gauss(const Dense<Rational>& m, const std::vector<Rational>& b) {
  if (m.rows() != m.cols() || b.size() != m.rows()) throw std::domain_error("solve needs a square system");
  const std::size_t n = m.rows();
  Dense<Rational> a = m;
  std::vector<Rational> x = b;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    while (piv < n && a(piv, k) == 0) ++piv;
    if (piv == n) return std::nullopt;
    if (piv != k) {
      for (std::size_t c = k; c < n; ++c) std::swap(a(k, c), a(piv, c));
      std::swap(x[k], x[piv]);
    }
    for (std::size_t r = k + 1; r < n; ++r) {
      if (a(r, k) == 0) continue;
      const Rational f = a(r, k) / a(k, k);
      for (std::size_t c = k; c < n; ++c) a(r, c) -= f * a(k, c);
      x[r] -= f * x[k];
    }
  }
  for (std::size_t k = n; k-- > 0;) {
    for (std::size_t c = k + 1; c < n; ++c) x[k] -= a(k, c) * x[c];
    x[k] /= a(k, k);
  }
  return x;
}

std::optional<std::vector<Rational>> solve_exact(const Dense<Rational>& m, const std::vector<Rational>& b) {
  if (m.rows() != m.cols() || b.size() != m.rows()) throw std::domain_error("solve needs a square system");
  const std::size_t n = m.rows();
  constexpr std::size_t kMaxPrimes = 96;
  const auto& primes = certificate_primes(kMaxPrimes);

  std::vector<Integer> acc(n, 0);
  Integer modulus = 1;
  std::size_t singular = 0;
  std::optional<std::vector<Rational>> previous;
  for (std::size_t i = 0; i < kMaxPrimes; ++i) {
    const u64 p = primes[i];
    auto mp = residue_matrix(m, p);
    if (!mp) continue;
    std::vector<u64> bp(n);
    bool defined = true;
    for (std::size_t r = 0; r < n && defined; ++r) {
      auto v = residue(b[r], p);
      if (v) bp[r] = *v;
      else defined = false;
    }
    if (!defined) continue;
    auto xp = solve_mod(std::move(*mp), std::move(bp), p);
    if (!xp) {
      if (++singular >= 3) break;
      continue;
    }
    const Integer pz = to_integer(p);
    Integer minv;
    Integer mmod = modulus % pz;
    mpz_invert(minv.get_mpz_t(), mmod.get_mpz_t(), pz.get_mpz_t());
    for (std::size_t r = 0; r < n; ++r) {
      Integer diff = (to_integer((*xp)[r]) - acc[r]) % pz;
      if (diff < 0) diff += pz;
      Integer t = (diff * minv) % pz;
      acc[r] += modulus * t;
    }
    modulus *= pz;

    std::vector<Rational> candidate;
    candidate.reserve(n);
    for (std::size_t r = 0; r < n; ++r) {
      auto q = rational_reconstruct(acc[r], modulus);
      if (!q) break;
      candidate.push_back(std::move(*q));
    }
    if (candidate.size() != n || (previous && *previous == candidate)) continue;
    if (m * candidate == b) return candidate;
    previous = std::move(candidate);
  }
  return solve_gauss(m, b);
}

}  // namespace cachedof
