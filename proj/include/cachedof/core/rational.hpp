#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace cachedof {

/// Exact rational number. All DoF calculus runs on this type.
using Rational = mpq_class;
using Integer = mpz_class;

/// Canonical num/den. Prefer this over the two-argument mpq_class
/// constructor, which leaves the fraction unreduced.
Rational frac(long num, long den);
Rational frac(const Integer& num, const Integer& den);

/// Accepts "p", "p/q" and plain decimals such as "0.25" or "-1.5".
Rational parse_rational(std::string_view text);

/// "p/q", or "p" when the denominator is one.
std::string to_exact_string(const Rational& value);

/// Decimal rendering with `digits` significant digits (printf %g style).
std::string to_decimal_string(const Rational& value, int digits = 10);

double to_double(const Rational& value);

bool is_integer(const Rational& value);

/// Exact binomial coefficient; zero when k > n.
Integer binomial(unsigned long n, unsigned long k);

/// Binomial that must fit in 64 bits; throws std::overflow_error otherwise.
std::uint64_t binomial_u64(unsigned long n, unsigned long k);

Rational min(const Rational& a, const Rational& b);
Rational max(const Rational& a, const Rational& b);

}  // namespace cachedof
