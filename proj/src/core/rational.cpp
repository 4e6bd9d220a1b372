#include "cachedof/core/rational.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace cachedof {

Rational frac(long num, long den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

Rational frac(const Integer& num, const Integer& den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto bad = [&] { return std::invalid_argument("not a rational number: '" + s + "'"); };
  if (s.empty()) throw bad();
  const auto slash = s.find('/');
  if (slash != std::string::npos) {
    Integer num, den;
    if (num.set_str(s.substr(0, slash), 10) != 0) throw bad();
    if (den.set_str(s.substr(slash + 1), 10) != 0) throw bad();
    if (den == 0) throw std::domain_error("rational with zero denominator: '" + s + "'");
    Rational r(num, den);
    r.canonicalize();
    return r;
  }
  const auto dot = s.find('.');
  if (dot == std::string::npos) {
    Integer num;
    if (num.set_str(s, 10) != 0) throw bad();
    return Rational(num);
  }
  std::string digits = s.substr(0, dot) + s.substr(dot + 1);
  const auto frac_len = s.size() - dot - 1;
  if (digits.empty() || digits == "-" || digits == "+") throw bad();
  if (digits.front() == '+') digits.erase(0, 1);
  Integer num;
  if (num.set_str(digits, 10) != 0) throw bad();
  Integer den;
  mpz_ui_pow_ui(den.get_mpz_t(), 10, frac_len);
  Rational r(num, den);
  r.canonicalize();
  return r;
}

std::string to_exact_string(const Rational& value) { return value.get_str(); }

std::string to_decimal_string(const Rational& value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, value.get_d());
  return buf;
}

double to_double(const Rational& value) { return value.get_d(); }

bool is_integer(const Rational& value) { return value.get_den() == 1; }

Integer binomial(unsigned long n, unsigned long k) {
  Integer out;
  if (k > n) return out;
  mpz_bin_uiui(out.get_mpz_t(), n, k);
  return out;
}

std::uint64_t binomial_u64(unsigned long n, unsigned long k) {
  const Integer b = binomial(n, k);
  if (!b.fits_ulong_p()) throw std::overflow_error("binomial coefficient exceeds 64 bits");
  return b.get_ui();
}

Rational min(const Rational& a, const Rational& b) { return a < b ? a : b; }
Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

}  // namespace cachedof
