#include "cachedof/core/scalar.hpp"

#include <cmath>
#include <stdexcept>

namespace cachedof {

std::string mode_name(ScalarMode mode) { return mode == ScalarMode::ExactRational ? "exact" : "float"; }

ScalarMode parse_mode(std::string_view name) {
  if (name == "exact" || name == "rational") return ScalarMode::ExactRational;
  if (name == "float" || name == "float64") return ScalarMode::Float64;
  throw std::invalid_argument("unknown scalar mode '" + std::string(name) + "'; expected exact or float");
}

Scalar Scalar::exact(Rational value) {
  Scalar s;
  s.mode_ = ScalarMode::ExactRational;
  s.exact_ = std::move(value);
  return s;
}

Scalar Scalar::real(double value) {
  Scalar s;
  s.mode_ = ScalarMode::Float64;
  s.real_ = value;
  return s;
}

const Rational& Scalar::rational() const {
  if (mode_ != ScalarMode::ExactRational) throw std::logic_error("float scalar has no exact value");
  return exact_;
}

double Scalar::to_double() const { return mode_ == ScalarMode::ExactRational ? exact_.get_d() : real_; }

bool Scalar::is_zero(double tol) const {
  return mode_ == ScalarMode::ExactRational ? exact_ == 0 : std::abs(real_) <= tol;
}

}  // namespace cachedof
