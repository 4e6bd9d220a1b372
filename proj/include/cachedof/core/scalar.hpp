#pragma once

#include <string>
#include <string_view>

#include "cachedof/core/rational.hpp"

namespace cachedof {

enum class ScalarMode { ExactRational, Float64 };

/// "exact" or "float".
std::string mode_name(ScalarMode mode);
ScalarMode parse_mode(std::string_view name);

/// A value tagged with the arithmetic it lives in. Float comparisons take an
/// explicit tolerance from the caller.
class Scalar {
 public:
  static Scalar exact(Rational value);
  static Scalar real(double value);

  ScalarMode mode() const { return mode_; }
  /// Throws std::logic_error in float mode.
  const Rational& rational() const;
  double to_double() const;
  bool is_zero(double tol = 0.0) const;

 private:
  ScalarMode mode_ = ScalarMode::ExactRational;
  Rational exact_;
  double real_ = 0.0;
};

}  // namespace cachedof
