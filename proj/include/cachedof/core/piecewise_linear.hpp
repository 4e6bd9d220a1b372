#pragma once

#include <span>
#include <vector>

#include "cachedof/core/rational.hpp"

namespace cachedof {

struct Point {
  Rational x;
  Rational y;
};

/// Continuous piecewise-linear function on [x_front, x_back] given by its
/// breakpoints. Evaluation outside that interval is a domain error.
class PiecewiseLinear {
 public:
  PiecewiseLinear(std::vector<Point> breakpoints, bool convex_envelope = false);

  Rational operator()(const Rational& x) const;

  const std::vector<Point>& breakpoints() const { return breakpoints_; }
  const Rational& x_min() const { return breakpoints_.front().x; }
  const Rational& x_max() const { return breakpoints_.back().x; }

  /// True when built by lower_convex_envelope.
  bool is_envelope() const { return convex_envelope_; }

  /// Slopes between consecutive breakpoints are non-decreasing.
  bool is_convex() const;
  /// Slopes are all <= 0.
  bool is_non_increasing() const;

  std::vector<Rational> slopes() const;

 private:
  std::vector<Point> breakpoints_;
  bool convex_envelope_;
};

/// Greatest convex function lying below every input point. The output
/// breakpoints are a subset of the inputs; collinear interior points are
/// dropped. Needs at least two points with distinct x.
PiecewiseLinear lower_convex_envelope(std::span<const Point> points);

}  // namespace cachedof
