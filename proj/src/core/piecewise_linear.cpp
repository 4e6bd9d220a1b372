#include "cachedof/core/piecewise_linear.hpp"

#include <algorithm>
#include <stdexcept>

namespace cachedof {

PiecewiseLinear::PiecewiseLinear(std::vector<Point> breakpoints, bool convex_envelope)
    : breakpoints_(std::move(breakpoints)), convex_envelope_(convex_envelope) {
  if (breakpoints_.empty()) throw std::domain_error("piecewise-linear function needs a breakpoint");
  for (std::size_t i = 1; i < breakpoints_.size(); ++i)
    if (!(breakpoints_[i - 1].x < breakpoints_[i].x))
      throw std::domain_error("breakpoint abscissae must be strictly increasing");
}

Rational PiecewiseLinear::operator()(const Rational& x) const {
  if (x < x_min() || x > x_max()) throw std::domain_error("evaluation point " + x.get_str() + " outside domain");
  auto it = std::lower_bound(breakpoints_.begin(), breakpoints_.end(), x,
                             [](const Point& p, const Rational& v) { return p.x < v; });
  if (it->x == x) return it->y;
  const Point& hi = *it;
  const Point& lo = *(it - 1);
  Rational y = lo.y + (hi.y - lo.y) * (x - lo.x) / (hi.x - lo.x);
  return y;
}

std::vector<Rational> PiecewiseLinear::slopes() const {
  std::vector<Rational> out;
  for (std::size_t i = 1; i < breakpoints_.size(); ++i) {
    Rational s = (breakpoints_[i].y - breakpoints_[i - 1].y) / (breakpoints_[i].x - breakpoints_[i - 1].x);
    out.push_back(s);
  }
  return out;
}

bool PiecewiseLinear::is_convex() const {
  const auto s = slopes();
  return std::is_sorted(s.begin(), s.end());
}

bool PiecewiseLinear::is_non_increasing() const {
  for (const auto& s : slopes())
    if (s > 0) return false;
  return true;
}

PiecewiseLinear lower_convex_envelope(std::span<const Point> points) {
  if (points.size() < 2) throw std::domain_error("lower convex envelope needs at least two points");
  std::vector<Point> sorted(points.begin(), points.end());
  std::sort(sorted.begin(), sorted.end(), [](const Point& a, const Point& b) { return a.x < b.x; });
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i].x == sorted[i - 1].x) throw std::domain_error("envelope points need distinct x values");

  // Monotone chain: pop the middle point while it is on or above the chord.
  std::vector<Point> hull;
  for (const auto& p : sorted) {
    while (hull.size() >= 2) {
      const Point& a = hull[hull.size() - 2];
      const Point& b = hull.back();
      const Rational cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
      if (cross > 0) break;
      hull.pop_back();
    }
    hull.push_back(p);
  }
  return PiecewiseLinear(std::move(hull), true);
}

}  // namespace cachedof
