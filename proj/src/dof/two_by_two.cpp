#include "cachedof/dof/two_by_two.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>
#include <vector>

namespace cachedof::dof {

namespace {

struct Line {
  Rational intercept;
  Rational slope;
  Rational at(const Rational& x) const { return intercept + slope * x; }
};

void check_range(const Rational& m_rx) {
  if (m_rx < 0 || m_rx > 2) throw std::domain_error("M_r must lie in [0, 2] for the 2x2 network");
}

template <std::size_t K>
Rational max_of(const std::array<Line, K>& lines, const Rational& x) {
  Rational best = lines[0].at(x);
  for (std::size_t i = 1; i < K; ++i) best = max(best, lines[i].at(x));
  return best;
}

const std::array<Line, 3>& extraction_lines() {
  static const std::array<Line, 3> lines{{{frac(3, 2), frac(-3, 2)},
                                          {frac(9, 7), frac(-6, 7)},
                                          {Rational(1), frac(-1, 2)}}};
  return lines;
}

const std::array<Line, 2>& baseline_lines() {
  static const std::array<Line, 2> lines{{{frac(3, 2), Rational(-1)}, {Rational(1), frac(-1, 2)}}};
  return lines;
}

const std::array<Line, 3>& load_lines() {
  static const std::array<Line, 3> lines{{{Rational(2), Rational(-2)},
                                          {frac(12, 7), frac(-8, 7)},
                                          {frac(4, 3), frac(-2, 3)}}};
  return lines;
}

template <std::size_t K>
void add_crossings(const std::array<Line, K>& lines, std::vector<Rational>& xs) {
  for (std::size_t i = 0; i < K; ++i)
    for (std::size_t j = i + 1; j < K; ++j) {
      if (lines[i].slope == lines[j].slope) continue;
      Rational x = (lines[j].intercept - lines[i].intercept) / (lines[i].slope - lines[j].slope);
      if (x > 0 && x < 2) xs.push_back(x);
    }
}

}  // namespace

Rational dof_2x2_curve(const Rational& m_rx) {
  check_range(m_rx);
  return max(max_of(extraction_lines(), m_rx), Rational(0));
}

Rational dof_2x2_baseline(const Rational& m_rx) {
  check_range(m_rx);
  return max(max_of(baseline_lines(), m_rx), Rational(0));
}

Rational dof_2x2_cutset(const Rational& m_rx) {
  check_range(m_rx);
  return 1 - m_rx / 2;
}

Rational net2x2_lower_bound(const Rational& m_rx) {
  check_range(m_rx);
  return max(max_of(load_lines(), m_rx), Rational(0));
}

ImprovementPeak improvement_2x2() {
  std::vector<Rational> xs{Rational(0)};
  add_crossings(extraction_lines(), xs);
  add_crossings(baseline_lines(), xs);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  ImprovementPeak peak{Rational(0), Rational(0)};
  for (const auto& x : xs) {
    const Rational ratio = dof_2x2_baseline(x) / dof_2x2_curve(x);
    if (ratio > peak.ratio) peak = {ratio, x};
  }
  return peak;
}

}  // namespace cachedof::dof
