#include "cachedof/dof/bounds.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>

namespace cachedof::dof {

Rational phy_dof_optimal(int k_tx, int k_rx, int sigma) {
  if (k_tx < 1 || k_rx < 1) throw std::domain_error("K_t and K_r must be positive");
  if (sigma < 1 || sigma > k_rx) throw std::domain_error("sigma must lie in [1, K_r]");
  const Integer dims = k_tx * binomial(k_rx - 1, sigma - 1) + binomial(k_rx - 1, sigma);
  return frac(Integer(1), dims);
}

Rational phy_sum_dof(int k_tx, int k_rx, int sigma) {
  if (sigma < 1 || sigma > k_rx) throw std::domain_error("sigma must lie in [1, K_r]");
  Rational out(k_tx * k_rx, (k_tx - 1) * sigma + k_rx);
  out.canonicalize();
  return out;
}

Rational compound_dof(int k_tx, int distinct_files) {
  if (k_tx < 1 || distinct_files < 1) throw std::domain_error("compound X-channel needs positive sizes");
  return frac(1, k_tx + distinct_files - 1);
}

Rational cutset_term(const SystemParams& params, int s) {
  const int s_max = std::min(params.n_rx(), params.n_files());
  if (s < 1 || s > s_max) throw std::domain_error("cut-set size s must lie in [1, min{K_r, N}]");
  const int files_per_batch = params.n_files() / s;
  Rational term = frac(s, std::min(s, params.n_tx())) * (1 - params.m_rx() / files_per_batch);
  term.canonicalize();
  return term < 0 ? Rational(0) : term;
}

Rational cutset_bound(const SystemParams& params) {
  const int s_max = std::min(params.n_rx(), params.n_files());
  Rational best = 0;
  for (int s = 1; s <= s_max; ++s) best = max(best, cutset_term(params, s));
  return best;
}

namespace {

struct Line {
  Rational intercept;
  Rational slope;
  Rational at(const Rational& x) const { return intercept + slope * x; }
};

}  // namespace

PiecewiseLinear cutset_curve(int n_files, int n_tx, int n_rx) {
  if (n_files < 1 || n_tx < 1 || n_rx < 1) throw std::domain_error("cut-set curve needs positive sizes");
  std::vector<Line> lines;
  lines.push_back({0, 0});
  for (int s = 1; s <= std::min(n_rx, n_files); ++s) {
    Rational a(s, std::min(s, n_tx));
    a.canonicalize();
    Rational slope = -a / (n_files / s);
    lines.push_back({a, slope});
  }

  // Walk the upper envelope from M_r = 0: at each step move to the line
  // with larger slope that overtakes the current one first.
  auto better_at = [](const Line& l, const Line& cur, const Rational& x) {
    const Rational vl = l.at(x), vc = cur.at(x);
    return vl > vc || (vl == vc && l.slope > cur.slope);
  };
  Rational x = 0;
  const Rational end(n_files);
  std::size_t cur = 0;
  for (std::size_t i = 1; i < lines.size(); ++i)
    if (better_at(lines[i], lines[cur], x)) cur = i;

  std::vector<Point> pts{{x, lines[cur].at(x)}};
  while (true) {
    std::optional<Rational> next_x;
    std::size_t next = cur;
    for (std::size_t i = 0; i < lines.size(); ++i) {
      if (!(lines[i].slope > lines[cur].slope)) continue;
      Rational xi = (lines[cur].intercept - lines[i].intercept) / (lines[i].slope - lines[cur].slope);
      if (!(xi > x)) continue;
      if (!next_x || xi < *next_x || (xi == *next_x && lines[i].slope > lines[next].slope)) {
        next_x = xi;
        next = i;
      }
    }
    if (!next_x || *next_x >= end) break;
    x = *next_x;
    cur = next;
    pts.push_back({x, lines[cur].at(x)});
  }
  pts.push_back({end, lines[cur].at(end)});
  return PiecewiseLinear(std::move(pts));
}

}  // namespace cachedof::dof
