#include "cachedof/dof/gap_scan.hpp"

#include <algorithm>
#include <atomic>
#include <stdexcept>

#include "cachedof/core/parallel.hpp"
#include "cachedof/core/rng.hpp"
#include "cachedof/dof/bounds.hpp"
#include "cachedof/dof/curve.hpp"

namespace cachedof::dof {

Rational gap_ratio(const GapTuple& tuple, const Rational& m_rx) {
  const SystemParams params(tuple.n_files, tuple.n_tx, tuple.n_rx, m_rx);
  const Rational bound = cutset_bound(params);
  if (bound == 0) throw std::domain_error("gap undefined where the cut-set bound vanishes (M_r = N)");
  Rational r = DofCurve(params).reciprocal(m_rx) / bound;
  return r;
}

TupleGap scan_tuple(const GapTuple& tuple, const MrGridPolicy& policy) {
  if (policy.interior_points < 0) throw std::domain_error("interior point count must be non-negative");
  const SystemParams params(tuple.n_files, tuple.n_tx, tuple.n_rx, Rational(0));
  const DofCurve curve(params);
  const PiecewiseLinear cut = cutset_curve(tuple.n_files, tuple.n_tx, tuple.n_rx);
  const auto& env = curve.envelope();

  std::vector<Rational> xs;
  for (const auto& p : env.breakpoints()) xs.push_back(p.x);
  for (const auto& p : cut.breakpoints()) xs.push_back(p.x);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  TupleGap out;
  out.tuple = tuple;
  bool first = true;
  auto visit = [&](const Rational& x) {
    const Rational ratio = env(x) / cut(x);
    ++out.points;
    if (ratio < 1 || ratio > kGapBound) ++out.violations;
    if (first || ratio > out.max_ratio) {
      out.max_ratio = ratio;
      out.argmax_m_rx = x;
      first = false;
    }
  };
  const int cells = policy.interior_points + 1;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    visit(xs[i]);
    const Rational step = (xs[i + 1] - xs[i]) / cells;
    for (int k = 1; k < cells; ++k) visit(xs[i] + step * k);
  }
  return out;
}

GapReport gap_scan(const std::vector<GapTuple>& tuples, const ScanOptions& options) {
  std::vector<TupleGap> results(tuples.size());
  std::atomic<std::size_t> done{0};
  parallel_for(
      tuples.size(),
      [&](std::size_t i) {
        results[i] = scan_tuple(tuples[i], options.grid);
        const std::size_t d = ++done;
        if (options.progress) options.progress(d, tuples.size());
      },
      options.threads);

  GapReport report;
  report.tuples = tuples.size();
  bool first = true;
  for (const auto& r : results) {
    report.points += r.points;
    report.violations += r.violations;
    if (r.points == 0) continue;
    const bool better = first || r.max_ratio > report.max_ratio ||
                        (r.max_ratio == report.max_ratio &&
                         (r.tuple < report.argmax_tuple ||
                          (r.tuple == report.argmax_tuple && r.argmax_m_rx < report.argmax_m_rx)));
    if (better) {
      report.max_ratio = r.max_ratio;
      report.argmax_tuple = r.tuple;
      report.argmax_m_rx = r.argmax_m_rx;
    }
    if (first || r.max_ratio < report.min_ratio) report.min_ratio = r.max_ratio;
    first = false;
  }
  if (options.retain_per_tuple) report.per_tuple = std::move(results);
  return report;
}

std::vector<GapTuple> grid_tuples(int n_max, int kt_max, int kr_max) {
  if (n_max < 1 || kt_max < 1 || kr_max < 1) throw std::domain_error("scan limits must be positive");
  std::vector<GapTuple> out;
  out.reserve(static_cast<std::size_t>(n_max) * kt_max * kr_max);
  for (int n = 1; n <= n_max; ++n)
    for (int kt = 1; kt <= kt_max; ++kt)
      for (int kr = 1; kr <= kr_max; ++kr) out.push_back({n, kt, kr});
  return out;
}

std::vector<GapTuple> sample_tuples(int n_max, int kt_max, int kr_max, std::size_t count, std::uint64_t seed) {
  if (n_max < 1 || kt_max < 1 || kr_max < 1) throw std::domain_error("scan limits must be positive");
  CounterRng rng(seed, 0x6761702d7363616eULL);
  std::vector<GapTuple> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    GapTuple t;
    t.n_files = static_cast<int>(rng.uniform_int(1, n_max));
    t.n_tx = static_cast<int>(rng.uniform_int(1, kt_max));
    t.n_rx = static_cast<int>(rng.uniform_int(1, kr_max));
    out.push_back(t);
  }
  return out;
}

}  // namespace cachedof::dof
