#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "cachedof/core/rational.hpp"

namespace cachedof::dof {

/// Gap-scan audit limits: ratios must stay within [1, kGapBound].
inline const Rational kGapBound{27, 2};

struct GapTuple {
  int n_files = 0;
  int n_tx = 0;
  int n_rx = 0;
  auto operator<=>(const GapTuple&) const = default;
};

/// Where M_r is sampled for each tuple. Every breakpoint of the achievable
/// envelope and of the cut-set curve is evaluated exactly, plus
/// `interior_points` equally spaced points inside each resulting cell.
struct MrGridPolicy {
  int interior_points = 8;
};

struct TupleGap {
  GapTuple tuple;
  Rational max_ratio;
  Rational argmax_m_rx;
  std::size_t points = 0;
  std::size_t violations = 0;
};

struct GapReport {
  std::size_t tuples = 0;
  std::size_t points = 0;
  std::size_t violations = 0;
  Rational max_ratio;
  GapTuple argmax_tuple;
  Rational argmax_m_rx;
  Rational min_ratio;
  std::vector<TupleGap> per_tuple;  // filled when retain_per_tuple is set
};

/// Gap envelope(M_r) / cutset(M_r) for one tuple at one M_r < N.
Rational gap_ratio(const GapTuple& tuple, const Rational& m_rx);

/// Scan one tuple on the policy grid. M_r = N is skipped (both sides 0).
TupleGap scan_tuple(const GapTuple& tuple, const MrGridPolicy& policy = {});

using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;

struct ScanOptions {
  MrGridPolicy grid;
  bool retain_per_tuple = false;
  unsigned threads = 0;
  ProgressFn progress;
};

/// Scan the given tuples. The reduction is a max with lexicographic
/// tie-break on (tuple, M_r), so the result does not depend on scheduling.
GapReport gap_scan(const std::vector<GapTuple>& tuples, const ScanOptions& options = {});

/// Every tuple with 1 <= N <= n_max, 1 <= K_t <= kt_max, 1 <= K_r <= kr_max.
std::vector<GapTuple> grid_tuples(int n_max, int kt_max, int kr_max);

/// `count` tuples drawn uniformly (with replacement) from the same box.
std::vector<GapTuple> sample_tuples(int n_max, int kt_max, int kr_max, std::size_t count, std::uint64_t seed);

}  // namespace cachedof::dof
