#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "cachedof/core/scalar.hpp"

namespace cachedof::cli {

struct VerifyArgs {
  std::string suite;
  std::size_t trials = 0;  ///< 0: the suite's default
  /// "small" or "full"; empty picks the suite default (full for net and
  /// e2e, small for phy).
  std::string grid;
  int kt = 0, kr = 0, sigma = 0, depth = 0;
};

struct VerifyResult {
  bool passed = false;
  std::string summary;
  nlohmann::json report;
};

/// net: every integer-kappa scheme with N <= 4, K_t <= 2, K_r <= 4 (small:
/// N, K_r <= 3), every demand, bit-exact decode and sum load.
/// phy: alignment, Psi certificates and round trips for K_t K_r <= 8,
/// sigma <= K_r, n <= 1 (full: n <= 2), or a single pinned point.
/// e2e: the four-receiver run over `trials` channels, the 2x2 unicast
/// accounting at n = 8, the extraction runs and an exhaustive small grid.
/// 2x2: all corners and demand pairs, decode, loads and corner identities.
VerifyResult run_verify(const VerifyArgs& args, std::uint64_t seed, unsigned threads, ScalarMode mode);

}  // namespace cachedof::cli
