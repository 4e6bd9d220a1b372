#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cachedof/core/rational.hpp"
#include "cachedof/core/scalar.hpp"
#include "cachedof/phy/alignment.hpp"

namespace cachedof::phy {

struct PhyTrial {
  std::uint64_t channel_seed = 0;
  int regenerations = 0;
  bool aligned = false;
  std::optional<AlignmentWitness> witness;
  /// Per receiver.
  std::vector<bool> full_rank;
  std::vector<std::optional<std::uint64_t>> witness_prime;
  std::vector<std::optional<double>> sigma_min;
  bool round_trip = false;
};

struct PhyReport {
  int n_tx = 0, n_rx = 0, sigma = 0, depth = 0;
  ScalarMode mode = ScalarMode::ExactRational;
  std::uint64_t seed = 0;
  int gamma = 0;
  std::size_t block_length = 0;
  MessageDof dof;
  Rational target;
  bool monomials_distinct = false;
  std::vector<PhyTrial> trials;

  std::size_t aligned_count() const;
  std::size_t full_rank_count() const;
  std::size_t round_trip_count() const;
  bool passed() const;
};

/// Seed of trial t; a pure function of (seed, t).
std::uint64_t trial_seed(std::uint64_t seed, std::size_t trial);

/// For each trial: draw a channel, build the plan, check alignment, certify
/// every Psi_k, and round-trip random messages through transmit and decode.
/// Exact mode compares exactly; float mode within 1e-6 relative.
PhyReport certify_phy(int n_tx, int n_rx, int sigma, int depth, std::size_t trials, std::uint64_t seed,
                      ScalarMode mode = ScalarMode::ExactRational, unsigned threads = 0);

nlohmann::json to_json(const PhyReport& report);

struct ConvergenceRow {
  int depth;
  Rational delta_first;
  Rational delta_rest;
  Rational target;
  /// |delta - target| / target.
  Rational error_first;
  Rational error_rest;
};

std::vector<ConvergenceRow> convergence_table(int n_tx, int n_rx, int sigma, const std::vector<int>& depths);
/// Header plus one row per depth; each quantity as exact and decimal columns.
std::string convergence_csv(const std::vector<ConvergenceRow>& rows);

/// Depths 1, 2, 4, ..., up to and including `last`.
std::vector<int> doubling_depths(int last);

}  // namespace cachedof::phy
