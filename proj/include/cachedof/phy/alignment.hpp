#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "cachedof/core/exact_linalg.hpp"
#include "cachedof/core/matrix.hpp"
#include "cachedof/core/rational.hpp"
#include "cachedof/core/scalar.hpp"
#include "cachedof/core/subsets.hpp"
#include "cachedof/phy/channel.hpp"

namespace cachedof::phy {

/// Index g of a ratio G_g = H_{rx,1}^{-1} H_{rx,tx}.
struct RatioPair {
  int rx;
  int tx;
  bool operator==(const RatioPair&) const = default;
};

struct SubsetPlan {
  ReceiverSubset subset;
  /// The Gamma ratios for this subset: rx not in S ascending, then tx = 2..K_t.
  std::vector<RatioPair> pairs;
  /// Exponent vectors of A_{S,1} ({1..n+1}^Gamma) and A_{S,2} ({1..n}^Gamma),
  /// lexicographic.
  std::vector<std::vector<int>> alpha1;
  std::vector<std::vector<int>> alpha2;
  std::vector<Rational> b_exact;
  std::vector<double> b_real;
  Dense<Rational> a1_exact, a2_exact;
  Dense<double> a1_real, a2_real;
};

/// Beamforming for the multiple multicast X-channel: every transmitter j has
/// one message for every sigma-subset S, sent along A_{S,1} (j = 1) or the
/// shared A_{S,2} (j >= 2).
class AlignmentPlan {
 public:
  AlignmentPlan(int n_tx, int n_rx, int sigma, int depth, ScalarMode mode, std::uint64_t channel_fingerprint,
                std::vector<SubsetPlan> subsets);

  int n_tx() const { return n_tx_; }
  int n_rx() const { return n_rx_; }
  int sigma() const { return sigma_; }
  int depth() const { return depth_; }
  int gamma() const { return gamma_; }
  std::size_t block_length() const { return block_length_; }
  ScalarMode mode() const { return mode_; }
  std::uint64_t channel_fingerprint() const { return channel_fingerprint_; }

  const std::vector<SubsetPlan>& subsets() const { return subsets_; }
  /// (n + c_j)^Gamma with c_1 = 1 and c_j = 0 otherwise.
  std::size_t streams(int tx) const;

  /// A_{S,j}; transmitters 2..K_t share one matrix.
  template <class T>
  const Dense<T>& beam(std::size_t subset, int tx) const;

 private:
  int n_tx_, n_rx_, sigma_, depth_, gamma_;
  std::size_t block_length_;
  ScalarMode mode_;
  std::uint64_t channel_fingerprint_;
  std::vector<SubsetPlan> subsets_;
};

/// Gamma = (K_r - sigma)(K_t - 1).
int alignment_gamma(int n_tx, int n_rx, int sigma);

/// T_n = C(K_r-1,sigma-1)[(n+1)^Gamma + (K_t-1)n^Gamma] + C(K_r-1,sigma)(n+1)^Gamma.
Integer block_length(int n_tx, int n_rx, int sigma, int depth);

/// Per-message DoF of a depth-n plan.
struct MessageDof {
  Rational first;  ///< delta_1 = (n+1)^Gamma / T_n
  Rational rest;   ///< delta_j = n^Gamma / T_n for j >= 2
};
MessageDof achieved_dof(int n_tx, int n_rx, int sigma, int depth);
MessageDof achieved_dof(const AlignmentPlan& plan);

/// Requires a channel with at least T_n slots; only the first T_n are used.
AlignmentPlan build_plan(int n_tx, int n_rx, int sigma, int depth, const ChannelRealization& channel);

struct AlignmentWitness {
  ReceiverSubset subset;
  int rx;
  int tx;
  /// Column of A_{S,2} whose image escaped span(A_{S,1}).
  std::size_t column;
  /// Relative least-squares residual in float mode; 1 in exact mode.
  double residual;
};

struct AlignmentCheck {
  bool aligned = true;
  std::size_t columns_checked = 0;
  std::optional<AlignmentWitness> witness;
};

/// Checks H_{i1}^{-1} H_{ij} A_{S,2} against A_{S,1} for every S, i not in S
/// and j >= 2: exact column membership in exact mode, projection residual
/// below `tol` in float mode.
AlignmentCheck verify_alignment(const AlignmentPlan& plan, const ChannelRealization& channel, double tol = 1e-8);

/// A contiguous group of Psi_k columns.
struct ColumnBlock {
  bool desired;
  std::size_t subset;
  /// Sending transmitter for desired blocks; 0 for an aligned interference block.
  int tx;
  std::size_t offset;
  std::size_t width;
};

struct DecodabilityCertificate {
  int receiver = 0;
  std::size_t side = 0;
  ScalarMode mode = ScalarMode::ExactRational;
  bool full_rank = false;
  std::vector<ColumnBlock> layout;
  /// Exact mode.
  FullRankCertificate exact;
  /// Float mode.
  std::optional<double> sigma_min, sigma_max, condition;
  double tolerance = 1e-8;
  Dense<Rational> psi_exact;
  Dense<double> psi_real;
};

/// Psi_k = [D_k I_k]: desired blocks H_{k1}A_{S,1}, H_{k2}A_{S,2}, ...,
/// H_{kK_t}A_{S,2} for each S containing k, then one aligned block
/// H_{k1}A_{S,1} for each S not containing k, subsets in lexicographic order.
DecodabilityCertificate build_psi(const AlignmentPlan& plan, const ChannelRealization& channel, int receiver,
                                  double tol = 1e-8);

class DecodeInfeasible : public std::runtime_error {
 public:
  DecodeInfeasible(int receiver, std::size_t side);
  int receiver;
  std::size_t side;
};

/// messages[s][j-1] holds streams(j) symbols of V_{S_s, j}.
template <class T>
using MessageBlocks = std::vector<std::vector<std::vector<T>>>;

/// Noiseless observations y_i = sum_j H_{ij} sum_S A_{S,j} v_{S,j}; result[i-1] has T_n entries.
template <class T>
std::vector<std::vector<T>> transmit_receive(const AlignmentPlan& plan, const ChannelRealization& channel,
                                             const MessageBlocks<T>& messages);

template <class T>
struct DecodedBlocks {
  /// desired[s][j-1] for subsets containing the receiver; empty otherwise.
  MessageBlocks<T> desired;
  /// aligned[s]: coordinates of the interference from subset s (empty for desired subsets).
  std::vector<std::vector<T>> aligned;
};

/// Solves y = Psi_k z for receiver k. Throws DecodeInfeasible when the
/// certificate is not full rank.
template <class T>
DecodedBlocks<T> decode_at(const AlignmentPlan& plan, const DecodabilityCertificate& certificate,
                           const std::vector<T>& observation);

/// Exponents of each Psi_k column as a monomial in the variables b_S and
/// h_{ij}, keyed ('b', subset, 0) or ('h', i, j). Identical for every slot.
using Monomial = std::map<std::tuple<char, int, int>, int>;
std::vector<Monomial> psi_monomials(const AlignmentPlan& plan, int receiver);
bool monomials_distinct(const std::vector<Monomial>& monomials);

}  // namespace cachedof::phy
