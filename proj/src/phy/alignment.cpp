#include "cachedof/phy/alignment.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <set>
#include <string>

#include "cachedof/core/errors.hpp"

namespace cachedof::phy {
namespace {

constexpr std::int64_t kGeneratorRange = 1 << 16;

std::size_t to_size(const Integer& v) {
  if (!v.fits_ulong_p()) throw std::overflow_error("dimension does not fit in memory");
  return v.get_ui();
}

Integer ipow(long base, int exp) {
  Integer out;
  mpz_ui_pow_ui(out.get_mpz_t(), static_cast<unsigned long>(base), static_cast<unsigned long>(exp));
  return out;
}

std::vector<std::vector<int>> exponent_grid(int gamma, int top) {
  std::vector<std::vector<int>> out;
  std::vector<int> alpha(gamma, 1);
  if (top < 1) return out;
  while (true) {
    out.push_back(alpha);
    int pos = gamma - 1;
    while (pos >= 0 && alpha[pos] == top) alpha[pos--] = 1;
    if (pos < 0) return out;
    ++alpha[pos];
  }
}

/// Column index of alpha in exponent_grid(gamma, top).
std::size_t grid_index(const std::vector<int>& alpha, int top) {
  std::size_t idx = 0;
  for (int a : alpha) idx = idx * top + (a - 1);
  return idx;
}

template <class T>
Dense<T> monomial_matrix(const SubsetPlan& sp, const std::vector<std::vector<int>>& alphas, const std::vector<T>& b,
                         const ChannelRealization& channel, std::size_t rows, int top) {
  const std::size_t gamma = sp.pairs.size();
  Dense<T> a(rows, alphas.size(), T(0));
  std::vector<std::vector<T>> powers(gamma, std::vector<T>(top + 1, T(1)));
  for (std::size_t tau = 1; tau <= rows; ++tau) {
    for (std::size_t g = 0; g < gamma; ++g) {
      const T ratio = channel.coefficient<T>(sp.pairs[g].rx, sp.pairs[g].tx, tau) /
                      channel.coefficient<T>(sp.pairs[g].rx, 1, tau);
      for (int e = 1; e <= top; ++e) powers[g][e] = powers[g][e - 1] * ratio;
    }
    for (std::size_t c = 0; c < alphas.size(); ++c) {
      T v = b[tau - 1];
      for (std::size_t g = 0; g < gamma; ++g) v *= powers[g][alphas[c][g]];
      a(tau - 1, c) = v;
    }
  }
  return a;
}

template <class T>
Dense<T> assemble_psi(const AlignmentPlan& plan, const ChannelRealization& channel, int k,
                      const std::vector<ColumnBlock>& layout) {
  const std::size_t t = plan.block_length();
  Dense<T> psi(t, t, T(0));
  for (const auto& blk : layout) {
    const int tx = blk.desired ? blk.tx : 1;
    const Dense<T>& a = plan.beam<T>(blk.subset, tx);
    for (std::size_t tau = 1; tau <= t; ++tau) {
      const T& h = channel.coefficient<T>(k, tx, tau);
      for (std::size_t c = 0; c < blk.width; ++c) psi(tau - 1, blk.offset + c) = h * a(tau - 1, c);
    }
  }
  return psi;
}

Eigen::MatrixXd to_eigen(const Dense<double>& m) {
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = m(r, c);
  return out;
}

std::vector<ColumnBlock> psi_layout(const AlignmentPlan& plan, int k) {
  std::vector<ColumnBlock> layout;
  std::size_t offset = 0;
  const auto& subsets = plan.subsets();
  for (std::size_t s = 0; s < subsets.size(); ++s) {
    if (!subsets[s].subset.contains(k)) continue;
    for (int j = 1; j <= plan.n_tx(); ++j) {
      layout.push_back(ColumnBlock{true, s, j, offset, plan.streams(j)});
      offset += plan.streams(j);
    }
  }
  for (std::size_t s = 0; s < subsets.size(); ++s) {
    if (subsets[s].subset.contains(k)) continue;
    layout.push_back(ColumnBlock{false, s, 0, offset, plan.streams(1)});
    offset += plan.streams(1);
  }
  if (offset != plan.block_length()) throw std::logic_error("Psi column count differs from the block length");
  return layout;
}

}  // namespace

AlignmentPlan::AlignmentPlan(int n_tx, int n_rx, int sigma, int depth, ScalarMode mode,
                             std::uint64_t channel_fingerprint, std::vector<SubsetPlan> subsets)
    : n_tx_(n_tx),
      n_rx_(n_rx),
      sigma_(sigma),
      depth_(depth),
      gamma_(alignment_gamma(n_tx, n_rx, sigma)),
      block_length_(to_size(phy::block_length(n_tx, n_rx, sigma, depth))),
      mode_(mode),
      channel_fingerprint_(channel_fingerprint),
      subsets_(std::move(subsets)) {}

std::size_t AlignmentPlan::streams(int tx) const {
  if (tx < 1 || tx > n_tx_) throw std::out_of_range("transmitter index out of range");
  return to_size(ipow(tx == 1 ? depth_ + 1 : depth_, gamma_));
}

template <>
const Dense<Rational>& AlignmentPlan::beam<Rational>(std::size_t subset, int tx) const {
  if (mode_ != ScalarMode::ExactRational) throw std::logic_error("float plan read as exact");
  const auto& sp = subsets_.at(subset);
  return tx == 1 ? sp.a1_exact : sp.a2_exact;
}

template <>
const Dense<double>& AlignmentPlan::beam<double>(std::size_t subset, int tx) const {
  if (mode_ != ScalarMode::Float64) throw std::logic_error("exact plan read as float");
  const auto& sp = subsets_.at(subset);
  return tx == 1 ? sp.a1_real : sp.a2_real;
}

int alignment_gamma(int n_tx, int n_rx, int sigma) {
  if (n_tx < 1 || n_rx < 1) throw std::domain_error("K_t and K_r must be positive");
  if (sigma < 1 || sigma > n_rx) throw std::domain_error("sigma must lie in 1..K_r");
  return (n_rx - sigma) * (n_tx - 1);
}

Integer block_length(int n_tx, int n_rx, int sigma, int depth) {
  const int gamma = alignment_gamma(n_tx, n_rx, sigma);
  if (depth < 1) throw std::domain_error("recursion depth n must be at least 1");
  const Integer up = ipow(depth + 1, gamma);
  const Integer down = ipow(depth, gamma);
  return binomial(n_rx - 1, sigma - 1) * (up + (n_tx - 1) * down) + binomial(n_rx - 1, sigma) * up;
}

MessageDof achieved_dof(int n_tx, int n_rx, int sigma, int depth) {
  const int gamma = alignment_gamma(n_tx, n_rx, sigma);
  const Integer t = block_length(n_tx, n_rx, sigma, depth);
  return MessageDof{frac(ipow(depth + 1, gamma), t), frac(ipow(depth, gamma), t)};
}

MessageDof achieved_dof(const AlignmentPlan& plan) {
  return achieved_dof(plan.n_tx(), plan.n_rx(), plan.sigma(), plan.depth());
}

AlignmentPlan build_plan(int n_tx, int n_rx, int sigma, int depth, const ChannelRealization& channel) {
  const int gamma = alignment_gamma(n_tx, n_rx, sigma);
  const std::size_t t = to_size(block_length(n_tx, n_rx, sigma, depth));
  if (channel.n_tx() != n_tx || channel.n_rx() != n_rx) throw std::domain_error("channel dimensions differ from the plan");
  if (channel.slots() < t)
    throw std::domain_error("channel has " + std::to_string(channel.slots()) + " slots; the plan needs T_n = " +
                            std::to_string(t));

  std::vector<SubsetPlan> plans;
  const auto subsets = subsets_of_size(n_rx, sigma);
  for (std::size_t s = 0; s < subsets.size(); ++s) {
    SubsetPlan sp;
    sp.subset = subsets[s];
    for (int i = 1; i <= n_rx; ++i)
      if (!sp.subset.contains(i))
        for (int j = 2; j <= n_tx; ++j) sp.pairs.push_back(RatioPair{i, j});
    sp.alpha1 = exponent_grid(gamma, depth + 1);
    sp.alpha2 = exponent_grid(gamma, depth);
    if (channel.mode() == ScalarMode::ExactRational) {
      sp.b_exact = channel.exact_generators(s, t, kGeneratorRange);
      sp.a1_exact = monomial_matrix<Rational>(sp, sp.alpha1, sp.b_exact, channel, t, depth + 1);
      sp.a2_exact = monomial_matrix<Rational>(sp, sp.alpha2, sp.b_exact, channel, t, depth + 1);
    } else {
      sp.b_real = channel.real_generators(s, t);
      sp.a1_real = monomial_matrix<double>(sp, sp.alpha1, sp.b_real, channel, t, depth + 1);
      sp.a2_real = monomial_matrix<double>(sp, sp.alpha2, sp.b_real, channel, t, depth + 1);
    }
    plans.push_back(std::move(sp));
  }
  return AlignmentPlan(n_tx, n_rx, sigma, depth, channel.mode(), channel.fingerprint(), std::move(plans));
}

AlignmentCheck verify_alignment(const AlignmentPlan& plan, const ChannelRealization& channel, double tol) {
  if (plan.channel_fingerprint() != channel.fingerprint()) throw IntegrityError("plan was built on another channel");
  AlignmentCheck out;
  const std::size_t t = plan.block_length();
  const int top = plan.depth() + 1;
  const bool exact = plan.mode() == ScalarMode::ExactRational;
  for (std::size_t s = 0; s < plan.subsets().size(); ++s) {
    const auto& sp = plan.subsets()[s];
    std::optional<Eigen::ColPivHouseholderQR<Eigen::MatrixXd>> qr;
    if (!exact) qr.emplace(to_eigen(sp.a1_real));
    for (std::size_t g = 0; g < sp.pairs.size(); ++g) {
      const auto [i, j] = sp.pairs[g];
      for (std::size_t c = 0; c < sp.alpha2.size(); ++c) {
        ++out.columns_checked;
        if (exact) {
          std::vector<Rational> image(t);
          for (std::size_t tau = 1; tau <= t; ++tau)
            image[tau - 1] = channel.h_exact(i, j, tau) / channel.h_exact(i, 1, tau) * sp.a2_exact(tau - 1, c);
          std::vector<int> shifted = sp.alpha2[c];
          ++shifted[g];
          bool found = sp.a1_exact.column(grid_index(shifted, top)) == image;
          for (std::size_t c1 = 0; !found && c1 < sp.alpha1.size(); ++c1) found = sp.a1_exact.column(c1) == image;
          if (!found) {
            out.aligned = false;
            out.witness = AlignmentWitness{sp.subset, i, j, c, 1.0};
            return out;
          }
        } else {
          Eigen::VectorXd image(t);
          for (std::size_t tau = 1; tau <= t; ++tau)
            image(tau - 1) = channel.h_real(i, j, tau) / channel.h_real(i, 1, tau) * sp.a2_real(tau - 1, c);
          const Eigen::VectorXd coeffs = qr->solve(image);
          const double residual = (to_eigen(sp.a1_real) * coeffs - image).norm() / image.norm();
          if (!(residual <= tol)) {
            out.aligned = false;
            out.witness = AlignmentWitness{sp.subset, i, j, c, residual};
            return out;
          }
        }
      }
    }
  }
  return out;
}

DecodabilityCertificate build_psi(const AlignmentPlan& plan, const ChannelRealization& channel, int receiver,
                                  double tol) {
  if (plan.channel_fingerprint() != channel.fingerprint()) throw IntegrityError("plan was built on another channel");
  if (receiver < 1 || receiver > plan.n_rx()) throw std::out_of_range("receiver index out of range");
  DecodabilityCertificate cert;
  cert.receiver = receiver;
  cert.side = plan.block_length();
  cert.mode = plan.mode();
  cert.tolerance = tol;
  cert.layout = psi_layout(plan, receiver);
  if (plan.mode() == ScalarMode::ExactRational) {
    cert.psi_exact = assemble_psi<Rational>(plan, channel, receiver, cert.layout);
    cert.exact = certify_full_rank(cert.psi_exact);
    cert.full_rank = cert.exact.full_rank;
  } else {
    cert.psi_real = assemble_psi<double>(plan, channel, receiver, cert.layout);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(to_eigen(cert.psi_real));
    const auto& sv = svd.singularValues();
    cert.sigma_max = sv(0);
    cert.sigma_min = sv(sv.size() - 1);
    cert.condition = *cert.sigma_max / *cert.sigma_min;
    cert.full_rank = *cert.sigma_min > tol * *cert.sigma_max;
  }
  return cert;
}

DecodeInfeasible::DecodeInfeasible(int receiver_, std::size_t side_)
    : std::runtime_error("Psi_" + std::to_string(receiver_) + " (" + std::to_string(side_) + "x" +
                         std::to_string(side_) + ") is rank deficient; decoding is infeasible"),
      receiver(receiver_),
      side(side_) {}

template <class T>
std::vector<std::vector<T>> transmit_receive(const AlignmentPlan& plan, const ChannelRealization& channel,
                                             const MessageBlocks<T>& messages) {
  if (plan.channel_fingerprint() != channel.fingerprint()) throw IntegrityError("plan was built on another channel");
  const std::size_t t = plan.block_length();
  const std::size_t ns = plan.subsets().size();
  if (messages.size() != ns) throw std::domain_error("one message group per sigma-subset is required");
  for (const auto& group : messages) {
    if (static_cast<int>(group.size()) != plan.n_tx()) throw std::domain_error("one message per transmitter is required");
    for (int j = 1; j <= plan.n_tx(); ++j)
      if (group[j - 1].size() != plan.streams(j)) throw std::domain_error("message length differs from (n+c_j)^Gamma");
  }
  std::vector<std::vector<T>> x(plan.n_tx(), std::vector<T>(t, T(0)));
  for (std::size_t s = 0; s < ns; ++s)
    for (int j = 1; j <= plan.n_tx(); ++j) {
      const Dense<T>& a = plan.beam<T>(s, j);
      const auto& v = messages[s][j - 1];
      for (std::size_t tau = 0; tau < t; ++tau)
        for (std::size_t c = 0; c < v.size(); ++c) x[j - 1][tau] += a(tau, c) * v[c];
    }
  std::vector<std::vector<T>> y(plan.n_rx(), std::vector<T>(t, T(0)));
  for (int i = 1; i <= plan.n_rx(); ++i)
    for (int j = 1; j <= plan.n_tx(); ++j)
      for (std::size_t tau = 1; tau <= t; ++tau) y[i - 1][tau - 1] += channel.coefficient<T>(i, j, tau) * x[j - 1][tau - 1];
  return y;
}

template <class T>
DecodedBlocks<T> decode_at(const AlignmentPlan& plan, const DecodabilityCertificate& certificate,
                           const std::vector<T>& observation) {
  if (!certificate.full_rank) throw DecodeInfeasible(certificate.receiver, certificate.side);
  if (observation.size() != certificate.side) throw std::domain_error("observation length differs from T_n");
  std::vector<T> z;
  if constexpr (std::is_same_v<T, Rational>) {
    if (certificate.mode != ScalarMode::ExactRational) throw std::logic_error("float certificate used for exact decode");
    auto sol = solve_exact(certificate.psi_exact, observation);
    if (!sol) throw DecodeInfeasible(certificate.receiver, certificate.side);
    z = std::move(*sol);
  } else {
    if (certificate.mode != ScalarMode::Float64) throw std::logic_error("exact certificate used for float decode");
    Eigen::VectorXd y(observation.size());
    for (std::size_t r = 0; r < observation.size(); ++r) y(r) = observation[r];
    const Eigen::VectorXd sol = to_eigen(certificate.psi_real).fullPivLu().solve(y);
    z.assign(sol.data(), sol.data() + sol.size());
  }
  DecodedBlocks<T> out;
  out.desired.assign(plan.subsets().size(), {});
  out.aligned.assign(plan.subsets().size(), {});
  for (const auto& blk : certificate.layout) {
    std::vector<T> part(z.begin() + blk.offset, z.begin() + blk.offset + blk.width);
    if (blk.desired) {
      auto& group = out.desired[blk.subset];
      if (group.empty()) group.resize(plan.n_tx());
      group[blk.tx - 1] = std::move(part);
    } else {
      out.aligned[blk.subset] = std::move(part);
    }
  }
  return out;
}

template std::vector<std::vector<Rational>> transmit_receive(const AlignmentPlan&, const ChannelRealization&,
                                                             const MessageBlocks<Rational>&);
template std::vector<std::vector<double>> transmit_receive(const AlignmentPlan&, const ChannelRealization&,
                                                           const MessageBlocks<double>&);
template DecodedBlocks<Rational> decode_at(const AlignmentPlan&, const DecodabilityCertificate&,
                                           const std::vector<Rational>&);
template DecodedBlocks<double> decode_at(const AlignmentPlan&, const DecodabilityCertificate&,
                                         const std::vector<double>&);

std::vector<Monomial> psi_monomials(const AlignmentPlan& plan, int receiver) {
  std::vector<Monomial> out;
  for (const auto& blk : psi_layout(plan, receiver)) {
    const auto& sp = plan.subsets()[blk.subset];
    const int tx = blk.desired ? blk.tx : 1;
    const auto& alphas = tx == 1 ? sp.alpha1 : sp.alpha2;
    for (const auto& alpha : alphas) {
      Monomial m;
      m[{'b', static_cast<int>(blk.subset), 0}] += 1;
      m[{'h', receiver, tx}] += 1;
      for (std::size_t g = 0; g < sp.pairs.size(); ++g) {
        m[{'h', sp.pairs[g].rx, sp.pairs[g].tx}] += alpha[g];
        m[{'h', sp.pairs[g].rx, 1}] -= alpha[g];
      }
      std::erase_if(m, [](const auto& kv) { return kv.second == 0; });
      out.push_back(std::move(m));
    }
  }
  return out;
}

bool monomials_distinct(const std::vector<Monomial>& monomials) {
  std::set<Monomial> seen(monomials.begin(), monomials.end());
  return seen.size() == monomials.size();
}

}  // namespace cachedof::phy
