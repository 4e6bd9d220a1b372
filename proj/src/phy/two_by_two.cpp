#include "cachedof/phy/two_by_two.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "cachedof/core/errors.hpp"
#include "cachedof/core/exact_linalg.hpp"

namespace cachedof::phy {
namespace {

constexpr std::size_t kSlots = 3;

template <class T>
Directions2x2<T> directions(const ChannelRealization& ch) {
  auto h = [&](int i, int j, std::size_t tau) -> const T& { return ch.coefficient<T>(i, j, tau); };
  for (int i = 1; i <= 2; ++i)
    for (int j = 1; j <= 2; ++j)
      for (std::size_t tau = 1; tau <= kSlots; ++tau)
        if (h(i, j, tau) == T(0)) throw RegenerationRequest("zero channel coefficient in the 2x2 plan");
  Directions2x2<T> d;
  d.a11 = {T(1), T(1), T(0)};
  d.a21 = {T(1), T(0), T(1)};
  d.a12.resize(kSlots);
  d.a22.resize(kSlots);
  for (std::size_t tau = 1; tau <= kSlots; ++tau) {
    d.a12[tau - 1] = h(2, 1, tau) / h(2, 2, tau) * d.a11[tau - 1];
    d.a22[tau - 1] = h(1, 1, tau) / h(1, 2, tau) * d.a21[tau - 1];
  }
  d.psi[0] = Dense<T>(kSlots, kSlots, T(0));
  d.psi[1] = Dense<T>(kSlots, kSlots, T(0));
  for (std::size_t tau = 1; tau <= kSlots; ++tau) {
    const std::size_t r = tau - 1;
    d.psi[0](r, 0) = h(1, 1, tau) * d.a11[r];
    d.psi[0](r, 1) = h(1, 2, tau) * d.a12[r];
    d.psi[0](r, 2) = h(1, 1, tau) * d.a21[r];
    d.psi[1](r, 0) = h(2, 1, tau) * d.a21[r];
    d.psi[1](r, 1) = h(2, 2, tau) * d.a22[r];
    d.psi[1](r, 2) = h(2, 1, tau) * d.a11[r];
  }
  return d;
}

void check_receiver(int receiver) {
  if (receiver != 1 && receiver != 2) throw std::out_of_range("receiver must be 1 or 2");
}

}  // namespace

template <>
const Directions2x2<Rational>& Plan2x2::directions<Rational>() const {
  if (mode != ScalarMode::ExactRational) throw std::logic_error("float plan read as exact");
  return exact;
}

template <>
const Directions2x2<double>& Plan2x2::directions<double>() const {
  if (mode != ScalarMode::Float64) throw std::logic_error("exact plan read as float");
  return real;
}

Plan2x2 build_plan_2x2(const ChannelRealization& channel) {
  if (channel.n_rx() != 2 || channel.n_tx() != 2) throw std::domain_error("the extraction plan needs a 2x2 channel");
  if (channel.slots() < kSlots) throw std::domain_error("the extraction plan needs 3 slots");
  Plan2x2 plan{channel.mode(), channel.fingerprint(), {}, {}};
  if (channel.mode() == ScalarMode::ExactRational) plan.exact = directions<Rational>(channel);
  else plan.real = directions<double>(channel);
  return plan;
}

DecodabilityCertificate certify_2x2(const Plan2x2& plan, int receiver, double tol) {
  check_receiver(receiver);
  DecodabilityCertificate cert;
  cert.receiver = receiver;
  cert.side = kSlots;
  cert.mode = plan.mode;
  cert.tolerance = tol;
  if (plan.mode == ScalarMode::ExactRational) {
    cert.psi_exact = plan.exact.psi[receiver - 1];
    cert.exact = certify_full_rank(cert.psi_exact);
    cert.full_rank = cert.exact.full_rank;
  } else {
    cert.psi_real = plan.real.psi[receiver - 1];
    Eigen::Matrix3d m;
    for (std::size_t r = 0; r < kSlots; ++r)
      for (std::size_t c = 0; c < kSlots; ++c) m(r, c) = cert.psi_real(r, c);
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(m);
    cert.sigma_max = svd.singularValues()(0);
    cert.sigma_min = svd.singularValues()(2);
    cert.condition = *cert.sigma_max / *cert.sigma_min;
    cert.full_rank = *cert.sigma_min > tol * *cert.sigma_max;
  }
  return cert;
}

template <class T>
std::array<std::vector<T>, 2> transmit_2x2(const Plan2x2& plan, const ChannelRealization& channel, const T& v11,
                                           const T& v12, const T& v21, const T& v22) {
  if (plan.channel_fingerprint != channel.fingerprint()) throw IntegrityError("plan was built on another channel");
  const auto& d = plan.directions<T>();
  std::array<std::vector<T>, 2> y{std::vector<T>(kSlots, T(0)), std::vector<T>(kSlots, T(0))};
  for (std::size_t tau = 1; tau <= kSlots; ++tau) {
    const std::size_t r = tau - 1;
    const T x1 = d.a11[r] * v11 + d.a21[r] * v21;
    const T x2 = d.a12[r] * v12 + d.a22[r] * v22;
    for (int i = 1; i <= 2; ++i)
      y[i - 1][r] = channel.coefficient<T>(i, 1, tau) * x1 + channel.coefficient<T>(i, 2, tau) * x2;
  }
  return y;
}

template <class T>
std::array<T, 3> decode_2x2(const Plan2x2& plan, int receiver, const std::vector<T>& observation) {
  check_receiver(receiver);
  if (observation.size() != kSlots) throw std::domain_error("observation must span 3 slots");
  const Dense<T>& psi = plan.directions<T>().psi[receiver - 1];
  if constexpr (std::is_same_v<T, Rational>) {
    auto sol = solve_gauss(psi, observation);
    if (!sol) throw DecodeInfeasible(receiver, kSlots);
    return {(*sol)[0], (*sol)[1], (*sol)[2]};
  } else {
    Eigen::Matrix3d m;
    Eigen::Vector3d y;
    for (std::size_t r = 0; r < kSlots; ++r) {
      y(r) = observation[r];
      for (std::size_t c = 0; c < kSlots; ++c) m(r, c) = psi(r, c);
    }
    const Eigen::Vector3d z = m.fullPivLu().solve(y);
    return {z(0), z(1), z(2)};
  }
}

template std::array<std::vector<Rational>, 2> transmit_2x2(const Plan2x2&, const ChannelRealization&, const Rational&,
                                                           const Rational&, const Rational&, const Rational&);
template std::array<std::vector<double>, 2> transmit_2x2(const Plan2x2&, const ChannelRealization&, const double&,
                                                         const double&, const double&, const double&);
template std::array<Rational, 3> decode_2x2(const Plan2x2&, int, const std::vector<Rational>&);
template std::array<double, 3> decode_2x2(const Plan2x2&, int, const std::vector<double>&);

}  // namespace cachedof::phy
