#include "cachedof/core/params.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace cachedof {

SystemParams::SystemParams(int n_files, int n_tx, int n_rx, Rational m_rx)
    : SystemParams(n_files, n_tx, n_rx, frac(n_files, std::max(n_tx, 1)), std::move(m_rx)) {}

SystemParams::SystemParams(int n_files, int n_tx, int n_rx, Rational m_tx, Rational m_rx)
    : n_files_(n_files), n_tx_(n_tx), n_rx_(n_rx), m_tx_(std::move(m_tx)), m_rx_(std::move(m_rx)) {
  if (n_files < 1) throw std::domain_error("N must be positive");
  if (n_tx < 1) throw std::domain_error("K_t must be positive");
  if (n_rx < 1) throw std::domain_error("K_r must be positive");
  m_tx_.canonicalize();
  m_rx_.canonicalize();
  if (m_rx_ < 0 || m_rx_ > n_files) throw std::domain_error("M_r must lie in [0, N]");
  if (m_tx_ * n_tx < n_files)
    throw std::domain_error("M_t must be at least N/K_t so the transmitters hold the library");
}

Rational SystemParams::kappa() const {
  Rational k = m_rx_ * n_rx_ / n_files_;
  k.canonicalize();
  return k;
}

bool SystemParams::has_integer_kappa() const { return kappa().get_den() == 1; }

int SystemParams::integer_kappa() const {
  const Rational k = kappa();
  if (k.get_den() != 1)
    throw std::domain_error("kappa = K_r*M_r/N = " + k.get_str() +
                            " is not an integer; use memory sharing between integer points");
  return static_cast<int>(k.get_num().get_si());
}

SystemParams SystemParams::with_m_rx(Rational m_rx) const {
  return SystemParams(n_files_, n_tx_, n_rx_, m_tx_, std::move(m_rx));
}

SystemParams SystemParams::with_kappa(int kappa) const {
  if (kappa < 0 || kappa > n_rx_) throw std::domain_error("kappa must lie in [0, K_r]");
  return with_m_rx(frac(kappa * n_files_, n_rx_));
}

std::string SystemParams::to_string() const {
  std::ostringstream os;
  os << "N=" << n_files_ << " K_t=" << n_tx_ << " K_r=" << n_rx_ << " M_t=" << m_tx_.get_str()
     << " M_r=" << m_rx_.get_str();
  return os.str();
}

bool operator==(const SystemParams& a, const SystemParams& b) {
  return a.n_files_ == b.n_files_ && a.n_tx_ == b.n_tx_ && a.n_rx_ == b.n_rx_ && a.m_tx_ == b.m_tx_ &&
         a.m_rx_ == b.m_rx_;
}

}  // namespace cachedof
