#pragma once

#include <string>

#include "cachedof/core/rational.hpp"

namespace cachedof {

/// The network tuple (N, K_t, K_r, M_t, M_r). Cache sizes are in units of
/// files. Construction validates every invariant, so a SystemParams value is
/// always usable.
class SystemParams {
 public:
  /// m_tx defaults to N/K_t, the smallest value for which the transmitters
  /// can jointly hold the library.
  SystemParams(int n_files, int n_tx, int n_rx, Rational m_rx);
  SystemParams(int n_files, int n_tx, int n_rx, Rational m_tx, Rational m_rx);

  int n_files() const { return n_files_; }
  int n_tx() const { return n_tx_; }
  int n_rx() const { return n_rx_; }
  const Rational& m_tx() const { return m_tx_; }
  const Rational& m_rx() const { return m_rx_; }

  /// K_r * M_r / N; may be fractional.
  Rational kappa() const;
  bool has_integer_kappa() const;
  /// Throws std::domain_error when kappa is not an integer.
  int integer_kappa() const;

  SystemParams with_m_rx(Rational m_rx) const;
  /// Receiver memory matching an integer kappa: kappa * N / K_r.
  SystemParams with_kappa(int kappa) const;

  std::string to_string() const;

  friend bool operator==(const SystemParams& a, const SystemParams& b);

 private:
  int n_files_;
  int n_tx_;
  int n_rx_;
  Rational m_tx_;
  Rational m_rx_;
};

}  // namespace cachedof
