#include "cachedof/phy/channel.hpp"

#include <set>
#include <stdexcept>

#include "cachedof/core/errors.hpp"
#include "cachedof/core/rng.hpp"

namespace cachedof::phy {
namespace {

// Coefficient streams use stream ids below this; generators use ids above.
constexpr std::uint64_t kGeneratorStreamBase = std::uint64_t{1} << 32;

Rational draw_rational(CounterRng& rng, std::int64_t range) {
  const long p = static_cast<long>(rng.uniform_int(1, range));
  const long q = static_cast<long>(rng.uniform_int(1, range));
  return frac(p, q);
}

void check_dims(int n_rx, int n_tx, std::size_t slots, std::size_t count) {
  if (n_rx < 1 || n_tx < 1 || slots < 1) throw std::domain_error("channel dimensions must be positive");
  if (count != static_cast<std::size_t>(n_rx) * n_tx * slots)
    throw std::domain_error("coefficient count does not match channel dimensions");
}

}  // namespace

ChannelRealization ChannelRealization::draw(const ChannelConfig& config) {
  if (config.rational_range < 2) throw std::domain_error("rational range must be at least 2");
  const std::size_t count = static_cast<std::size_t>(config.n_rx) * config.n_tx * config.slots;
  check_dims(config.n_rx, config.n_tx, config.slots, count);
  for (int attempt = 0;; ++attempt) {
    if (attempt > 1000) throw RegenerationRequest("channel draw keeps degenerating");
    CounterRng rng(config.seed, static_cast<std::uint64_t>(attempt));
    ChannelRealization ch;
    ch.mode_ = config.mode;
    ch.n_rx_ = config.n_rx;
    ch.n_tx_ = config.n_tx;
    ch.slots_ = config.slots;
    ch.seed_ = config.seed;
    ch.regenerations_ = attempt;
    try {
      if (config.mode == ScalarMode::ExactRational) {
        ch.exact_.reserve(count);
        std::set<Rational> seen;
        for (std::size_t k = 0; k < count; ++k) {
          Rational v = draw_rational(rng, config.rational_range);
          if (!seen.insert(v).second) throw RegenerationRequest("repeated channel coefficient");
          ch.exact_.push_back(std::move(v));
        }
      } else {
        ch.real_.reserve(count);
        for (std::size_t k = 0; k < count; ++k) ch.real_.push_back(rng.uniform_real(0.5, 2.0));
      }
    } catch (const RegenerationRequest&) {
      continue;
    }
    return ch;
  }
}

ChannelRealization ChannelRealization::exact(int n_rx, int n_tx, std::size_t slots, std::vector<Rational> coefficients) {
  check_dims(n_rx, n_tx, slots, coefficients.size());
  for (const auto& c : coefficients)
    if (c == 0) throw RegenerationRequest("zero channel coefficient");
  ChannelRealization ch;
  ch.mode_ = ScalarMode::ExactRational;
  ch.n_rx_ = n_rx;
  ch.n_tx_ = n_tx;
  ch.slots_ = slots;
  ch.exact_ = std::move(coefficients);
  return ch;
}

ChannelRealization ChannelRealization::real(int n_rx, int n_tx, std::size_t slots, std::vector<double> coefficients) {
  check_dims(n_rx, n_tx, slots, coefficients.size());
  for (double c : coefficients)
    if (c == 0.0) throw RegenerationRequest("zero channel coefficient");
  ChannelRealization ch;
  ch.mode_ = ScalarMode::Float64;
  ch.n_rx_ = n_rx;
  ch.n_tx_ = n_tx;
  ch.slots_ = slots;
  ch.real_ = std::move(coefficients);
  return ch;
}

std::size_t ChannelRealization::index(int rx, int tx, std::size_t tau) const {
  if (rx < 1 || rx > n_rx_ || tx < 1 || tx > n_tx_ || tau < 1 || tau > slots_)
    throw std::out_of_range("channel index out of range");
  return ((static_cast<std::size_t>(rx) - 1) * n_tx_ + (tx - 1)) * slots_ + (tau - 1);
}

Scalar ChannelRealization::h(int rx, int tx, std::size_t tau) const {
  return mode_ == ScalarMode::ExactRational ? Scalar::exact(h_exact(rx, tx, tau)) : Scalar::real(h_real(rx, tx, tau));
}

const Rational& ChannelRealization::h_exact(int rx, int tx, std::size_t tau) const {
  if (mode_ != ScalarMode::ExactRational) throw std::logic_error("float channel has no exact coefficients");
  return exact_[index(rx, tx, tau)];
}

const double& ChannelRealization::h_real(int rx, int tx, std::size_t tau) const {
  if (mode_ != ScalarMode::Float64) throw std::logic_error("exact channel read as float");
  return real_[index(rx, tx, tau)];
}

std::uint64_t ChannelRealization::fingerprint() const {
  std::uint64_t h = mix64(mode_ == ScalarMode::ExactRational ? 11 : 13);
  for (std::uint64_t v : {std::uint64_t(n_rx_), std::uint64_t(n_tx_), std::uint64_t(slots_), seed_})
    h = mix64(h ^ v);
  std::hash<std::string> hs;
  for (const auto& c : exact_) h = mix64(h ^ hs(c.get_str()));
  for (double c : real_) h = mix64(h ^ std::hash<double>{}(c));
  return h;
}

std::vector<Rational> ChannelRealization::exact_generators(std::uint64_t stream, std::size_t count,
                                                           std::int64_t range) const {
  CounterRng rng(seed_, kGeneratorStreamBase + stream);
  std::vector<Rational> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) out.push_back(draw_rational(rng, range));
  return out;
}

std::vector<double> ChannelRealization::real_generators(std::uint64_t stream, std::size_t count) const {
  CounterRng rng(seed_, kGeneratorStreamBase + stream);
  std::vector<double> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) out.push_back(rng.uniform_real(0.5, 2.0));
  return out;
}

}  // namespace cachedof::phy
