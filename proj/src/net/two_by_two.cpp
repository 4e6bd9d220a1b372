#include "cachedof/net/two_by_two.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <stdexcept>

namespace cachedof::net {
namespace {

struct PartNames {
  int p;
  Combo a(int k) const { return Combo{1} << (k - 1); }
  Combo b(int k) const { return Combo{1} << (p + k - 1); }
};

Combo helper(char kind, int k) {
  const PartNames n{5};
  if (kind == 'S') {
    switch (k) {
      case 1: return n.b(2) ^ n.a(4);
      case 2: return n.a(1) ^ n.b(3);
      case 3: return n.b(1) ^ n.b(3);
      case 4: return n.b(2) ^ n.b(4);
    }
  } else {
    switch (k) {
      case 1: return n.a(1) ^ n.a(3);
      case 2: return n.a(2) ^ n.a(4);
      case 3: return n.b(1) ^ n.a(3);
      case 4: return n.a(2) ^ n.b(4);
    }
  }
  throw std::invalid_argument("helper index must be 1..4");
}

Scheme2x2 make(Corner2x2 corner, int parts, Rational m_rx) {
  Scheme2x2 s;
  s.corner = corner;
  s.parts = parts;
  s.m_tx = 1;
  s.m_rx = std::move(m_rx);
  for (std::size_t d = 0; d < 4; ++d) s.rows[d].demand = kDemandPairs[d];
  return s;
}

/// rows[d].v[i][j] from four per-message rows in table order V11, V21, V12, V22.
void fill(Scheme2x2& s, const std::array<std::array<Combo, 4>, 4>& by_message) {
  for (std::size_t d = 0; d < 4; ++d) {
    s.rows[d].v[0][0] = by_message[0][d];
    s.rows[d].v[1][0] = by_message[1][d];
    s.rows[d].v[0][1] = by_message[2][d];
    s.rows[d].v[1][1] = by_message[3][d];
  }
}

void set_loads(Scheme2x2& s) {
  int pipes = 0;
  for (const auto& vi : s.rows[0].v)
    for (Combo c : vi) pipes += c != 0;
  s.link_load = pipes == 0 ? Rational(0) : frac(1, s.parts);
  s.sum_load = Rational(pipes) * s.link_load;
}

}  // namespace

Corner2x2 parse_corner(std::string_view name) {
  if (name == "M0") return Corner2x2::M0;
  if (name == "M13") return Corner2x2::M13;
  if (name == "M45") return Corner2x2::M45;
  if (name == "M2") return Corner2x2::M2;
  throw std::domain_error("unknown corner '" + std::string(name) + "'; expected M0, M13, M45 or M2");
}

std::string corner_name(Corner2x2 corner) {
  switch (corner) {
    case Corner2x2::M0: return "M0";
    case Corner2x2::M13: return "M13";
    case Corner2x2::M45: return "M45";
    case Corner2x2::M2: return "M2";
  }
  throw std::domain_error("unknown corner");
}

std::string combo_name(Combo combo, int parts) {
  if (combo == 0) return "0";
  std::string out;
  for (int k = 0; k < 2 * parts; ++k) {
    if (!((combo >> k) & 1u)) continue;
    if (!out.empty()) out += '^';
    out += k < parts ? 'A' : 'B';
    out += std::to_string(k % parts + 1);
  }
  return out;
}

Combo parse_combo(std::string_view text, int parts) {
  const PartNames n{parts};
  Combo out = 0;
  std::size_t pos = 0;
  if (text == "0") return 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('^', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view term = text.substr(pos, end - pos);
    if (term.size() < 2) throw std::invalid_argument("malformed combination '" + std::string(text) + "'");
    const int k = std::stoi(std::string(term.substr(1)));
    const char kind = term[0];
    if (kind == 'A' || kind == 'B') {
      if (k < 1 || k > parts) throw std::invalid_argument("part index out of range in '" + std::string(text) + "'");
      out ^= kind == 'A' ? n.a(k) : n.b(k);
    } else if ((kind == 'S' || kind == 'T') && parts == 5) {
      out ^= helper(kind, k);
    } else {
      throw std::invalid_argument("unknown term '" + std::string(term) + "'");
    }
    pos = end + 1;
  }
  return out;
}

std::string demand_label(const std::array<int, 2>& demand) {
  std::string out;
  for (int u : demand) out += u == 1 ? 'A' : 'B';
  return out;
}

Combo DeliveryRow2x2::aligned(int receiver) const {
  if (receiver != 1 && receiver != 2) throw std::out_of_range("receiver must be 1 or 2");
  const auto& other = v[2 - receiver];
  return other[0] ^ other[1];
}

Scheme2x2 scheme_2x2(Corner2x2 corner) {
  switch (corner) {
    case Corner2x2::M0: {
      Scheme2x2 s = make(corner, 2, 0);
      const PartNames n{2};
      s.tx_cache = {std::vector<Combo>{n.a(1), n.b(1)}, std::vector<Combo>{n.a(2), n.b(2)}};
      for (auto& row : s.rows)
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j) row.v[i][j] = row.demand[i] == 1 ? n.a(j + 1) : n.b(j + 1);
      set_loads(s);
      return s;
    }
    case Corner2x2::M13: {
      Scheme2x2 s = make(corner, 3, frac(1, 3));
      const PartNames n{3};
      s.tx_cache = {std::vector<Combo>{n.a(3), n.b(1) ^ n.b(3), n.b(2) ^ n.b(3)},
                    std::vector<Combo>{n.b(3), n.a(1) ^ n.a(3), n.a(2) ^ n.a(3)}};
      s.rx_cache = {std::vector<Combo>{n.a(1) ^ n.b(1)}, std::vector<Combo>{n.a(2) ^ n.b(2)}};
      fill(s, {{{n.a(3), n.a(3), n.b(2) ^ n.b(3), n.b(1) ^ n.b(3)},
                {n.a(3), n.b(1) ^ n.b(3), n.a(3), n.b(2) ^ n.b(3)},
                {n.a(1) ^ n.a(3), n.a(2) ^ n.a(3), n.b(3), n.b(3)},
                {n.a(2) ^ n.a(3), n.b(3), n.a(1) ^ n.a(3), n.b(3)}}});
      set_loads(s);
      return s;
    }
    case Corner2x2::M45: {
      Scheme2x2 s = make(corner, 5, frac(4, 5));
      const PartNames n{5};
      auto S = [](int k) { return helper('S', k); };
      auto T = [](int k) { return helper('T', k); };
      const Combo a5 = n.a(5), b5 = n.b(5);
      s.tx_cache = {std::vector<Combo>{a5, b5 ^ S(1), b5 ^ S(2), b5 ^ S(3), b5 ^ S(4)},
                    std::vector<Combo>{b5, a5 ^ T(1), a5 ^ T(2), a5 ^ T(3), a5 ^ T(4)}};
      s.rx_cache = {std::vector<Combo>{n.a(1), n.a(2), n.b(1), n.b(2)},
                    std::vector<Combo>{n.a(3), n.a(4), n.b(3), n.b(4)}};
      fill(s, {{{a5, a5, b5 ^ S(2), b5 ^ S(3)},
                {a5, b5 ^ S(1), a5, b5 ^ S(4)},
                {a5 ^ T(1), a5 ^ T(3), b5, b5},
                {a5 ^ T(2), b5, a5 ^ T(4), b5}}});
      set_loads(s);
      return s;
    }
    case Corner2x2::M2: {
      Scheme2x2 s = make(corner, 1, 2);
      const PartNames n{1};
      s.tx_cache = {std::vector<Combo>{n.a(1)}, std::vector<Combo>{n.b(1)}};
      s.rx_cache = {std::vector<Combo>{n.a(1), n.b(1)}, std::vector<Combo>{n.a(1), n.b(1)}};
      set_loads(s);
      return s;
    }
  }
  throw std::domain_error("unknown corner");
}

DeliveryRow2x2 deliver_2x2(const Scheme2x2& scheme, const std::array<int, 2>& demand) {
  for (const auto& row : scheme.rows)
    if (row.demand == demand) return row;
  throw std::domain_error("demand pair entries must be 1 (A) or 2 (B)");
}

bool in_span(const std::vector<Combo>& basis, Combo target) {
  std::array<Combo, 32> pivots{};
  for (Combo c : basis) {
    for (int b = 31; b >= 0 && c; --b) {
      if (!((c >> b) & 1u)) continue;
      if (!pivots[b]) {
        pivots[b] = c;
        c = 0;
      } else {
        c ^= pivots[b];
      }
    }
  }
  for (int b = 31; b >= 0 && target; --b)
    if (((target >> b) & 1u) && pivots[b]) target ^= pivots[b];
  return target == 0;
}

std::vector<Combo> observations_2x2(const Scheme2x2& scheme, const DeliveryRow2x2& row, int receiver) {
  if (receiver != 1 && receiver != 2) throw std::out_of_range("receiver must be 1 or 2");
  std::vector<Combo> obs = scheme.rx_cache[receiver - 1];
  obs.push_back(row.v[receiver - 1][0]);
  obs.push_back(row.v[receiver - 1][1]);
  obs.push_back(row.aligned(receiver));
  return obs;
}

bool decodable_2x2(const Scheme2x2& scheme, const DeliveryRow2x2& row, int receiver) {
  const auto obs = observations_2x2(scheme, row, receiver);
  const int shift = row.demand[receiver - 1] == 1 ? 0 : scheme.parts;
  for (int k = 0; k < scheme.parts; ++k)
    if (!in_span(obs, Combo{1} << (shift + k))) return false;
  return true;
}

Bits evaluate_combo(Combo combo, int parts, const Library& library) {
  if (library.n_files() != 2) throw std::domain_error("the 2x2 schemes use a two-file library");
  if (library.file_bits() % parts != 0) throw std::domain_error("file size must be a multiple of the part count");
  const std::size_t len = library.file_bits() / parts;
  Bits out(len);
  for (int k = 0; k < 2 * parts; ++k)
    if ((combo >> k) & 1u) out ^= slice(library.file(k < parts ? 1 : 2), (k % parts) * len, len);
  return out;
}

Bits decode_2x2(const Scheme2x2& scheme, const DeliveryRow2x2& row, int receiver, const std::vector<Bits>& observed) {
  const auto obs = observations_2x2(scheme, row, receiver);
  if (observed.size() != obs.size()) throw std::domain_error("one observed value per observation is required");
  const std::size_t len = observed.front().size();
  for (const auto& b : observed)
    if (b.size() != len) throw std::domain_error("observed values differ in length");

  std::map<int, std::pair<Combo, Bits>, std::greater<>> pivots;
  for (std::size_t k = 0; k < obs.size(); ++k) {
    Combo c = obs[k];
    Bits bits = observed[k];
    while (c) {
      const int top = 31 - std::countl_zero(c);
      auto it = pivots.find(top);
      if (it == pivots.end()) {
        pivots.emplace(top, std::make_pair(c, bits));
        break;
      }
      c ^= it->second.first;
      bits ^= it->second.second;
    }
  }

  const int shift = row.demand[receiver - 1] == 1 ? 0 : scheme.parts;
  Bits file(len * scheme.parts);
  for (int k = 0; k < scheme.parts; ++k) {
    Combo target = Combo{1} << (shift + k);
    Bits value(len);
    while (target) {
      const int top = 31 - std::countl_zero(target);
      auto it = pivots.find(top);
      if (it == pivots.end()) throw std::runtime_error("part not decodable from the receiver's observations");
      target ^= it->second.first;
      value ^= it->second.second;
    }
    splice(file, k * len, value);
  }
  return file;
}

Bits decode_2x2(const Scheme2x2& scheme, const DeliveryRow2x2& row, int receiver, const Library& library) {
  std::vector<Bits> observed;
  for (Combo c : observations_2x2(scheme, row, receiver)) observed.push_back(evaluate_combo(c, scheme.parts, library));
  return decode_2x2(scheme, row, receiver, observed);
}

std::vector<std::string> audit_2x2(const Scheme2x2& scheme) {
  std::vector<std::string> issues;
  const std::string name = corner_name(scheme.corner);
  for (int j = 0; j < 2; ++j)
    if (Rational(static_cast<long>(scheme.tx_cache[j].size())) / scheme.parts != scheme.m_tx)
      issues.push_back(name + ": Tx" + std::to_string(j + 1) + " cache size differs from M_t");
  for (int i = 0; i < 2; ++i)
    if (Rational(static_cast<long>(scheme.rx_cache[i].size())) / scheme.parts != scheme.m_rx)
      issues.push_back(name + ": Rx" + std::to_string(i + 1) + " cache size differs from M_r");
  for (const auto& row : scheme.rows) {
    const std::string label = name + " " + demand_label(row.demand);
    int pipes = 0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        pipes += row.v[i][j] != 0;
        if (!in_span(scheme.tx_cache[j], row.v[i][j]))
          issues.push_back(label + ": V" + std::to_string(i + 1) + std::to_string(j + 1) + " not computable at Tx" +
                           std::to_string(j + 1));
      }
    const Rational load = pipes == 0 ? Rational(0) : Rational(pipes) / scheme.parts;
    if (load != scheme.sum_load) issues.push_back(label + ": sum load differs from the scheme's");
    for (int i = 1; i <= 2; ++i)
      if (!decodable_2x2(scheme, row, i)) issues.push_back(label + ": Rx" + std::to_string(i) + " cannot decode");
  }
  return issues;
}

nlohmann::json to_json(const Scheme2x2& scheme) {
  auto names = [&](const std::vector<Combo>& cs) {
    nlohmann::json out = nlohmann::json::array();
    for (Combo c : cs) out.push_back(combo_name(c, scheme.parts));
    return out;
  };
  nlohmann::json rows = nlohmann::json::object();
  for (const auto& row : scheme.rows) {
    nlohmann::json payloads = nlohmann::json::object();
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        payloads[std::to_string(i + 1) + "|" + std::to_string(j + 1)] = combo_name(row.v[i][j], scheme.parts);
    rows[demand_label(row.demand)] = {{"payloads", std::move(payloads)},
                                      {"aligned", {combo_name(row.aligned(1), scheme.parts),
                                                   combo_name(row.aligned(2), scheme.parts)}}};
  }
  return {{"params", {{"n_files", 2}, {"n_tx", 2}, {"n_rx", 2},
                      {"m_tx", to_exact_string(scheme.m_tx)}, {"m_rx", to_exact_string(scheme.m_rx)}}},
          {"corner", corner_name(scheme.corner)},
          {"parts", scheme.parts},
          {"link_load", to_exact_string(scheme.link_load)},
          {"sum_load", to_exact_string(scheme.sum_load)},
          {"tx_caches", {names(scheme.tx_cache[0]), names(scheme.tx_cache[1])}},
          {"rx_caches", {names(scheme.rx_cache[0]), names(scheme.rx_cache[1])}},
          {"deliveries", std::move(rows)}};
}

}  // namespace cachedof::net
