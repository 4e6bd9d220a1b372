#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cachedof/core/params.hpp"
#include "cachedof/core/rational.hpp"
#include "cachedof/core/scalar.hpp"
#include "cachedof/dof/bounds.hpp"
#include "cachedof/dof/curve.hpp"
#include "cachedof/dof/gains.hpp"
#include "cachedof/dof/gap_scan.hpp"
#include "cachedof/dof/two_by_two.hpp"
#include "cachedof/e2e/end_to_end.hpp"
#include "cachedof/net/scheme.hpp"
#include "cachedof/net/two_by_two.hpp"
#include "cachedof/phy/certify.hpp"
#include "svg.hpp"
#include "verify.hpp"

using namespace cachedof;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "csv";
  std::string mode = "exact";
  unsigned threads = 0;
};

void add_common(CLI::App* app, Common& c, bool with_format = true) {
  app->add_option("--seed", c.seed, "64-bit seed; CACHEDOF_SEED overrides it");
  app->add_option("--out", c.out, "Output path (default: stdout)");
  if (with_format)
    app->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json", "svg"}));
  app->add_option("--threads", c.threads, "Worker threads (0: hardware concurrency)");
}

void apply_seed_env(Common& c) {
  const char* env = std::getenv("CACHEDOF_SEED");
  if (!env) return;
  const std::string text(env);
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
    throw UsageError("CACHEDOF_SEED is not a 64-bit unsigned integer: " + text);
  c.seed = value;
}

void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw UsageError("cannot open " + c.out + " for writing");
  f << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void require_format(const Common& c, std::initializer_list<const char*> allowed, const char* command) {
  for (const char* f : allowed)
    if (c.format == f) return;
  throw UsageError(std::string("--format ") + c.format + " is not available for " + command);
}

Rational rational_option(const std::string& text, const char* name) {
  try {
    return parse_rational(text);
  } catch (const std::exception&) {
    throw UsageError(std::string(name) + " is not a rational number: " + text);
  }
}

/// "p/q,decimal" for CSV.
std::string cell(const Rational& x) { return to_exact_string(x) + "," + to_decimal_string(x); }
std::string cell(const std::optional<Rational>& x) { return x ? cell(*x) : std::string("inf,inf"); }
json exact(const Rational& x) { return {{"exact", to_exact_string(x)}, {"decimal", to_double(x)}}; }
json exact(const std::optional<Rational>& x) { return x ? exact(*x) : json(nullptr); }

SystemParams make_params(int n, int kt, int kr, const std::string& mt, const Rational& m_rx) {
  if (mt.empty()) return SystemParams(n, kt, kr, m_rx);
  return SystemParams(n, kt, kr, rational_option(mt, "--mt"), m_rx);
}

std::vector<int> parse_demand(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (ec != std::errc() || ptr != item.data() + item.size()) throw UsageError("bad demand entry: " + item);
    out.push_back(v);
  }
  return out;
}

// ---------------------------------------------------------------- dof

struct DofArgs {
  int n = 0, kt = 0, kr = 0;
  std::string mt, at;
  int samples = 3;
};

int cmd_dof(const DofArgs& a, const Common& c) {
  require_format(c, {"csv", "json", "svg"}, "dof");
  const auto params = make_params(a.n, a.kt, a.kr, a.mt, Rational(0));
  const auto curve = dof::dof_curve(params);

  struct Row {
    std::string kind;
    Rational m_rx;
    Rational reciprocal;
    std::optional<Rational> d;
  };
  auto row = [&](std::string kind, const Rational& m) {
    if (m < 0 || m > a.n) throw UsageError("--at must lie in [0, N]");
    Row r{std::move(kind), m, curve.reciprocal(m), std::nullopt};
    if (sgn(r.reciprocal) != 0) r.d = 1 / r.reciprocal;
    return r;
  };
  std::vector<Row> rows;
  if (!a.at.empty()) {
    rows.push_back(row("point", rational_option(a.at, "--at")));
  } else {
    const auto& corners = curve.corners();
    for (std::size_t k = 0; k < corners.size(); ++k) {
      rows.push_back(row("corner", corners[k].x));
      if (k + 1 == corners.size()) break;
      for (int s = 1; s <= a.samples; ++s) {
        const Rational t = frac(s, a.samples + 1);
        rows.push_back(row("sample", corners[k].x + t * (corners[k + 1].x - corners[k].x)));
      }
    }
  }

  if (c.format == "svg") {
    cli::Series s{"1/d", {}};
    for (const auto& r : rows) s.points.emplace_back(to_double(r.m_rx), to_double(r.reciprocal));
    emit(c, cli::line_plot_svg("Reciprocal DoF, " + params.to_string(), "M_r", "1/d", {s}));
  } else if (c.format == "json") {
    json corners = json::array(), out = json::array();
    for (std::size_t k = 0; k < curve.corners().size(); ++k)
      corners.push_back({{"kappa", k},
                         {"m_r", exact(curve.corners()[k].x)},
                         {"reciprocal_d", exact(curve.corners()[k].y)}});
    for (const auto& r : rows)
      out.push_back({{"kind", r.kind}, {"m_r", exact(r.m_rx)}, {"reciprocal_d", exact(r.reciprocal)}, {"d", exact(r.d)}});
    emit(c, dump({{"params", params.to_string()}, {"corners", corners}, {"rows", out}}));
  } else {
    std::ostringstream o;
    o << "kind,m_r,m_r_decimal,reciprocal_d,reciprocal_d_decimal,d,d_decimal\n";
    for (const auto& r : rows) o << r.kind << ',' << cell(r.m_rx) << ',' << cell(r.reciprocal) << ',' << cell(r.d) << '\n';
    emit(c, o.str());
  }
  return kExitOk;
}

// ---------------------------------------------------------------- gains

struct GainsArgs {
  std::string axis;
  int n = 0, kt = 0, kr = 0;
  std::string mr = "0";
  std::string mt;
  int from = 1, to = 0;
};

int cmd_gains(const GainsArgs& a, const Common& c) {
  require_format(c, {"csv", "json", "svg"}, "gains");
  struct Row {
    int axis_value;
    SystemParams params;
    int kappa;
    dof::GainBreakdown g;
  };
  std::vector<Row> rows;
  auto add = [&](int axis_value, const SystemParams& p) {
    const int kappa = p.integer_kappa();
    const auto g = dof::multicast_regime(p, kappa) ? dof::gain_decomposition(p, kappa) : dof::file_partition_gains(p);
    rows.push_back(Row{axis_value, p, kappa, g});
  };
  const Rational mr = rational_option(a.mr, "--mr");
  auto need = [&](int v, const char* name) {
    if (v < 1) throw UsageError(std::string("gains --axis ") + a.axis + " needs " + name);
  };

  if (a.axis == "mr") {
    need(a.n, "--n"), need(a.kt, "--kt"), need(a.kr, "--kr");
    const auto base = make_params(a.n, a.kt, a.kr, a.mt, Rational(0));
    for (int kappa = 0; kappa <= a.kr; ++kappa) add(kappa, base.with_kappa(kappa));
  } else {
    const int to = a.to > 0 ? a.to : 20;
    if (a.from < 1 || to < a.from) throw UsageError("--from/--to must satisfy 1 <= from <= to");
    for (int v = a.from; v <= to; ++v) {
      const int kt = a.axis == "kt" ? v : a.kt;
      const int kr = a.axis == "kr" ? v : a.kr;
      need(a.n, "--n"), need(kt, "--kt"), need(kr, "--kr");
      const auto p = make_params(a.n, kt, kr, a.mt, mr);
      if (!p.has_integer_kappa()) continue;  // gains are defined at corner points only
      add(v, p);
    }
  }

  auto regime = [](const dof::GainBreakdown& g) {
    return g.regime == dof::GainRegime::Multicast ? "multicast" : "file-partition";
  };
  if (c.format == "svg") {
    cli::Series ia{"g_ia", {}}, lc{"g_lc", {}}, gc{"g_gc", {}};
    for (const auto& r : rows) {
      const double x = a.axis == "mr" ? to_double(r.params.m_rx()) : r.axis_value;
      ia.points.emplace_back(x, to_double(r.g.g_ia));
      if (r.g.g_lc) lc.points.emplace_back(x, to_double(*r.g.g_lc));
      gc.points.emplace_back(x, to_double(r.g.g_gc));
    }
    const std::string axis = a.axis == "mr" ? "M_r" : a.axis == "kr" ? "K_r" : "K_t";
    emit(c, cli::line_plot_svg("DoF gains vs " + axis, axis, "gain", {ia, lc, gc}));
  } else if (c.format == "json") {
    json out = json::array();
    for (const auto& r : rows)
      out.push_back({{a.axis, r.axis_value},
                     {"params", r.params.to_string()},
                     {"m_r", exact(r.params.m_rx())},
                     {"kappa", r.kappa},
                     {"regime", regime(r.g)},
                     {"g_ia", exact(r.g.g_ia)},
                     {"g_lc", exact(r.g.g_lc)},
                     {"g_gc", exact(r.g.g_gc)},
                     {"sum_dof", exact(r.g.sum_dof)},
                     {"reciprocal_d", exact(r.g.reciprocal)}});
    emit(c, dump({{"axis", a.axis}, {"rows", out}}));
  } else {
    std::ostringstream o;
    o << a.axis
      << ",n,kt,kr,m_r,m_r_decimal,kappa,regime,g_ia,g_ia_decimal,g_lc,g_lc_decimal,g_gc,g_gc_decimal,sum_dof,"
         "sum_dof_decimal,reciprocal_d,reciprocal_d_decimal\n";
    for (const auto& r : rows)
      o << (a.axis == "mr" ? to_exact_string(r.params.m_rx()) : std::to_string(r.axis_value)) << ','
        << r.params.n_files() << ',' << r.params.n_tx() << ',' << r.params.n_rx() << ',' << cell(r.params.m_rx())
        << ',' << r.kappa << ',' << regime(r.g) << ',' << cell(r.g.g_ia) << ',' << cell(r.g.g_lc) << ','
        << cell(r.g.g_gc) << ',' << cell(r.g.sum_dof) << ',' << cell(r.g.reciprocal) << '\n';
    emit(c, o.str());
  }
  return kExitOk;
}

// ---------------------------------------------------------------- phy-dof

struct PhyDofArgs {
  int kt = 0, kr = 0, sigma = 0, depth = 0;
};

int cmd_phy_dof(const PhyDofArgs& a, const Common& c) {
  require_format(c, {"csv", "json"}, "phy-dof");
  if (a.sigma < 0 || a.sigma > a.kr) throw UsageError("--sigma must lie in 1..K_r");
  if (a.depth > 0) {
    if (a.sigma == 0) throw UsageError("--depth needs --sigma");
    const auto rows = phy::convergence_table(a.kt, a.kr, a.sigma, phy::doubling_depths(a.depth));
    if (c.format == "csv") {
      emit(c, phy::convergence_csv(rows));
    } else {
      json out = json::array();
      for (const auto& r : rows)
        out.push_back({{"n", r.depth},
                       {"delta_1", exact(r.delta_first)},
                       {"delta_2", exact(r.delta_rest)},
                       {"target", exact(r.target)},
                       {"rel_error_1", exact(r.error_first)},
                       {"rel_error_2", exact(r.error_rest)}});
      emit(c, dump({{"kt", a.kt}, {"kr", a.kr}, {"sigma", a.sigma}, {"rows", out}}));
    }
    return kExitOk;
  }
  std::ostringstream o;
  json out = json::array();
  o << "sigma,per_message,per_message_decimal,sum_dof,sum_dof_decimal\n";
  for (int s = a.sigma ? a.sigma : 1; s <= (a.sigma ? a.sigma : a.kr); ++s) {
    const auto d = dof::phy_dof_optimal(a.kt, a.kr, s);
    const auto sum = dof::phy_sum_dof(a.kt, a.kr, s);
    o << s << ',' << cell(d) << ',' << cell(sum) << '\n';
    out.push_back({{"sigma", s}, {"per_message", exact(d)}, {"sum_dof", exact(sum)}});
  }
  emit(c, c.format == "csv" ? o.str() : dump({{"kt", a.kt}, {"kr", a.kr}, {"rows", out}}));
  return kExitOk;
}

// ---------------------------------------------------------------- bounds

struct BoundsArgs {
  int n = 0, kt = 0, kr = 0;
  std::string mt, at;
};

int cmd_bounds(const BoundsArgs& a, const Common& c) {
  require_format(c, {"csv", "json"}, "bounds");
  const auto params = make_params(a.n, a.kt, a.kr, a.mt, Rational(0));
  const auto curve = dof::dof_curve(params);
  const auto cut = dof::cutset_curve(a.n, a.kt, a.kr);
  std::set<Rational> grid;
  if (!a.at.empty()) {
    const Rational m = rational_option(a.at, "--at");
    if (m < 0 || m > a.n) throw UsageError("--at must lie in [0, N]");
    grid.insert(m);
  } else {
    for (const auto& p : curve.envelope().breakpoints()) grid.insert(p.x);
    for (const auto& p : cut.breakpoints()) grid.insert(p.x);
  }
  std::ostringstream o;
  json out = json::array();
  o << "m_r,m_r_decimal,achievable,achievable_decimal,cutset,cutset_decimal,ratio,ratio_decimal\n";
  for (const auto& m : grid) {
    const auto ach = curve.reciprocal(m);
    const auto lo = cut(m);
    std::optional<Rational> ratio;
    if (sgn(lo) != 0) ratio = ach / lo;
    o << cell(m) << ',' << cell(ach) << ',' << cell(lo) << ',' << (ratio ? cell(*ratio) : std::string(",")) << '\n';
    out.push_back({{"m_r", exact(m)}, {"achievable", exact(ach)}, {"cutset", exact(lo)}, {"ratio", exact(ratio)}});
  }
  emit(c, c.format == "csv" ? o.str() : dump({{"params", params.to_string()}, {"rows", out}}));
  return kExitOk;
}

// ---------------------------------------------------------------- gap-scan

struct GapArgs {
  int max = 30, kt_max = 0, kr_max = 0;
  std::size_t sample = 0;
  bool full = false;
  int interior = 8;
};

int cmd_gap_scan(const GapArgs& a, const Common& c) {
  require_format(c, {"csv", "json"}, "gap-scan");
  const int n_max = a.full ? 100 : a.max;
  const int kt_max = a.kt_max ? a.kt_max : n_max;
  const int kr_max = a.kr_max ? a.kr_max : n_max;
  if (n_max < 1 || kt_max < 1 || kr_max < 1) throw UsageError("scan limits must be positive");
  const auto tuples = a.sample ? dof::sample_tuples(n_max, kt_max, kr_max, a.sample, c.seed)
                               : dof::grid_tuples(n_max, kt_max, kr_max);
  dof::ScanOptions opt;
  opt.grid.interior_points = a.interior;
  opt.threads = c.threads;
  const auto r = dof::gap_scan(tuples, opt);
  const bool ok = r.violations == 0 && r.max_ratio <= dof::kGapBound;
  if (c.format == "json") {
    emit(c, dump({{"limits", {{"n", n_max}, {"kt", kt_max}, {"kr", kr_max}}},
                  {"sample", a.sample},
                  {"seed", c.seed},
                  {"interior_points", a.interior},
                  {"tuples", r.tuples},
                  {"points", r.points},
                  {"violations", r.violations},
                  {"bound", exact(dof::kGapBound)},
                  {"max_ratio", exact(r.max_ratio)},
                  {"min_ratio", exact(r.min_ratio)},
                  {"argmax",
                   {{"n", r.argmax_tuple.n_files},
                    {"kt", r.argmax_tuple.n_tx},
                    {"kr", r.argmax_tuple.n_rx},
                    {"m_r", exact(r.argmax_m_rx)}}},
                  {"passed", ok}}));
  } else {
    std::ostringstream o;
    o << "tuples,points,violations,max_ratio,max_ratio_decimal,argmax_n,argmax_kt,argmax_kr,argmax_m_r,"
         "argmax_m_r_decimal,min_ratio,min_ratio_decimal,passed\n";
    o << r.tuples << ',' << r.points << ',' << r.violations << ',' << cell(r.max_ratio) << ','
      << r.argmax_tuple.n_files << ',' << r.argmax_tuple.n_tx << ',' << r.argmax_tuple.n_rx << ','
      << cell(r.argmax_m_rx) << ',' << cell(r.min_ratio) << ',' << (ok ? "true" : "false") << '\n';
    emit(c, o.str());
  }
  std::cerr << "gap-scan: max ratio " << to_decimal_string(r.max_ratio, 6) << " at N=" << r.argmax_tuple.n_files
            << " K_t=" << r.argmax_tuple.n_tx << " K_r=" << r.argmax_tuple.n_rx
            << " M_r=" << to_exact_string(r.argmax_m_rx) << ", violations " << r.violations << '\n';
  return ok ? kExitOk : kExitFailed;
}

// ---------------------------------------------------------------- verify

int cmd_verify(const cli::VerifyArgs& a, const Common& c) {
  const auto result = cli::run_verify(a, c.seed, c.threads, parse_mode(c.mode));
  emit(c, dump(result.report));
  if (result.passed) {
    std::cerr << "verify " << a.suite << ": PASS (" << result.summary << ")\n";
    return kExitOk;
  }
  std::cerr << "verify " << a.suite << ": FAIL (" << result.summary << "); witnesses in "
            << (c.out.empty() ? std::string("the report on stdout") : c.out) << '\n';
  return kExitFailed;
}

// ---------------------------------------------------------------- e2e

struct E2eArgs {
  int n = 0, kt = 0, kr = 0, depth = 1;
  std::string mr = "0", mt, demand, corner;
  std::size_t file_bits = 0, chunk_bits = e2e::kDefaultChunkBits;
};

int cmd_e2e(const E2eArgs& a, const Common& c) {
  require_format(c, {"csv", "json"}, "e2e");
  const ScalarMode mode = parse_mode(c.mode);
  if (!a.corner.empty()) {
    const auto corner = net::parse_corner(a.corner);
    const auto d = a.demand.empty() ? std::vector<int>{1, 2} : parse_demand(a.demand);
    if (d.size() != 2) throw UsageError("the 2x2 run needs a demand pair");
    const auto r = e2e::run_end_to_end_2x2(corner, {d[0], d[1]}, c.seed, mode, a.chunk_bits);
    if (c.format == "json") {
      emit(c, dump(e2e::to_json(r)));
    } else {
      std::ostringstream o;
      o << "corner,link_load,link_load_decimal,sum_load,sum_load_decimal,reciprocal,reciprocal_decimal,target,"
           "target_decimal,passed\n";
      o << a.corner << ',' << cell(r.link_load) << ',' << cell(r.sum_load) << ',' << cell(r.reciprocal_worst) << ','
        << cell(r.target) << ',' << (r.passed() ? "true" : "false") << '\n';
      emit(c, o.str());
    }
    return r.passed() ? kExitOk : kExitFailed;
  }

  const auto params = make_params(a.n, a.kt, a.kr, a.mt, rational_option(a.mr, "--mr"));
  if (!params.has_integer_kappa()) throw UsageError("e2e needs M_r at an integer kappa = K_r M_r / N");
  std::vector<int> demand;
  if (a.demand.empty())
    for (int i = 0; i < a.kr; ++i) demand.push_back(i % a.n + 1);
  else
    demand = parse_demand(a.demand);
  const std::size_t unit = net::min_file_bits(params) * a.chunk_bits;
  const std::size_t file_bits = a.file_bits ? a.file_bits : unit;
  const auto library = net::Library::random(a.n, file_bits, c.seed);
  const auto r = e2e::run_end_to_end(params, library, demand, a.depth, c.seed, mode, a.chunk_bits);
  if (c.format == "json") {
    emit(c, dump(e2e::to_json(r)));
  } else {
    if (r.kappa == a.kr) throw UsageError("no accounting table at kappa = K_r: the physical layer is idle");
    emit(c, e2e::accounting_csv(e2e::accounting_table(a.kt, a.kr, r.kappa, phy::doubling_depths(a.depth))));
  }
  std::cerr << "e2e: " << (r.passed() ? "all receivers recovered" : "decode failure") << ", accounting "
            << to_exact_string(r.reciprocal_dof) << " vs target " << to_exact_string(r.target) << '\n';
  return r.passed() ? kExitOk : kExitFailed;
}

// ---------------------------------------------------------------- dof2x2

struct Dof2x2Args {
  std::string step = "1/100", at;
};

int cmd_dof2x2(const Dof2x2Args& a, const Common& c) {
  require_format(c, {"csv", "json"}, "dof2x2");
  std::vector<Point> corners;
  for (auto corner : {net::Corner2x2::M0, net::Corner2x2::M13, net::Corner2x2::M45, net::Corner2x2::M2}) {
    const auto s = net::scheme_2x2(corner);
    corners.push_back({s.m_rx, s.sum_load});
  }
  const PiecewiseLinear load(corners);
  std::vector<Rational> grid;
  if (!a.at.empty()) {
    grid.push_back(rational_option(a.at, "--at"));
    if (grid[0] < 0 || grid[0] > 2) throw UsageError("--at must lie in [0, 2]");
  } else {
    const Rational step = rational_option(a.step, "--step");
    if (sgn(step) <= 0) throw UsageError("--step must be positive");
    for (Rational m = 0; m <= 2; m += step) grid.push_back(m);
  }
  std::ostringstream o;
  json rows = json::array();
  o << "m_r,m_r_decimal,extraction,extraction_decimal,baseline,baseline_decimal,cutset,cutset_decimal,"
       "load,load_decimal,load_lower_bound,load_lower_bound_decimal\n";
  for (const auto& m : grid) {
    const auto ext = dof::dof_2x2_curve(m), base = dof::dof_2x2_baseline(m), cut = dof::dof_2x2_cutset(m);
    const auto l = load(m), lb = dof::net2x2_lower_bound(m);
    o << cell(m) << ',' << cell(ext) << ',' << cell(base) << ',' << cell(cut) << ',' << cell(l) << ',' << cell(lb)
      << '\n';
    rows.push_back({{"m_r", exact(m)},
                    {"extraction", exact(ext)},
                    {"baseline", exact(base)},
                    {"cutset", exact(cut)},
                    {"load", exact(l)},
                    {"load_lower_bound", exact(lb)}});
  }
  if (c.format == "csv") {
    emit(c, o.str());
  } else {
    const auto peak = dof::improvement_2x2();
    emit(c, dump({{"rows", rows}, {"improvement", {{"ratio", exact(peak.ratio)}, {"m_r", exact(peak.argmax_m_rx)}}}}));
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Degrees-of-freedom calculator and verifier for cache-aided interference networks"};
  app.require_subcommand(1);
  Common common;

  DofArgs dof_args;
  auto* dof = app.add_subcommand("dof", "Reciprocal DoF curve: corners and envelope samples");
  dof->add_option("--n", dof_args.n, "Library size N")->required();
  dof->add_option("--kt", dof_args.kt, "Transmitters K_t")->required();
  dof->add_option("--kr", dof_args.kr, "Receivers K_r")->required();
  dof->add_option("--mt", dof_args.mt, "Transmitter memory M_t");
  dof->add_option("--at,--mr", dof_args.at, "Single receiver memory M_r");
  dof->add_option("--samples", dof_args.samples, "Envelope samples between corners")->check(CLI::NonNegativeNumber);
  add_common(dof, common);

  GainsArgs gains_args;
  auto* gains = app.add_subcommand("gains", "Alignment, local and global caching gains");
  gains->add_option("--axis", gains_args.axis, "Swept variable")->required()->check(CLI::IsMember({"mr", "kr", "kt"}));
  gains->add_option("--n", gains_args.n, "Library size N");
  gains->add_option("--kt", gains_args.kt, "Transmitters K_t");
  gains->add_option("--kr", gains_args.kr, "Receivers K_r");
  gains->add_option("--mr", gains_args.mr, "Receiver memory M_r (kr and kt axes)");
  gains->add_option("--mt", gains_args.mt, "Transmitter memory M_t");
  gains->add_option("--from", gains_args.from, "Sweep start (kr and kt axes)");
  gains->add_option("--to", gains_args.to, "Sweep end (kr and kt axes, default 20)");
  add_common(gains, common);

  PhyDofArgs phy_args;
  auto* phy_dof = app.add_subcommand("phy-dof", "Multicast X-channel DoF, or its convergence in the depth n");
  phy_dof->add_option("--kt", phy_args.kt, "Transmitters K_t")->required()->check(CLI::PositiveNumber);
  phy_dof->add_option("--kr", phy_args.kr, "Receivers K_r")->required()->check(CLI::PositiveNumber);
  phy_dof->add_option("--sigma", phy_args.sigma, "Multicast group size");
  phy_dof->add_option("--depth,-d", phy_args.depth, "Largest alignment depth n");
  add_common(phy_dof, common);

  BoundsArgs bounds_args;
  auto* bounds = app.add_subcommand("bounds", "Achievable curve against the cut-set bound");
  bounds->add_option("--n", bounds_args.n, "Library size N")->required();
  bounds->add_option("--kt", bounds_args.kt, "Transmitters K_t")->required();
  bounds->add_option("--kr", bounds_args.kr, "Receivers K_r")->required();
  bounds->add_option("--mt", bounds_args.mt, "Transmitter memory M_t");
  bounds->add_option("--at,--mr", bounds_args.at, "Single receiver memory M_r");
  add_common(bounds, common);

  GapArgs gap_args;
  auto* gap = app.add_subcommand("gap-scan", "Maximum achievable/cut-set ratio over a parameter box");
  gap->add_option("--max", gap_args.max, "Upper limit for N, K_t and K_r")->check(CLI::PositiveNumber);
  gap->add_option("--kt-max", gap_args.kt_max, "Upper limit for K_t");
  gap->add_option("--kr-max", gap_args.kr_max, "Upper limit for K_r");
  gap->add_option("--sample", gap_args.sample, "Seeded random subsample size (0: every tuple)");
  gap->add_flag("--full", gap_args.full, "Scan the whole N, K_t, K_r <= 100 box");
  gap->add_option("--interior", gap_args.interior, "Interior M_r points per cell")->check(CLI::NonNegativeNumber);
  add_common(gap, common);

  cli::VerifyArgs verify_args;
  auto* verify = app.add_subcommand("verify", "Run a verification suite; the report lists failing witnesses");
  verify->add_option("suite", verify_args.suite, "Suite")->required()->check(CLI::IsMember({"net", "phy", "e2e", "2x2"}));
  verify->add_option("--trials", verify_args.trials, "Channels per grid point");
  verify->add_option("--grid", verify_args.grid, "Grid size")->check(CLI::IsMember({"small", "full"}));
  verify->add_option("--kt", verify_args.kt, "Pin K_t (phy)");
  verify->add_option("--kr", verify_args.kr, "Pin K_r (phy)");
  verify->add_option("--sigma", verify_args.sigma, "Pin sigma (phy)");
  verify->add_option("--depth", verify_args.depth, "Pin the alignment depth (phy)");
  verify->add_option("--mode", common.mode, "Scalar mode")->check(CLI::IsMember({"exact", "float"}));
  add_common(verify, common, false);

  E2eArgs e2e_args;
  auto* e2e = app.add_subcommand("e2e", "Run caching, delivery and alignment end to end");
  e2e->add_option("--n", e2e_args.n, "Library size N");
  e2e->add_option("--kt", e2e_args.kt, "Transmitters K_t");
  e2e->add_option("--kr", e2e_args.kr, "Receivers K_r");
  e2e->add_option("--mr", e2e_args.mr, "Receiver memory M_r (integer kappa)");
  e2e->add_option("--mt", e2e_args.mt, "Transmitter memory M_t");
  e2e->add_option("--depth", e2e_args.depth, "Alignment depth n")->check(CLI::PositiveNumber);
  e2e->add_option("--demand", e2e_args.demand, "Comma-separated demanded file per receiver");
  e2e->add_option("--corner", e2e_args.corner, "Run the 2x2 extraction scheme at this corner")
      ->check(CLI::IsMember({"M13", "M45"}));
  e2e->add_option("--file-bits", e2e_args.file_bits, "File size F in bits");
  e2e->add_option("--chunk-bits", e2e_args.chunk_bits, "Bits per physical symbol")->check(CLI::Range(1, 24));
  e2e->add_option("--mode", common.mode, "Scalar mode")->check(CLI::IsMember({"exact", "float"}));
  add_common(e2e, common);

  Dof2x2Args d2_args;
  auto* dof2x2 = app.add_subcommand("dof2x2", "Two-transmitter, two-receiver curves and loads");
  dof2x2->add_option("--step", d2_args.step, "M_r grid step on [0, 2]");
  dof2x2->add_option("--at,--mr", d2_args.at, "Single receiver memory M_r");
  add_common(dof2x2, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    apply_seed_env(common);
    if (e2e->parsed() && e2e_args.corner.empty() && (e2e_args.n < 1 || e2e_args.kt < 1 || e2e_args.kr < 1))
      throw UsageError("e2e needs --n, --kt and --kr, or --corner");
    if (*dof) return cmd_dof(dof_args, common);
    if (*gains) return cmd_gains(gains_args, common);
    if (*phy_dof) return cmd_phy_dof(phy_args, common);
    if (*bounds) return cmd_bounds(bounds_args, common);
    if (*gap) return cmd_gap_scan(gap_args, common);
    if (*verify) return cmd_verify(verify_args, common);
    if (*e2e) return cmd_e2e(e2e_args, common);
    if (*dof2x2) return cmd_dof2x2(d2_args, common);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailed;
  }
  return kExitUsage;
}
