#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "madelung_lab/acceptance.hpp"
#include "madelung_lab/energy.hpp"
#include "madelung_lab/io.hpp"
#include "madelung_lab/littlewood_paley.hpp"
#include "madelung_lab/metrics.hpp"
#include "madelung_lab/random_fields.hpp"
#include "madelung_lab/spectral.hpp"

namespace mlab::cli {

using nlohmann::json;
using acceptance::Basis;
using acceptance::Check;

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& key, const std::string& text) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
    throw ConfigError(key + ": not a finite number: '" + text + "'");
  }
  return v;
}

std::uint64_t to_unsigned(const std::string& key, const std::string& text) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError(key + ": not a non-negative integer: '" + text + "'");
  }
  return v;
}

bool to_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError(key + ": expected true or false, got '" + text + "'");
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) out.push_back(item);
  if (!text.empty() && text.back() == sep) out.emplace_back();
  return out;
}

const KeyValues& defaults() {
  static const KeyValues d = {
      {"command", ""},          {"L", "60"},
      {"N", "2048"},            {"s", "1"},
      {"dt", "1e-3"},           {"hgp_dt", "auto"},
      {"T", "1"},               {"stride", "50"},
      {"rho_floor", "1e-6"},    {"dealias", "true"},
      {"cfl", "0.5"},           {"seed", "1"},
      {"output_dir", "madelung_lab_out"},
      {"init", "qdelta:0.5"},   {"left", "one"},
      {"right", "qdelta:0.5"},  {"delta", "0.5"},
      {"deltas", "0.1,0.25,0.5,0.75,0.9"},
      {"samples", "100"},       {"energy_cap", "1.2"},
      {"amp_mod", "0.15"},      {"amp_phase", "0.45"},
      {"margin", "0.01"},       {"energy_tol", "1e-6"},
      {"conj_tol", "1e-3"},     {"compare_points", "5"},
      {"ball_radius", "0"},     {"quick", "false"},
      {"fault", "none"},
  };
  return d;
}

// Smallest s each command accepts.
struct SRange {
  double lo;
  bool open;
};

SRange s_range(const std::string& command) {
  if (command == "simulate-gp" || command == "simulate-hgp" || command == "conjugation") {
    return {1.0, false};
  }
  return {0.5, true};
}

template <class Body>
double timed(json& timings, const char* key, Body&& body) {
  const auto t0 = std::chrono::steady_clock::now();
  body();
  const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  timings[key] = sec;
  return sec;
}

Check less(std::string name, double value, double bound, Basis basis) {
  return {std::move(name), value, "<", bound, 0.0, basis, std::isfinite(value) && value < bound};
}

Check finite(std::string name, double value, Basis basis) {
  return {std::move(name), value, "finite", 0.0, 0.0, basis, std::isfinite(value)};
}

double relative_drift(const std::vector<Diagnostics>& diags) {
  const double e0 = diags.front().energy;
  double m = 0.0;
  for (const auto& d : diags) m = std::max(m, std::abs(d.energy - e0) / std::max(std::abs(e0), 1e-300));
  return m;
}

struct Outcome {
  json results = json::object();
  std::vector<Check> checks;
};

void write_csv(const ExperimentConfig& c, const std::string& name, const std::string& content) {
  io::write_atomic(c.output_dir / name, content);
}

Outcome cmd_energy(const ExperimentConfig& c, const Grid1D& g) {
  const ComplexField q = initial_condition(c.init, g, c.s);
  Outcome o;
  o.results["energy"] = io::to_json(energy_es(q, SobolevIndex(c.s)));
  if (c.s == 1.0) {
    const VacuumScan scan = vacuum_scan(q);
    o.results["min_modulus"] = scan.min_modulus;
    if (scan.min_modulus > kDefaultModulusFloor) {
      o.results["energy_hydro"] = io::to_json(energy_hydro(madelung_forward(q)));
    }
  }
  return o;
}

Outcome cmd_metric(const ExperimentConfig& c, const Grid1D& g) {
  const ComplexField q = initial_condition(c.left, g, c.s);
  const ComplexField p = initial_condition(c.right, g, c.s);
  Outcome o;
  MetricReport m = metric_ds(q, p, SobolevIndex(c.s));
  if (c.ball_radius > 0.0) attach_ball_distances(m, q, p, c.ball_radius);
  if (vacuum_scan(q).min_modulus > kDefaultModulusFloor &&
      vacuum_scan(p).min_modulus > kDefaultModulusFloor) {
    m.theta_s = metric_theta(madelung_forward(q), madelung_forward(p), SobolevIndex(c.s));
  }
  o.results["metric"] = io::to_json(m);
  o.results["d_s_tilde"] = metric_ds_tilde(q, p, SobolevIndex(c.s));
  return o;
}

Outcome cmd_soliton_energy(const ExperimentConfig& c, const Grid1D& g) {
  Outcome o;
  double e = 0.0, expected = 0.0;
  if (c.delta == 0.0) {
    // Black soliton tanh(x) on [-L/2, L/2], analytic derivative.
    const EnergyReport r = gl_energy_on_segment(
        [](double x) { return Complex(std::tanh(x), 0.0); },
        [](double x) { return Complex(1.0 / (std::cosh(x) * std::cosh(x)), 0.0); },
        -0.5 * c.length, 0.5 * c.length, c.n_points);
    e = r.total;
    expected = kCriticalEnergy;
    o.results["energy"] = io::to_json(r);
  } else {
    const ComplexField q = minimizer_q_delta(c.delta, g);
    const EnergyReport r = gl_energy_from_profile(q, minimizer_q_delta_derivative(c.delta, g));
    e = r.total;
    expected = b_tilde(c.delta);
    o.results["energy"] = io::to_json(r);
    o.results["energy_spectral"] = energy_es(q, SobolevIndex(1.0)).total;
  }
  o.results["delta"] = c.delta;
  o.results["b_tilde"] = expected;
  o.checks.push_back(less("|E - b~(delta)| / (1 + b~(delta))", std::abs(e - expected) / (1.0 + expected),
                          c.energy_tol, Basis::published));
  return o;
}

void certificate_check(const ExperimentConfig& c, const std::vector<Diagnostics>& diags, Outcome& o,
                       const std::string& tag) {
  std::vector<double> energies, mins;
  for (const auto& d : diags) {
    energies.push_back(d.energy);
    mins.push_back(d.min_value);
  }
  const double b = energies.front() + c.margin;
  if (b >= kCriticalEnergy) {
    o.results["certificate" + tag] = nullptr;
    return;
  }
  const VacuumCertificate cert = vacuum_certificate(energies, mins, b);
  o.results["certificate" + tag] = io::to_json(cert);
  o.checks.push_back({"delta~(b) < min |q(t)|" + tag, cert.threshold, "<", cert.observed_min, 0.0,
                      Basis::published, cert.passed});
}

Outcome cmd_simulate_gp(const ExperimentConfig& c, const Grid1D& g) {
  const ComplexField q0 = initial_condition(c.init, g, c.s);
  SimConfig sim = c.sim;
  sim.scheme = Scheme::strang_gp;
  const GpTrajectory tr = evolve_gp(q0, sim);
  io::export_trajectory(c.output_dir / "trajectory", tr, {{"seed", c.seed}, {"init", c.init}});
  Outcome o;
  const double drift = relative_drift(tr.diagnostics);
  o.results = {{"steps", tr.steps},
               {"dt_used", tr.dt},
               {"energy_initial", tr.diagnostics.front().energy},
               {"energy_final", tr.diagnostics.back().energy},
               {"relative_energy_drift", drift},
               {"snapshots", tr.states.size()},
               {"trajectory_dir", "trajectory"}};
  o.checks.push_back(less("relative E^1 drift", drift, c.energy_tol, Basis::published));
  certificate_check(c, tr.diagnostics, o, "");
  return o;
}

double effective_hgp_dt(const ExperimentConfig& c, const Grid1D& g) {
  return c.hgp_dt ? *c.hgp_dt : hgp_dt_limit(g, c.sim.cfl);
}

Outcome cmd_simulate_hgp(const ExperimentConfig& c, const Grid1D& g) {
  const HydroState s0 = madelung_forward(initial_condition(c.init, g, c.s));
  SimConfig sim = c.sim;
  sim.scheme = Scheme::rk4_hgp;
  sim.dt = effective_hgp_dt(c, g);
  const HgpTrajectory tr = evolve_hgp(s0, sim);
  io::export_trajectory(c.output_dir / "trajectory", tr, {{"seed", c.seed}, {"init", c.init}});
  Outcome o;
  double min_rho = std::numeric_limits<double>::infinity();
  double mass_drift = 0.0;
  for (const auto& d : tr.diagnostics) {
    min_rho = std::min(min_rho, d.min_value);
    mass_drift = std::max(mass_drift, std::abs(d.mass_like - tr.diagnostics.front().mass_like));
  }
  o.results = {{"steps", tr.steps},
               {"dt_used", tr.dt},
               {"dt_limit", hgp_dt_limit(g, c.sim.cfl)},
               {"energy_initial", tr.diagnostics.front().energy},
               {"energy_final", tr.diagnostics.back().energy},
               {"relative_energy_drift", relative_drift(tr.diagnostics)},
               {"mass_drift", mass_drift},
               {"min_density", min_rho},
               {"snapshots", tr.states.size()},
               {"trajectory_dir", "trajectory"}};
  o.checks.push_back({"min rho(t)", min_rho, ">", 0.0, 0.0, Basis::identity, min_rho > 0.0});
  return o;
}

Outcome cmd_conjugation(const ExperimentConfig& c, const Grid1D& g) {
  const HydroState s0 = madelung_forward(initial_condition(c.init, g, c.s));
  SimConfig gp = c.sim;
  gp.scheme = Scheme::strang_gp;
  SimConfig hgp = c.sim;
  hgp.scheme = Scheme::rk4_hgp;
  hgp.dt = effective_hgp_dt(c, g);
  hgp.fault = Fault::none;
  const ConjugationReport r = conjugation_check(s0, gp, hgp, SobolevIndex(c.s), c.compare_points);
  std::string csv = "t,theta_discrepancy\n";
  for (std::size_t i = 0; i < r.times.size(); ++i) {
    csv += io::format_double(r.times[i]) + "," + io::format_double(r.discrepancy[i]) + "\n";
  }
  write_csv(c, "conjugation.csv", csv);
  Outcome o;
  o.results["conjugation"] = io::to_json(r);
  o.checks.push_back(less("final theta^s discrepancy", r.final_discrepancy, c.conj_tol,
                          Basis::derived));
  return o;
}

Outcome cmd_vacuum_sweep(const ExperimentConfig& c, const Grid1D& g) {
  Outcome o;
  json rows = json::array();
  std::string csv = "delta,energy0,b,delta_tilde_b,min_modulus,passed\n";
  SimConfig sim = c.sim;
  sim.scheme = Scheme::strang_gp;
  for (double d : c.deltas) {
    const GpTrajectory tr = evolve_gp(minimizer_q_delta(d, g), sim);
    Outcome one;
    char tag[32];
    std::snprintf(tag, sizeof tag, " (delta = %g)", d);
    certificate_check(c, tr.diagnostics, one, tag);
    const json cert = one.results["certificate" + std::string(tag)];
    rows.push_back({{"delta", d}, {"certificate", cert}});
    if (!cert.is_null()) {
      csv += io::format_double(d) + "," + io::format_double(tr.diagnostics.front().energy) + "," +
             io::format_double(cert["energy_bound"].get<double>()) + "," +
             io::format_double(cert["threshold"].get<double>()) + "," +
             io::format_double(cert["observed_min"].get<double>()) + "," +
             (cert["passed"].get<bool>() ? "1" : "0") + "\n";
    }
    for (auto& ch : one.checks) o.checks.push_back(std::move(ch));
  }
  write_csv(c, "vacuum_sweep.csv", csv);
  o.results["sweep"] = rows;
  return o;
}

Outcome cmd_verify_lp(const ExperimentConfig& c, const Grid1D& g) {
  Outcome o;
  const double unity = lp::DyadicPartition(g).unity_residual();
  o.checks.push_back(less("partition of unity residual", unity, 1e-12, Basis::derived));
  double worst = 0.0;
  const long max_mode = static_cast<long>(g.size() / 2) - 1;
  for (std::size_t i = 0; i < c.samples; ++i) {
    auto rng = stream_rng(c.seed, i);
    const ComplexField f = random_band_limited(g, rng, max_mode, 0.0);
    const ComplexField h = random_band_limited(g, rng, max_mode, 0.0);
    const ComplexField exact = dealiased_product(f, h);
    worst = std::max(worst, l2_norm(lp::bony_decompose(f, h).total() - exact) / l2_norm(exact));
  }
  o.checks.push_back(less("Bony reconstruction relative residual", worst, 1e-10, Basis::identity));
  o.results = {{"unity_residual", unity}, {"bony_residual", worst}, {"samples", c.samples}};
  return o;
}

Outcome cmd_verify_products(const ExperimentConfig& c, const Grid1D& g) {
  Outcome o;
  const lp::ProductEstimateReport coarse = lp::product_estimate_probe(g, c.samples, c.s, c.seed);
  const lp::ProductEstimateReport fine =
      lp::product_estimate_probe(Grid1D(c.length, 2 * c.n_points), c.samples, c.s, c.seed);
  auto row = [](const lp::ProductEstimateReport& r) {
    return json{{"N", r.n_points}, {"samples", r.samples}, {"skipped", r.skipped},
                {"max_ratio_hs", r.max_ratio_hs}, {"max_ratio_lower", r.max_ratio_lower}};
  };
  o.results = {{"s", c.s}, {"seed", c.seed}, {"coarse", row(coarse)}, {"fine", row(fine)}};
  o.checks.push_back(finite("H^s product ratio", fine.max_ratio_hs, Basis::derived));
  o.checks.push_back(finite("H^{s-1} product ratio", fine.max_ratio_lower, Basis::derived));
  o.checks.push_back({"|r_2N / r_N - 1|, H^s", std::abs(fine.max_ratio_hs / coarse.max_ratio_hs - 1.0),
                      "<=", 0.05, 0.0, Basis::derived,
                      std::abs(fine.max_ratio_hs / coarse.max_ratio_hs - 1.0) <= 0.05});
  o.checks.push_back({"|r_2N / r_N - 1|, H^{s-1}",
                      std::abs(fine.max_ratio_lower / coarse.max_ratio_lower - 1.0), "<=", 0.05, 0.0,
                      Basis::derived,
                      std::abs(fine.max_ratio_lower / coarse.max_ratio_lower - 1.0) <= 0.05});
  return o;
}

Outcome cmd_bilipschitz(const ExperimentConfig& c, const Grid1D& g) {
  BilipschitzOptions opt;
  opt.s = c.s;
  opt.samples = c.samples;
  opt.energy_cap = c.energy_cap;
  const BilipschitzReport r =
      bilipschitz_probe(random_pair_generator(g, c.seed, c.amp_mod, c.amp_phase), opt);
  std::string csv = "ratio,bin_lo,bin_hi,count\n";  // log-spaced bins;
  for (const auto& [name, st] : {std::pair{"theta_over_d", &r.theta_over_d},
                                 std::pair{"d_over_theta", &r.d_over_theta}}) {
    for (std::size_t b = 0; b < st->counts.size(); ++b) {
      csv += std::string(name) + "," + io::format_double(st->bin_edges[b]) + "," +
             io::format_double(st->bin_edges[b + 1]) + "," + std::to_string(st->counts[b]) + "\n";
    }
  }
  write_csv(c, "bilipschitz_histogram.csv", csv);
  Outcome o;
  o.results["bilipschitz"] = io::to_json(r);
  const bool any = r.accepted > 0;
  o.checks.push_back(finite("max theta/d", any ? r.theta_over_d.max : NAN, Basis::derived));
  o.checks.push_back(finite("max d/theta", any ? r.d_over_theta.max : NAN, Basis::derived));
  return o;
}

Outcome cmd_acceptance(const ExperimentConfig& c) {
  acceptance::Options opt;
  opt.quick = c.quick;
  opt.fault = c.sim.fault;
  opt.seed = c.seed;
  Outcome o;
  json criteria = json::array();
  for (const auto& r : acceptance::run_suite(opt, {}, [](const auto& r) {
         std::fprintf(stderr, "%s\n", acceptance::summary_line(r).c_str());
       })) {
    criteria.push_back(acceptance::to_json(r, false));
    o.checks.push_back({"criterion " + std::to_string(r.id) + ": " + r.title, r.passed ? 1.0 : 0.0,
                        "==", 1.0, 0.0, Basis::derived, r.passed});
  }
  o.results["criteria"] = criteria;
  return o;
}

Outcome dispatch(const ExperimentConfig& c) {
  if (c.command == "acceptance") return cmd_acceptance(c);
  const Grid1D g(c.length, c.n_points);
  if (c.command == "energy") return cmd_energy(c, g);
  if (c.command == "metric") return cmd_metric(c, g);
  if (c.command == "simulate-gp") return cmd_simulate_gp(c, g);
  if (c.command == "simulate-hgp") return cmd_simulate_hgp(c, g);
  if (c.command == "conjugation") return cmd_conjugation(c, g);
  if (c.command == "vacuum-sweep") return cmd_vacuum_sweep(c, g);
  if (c.command == "verify-lp") return cmd_verify_lp(c, g);
  if (c.command == "verify-products") return cmd_verify_products(c, g);
  if (c.command == "bilipschitz") return cmd_bilipschitz(c, g);
  if (c.command == "soliton-energy") return cmd_soliton_energy(c, g);
  throw ConfigError("unknown command '" + c.command + "'");
}

std::string file_digest_input(const ExperimentConfig& c) {
  // Contents of file: initial conditions enter the digest too.
  std::string extra;
  for (const std::string* ic : {&c.init, &c.left, &c.right}) {
    if (ic->rfind("file:", 0) == 0) {
      std::ifstream in(ic->substr(5), std::ios::binary);
      std::ostringstream ss;
      ss << in.rdbuf();
      extra += ss.str();
    }
  }
  return extra;
}

}  // namespace

KeyValues parse_config_text(const std::string& text) {
  KeyValues kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
    }
    const std::string key = trim(std::string_view(t).substr(0, eq));
    if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    kv[key] = trim(std::string_view(t).substr(eq + 1));
  }
  return kv;
}

KeyValues read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

const std::vector<std::string>& commands() {
  static const std::vector<std::string> list = {
      "energy",       "metric",    "simulate-gp",     "simulate-hgp", "conjugation", "vacuum-sweep",
      "verify-lp",    "verify-products", "bilipschitz", "soliton-energy", "acceptance"};
  return list;
}

ExperimentConfig make_config(const KeyValues& kv) {
  KeyValues all = defaults();
  for (const auto& [k, v] : kv) {
    if (!all.count(k)) throw ConfigError("unknown key '" + k + "'");
    all[k] = v;
  }
  ExperimentConfig c;
  c.command = all["command"];
  if (std::find(commands().begin(), commands().end(), c.command) == commands().end()) {
    throw ConfigError("unknown command '" + c.command + "'");
  }
  c.length = to_double("L", all["L"]);
  if (c.length <= 0.0) throw ConfigError("L must be positive");
  c.n_points = to_unsigned("N", all["N"]);
  if (c.n_points < 8 || (c.n_points & (c.n_points - 1)) != 0) {
    throw ConfigError("N must be a power of two >= 8, got " + all["N"]);
  }
  c.s = to_double("s", all["s"]);
  const SRange range = s_range(c.command);
  if (range.open ? !(c.s > range.lo) : !(c.s >= range.lo)) {
    throw ConfigError("s = " + all["s"] + " outside the range of " + c.command + " (s " +
                      (range.open ? ">" : ">=") + " " + io::format_double(range.lo) + ")");
  }
  c.sim.dt = to_double("dt", all["dt"]);
  c.sim.t_end = to_double("T", all["T"]);
  if (c.sim.dt <= 0.0 || c.sim.t_end <= 0.0) throw ConfigError("dt and T must be positive");
  if (all["hgp_dt"] != "auto") {
    c.hgp_dt = to_double("hgp_dt", all["hgp_dt"]);
    if (*c.hgp_dt <= 0.0) throw ConfigError("hgp_dt must be positive or auto");
  }
  c.sim.snapshot_stride = to_unsigned("stride", all["stride"]);
  if (c.sim.snapshot_stride == 0) throw ConfigError("stride must be >= 1");
  c.sim.rho_floor = to_double("rho_floor", all["rho_floor"]);
  c.sim.dealias = to_bool("dealias", all["dealias"]);
  c.sim.cfl = to_double("cfl", all["cfl"]);
  if (!(c.sim.cfl > 0.0 && c.sim.cfl <= 1.0)) throw ConfigError("cfl must lie in (0, 1]");
  try {
    c.sim.fault = parse_fault(all["fault"]);
  } catch (const ParameterError& e) {
    throw ConfigError(e.what());
  }
  c.seed = to_unsigned("seed", all["seed"]);
  c.output_dir = all["output_dir"];
  c.init = all["init"];
  c.left = all["left"];
  c.right = all["right"];
  c.delta = to_double("delta", all["delta"]);
  if (c.command == "soliton-energy" && !(c.delta >= 0.0 && c.delta < 1.0)) {
    throw ConfigError("delta must lie in [0, 1)");
  }
  c.deltas.clear();
  for (const auto& item : split(all["deltas"], ',')) {
    const double d = to_double("deltas", trim(item));
    if (!(d > 0.0 && d < 1.0)) throw ConfigError("deltas entries must lie in (0, 1)");
    c.deltas.push_back(d);
  }
  c.samples = to_unsigned("samples", all["samples"]);
  if (c.samples == 0) throw ConfigError("samples must be >= 1");
  c.energy_cap = to_double("energy_cap", all["energy_cap"]);
  c.amp_mod = to_double("amp_mod", all["amp_mod"]);
  c.amp_phase = to_double("amp_phase", all["amp_phase"]);
  c.margin = to_double("margin", all["margin"]);
  c.energy_tol = to_double("energy_tol", all["energy_tol"]);
  c.conj_tol = to_double("conj_tol", all["conj_tol"]);
  c.compare_points = to_unsigned("compare_points", all["compare_points"]);
  if (c.compare_points == 0) throw ConfigError("compare_points must be >= 1");
  c.ball_radius = to_double("ball_radius", all["ball_radius"]);
  c.quick = to_bool("quick", all["quick"]);

  // Initial conditions are checked here so a bad one is a config error.
  const Grid1D g(c.length, c.n_points);
  for (const std::string* ic : {&c.init, &c.left, &c.right}) {
    try {
      (void)initial_condition(*ic, g, c.s);
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      throw ConfigError("initial condition '" + *ic + "': " + e.what());
    }
  }
  all.erase("output_dir");
  c.resolved = std::move(all);
  return c;
}

ComplexField initial_condition(const std::string& text, const Grid1D& grid, double s) {
  const std::vector<std::string> parts = split(text, ':');
  const std::string& kind = parts.empty() ? text : parts[0];
  auto need = [&](std::size_t n) {
    if (parts.size() != n) throw ConfigError("initial condition '" + text + "': wrong arity");
  };
  if (kind == "one") {
    need(1);
    return ComplexField(grid, ComplexVector(grid.size(), Complex(1.0, 0.0)));
  }
  if (kind == "qdelta") {
    need(2);
    const double d = to_double("qdelta", parts[1]);
    if (!(d > 0.0 && d < 1.0)) throw ConfigError("qdelta: delta must lie in (0, 1)");
    return minimizer_q_delta(d, grid);
  }
  if (kind == "plane") {
    need(2);
    // Integer wavenumber keeps the wave periodic on the grid.
    const double k = to_double("plane", parts[1]);
    if (k != std::round(k)) throw ConfigError("plane: wavenumber must be an integer");
    ComplexVector v(grid.size());
    const double xi = 2.0 * M_PI * k / grid.length();
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = std::polar(1.0, xi * grid.x(j));
    return ComplexField(grid, std::move(v));
  }
  if (kind == "file") {
    if (parts.size() < 2) throw ConfigError("file: missing path");
    const std::string path = text.substr(5);
    if (!std::filesystem::exists(path)) throw ConfigError("file: no such file " + path);
    ComplexField q = io::read_field_csv(path);
    if (!(q.grid() == grid)) throw ConfigError("file: grid of " + path + " differs from (L, N)");
    return q;
  }
  if (kind == "perturb") {
    need(3);
    const double amp = to_double("perturb", parts[1]);
    const std::uint64_t seed = to_unsigned("perturb", parts[2]);
    if (!(amp >= 0.0 && amp < 1.0)) throw ConfigError("perturb: amplitude must lie in [0, 1)");
    auto rng = stream_rng(seed, 0);
    const long max_mode = std::min<long>(64, static_cast<long>(grid.size() / 4));
    ComplexField f = random_band_limited(grid, rng, max_mode, s + 1.0);
    // Scaled to sup norm amp, so |q| >= 1 - amp.
    const double sup = linf_norm(f);
    ComplexVector v(grid.size());
    for (std::size_t j = 0; j < v.size(); ++j) {
      v[j] = 1.0 + (sup > 0.0 ? amp / sup : 0.0) * f[j];
    }
    return ComplexField(grid, std::move(v));
  }
  throw ConfigError("unknown initial condition '" + text + "'");
}

RunReport run(const ExperimentConfig& c) {
  std::filesystem::create_directories(c.output_dir);
  RunReport rep;
  Outcome out;
  const double total = timed(rep.timings, "run_seconds", [&] { out = dispatch(c); });
  (void)total;
  json checks = json::array();
  rep.passed = true;
  for (const auto& ch : out.checks) {
    checks.push_back(acceptance::to_json(ch));
    rep.passed = rep.passed && ch.passed;
  }
  json echo(c.resolved);
  const std::string canonical = echo.dump() + file_digest_input(c);
  rep.payload = {{"command", c.command},
                 {"config", echo},
                 {"inputs_digest", io::hex64(io::fnv1a(canonical))},
                 {"results", out.results},
                 {"checks", checks},
                 {"passed", rep.passed}};
  io::write_atomic(c.output_dir / "report.json", rep.payload.dump(2) + "\n");
  io::write_atomic(c.output_dir / "timings.json", rep.timings.dump(2) + "\n");
  return rep;
}

namespace {

void diagnostic(const char* kind, const std::string& message) {
  std::cerr << json{{"error", {{"kind", kind}, {"message", message}}}}.dump() << "\n";
}

}  // namespace

int main_entry(int argc, char** argv) {
  CLI::App app{"madelung-lab: Gross-Pitaevskii and hydrodynamic experiments"};
  app.set_help_all_flag("--help-all");
  std::string command, config_file;
  app.add_option("command", command, "experiment to run")
      ->required()
      ->check(CLI::IsMember(commands()));
  app.add_option("--config", config_file, "flat key=value file; flags override it");

  // Every config key doubles as a flag.
  std::map<std::string, std::string> flag_values;
  std::vector<std::string> sets;
  for (const auto& [key, def] : defaults()) {
    if (key == "command" || key == "quick") continue;
    auto* opt = app.add_option("--" + key, flag_values[key], "default " + def);
    if (key == "fault") opt->group("");  // negative control only
  }
  app.add_flag("--quick{true}", flag_values["quick"], "reduced acceptance suite");
  app.add_option("--delta-sweep", flag_values["deltas"], "alias of --deltas")->group("");
  app.add_option("--output-dir", flag_values["output_dir"], "alias of --output_dir");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    diagnostic("config", e.what());
    return kExitConfig;
  }

  ExperimentConfig config;
  try {
    KeyValues kv;
    if (!config_file.empty()) kv = read_config_file(config_file);
    kv["command"] = command;
    for (const auto& [key, value] : flag_values) {
      if (!value.empty()) kv[key] = value;
    }
    config = make_config(kv);
  } catch (const Error& e) {
    diagnostic("config", e.what());
    return kExitConfig;
  }

  try {
    const RunReport rep = run(config);
    for (const auto& ch : rep.payload["checks"]) {
      const std::string rel = ch["relation"].get<std::string>();
      char bound[64] = "";
      if (rel != "finite") std::snprintf(bound, sizeof bound, " %.6g", ch["bound"].get<double>());
      std::printf("%s  %s = %.6g %s%s  [%s]\n", ch["passed"].get<bool>() ? "PASS" : "FAIL",
                  ch["name"].get<std::string>().c_str(), ch["value"].get<double>(), rel.c_str(),
                  bound, ch["basis"].get<std::string>().c_str());
    }
    std::printf("report: %s\n", (config.output_dir / "report.json").string().c_str());
    return rep.passed ? kExitPass : kExitAssertion;
  } catch (const ConfigError& e) {
    diagnostic("config", e.what());
    return kExitConfig;
  } catch (const ParameterError& e) {
    diagnostic("config", e.what());
    return kExitConfig;
  } catch (const DomainError& e) {
    diagnostic("config", e.what());
    return kExitConfig;
  } catch (const StabilityError& e) {
    // A time step above the stability limit is a configuration choice.
    diagnostic("config", e.what());
    return kExitConfig;
  } catch (const InvalidGridError& e) {
    diagnostic("config", e.what());
    return kExitConfig;
  } catch (const Error& e) {
    diagnostic("numeric", e.what());
    return kExitNumeric;
  } catch (const std::filesystem::filesystem_error& e) {
    diagnostic("io", e.what());
    return kExitNumeric;
  }
}

}  // namespace mlab::cli
