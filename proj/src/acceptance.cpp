#include "madelung_lab/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <optional>
#include <random>

#include "madelung_lab/energy.hpp"
#include "madelung_lab/io.hpp"
#include "madelung_lab/littlewood_paley.hpp"
#include "madelung_lab/metrics.hpp"
#include "madelung_lab/random_fields.hpp"
#include "madelung_lab/spectral.hpp"

namespace mlab::acceptance {

using nlohmann::json;

std::string to_string(Basis b) {
  switch (b) {
    case Basis::published: return "published";
    case Basis::identity: return "identity";
    case Basis::derived: return "derived";
  }
  return "derived";
}

namespace {

const char* const kTitles[kCriterionCount] = {
    "black-soliton energy",
    "minimizer energy curve",
    "threshold inverse",
    "GP energy conservation",
    "no-vacuum certificate",
    "flow conjugation",
    "phase-infimum oracle",
    "bilipschitz probe",
    "Littlewood-Paley suite",
    "Madelung round trips",
};

const double kBudgets[kCriterionCount] = {1, 5, 1, 60, 60, 300, 30, 300, 60, 10};

Check less(std::string name, double value, double bound, Basis basis) {
  return {std::move(name), value, "<", bound, 0.0, basis, std::isfinite(value) && value < bound};
}

Check at_most(std::string name, double value, double bound, Basis basis) {
  return {std::move(name), value, "<=", bound, 0.0, basis, std::isfinite(value) && value <= bound};
}

Check equals(std::string name, double value, double expected, Basis basis) {
  return {std::move(name), value, "==", expected, 0.0, basis, value == expected};
}

Check within(std::string name, double value, double lo, double hi, Basis basis) {
  return {std::move(name), value, "in", lo, hi, basis, value >= lo && value <= hi};
}

Check finite(std::string name, double value, Basis basis) {
  return {std::move(name), value, "finite", 0.0, 0.0, basis, std::isfinite(value)};
}

constexpr double kRoundTripModulusFloor = 0.2;

double sech(double x) { return 1.0 / std::cosh(x); }

// Criteria 4 and 5 share one GP run.
struct GpRun {
  double drift = 0.0;
  double drift_half = 0.0;
  std::vector<double> energies;
  std::vector<double> mins;
  std::size_t steps = 0;
};

struct Context {
  std::optional<GpRun> gp;
};

double max_relative_drift(const GpTrajectory& tr) {
  const double e0 = tr.diagnostics.front().energy;
  double m = 0.0;
  for (const auto& d : tr.diagnostics) m = std::max(m, std::abs(d.energy - e0) / e0);
  return m;
}

const GpRun& gp_run(const Options& o, Context& ctx) {
  if (ctx.gp) return *ctx.gp;
  const Grid1D g(60.0, o.quick ? 512 : 2048);
  const ComplexField q0 = minimizer_q_delta(0.5, g);
  SimConfig c;
  c.dt = 1e-3;
  c.t_end = 1.0;
  c.snapshot_stride = 50;
  c.fault = o.fault;
  const GpTrajectory tr = evolve_gp(q0, c);
  c.dt = 5e-4;
  c.snapshot_stride = 100;
  const GpTrajectory half = evolve_gp(q0, c);
  GpRun r;
  r.drift = max_relative_drift(tr);
  r.drift_half = max_relative_drift(half);
  r.steps = tr.steps;
  for (const auto& d : tr.diagnostics) {
    r.energies.push_back(d.energy);
    r.mins.push_back(d.min_value);
  }
  ctx.gp = std::move(r);
  return *ctx.gp;
}

void criterion_1(const Options& o, CriterionResult& r) {
  const double scale = o.quick ? 10.0 : 1.0;
  const EnergyReport e = gl_energy_on_segment(
      [](double x) { return Complex(std::tanh(x), 0.0); },
      [](double x) { return Complex(sech(x) * sech(x), 0.0); }, -20.0, 20.0,
      o.quick ? 1000 : 4000);
  r.checks.push_back(less("|E(tanh) - 4/3|", std::abs(e.total - 4.0 / 3.0), 1e-8 * scale,
                          Basis::published));
  r.details["energy"] = io::to_json(e);
}

void criterion_2(const Options& o, CriterionResult& r) {
  const double scale = o.quick ? 10.0 : 1.0;
  const Grid1D g(60.0, o.quick ? 1024 : 4096);
  json rows = json::array();
  for (double delta : {0.1, 0.25, 0.5, 0.75, 0.9}) {
    const ComplexField q = minimizer_q_delta(delta, g);
    const double b = b_tilde(delta);
    const double e = gl_energy_from_profile(q, minimizer_q_delta_derivative(delta, g)).total;
    char name[64];
    std::snprintf(name, sizeof name, "|E(q_%.2f) - b(%.2f)| / (1 + b)", delta, delta);
    r.checks.push_back(less(name, std::abs(e - b) / (1.0 + b), 1e-6 * scale, Basis::published));
    rows.push_back({{"delta", delta},
                    {"b_tilde", b},
                    {"energy", e},
                    {"energy_spectral", energy_es(q, SobolevIndex(1.0)).total}});
  }
  r.details["grid"] = io::to_json(g);
  r.details["rows"] = rows;
}

void criterion_3(const Options& o, CriterionResult& r) {
  const double scale = o.quick ? 10.0 : 1.0;
  const int points = o.quick ? 100 : 1000;
  double worst = 0.0;
  for (int i = 0; i < points; ++i) {
    const double d = static_cast<double>(i) / (points - 1);
    worst = std::max(worst, std::abs(delta_tilde(b_tilde(d)) - d));
  }
  r.checks.push_back(less("max |delta~(b~(d)) - d|", worst, 1e-10 * scale, Basis::derived));
  r.checks.push_back(equals("delta~(0)", delta_tilde(0.0), 1.0, Basis::published));
  r.checks.push_back(equals("delta~(4/3)", delta_tilde(4.0 / 3.0), 0.0, Basis::published));
  r.details["points"] = points;
}

void criterion_4(const Options& o, CriterionResult& r, Context& ctx) {
  const double scale = o.quick ? 10.0 : 1.0;
  const GpRun& run = gp_run(o, ctx);
  r.checks.push_back(less("relative E^1 drift, dt = 1e-3", run.drift, 1e-6 * scale,
                          Basis::published));
  r.checks.push_back(within("drift(1e-3) / drift(5e-4)", run.drift / run.drift_half, 2.5, 6.4,
                            Basis::derived));
  r.details = {{"drift", run.drift},
               {"drift_half_step", run.drift_half},
               {"steps", run.steps},
               {"N", o.quick ? 512 : 2048},
               {"L", 60.0},
               {"fault", mlab::to_string(o.fault)}};
}

void criterion_5(const Options& o, CriterionResult& r, Context& ctx) {
  const GpRun& run = gp_run(o, ctx);
  const double b = run.energies.front() + 0.01;
  const VacuumCertificate c = vacuum_certificate(run.energies, run.mins, b);
  Check ch = less("delta~(b) vs min |q(t)| over snapshots", c.threshold, c.observed_min,
                  Basis::published);
  ch.relation = "<";
  r.checks.push_back(ch);
  r.details["certificate"] = io::to_json(c);
  r.details["snapshots"] = run.mins.size();
}

void criterion_6(const Options& o, CriterionResult& r) {
  const double scale = o.quick ? 10.0 : 1.0;
  const std::size_t sizes[3] = {o.quick ? 128u : 512u, o.quick ? 256u : 1024u,
                                o.quick ? 512u : 2048u};
  const double gp_dts[3] = {4e-4, 2e-4, 1e-4};
  json levels = json::array();
  std::vector<double> finals;
  for (int i = 0; i < 3; ++i) {
    const Grid1D g(60.0, sizes[i]);
    const HydroState s0 = madelung_forward(minimizer_q_delta(0.5, g));
    SimConfig gp;
    gp.dt = gp_dts[i];
    gp.t_end = 0.5;
    gp.fault = o.fault;
    SimConfig hgp;
    hgp.scheme = Scheme::rk4_hgp;
    hgp.t_end = 0.5;
    hgp.dt = hgp_dt_limit(g);
    const ConjugationReport c = conjugation_check(s0, gp, hgp, SobolevIndex(1.0), 5);
    finals.push_back(c.final_discrepancy);
    levels.push_back(io::to_json(c));
  }
  r.checks.push_back(less("theta^1 discrepancy at finest level", finals[2], 1e-3 * scale,
                          Basis::derived));
  for (int i = 1; i < 3; ++i) {
    r.checks.push_back(less("discrepancy level " + std::to_string(i) + " vs level " +
                                std::to_string(i - 1),
                            finals[i], finals[i - 1], Basis::derived));
  }
  r.details["levels"] = levels;
}

void criterion_7(const Options& o, CriterionResult& r) {
  const double scale = o.quick ? 10.0 : 1.0;
  const std::size_t pairs = o.quick ? 20 : 200;
  const Grid1D g(40.0, 256);
  double hs_excess = -std::numeric_limits<double>::infinity(), hs_gap = 0.0;
  double ball_excess = -std::numeric_limits<double>::infinity(), ball_gap = 0.0;
  for (std::size_t i = 0; i < pairs; ++i) {
    auto rng = stream_rng(o.seed + 7, i);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const ComplexField q = random_vacuum_free(g, rng, 0.3, 1.0);
    const ComplexField p = random_vacuum_free(g, rng, 0.3, 1.0);
    const SobolevIndex s(0.6 + 1.4 * unit(rng));

    // H^s form. The oracle evaluates the objective directly on coefficients.
    const RealVector w = localization_weight(g, -10.0 + 20.0 * unit(rng), LocalizationWeight::sech);
    const PhaseAlignment al = phase_align(q, p, s, w);
    ComplexField wq(g), wp(g);
    for (std::size_t j = 0; j < g.size(); ++j) {
      wq[j] = w[j] * q[j];
      wp[j] = w[j] * p[j];
    }
    const ComplexVector a = dft(wq).coeffs, b = dft(wp).coeffs;
    const RealVector sw = sobolev_weights(g, s.value());
    const PhaseScan scan = phase_scan([&](Complex lam) {
      double acc = 0.0;
      for (std::size_t k = 0; k < a.size(); ++k) acc += sw[k] * std::norm(lam * a[k] - b[k]);
      return std::sqrt(acc);
    });
    hs_excess = std::max(hs_excess, al.value - scan.scan_min);
    hs_gap = std::max(hs_gap, std::abs(al.value - scan.refined_min));

    // W^{s,2}(B) form.
    const Ball ball{-5.0 + 10.0 * unit(rng), 1.5};
    const PhaseAlignment bal = metric_ds_star_ball(q, p, s, ball);
    const int m = static_cast<int>(std::floor(s.value()));
    const auto qs = derivative_stack(q, m), ps = derivative_stack(p, m);
    const BallQuadrature bq = ball_quadrature(g, ball);
    const PhaseScan bscan = phase_scan([&](Complex lam) {
      std::vector<ComplexField> diff;
      for (std::size_t k = 0; k < qs.size(); ++k) diff.push_back(lam * qs[k] - ps[k]);
      return std::sqrt(std::max(0.0, w_s2_ball_inner(diff, diff, bq, s).real()));
    });
    ball_excess = std::max(ball_excess, bal.value - bscan.scan_min);
    ball_gap = std::max(ball_gap, std::abs(bal.value - bscan.refined_min));
  }
  r.checks.push_back(at_most("H^s: max(closed - scan min)", hs_excess, 1e-9 * scale,
                             Basis::derived));
  r.checks.push_back(less("H^s: max |closed - refined scan|", hs_gap, 1e-9 * scale,
                          Basis::derived));
  r.checks.push_back(at_most("W^{s,2}(B): max(closed - scan min)", ball_excess, 1e-9 * scale,
                             Basis::derived));
  r.checks.push_back(less("W^{s,2}(B): max |closed - refined scan|", ball_gap, 1e-9 * scale,
                          Basis::derived));
  r.details = {{"pairs", pairs}, {"phases", 3600}, {"grid", io::to_json(g)}};
}

void criterion_8(const Options& o, CriterionResult& r) {
  const double scale = o.quick ? 10.0 : 1.0;
  const std::size_t n0 = o.quick ? 256 : 512;
  BilipschitzOptions opt;
  opt.s = 1.0;
  opt.samples = o.quick ? 20 : 100;
  opt.energy_cap = 1.2;
  double r1[2][2], r2[2][2];  // [level][seed]
  json runs = json::array();
  for (int level = 0; level < 2; ++level) {
    const Grid1D g(40.0, n0 << level);
    for (int k = 0; k < 2; ++k) {
      const std::uint64_t seed = o.seed + 8 + static_cast<std::uint64_t>(k);
      const BilipschitzReport rep = bilipschitz_probe(random_pair_generator(g, seed, 0.15, 0.45), opt);
      r1[level][k] = rep.accepted ? rep.theta_over_d.max : NAN;
      r2[level][k] = rep.accepted ? rep.d_over_theta.max : NAN;
      json j = io::to_json(rep);
      j["N"] = g.size();
      j["seed"] = seed;
      runs.push_back(j);
    }
  }
  r.checks.push_back(finite("max theta/d", r1[0][0], Basis::derived));
  r.checks.push_back(finite("max d/theta", r2[0][0], Basis::derived));
  auto spread = [](double a, double b) { return std::abs(a - b) / std::min(a, b); };
  for (int level = 0; level < 2; ++level) {
    const std::string tag = level ? " (2N)" : " (N)";
    r.checks.push_back(less("seed spread of max theta/d" + tag, spread(r1[level][0], r1[level][1]),
                            0.2 * scale, Basis::derived));
    r.checks.push_back(less("seed spread of max d/theta" + tag, spread(r2[level][0], r2[level][1]),
                            0.2 * scale, Basis::derived));
  }
  const double growth = o.quick ? 1.1 : 1.01;
  for (int k = 0; k < 2; ++k) {
    const std::string tag = " (seed " + std::to_string(k) + ")";
    r.checks.push_back(at_most("max theta/d at 2N over N" + tag, r1[1][k] / r1[0][k], growth,
                               Basis::derived));
    r.checks.push_back(at_most("max d/theta at 2N over N" + tag, r2[1][k] / r2[0][k], growth,
                               Basis::derived));
  }
  r.details["runs"] = runs;
}

void criterion_9(const Options& o, CriterionResult& r) {
  const double scale = o.quick ? 10.0 : 1.0;
  double unity = 0.0;
  for (auto [len, n] : {std::pair{60.0, 4096u}, std::pair{40.0, 1024u}, std::pair{100.0, 2048u}}) {
    unity = std::max(unity, lp::DyadicPartition(Grid1D(len, n)).unity_residual());
  }
  r.checks.push_back(less("partition of unity residual", unity, 1e-12 * scale, Basis::derived));

  const Grid1D g(60.0, 1024);
  double bony = 0.0;
  for (std::uint64_t i = 0; i < (o.quick ? 3u : 10u); ++i) {
    auto rng = stream_rng(o.seed + 9, i);
    const ComplexField f = random_band_limited(g, rng, 511, 0.0);
    const ComplexField h = random_band_limited(g, rng, 511, 0.0);
    const ComplexField exact = dealiased_product(f, h);
    const ComplexField diff = lp::bony_decompose(f, h).total() - exact;
    bony = std::max(bony, l2_norm(diff) / l2_norm(exact));
  }
  r.checks.push_back(less("Bony reconstruction relative residual", bony, 1e-10 * scale,
                          Basis::identity));

  json probes = json::array();
  const std::size_t samples = o.quick ? 30 : 100;
  for (double s : {0.75, 1.0, 1.5}) {
    const auto coarse = lp::product_estimate_probe(Grid1D(60.0, 512), samples, s, o.seed + 90);
    const auto fine = lp::product_estimate_probe(Grid1D(60.0, 1024), samples, s, o.seed + 90);
    char tag[32];
    std::snprintf(tag, sizeof tag, " (s = %.2f)", s);
    r.checks.push_back(finite(std::string("H^s product ratio") + tag, fine.max_ratio_hs,
                              Basis::derived));
    r.checks.push_back(finite(std::string("H^{s-1} product ratio") + tag, fine.max_ratio_lower,
                              Basis::derived));
    r.checks.push_back(at_most(std::string("|r_2N / r_N - 1|, H^s") + tag,
                               std::abs(fine.max_ratio_hs / coarse.max_ratio_hs - 1.0),
                               0.05 * scale, Basis::derived));
    r.checks.push_back(at_most(std::string("|r_2N / r_N - 1|, H^{s-1}") + tag,
                               std::abs(fine.max_ratio_lower / coarse.max_ratio_lower - 1.0),
                               0.05 * scale, Basis::derived));
    probes.push_back({{"s", s},
                      {"coarse", {{"hs", coarse.max_ratio_hs}, {"lower", coarse.max_ratio_lower}}},
                      {"fine", {{"hs", fine.max_ratio_hs}, {"lower", fine.max_ratio_lower}}}});
  }
  r.details["product_probes"] = probes;
}

void criterion_10(const Options& o, CriterionResult& r) {
  const double scale = o.quick ? 10.0 : 1.0;
  const std::size_t count = o.quick ? 20 : 100;
  const Grid1D g(40.0, 1024);
  double rho_err = 0.0, v_err = 0.0, q_err = 0.0;
  std::size_t redrawn = 0;
  for (std::size_t i = 0; i < count; ++i) {
    auto rng = stream_rng(o.seed + 10, i);
    const HydroState st = random_valid_state(g, rng, 0.3, 0.5);
    const HydroState back = madelung_forward(madelung_inverse(st));
    for (std::size_t j = 0; j < g.size(); ++j) {
      rho_err = std::max(rho_err, std::abs(back.rho()[j] - st.rho()[j]) / st.rho()[j]);
      v_err = std::max(v_err, std::abs(back.v()[j] - st.v()[j]));
    }
    std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
    // Overlapping bumps can pull |q| close to zero; such draws are near-vacuum
    // rather than vacuum free, so they are redrawn.
    std::optional<ComplexField> drawn;
    while (!drawn) {
      ComplexField f = std::polar(1.0, angle(rng)) * random_vacuum_free(g, rng, 0.3, 1.0);
      double lo = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < g.size(); ++j) lo = std::min(lo, std::abs(f[j]));
      if (lo >= kRoundTripModulusFloor) {
        drawn = std::move(f);
      } else {
        ++redrawn;
      }
    }
    const ComplexField& q = *drawn;
    const ComplexField qt = madelung_inverse(madelung_forward(q));
    const PhaseAlignment al = phase_align(qt, q, SobolevIndex(0.0), RealVector(g.size(), 1.0));
    for (std::size_t j = 0; j < g.size(); ++j) {
      q_err = std::max(q_err, std::abs(al.lambda * qt[j] - q[j]));
    }
  }
  r.checks.push_back(less("M(M^-1(state)): max relative rho error", rho_err, 1e-8 * scale,
                          Basis::identity));
  r.checks.push_back(less("M(M^-1(state)): max v error", v_err, 1e-8 * scale, Basis::identity));
  r.checks.push_back(less("M^-1(M(q)) up to phase: max error", q_err, 1e-8 * scale,
                          Basis::identity));
  r.details = {{"states", count}, {"fields", count},
               {"redrawn_near_vacuum", redrawn},
               {"modulus_floor", kRoundTripModulusFloor},
               {"grid", io::to_json(g)}};
}

CriterionResult run_one(int id, const Options& o, Context& ctx) {
  if (id < 1 || id > kCriterionCount) throw ParameterError("no criterion " + std::to_string(id));
  CriterionResult r;
  r.id = id;
  r.title = kTitles[id - 1];
  r.budget_seconds = kBudgets[id - 1];
  const auto t0 = std::chrono::steady_clock::now();
  try {
    switch (id) {
      case 1: criterion_1(o, r); break;
      case 2: criterion_2(o, r); break;
      case 3: criterion_3(o, r); break;
      case 4: criterion_4(o, r, ctx); break;
      case 5: criterion_5(o, r, ctx); break;
      case 6: criterion_6(o, r); break;
      case 7: criterion_7(o, r); break;
      case 8: criterion_8(o, r); break;
      case 9: criterion_9(o, r); break;
      case 10: criterion_10(o, r); break;
    }
    r.passed = !r.checks.empty();
    for (const auto& c : r.checks) r.passed = r.passed && c.passed;
  } catch (const std::exception& e) {
    r.error = e.what();
    r.passed = false;
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace

CriterionResult run_criterion(int id, const Options& options) {
  Context ctx;
  return run_one(id, options, ctx);
}

std::vector<CriterionResult> run_suite(const Options& options, const std::vector<int>& ids,
                                       const std::function<void(const CriterionResult&)>& on_result) {
  std::vector<int> todo = ids;
  if (todo.empty()) {
    for (int i = 1; i <= kCriterionCount; ++i) todo.push_back(i);
  }
  Context ctx;
  std::vector<CriterionResult> out;
  for (int id : todo) {
    out.push_back(run_one(id, options, ctx));
    if (on_result) on_result(out.back());
  }
  return out;
}

std::string summary_line(const CriterionResult& r) {
  char head[96];
  std::snprintf(head, sizeof head, "%s %2d  %-24s", r.passed ? "PASS" : "FAIL", r.id,
                r.title.c_str());
  std::string line = head;
  if (!r.error.empty()) {
    line += "  error: " + r.error;
  } else {
    // The first failing check, or the first check when all pass.
    const Check* shown = r.checks.empty() ? nullptr : &r.checks.front();
    for (const auto& c : r.checks) {
      if (!c.passed) {
        shown = &c;
        break;
      }
    }
    if (shown) {
      char buf[256];
      if (shown->relation == "in") {
        std::snprintf(buf, sizeof buf, "  %s = %.3g in [%.3g, %.3g]", shown->name.c_str(),
                      shown->value, shown->bound, shown->bound_hi);
      } else if (shown->relation == "finite") {
        std::snprintf(buf, sizeof buf, "  %s = %.3g finite", shown->name.c_str(), shown->value);
      } else {
        std::snprintf(buf, sizeof buf, "  %s = %.3g %s %.3g", shown->name.c_str(), shown->value,
                      shown->relation.c_str(), shown->bound);
      }
      line += buf;
    }
  }
  char tail[64];
  std::snprintf(tail, sizeof tail, "  (%.2f s)", r.seconds);
  line += tail;
  if (r.seconds > r.budget_seconds) line += " over budget";
  return line;
}

json to_json(const Check& c) {
  json j = {{"name", c.name},
            {"value", c.value},
            {"relation", c.relation},
            {"bound", c.bound},
            {"basis", to_string(c.basis)},
            {"passed", c.passed}};
  if (c.relation == "in") j["bound_hi"] = c.bound_hi;
  return j;
}

json to_json(const CriterionResult& r, bool with_timing) {
  json checks = json::array();
  for (const auto& c : r.checks) checks.push_back(to_json(c));
  json j = {{"id", r.id},
            {"title", r.title},
            {"passed", r.passed},
            {"checks", checks},
            {"details", r.details}};
  if (!r.error.empty()) j["error"] = r.error;
  if (with_timing) j["timing"] = {{"seconds", r.seconds}, {"budget_seconds", r.budget_seconds}};
  return j;
}

}  // namespace mlab::acceptance
