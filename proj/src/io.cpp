#include "madelung_lab/io.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#include <unistd.h>

namespace mlab::io {

namespace fs = std::filesystem;

void write_atomic(const fs::path& path, std::string_view content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw Error("write failed: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error("cannot rename into " + path.string() + ": " + ec.message());
  }
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

namespace {

std::string header(const char* tag, const Grid1D& g, const char* columns) {
  return std::string("# ") + tag + " L=" + format_double(g.length()) +
         " N=" + std::to_string(g.size()) + "\n" + columns + "\n";
}

struct ParsedTable {
  Grid1D grid;
  std::vector<std::array<double, 3>> rows;
};

ParsedTable parse_table(const std::string& text, const char* tag, const char* columns) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind(std::string("# ") + tag, 0) != 0) {
    throw ParameterError(std::string("snapshot: expected header '# ") + tag + "'");
  }
  double length = 0.0;
  unsigned long long n = 0;
  const auto lpos = line.find(" L=");
  const auto npos = line.find(" N=");
  if (lpos == std::string::npos || npos == std::string::npos ||
      std::sscanf(line.c_str() + lpos, " L=%lf", &length) != 1 ||
      std::sscanf(line.c_str() + npos, " N=%llu", &n) != 1) {
    throw ParameterError("snapshot: header lacks L= or N=");
  }
  ParsedTable t{Grid1D(length, static_cast<std::size_t>(n)), {}};
  if (!std::getline(in, line) || line != columns) {
    throw ParameterError(std::string("snapshot: expected columns '") + columns + "'");
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::array<double, 3> row{};
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &row[0], &row[1], &row[2]) != 3) {
      throw ParameterError("snapshot: malformed row '" + line + "'");
    }
    t.rows.push_back(row);
  }
  if (t.rows.size() != t.grid.size()) {
    throw ParameterError("snapshot: expected " + std::to_string(t.grid.size()) + " rows, got " +
                         std::to_string(t.rows.size()));
  }
  for (std::size_t j = 0; j < t.rows.size(); ++j) {
    if (std::abs(t.rows[j][0] - t.grid.x(j)) > 1e-9 * t.grid.length()) {
      throw InvalidGridError("snapshot: x column does not match the grid at row " +
                             std::to_string(j));
    }
  }
  return t;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParameterError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::string field_csv(const ComplexField& q) {
  const Grid1D& g = q.grid();
  std::string out = header(kFieldTag, g, "x,re_q,im_q");
  for (std::size_t j = 0; j < q.size(); ++j) {
    out += format_double(g.x(j)) + "," + format_double(q[j].real()) + "," +
           format_double(q[j].imag()) + "\n";
  }
  return out;
}

std::string state_csv(const HydroState& s) {
  const Grid1D& g = s.grid();
  std::string out = header(kStateTag, g, "x,rho,v");
  for (std::size_t j = 0; j < s.size(); ++j) {
    out += format_double(g.x(j)) + "," + format_double(s.rho()[j]) + "," +
           format_double(s.v()[j]) + "\n";
  }
  return out;
}

ComplexField parse_field_csv(const std::string& text) {
  const ParsedTable t = parse_table(text, kFieldTag, "x,re_q,im_q");
  ComplexVector v(t.rows.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = Complex(t.rows[j][1], t.rows[j][2]);
  return ComplexField(t.grid, std::move(v));
}

HydroState parse_state_csv(const std::string& text) {
  const ParsedTable t = parse_table(text, kStateTag, "x,rho,v");
  RealVector rho(t.rows.size()), v(t.rows.size());
  for (std::size_t j = 0; j < v.size(); ++j) {
    rho[j] = t.rows[j][1];
    v[j] = t.rows[j][2];
  }
  return HydroState(t.grid, std::move(rho), std::move(v));
}

ComplexField read_field_csv(const fs::path& path) { return parse_field_csv(slurp(path)); }
HydroState read_state_csv(const fs::path& path) { return parse_state_csv(slurp(path)); }

std::string diagnostics_csv(const std::vector<Diagnostics>& diags) {
  std::string out = "t,energy,min_modulus_or_density,mass_like\n";
  for (const auto& d : diags) {
    out += format_double(d.t) + "," + format_double(d.energy) + "," + format_double(d.min_value) +
           "," + format_double(d.mass_like) + "\n";
  }
  return out;
}

json to_json(const Grid1D& g) { return {{"L", g.length()}, {"N", g.size()}}; }

json to_json(const EnergyReport& r) {
  return {{"s", r.s},
          {"total", r.total},
          {"gradient_part", r.gradient_part},
          {"amplitude_part", r.amplitude_part},
          {"L", r.length},
          {"N", r.n_points}};
}

json to_json(const MetricReport& r) {
  json per_ball = json::array();
  for (const auto& [k, d] : r.per_ball) per_ball.push_back({{"k", k}, {"d_star", d}});
  json j = {{"s", r.s},
            {"d_s", r.d_s},
            {"theta_s", r.theta_s ? json(*r.theta_s) : json(nullptr)},
            {"per_ball", per_ball},
            {"L", r.length},
            {"N", r.n_points},
            {"y_nodes", r.y_nodes},
            {"y_stride", r.y_stride}};
  if (r.seed) j["seed"] = *r.seed;
  return j;
}

json to_json(const SimConfig& c) {
  return {{"dt", c.dt},
          {"t_end", c.t_end},
          {"scheme", to_string(c.scheme)},
          {"snapshot_stride", c.snapshot_stride},
          {"rho_floor", c.rho_floor},
          {"dealias", c.dealias},
          {"cfl", c.cfl},
          {"fault", to_string(c.fault)}};
}

json to_json(const Diagnostics& d) {
  return {{"t", d.t}, {"energy", d.energy}, {"min", d.min_value}, {"mass_like", d.mass_like}};
}

json to_json(const VacuumCertificate& c) {
  return {{"energy_bound", c.energy_bound},
          {"threshold", c.threshold},
          {"observed_min", c.observed_min},
          {"passed", c.passed}};
}

json to_json(const ConjugationReport& r) {
  return {{"s", r.s},       {"t_end", r.t_end},   {"N", r.n_points},
          {"L", r.length},  {"gp_dt", r.gp_dt},   {"hgp_dt", r.hgp_dt},
          {"times", r.times}, {"discrepancy", r.discrepancy},
          {"final_discrepancy", r.final_discrepancy}};
}

json to_json(const RatioStats& r) {
  return {{"max", r.max}, {"min", r.min}, {"bin_edges", r.bin_edges}, {"counts", r.counts}};
}

json to_json(const BilipschitzReport& r) {
  return {{"s", r.s},
          {"requested", r.requested},
          {"attempts", r.attempts},
          {"accepted", r.accepted},
          {"skipped_coincident", r.skipped_coincident},
          {"rejected", r.rejected},
          {"rejections", r.rejections},
          {"theta_over_d", to_json(r.theta_over_d)},
          {"d_over_theta", to_json(r.d_over_theta)}};
}

json to_json(const PhaseExponentialReport& r) {
  return {{"s", r.s},
          {"gamma", r.gamma},
          {"samples", r.samples},
          {"skipped", r.skipped},
          {"max_ratio", r.max_ratio},
          {"ratios", r.ratios}};
}

namespace {

template <class Tr, class Csv>
void export_impl(const fs::path& dir, const Tr& tr, const json& extra, Csv&& csv,
                 const char* kind) {
  fs::create_directories(dir);
  json manifest = {{"kind", kind},
                   {"grid", to_json(tr.grid)},
                   {"config", to_json(tr.config)},
                   {"scheme", to_string(tr.config.scheme)},
                   {"steps", tr.steps},
                   {"dt_used", tr.dt},
                   {"snapshots", json::array()}};
  for (auto it = extra.begin(); it != extra.end(); ++it) manifest[it.key()] = it.value();
  for (std::size_t i = 0; i < tr.states.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "snapshot_%05zu.csv", i);
    write_atomic(dir / name, csv(tr.states[i]));
    manifest["snapshots"].push_back({{"file", name}, {"t", tr.times[i]}});
  }
  write_atomic(dir / "diagnostics.csv", diagnostics_csv(tr.diagnostics));
  write_atomic(dir / "manifest.json", manifest.dump(2) + "\n");
}

}  // namespace

void export_trajectory(const fs::path& dir, const GpTrajectory& tr, const json& extra) {
  export_impl(dir, tr, extra, [](const ComplexField& q) { return field_csv(q); }, "gp");
}

void export_trajectory(const fs::path& dir, const HgpTrajectory& tr, const json& extra) {
  export_impl(dir, tr, extra, [](const HydroState& s) { return state_csv(s); }, "hgp");
}

}  // namespace mlab::io
