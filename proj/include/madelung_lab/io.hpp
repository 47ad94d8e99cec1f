#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "madelung_lab/dynamics.hpp"
#include "madelung_lab/energy.hpp"
#include "madelung_lab/grid.hpp"
#include "madelung_lab/madelung.hpp"
#include "madelung_lab/metrics.hpp"

namespace mlab::io {

using nlohmann::json;

inline constexpr const char* kFieldTag = "madelung-lab-field v1";
inline constexpr const char* kStateTag = "madelung-lab-state v1";

/// Writes to a temporary sibling and renames it into place.
void write_atomic(const std::filesystem::path& path, std::string_view content);

/// %.17g: round-trips every double.
std::string format_double(double x);

std::uint64_t fnv1a(std::string_view bytes);
std::string hex64(std::uint64_t v);

// Snapshot CSV: one comment line "# <tag> L=<L> N=<N>", a column header,
// then N rows.
std::string field_csv(const ComplexField& q);
std::string state_csv(const HydroState& s);
ComplexField parse_field_csv(const std::string& text);
HydroState parse_state_csv(const std::string& text);
ComplexField read_field_csv(const std::filesystem::path& path);
HydroState read_state_csv(const std::filesystem::path& path);

std::string diagnostics_csv(const std::vector<Diagnostics>& diags);

json to_json(const Grid1D& g);
json to_json(const EnergyReport& r);
json to_json(const MetricReport& r);
json to_json(const SimConfig& c);
json to_json(const Diagnostics& d);
json to_json(const VacuumCertificate& c);
json to_json(const ConjugationReport& r);
json to_json(const RatioStats& r);
json to_json(const BilipschitzReport& r);
json to_json(const PhaseExponentialReport& r);

/// Directory with manifest.json, snapshot_<i>.csv and diagnostics.csv.
/// `extra` is merged into the manifest (seed, initial condition, ...).
void export_trajectory(const std::filesystem::path& dir, const GpTrajectory& tr,
                       const json& extra = json::object());
void export_trajectory(const std::filesystem::path& dir, const HgpTrajectory& tr,
                       const json& extra = json::object());

}  // namespace mlab::io
