// Command-line front end: presets, JSON configs, single runs and parameter
// sweeps with CSV export and a manifest.json per output directory.

#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "rps/model.hpp"

namespace rps::cli {

enum ExitCode : int {
    kOk = 0,
    kInvalidRequest = 2,
    kSolverFailure = 3,
    kIoFailure = 4,
};

// Bad preset, config, parameter path or sweep size; exit code 2.
class RequestError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Output directory or file could not be written; exit code 4.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct OutputSet {
    bool trajectory = false;
    bool efficiency = false;
    std::vector<double> packet_times;
    std::vector<double> spectrum_times;
    std::vector<double> wigner_times;
    std::size_t packet_points = 2001;
    double wigner_half_width = 4.0;
    std::size_t wigner_points = 257;
    std::size_t stride = 1;  // keep every stride-th row of trajectory/efficiency (last row always kept)

    bool any() const;
};

void to_json(nlohmann::json& j, const OutputSet& o);
void from_json(const nlohmann::json& j, OutputSet& o);

// One scenario parameter driven by a sweep axis: value = scale * x + offset.
struct AxisTarget {
    std::string path;  // dotted, e.g. "pump.amplitude", "params.beta", "dt"
    double scale = 1.0;
    double offset = 0.0;
};

// Axis spec grammar:  TARGET[&TARGET...]=VALUES
//   TARGET = path[*scale][(+|-)offset]
//   VALUES = v1,v2,...  |  linspace(a,b,n)  |  logspace(a,b,n)
// logspace runs geometrically from a to b (both > 0).
struct SweepAxis {
    std::string label;  // the text left of '='
    std::vector<AxisTarget> targets;
    std::vector<double> values;
};

SweepAxis parse_axis(std::string_view spec);
std::vector<double> parse_values(std::string_view text);

struct RunRequest {
    std::string scenario_name;  // preset name or config file path, informational
    Scenario scenario;
    OutputSet outputs;
    std::filesystem::path out_dir = "rps_out";
    bool cross_check = false;
    std::vector<SweepAxis> sweep;
    std::size_t jobs = 1;
    std::size_t sweep_cap = 10000;
};

/// Sets a numeric scenario parameter by dotted path; the modified scenario
/// is re-validated. Throws RequestError for unknown or non-numeric paths and
/// for values that break a scenario invariant.
void set_parameter(Scenario& s, std::string_view path, double value);
double get_parameter(const Scenario& s, std::string_view path);

/// Number of worker threads: RPS_JOBS when set, else `requested` when
/// nonzero, else the number of logical cores.
std::size_t resolve_jobs(std::size_t requested);

/// Checks sweep size, parameter paths and output times; throws RequestError.
void validate_request(const RunRequest& req);

/// Single run: writes the requested CSVs and manifest.json into out_dir and
/// returns the manifest.
nlohmann::json run(const RunRequest& req);

struct SweepPoint {
    std::vector<double> axis_values;
    double eta_final = 0.0;     // beta (emitted + |C_cav|^2) at t_end
    double eta_end = 0.0;       // beta emitted(t_end)
    double packet_width = 0.0;  // RMS width of the packet at t_end, NaN without excitation
    double peak_abs_phi = 0.0;  // max |phi| of the unit-norm packet, NaN without excitation
};

/// Cartesian product of the axes in lexicographic order (first axis
/// slowest), evaluated on `req.jobs` workers. Writes summary.csv, per-point
/// outputs under point_NNNNN/ when any output is requested, and
/// manifest.json.
nlohmann::json sweep(const RunRequest& req);

/// The sweep points without writing anything.
std::vector<SweepPoint> evaluate_sweep(const RunRequest& req);

/// Full command line; returns the process exit code.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rps::cli
