#include "rps/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <openssl/evp.h>

#include "rps/csv.hpp"
#include "rps/embedding.hpp"
#include "rps/observables.hpp"
#include "rps/state.hpp"
#include "rps/volterra.hpp"

#ifndef RPS_VERSION
#define RPS_VERSION "unknown"
#endif

namespace rps::cli {

namespace fs = std::filesystem;

namespace {

constexpr double kCrossCheckTolerance = 1e-5;
constexpr const char* kMethod = "rk4-step-halving (cavity embedding)";

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t");
    return std::string(s.substr(b, e - b + 1));
}

double parse_number(std::string_view text)
{
    const std::string t = trim(text);
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(t, &used);
    } catch (const std::exception&) {
        throw RequestError("not a number: '" + t + "'");
    }
    if (used != t.size() || !std::isfinite(v))
        throw RequestError("not a number: '" + t + "'");
    return v;
}

std::vector<std::string> split(std::string_view s, char sep)
{
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (;;) {
        const auto pos = s.find(sep, start);
        parts.emplace_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos)
            return parts;
        start = pos + 1;
    }
}

AxisTarget parse_target(std::string_view text)
{
    const std::string t = trim(text);
    AxisTarget target;
    std::size_t i = 0;
    while (i < t.size() && (std::isalnum(static_cast<unsigned char>(t[i])) || t[i] == '_' || t[i] == '.'))
        ++i;
    target.path = t.substr(0, i);
    if (target.path.empty())
        throw RequestError("sweep axis target needs a parameter path: '" + t + "'");
    std::string rest = t.substr(i);
    if (!rest.empty() && rest[0] == '*') {
        std::size_t used = 0;
        try {
            target.scale = std::stod(rest.substr(1), &used);
        } catch (const std::exception&) {
            throw RequestError("bad scale in sweep axis target '" + t + "'");
        }
        rest = rest.substr(1 + used);
    }
    if (!rest.empty()) {
        if (rest[0] != '+' && rest[0] != '-')
            throw RequestError("bad sweep axis target '" + t + "'");
        target.offset = parse_number(rest);
    }
    return target;
}

std::string json_pointer(std::string_view path)
{
    if (path.empty())
        throw RequestError("empty parameter path");
    std::string ptr = "/";
    for (char c : path)
        ptr += (c == '.') ? '/' : c;
    return ptr;
}

std::string time_tag(double t)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", t);
    return buf;
}

std::string sha256_hex(const std::string& data)
{
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("sha256 failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 0xf];
    }
    return out;
}

struct FileRecord {
    std::string path;  // relative to the output directory
    std::string sha256;
};

void ensure_dir(const fs::path& dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir))
        throw IoError("cannot create output directory '" + dir.string() + "'");
}

FileRecord write_file(const fs::path& root, const std::string& rel, const std::string& content)
{
    const fs::path p = root / rel;
    std::ofstream f(p, std::ios::binary | std::ios::trunc);
    if (!f)
        throw IoError("cannot open '" + p.string() + "' for writing");
    f << content;
    f.close();
    if (!f)
        throw IoError("write to '" + p.string() + "' failed");
    return {rel, sha256_hex(content)};
}

struct Solved {
    AmplitudeTrajectory traj;
    EmbeddingReport report;
    double cross_check_diff = -1.0;  // negative when not run
};

Solved solve(const Scenario& s, bool cross_check)
{
    Solved out;
    out.traj = solve_embedded(s, {}, &out.report);
    if (cross_check) {
        const AmplitudeTrajectory v = solve_volterra(s);
        if (v.size() != out.traj.size())
            throw SolverError("cross-check grids differ");
        double d = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i)
            d = std::max(d, std::abs(v.c2[i] - out.traj.c2[i]));
        if (!(d <= kCrossCheckTolerance)) {
            std::ostringstream msg;
            msg << "cross-check failed: max |c2 difference| = " << d << " exceeds " << kCrossCheckTolerance;
            throw SolverError(msg.str());
        }
        out.cross_check_diff = d;
    }
    return out;
}

bool keep_row(std::size_t i, std::size_t n, std::size_t stride)
{
    return i % stride == 0 || i + 1 == n;
}

std::vector<FileRecord> write_outputs(const Scenario& s, const Solved& solved, const OutputSet& o, const fs::path& root,
                                      const std::string& prefix)
{
    std::vector<FileRecord> files;
    const auto& traj = solved.traj;
    const double beta = s.params.beta;
    const std::size_t stride = std::max<std::size_t>(1, o.stride);

    if (o.trajectory) {
        std::ostringstream os;
        CsvWriter csv(os, {"t", "re_c1", "im_c1", "re_c2", "im_c2", "re_c_cav", "im_c_cav", "emitted"});
        for (std::size_t i = 0; i < traj.size(); ++i)
            if (keep_row(i, traj.size(), stride))
                csv.row({traj.times[i], traj.c1[i].real(), traj.c1[i].imag(), traj.c2[i].real(), traj.c2[i].imag(),
                         traj.c_cav[i].real(), traj.c_cav[i].imag(), traj.emitted[i]});
        files.push_back(write_file(root, prefix + "trajectory.csv", os.str()));
    }
    if (o.efficiency) {
        const EfficiencyCurve eff = efficiency(traj, beta);
        std::ostringstream os;
        CsvWriter csv(os, {"t", "eta"});
        for (std::size_t i = 0; i < eff.times.size(); ++i)
            if (keep_row(i, eff.times.size(), stride))
                csv.row({eff.times[i], eff.eta[i]});
        files.push_back(write_file(root, prefix + "efficiency.csv", os.str()));
    }
    for (double t : o.packet_times) {
        const WavePacket w = wavepacket(traj, s, t, o.packet_points);
        std::ostringstream os;
        CsvWriter csv(os, {"z", "re_phi", "im_phi", "abs_phi"});
        for (std::size_t j = 0; j < w.z.size(); ++j)
            csv.row({w.z[j], w.phi[j].real(), w.phi[j].imag(), std::abs(w.phi[j])});
        files.push_back(write_file(root, prefix + "packet_t" + time_tag(t) + ".csv", os.str()));
    }
    for (double t : o.spectrum_times) {
        const ModeFunction m = mode_function(traj, beta, t);
        std::ostringstream os;
        CsvWriter csv(os, {"omega", "re_f1", "im_f1", "abs_f1"});
        for (std::size_t j = 0; j < m.omegas.size(); ++j)
            csv.row({m.omegas[j], m.f1[j].real(), m.f1[j].imag(), std::abs(m.f1[j])});
        files.push_back(write_file(root, prefix + "spectrum_t" + time_tag(t) + ".csv", os.str()));
    }
    for (double t : o.wigner_times) {
        const double eta = std::clamp(beta * traj.emitted[traj.index_at(t)], 0.0, 1.0);
        const WignerGrid grid = wigner_grid(ModeState(eta), o.wigner_half_width, o.wigner_points);
        std::ostringstream os;
        write_wigner_csv(os, grid);
        files.push_back(write_file(root, prefix + "wigner_t" + time_tag(t) + ".csv", os.str()));
    }
    return files;
}

nlohmann::json files_json(const std::vector<FileRecord>& files)
{
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& f : files)
        arr.push_back({{"path", f.path}, {"sha256", f.sha256}});
    return arr;
}

nlohmann::json solver_json(const Scenario& s, bool cross_check)
{
    return {{"method", kMethod},
            {"dt", s.dt},
            {"steps", s.steps()},
            {"cross_check", cross_check},
            {"cross_check_tolerance", kCrossCheckTolerance}};
}

void write_manifest(const fs::path& root, const nlohmann::json& manifest)
{
    write_file(root, "manifest.json", manifest.dump(2) + "\n");
}

// Scenario of every sweep point in lexicographic order, last axis fastest.
std::vector<Scenario> sweep_scenarios(const RunRequest& req, std::vector<std::vector<double>>* axis_values)
{
    std::size_t total = 1;
    for (const auto& axis : req.sweep) {
        if (axis.values.empty())
            throw RequestError("sweep axis '" + axis.label + "' has no values");
        if (total > req.sweep_cap / axis.values.size() + 1)
            total = req.sweep_cap + 1;
        else
            total *= axis.values.size();
    }
    if (total > req.sweep_cap)
        throw RequestError("sweep has more than " + std::to_string(req.sweep_cap) + " points");

    std::vector<Scenario> out;
    out.reserve(total);
    for (std::size_t p = 0; p < total; ++p) {
        Scenario s = req.scenario;
        std::vector<double> vals(req.sweep.size());
        std::size_t rest = p;
        for (std::size_t a = req.sweep.size(); a-- > 0;) {
            const auto& axis = req.sweep[a];
            vals[a] = axis.values[rest % axis.values.size()];
            rest /= axis.values.size();
        }
        for (std::size_t a = 0; a < req.sweep.size(); ++a)
            for (const auto& t : req.sweep[a].targets)
                set_parameter(s, t.path, t.scale * vals[a] + t.offset);
        out.push_back(std::move(s));
        if (axis_values)
            axis_values->push_back(std::move(vals));
    }
    return out;
}

void check_times(const std::vector<double>& ts, const Scenario& s, const char* what)
{
    for (double t : ts)
        if (!(t > 0.0 && t <= s.t_end * (1.0 + 1e-12)))
            throw RequestError(std::string(what) + " time " + time_tag(t) + " outside (0, t_end]");
}

void check_outputs(const OutputSet& o, const Scenario& s)
{
    check_times(o.packet_times, s, "packet");
    check_times(o.spectrum_times, s, "spectrum");
    check_times(o.wigner_times, s, "wigner");
    if (o.packet_points < 2)
        throw RequestError("packet needs at least 2 points");
    if (o.wigner_points < 2 || !(o.wigner_half_width > 0.0))
        throw RequestError("wigner grid needs half width > 0 and at least 2 points");
}

struct PointOutcome {
    SweepPoint point;
    std::vector<FileRecord> files;
};

PointOutcome evaluate_point(const RunRequest& req, const Scenario& s, std::vector<double> axis_values,
                            const std::string* prefix)
{
    PointOutcome r;
    const Solved solved = solve(s, req.cross_check);
    r.point.axis_values = std::move(axis_values);
    r.point.eta_final = asymptotic_efficiency(solved.traj, s.params.beta);
    r.point.eta_end = s.params.beta * solved.traj.emitted.back();
    r.point.packet_width = std::numeric_limits<double>::quiet_NaN();
    r.point.peak_abs_phi = std::numeric_limits<double>::quiet_NaN();
    if (r.point.eta_end > 0.0) {
        const WavePacket w = wavepacket(solved.traj, s, solved.traj.times.back(), req.outputs.packet_points);
        r.point.packet_width = packet_width(w);
        double peak = 0.0;
        for (const auto& v : w.phi)
            peak = std::max(peak, std::abs(v));
        r.point.peak_abs_phi = peak;
    }
    if (prefix) {
        ensure_dir(req.out_dir / *prefix);
        r.files = write_outputs(s, solved, req.outputs, req.out_dir, *prefix + "/");
    }
    return r;
}

std::vector<PointOutcome> run_sweep(const RunRequest& req, bool write_points)
{
    std::vector<std::vector<double>> axis_values;
    const std::vector<Scenario> scenarios = sweep_scenarios(req, &axis_values);
    const std::size_t n = scenarios.size();
    std::vector<PointOutcome> results(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n)
                return;
            try {
                char name[32];
                std::snprintf(name, sizeof name, "point_%05zu", i);
                const std::string prefix = name;
                results[i] = evaluate_point(req, scenarios[i], axis_values[i], write_points ? &prefix : nullptr);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        const std::size_t workers = std::clamp<std::size_t>(req.jobs, 1, n);
        for (std::size_t k = 0; k + 1 < workers; ++k)
            pool.emplace_back(worker);
        worker();
    }
    for (const auto& e : errors)
        if (e)
            std::rethrow_exception(e);
    return results;
}

}  // namespace

bool OutputSet::any() const
{
    return trajectory || efficiency || !packet_times.empty() || !spectrum_times.empty() || !wigner_times.empty();
}

void to_json(nlohmann::json& j, const OutputSet& o)
{
    j = {{"trajectory", o.trajectory},
         {"efficiency", o.efficiency},
         {"packet", o.packet_times},
         {"spectrum", o.spectrum_times},
         {"wigner", o.wigner_times},
         {"packet_points", o.packet_points},
         {"wigner_half_width", o.wigner_half_width},
         {"wigner_points", o.wigner_points},
         {"stride", o.stride}};
}

void from_json(const nlohmann::json& j, OutputSet& o)
{
    o = OutputSet{};
    o.trajectory = j.value("trajectory", false);
    o.efficiency = j.value("efficiency", false);
    o.packet_times = j.value("packet", std::vector<double>{});
    o.spectrum_times = j.value("spectrum", std::vector<double>{});
    o.wigner_times = j.value("wigner", std::vector<double>{});
    o.packet_points = j.value("packet_points", o.packet_points);
    o.wigner_half_width = j.value("wigner_half_width", o.wigner_half_width);
    o.wigner_points = j.value("wigner_points", o.wigner_points);
    o.stride = j.value("stride", o.stride);
}

std::vector<double> parse_values(std::string_view text)
{
    const std::string t = trim(text);
    for (const char* fn : {"linspace", "logspace"}) {
        const std::string head = std::string(fn) + "(";
        if (t.rfind(head, 0) == 0) {
            if (t.back() != ')')
                throw RequestError("unterminated " + std::string(fn) + " in '" + t + "'");
            const auto args = split(std::string_view(t).substr(head.size(), t.size() - head.size() - 1), ',');
            if (args.size() != 3)
                throw RequestError(std::string(fn) + " takes (first, last, count)");
            const double a = parse_number(args[0]);
            const double b = parse_number(args[1]);
            const double nd = parse_number(args[2]);
            if (nd < 1.0 || nd != std::floor(nd))
                throw RequestError(std::string(fn) + " count must be a positive integer");
            const auto n = static_cast<std::size_t>(nd);
            const bool log = std::string_view(fn) == "logspace";
            if (log && !(a > 0.0 && b > 0.0))
                throw RequestError("logspace bounds must be > 0");
            std::vector<double> v(n);
            for (std::size_t i = 0; i < n; ++i) {
                const double f = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
                v[i] = log ? a * std::pow(b / a, f) : a + f * (b - a);
            }
            if (n > 1)
                v.back() = b;
            return v;
        }
    }
    std::vector<double> v;
    for (const auto& part : split(t, ','))
        v.push_back(parse_number(part));
    return v;
}

SweepAxis parse_axis(std::string_view spec)
{
    const auto eq = spec.find('=');
    if (eq == std::string_view::npos)
        throw RequestError("sweep axis needs the form TARGET=VALUES: '" + std::string(spec) + "'");
    SweepAxis axis;
    axis.label = trim(spec.substr(0, eq));
    for (const auto& part : split(axis.label, '&'))
        axis.targets.push_back(parse_target(part));
    axis.values = parse_values(spec.substr(eq + 1));
    return axis;
}

double get_parameter(const Scenario& s, std::string_view path)
{
    const nlohmann::json j = scenario_to_json(s);
    const nlohmann::json::json_pointer ptr(json_pointer(path));
    if (!j.contains(ptr) || !j.at(ptr).is_number())
        throw RequestError("unknown numeric parameter '" + std::string(path) + "'");
    return j.at(ptr).get<double>();
}

void set_parameter(Scenario& s, std::string_view path, double value)
{
    nlohmann::json j = scenario_to_json(s);
    const nlohmann::json::json_pointer ptr(json_pointer(path));
    if (!j.contains(ptr) || !j.at(ptr).is_number())
        throw RequestError("unknown numeric parameter '" + std::string(path) + "'");
    j[ptr] = value;
    try {
        s = scenario_from_json(j);
    } catch (const std::exception& e) {
        throw RequestError("setting " + std::string(path) + " = " + time_tag(value) + ": " + e.what());
    }
}

std::size_t resolve_jobs(std::size_t requested)
{
    if (const char* env = std::getenv("RPS_JOBS"); env && *env) {
        const double v = parse_number(env);
        if (v < 1.0 || v != std::floor(v))
            throw RequestError("RPS_JOBS must be a positive integer");
        return static_cast<std::size_t>(v);
    }
    if (requested > 0)
        return requested;
    return std::max(1u, std::thread::hardware_concurrency());
}

void validate_request(const RunRequest& req)
{
    try {
        req.scenario.validate();
    } catch (const std::exception& e) {
        throw RequestError(std::string("invalid scenario: ") + e.what());
    }
    if (req.sweep.empty()) {
        if (!req.outputs.any())
            throw RequestError("no outputs requested");
        check_outputs(req.outputs, req.scenario);
        return;
    }
    for (const auto& s : sweep_scenarios(req, nullptr))
        check_outputs(req.outputs, s);
}

nlohmann::json run(const RunRequest& req)
{
    validate_request(req);
    const auto start = std::chrono::steady_clock::now();
    const Scenario& s = req.scenario;
    ensure_dir(req.out_dir);
    const Solved solved = solve(s, req.cross_check);
    const auto files = write_outputs(s, solved, req.outputs, req.out_dir, "");
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    nlohmann::json solver = solver_json(s, req.cross_check);
    solver["error_estimate"] = solved.report.error_estimate;
    if (solved.cross_check_diff >= 0.0)
        solver["cross_check_max_c2_difference"] = solved.cross_check_diff;
    nlohmann::json manifest = {{"command", "run"},
                               {"version", RPS_VERSION},
                               {"scenario_name", req.scenario_name},
                               {"scenario", scenario_to_json(s)},
                               {"outputs", req.outputs},
                               {"cross_check", req.cross_check},
                               {"solver", solver},
                               {"eta_final", asymptotic_efficiency(solved.traj, s.params.beta)},
                               {"wall_time_s", wall},
                               {"files", files_json(files)}};
    write_manifest(req.out_dir, manifest);
    return manifest;
}

std::vector<SweepPoint> evaluate_sweep(const RunRequest& req)
{
    validate_request(req);
    std::vector<SweepPoint> out;
    for (auto& r : run_sweep(req, false))
        out.push_back(std::move(r.point));
    return out;
}

nlohmann::json sweep(const RunRequest& req)
{
    if (req.sweep.empty())
        throw RequestError("sweep needs at least one --axis");
    validate_request(req);
    const auto start = std::chrono::steady_clock::now();
    ensure_dir(req.out_dir);
    const auto results = run_sweep(req, req.outputs.any());

    std::vector<std::string> header;
    for (const auto& axis : req.sweep)
        header.push_back(axis.label);
    for (const char* h : {"eta_final", "eta_end", "packet_width", "peak_abs_phi"})
        header.emplace_back(h);
    std::ostringstream os;
    CsvWriter csv(os, header);
    std::vector<FileRecord> files;
    for (const auto& r : results) {
        std::vector<double> row = r.point.axis_values;
        row.insert(row.end(), {r.point.eta_final, r.point.eta_end, r.point.packet_width, r.point.peak_abs_phi});
        csv.row(row);
    }
    files.push_back(write_file(req.out_dir, "summary.csv", os.str()));
    for (const auto& r : results)
        files.insert(files.end(), r.files.begin(), r.files.end());
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    nlohmann::json axes = nlohmann::json::array();
    nlohmann::json specs = nlohmann::json::array();
    for (const auto& axis : req.sweep) {
        nlohmann::json targets = nlohmann::json::array();
        for (const auto& t : axis.targets)
            targets.push_back({{"path", t.path}, {"scale", t.scale}, {"offset", t.offset}});
        axes.push_back({{"label", axis.label}, {"targets", targets}, {"values", axis.values}});
        std::string values;
        for (double v : axis.values)
            values += (values.empty() ? "" : ",") + CsvWriter::format(v);
        specs.push_back(axis.label + "=" + values);
    }
    nlohmann::json manifest = {{"command", "sweep"},
                               {"version", RPS_VERSION},
                               {"scenario_name", req.scenario_name},
                               {"scenario", scenario_to_json(req.scenario)},
                               {"outputs", req.outputs},
                               {"cross_check", req.cross_check},
                               {"solver", solver_json(req.scenario, req.cross_check)},
                               {"axes", axes},
                               {"sweep", specs},
                               {"points", results.size()},
                               {"jobs", req.jobs},
                               {"wall_time_s", wall},
                               {"files", files_json(files)}};
    write_manifest(req.out_dir, manifest);
    return manifest;
}

namespace {

struct CommonOptions {
    std::string scenario;
    std::string config;
    std::string out = "rps_out";
    double dt = 0.0;
    bool cross_check = false;
    bool trajectory = false;
    bool efficiency = false;
    std::vector<double> packet;
    std::vector<double> spectrum;
    std::vector<double> wigner;
    std::size_t packet_points = 2001;
    double wigner_half_width = 4.0;
    std::size_t wigner_points = 257;
    std::size_t stride = 1;
    std::vector<std::string> axes;
    std::size_t jobs = 0;
    std::size_t max_runs = 10000;
};

void add_common(CLI::App* app, CommonOptions& o)
{
    app->add_option("--scenario", o.scenario, "Preset name (see `presets list`)");
    app->add_option("--config", o.config, "Scenario JSON, or a manifest.json from an earlier run");
    app->add_option("--out", o.out, "Output directory")->capture_default_str();
    app->add_option("--dt", o.dt, "Override the time step")->check(CLI::PositiveNumber);
    app->add_flag("--cross-check", o.cross_check, "Also solve the memory-kernel equation and compare C2");
    app->add_flag("--trajectory", o.trajectory, "Write trajectory.csv");
    app->add_flag("--efficiency", o.efficiency, "Write efficiency.csv");
    app->add_option("--packet", o.packet, "Wave-packet snapshot times")->delimiter(',');
    app->add_option("--spectrum", o.spectrum, "Mode-function times")->delimiter(',');
    app->add_option("--wigner", o.wigner, "Wigner-grid times")->delimiter(',');
    app->add_option("--packet-points", o.packet_points, "Points along z")->capture_default_str();
    app->add_option("--wigner-half-width", o.wigner_half_width, "Wigner grid half width")->capture_default_str();
    app->add_option("--wigner-points", o.wigner_points, "Wigner grid points per axis")->capture_default_str();
    app->add_option("--stride", o.stride, "Row stride for trajectory and efficiency CSVs")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
}

RunRequest build_request(const CommonOptions& o, const CLI::App& sub)
{
    RunRequest req;
    if (o.scenario.empty() == o.config.empty())
        throw RequestError("give exactly one of --scenario or --config");

    nlohmann::json manifest = nlohmann::json::object();
    if (!o.scenario.empty()) {
        try {
            req.scenario = make_figure_scenario(o.scenario);
        } catch (const std::exception& e) {
            throw RequestError(e.what());
        }
        req.scenario_name = o.scenario;
    } else {
        std::ifstream f(o.config);
        if (!f)
            throw RequestError("cannot read config '" + o.config + "'");
        try {
            const nlohmann::json j = nlohmann::json::parse(f);
            if (j.contains("scenario") && j.at("scenario").is_object()) {
                manifest = j;
                req.scenario = scenario_from_json(j.at("scenario"));
            } else {
                req.scenario = scenario_from_json(j);
            }
        } catch (const std::exception& e) {
            throw RequestError("config '" + o.config + "': " + e.what());
        }
        req.scenario_name = o.config;
    }
    if (sub.count("--dt") > 0)
        set_parameter(req.scenario, "dt", o.dt);

    req.outputs.trajectory = o.trajectory;
    req.outputs.efficiency = o.efficiency;
    req.outputs.packet_times = o.packet;
    req.outputs.spectrum_times = o.spectrum;
    req.outputs.wigner_times = o.wigner;
    req.outputs.packet_points = o.packet_points;
    req.outputs.wigner_half_width = o.wigner_half_width;
    req.outputs.wigner_points = o.wigner_points;
    req.outputs.stride = o.stride;
    if (!req.outputs.any() && manifest.contains("outputs"))
        req.outputs = manifest.at("outputs").get<OutputSet>();

    req.cross_check = o.cross_check || manifest.value("cross_check", false);
    req.out_dir = o.out;

    std::vector<std::string> axes = o.axes;
    if (axes.empty() && manifest.contains("sweep"))
        axes = manifest.at("sweep").get<std::vector<std::string>>();
    for (const auto& a : axes)
        req.sweep.push_back(parse_axis(a));
    req.sweep_cap = o.max_runs;
    req.jobs = resolve_jobs(o.jobs);
    return req;
}

std::string describe(const Scenario& s)
{
    std::ostringstream os;
    os << "R_k=" << s.params.rabi_vacuum << " pump=" << s.pump.kind() << " peak "
       << s.pump.peak(0.0, s.t_end) << " coupling=" << s.coupling.kind() << " t_end=" << s.t_end
       << " dt=" << s.dt;
    return os.str();
}

}  // namespace

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Cavity-assisted Raman single-photon source simulator"};
    app.set_version_flag("--version", std::string(RPS_VERSION));
    app.require_subcommand(1);

    CommonOptions run_opts;
    CommonOptions sweep_opts;
    auto* run_cmd = app.add_subcommand("run", "Simulate one scenario and write the requested outputs");
    add_common(run_cmd, run_opts);
    auto* sweep_cmd = app.add_subcommand("sweep", "Run a Cartesian parameter sweep");
    add_common(sweep_cmd, sweep_opts);
    sweep_cmd
        ->add_option("--axis", sweep_opts.axes,
                     "TARGET[&TARGET...]=VALUES with TARGET = path[*scale][+offset] and VALUES = "
                     "v1,v2,... | linspace(a,b,n) | logspace(a,b,n)")
        ->take_all();
    sweep_cmd->add_option("--jobs", sweep_opts.jobs, "Worker threads (RPS_JOBS overrides; 0 = all cores)");
    sweep_cmd->add_option("--max-runs", sweep_opts.max_runs, "Largest allowed sweep")->capture_default_str();
    auto* presets_cmd = app.add_subcommand("presets", "Figure presets");
    presets_cmd->require_subcommand(1);
    auto* list_cmd = presets_cmd->add_subcommand("list", "List preset names");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kInvalidRequest;
    }

    if (list_cmd->parsed()) {
        for (const auto& name : figure_scenario_names())
            out << name << "  " << describe(make_figure_scenario(name)) << "\n";
        return kOk;
    }

    const bool is_run = run_cmd->parsed();
    RunRequest req;
    try {
        req = build_request(is_run ? run_opts : sweep_opts, is_run ? *run_cmd : *sweep_cmd);
        if (is_run && !req.sweep.empty())
            throw RequestError("run takes no sweep axes; use the sweep subcommand");
        validate_request(req);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kInvalidRequest;
    }

    try {
        if (is_run) {
            const nlohmann::json m = run(req);
            out << "eta_final " << CsvWriter::format(m.at("eta_final").get<double>()) << "\n"
                << "wrote " << m.at("files").size() << " file(s) and manifest.json to " << req.out_dir.string() << "\n";
        } else {
            const nlohmann::json m = sweep(req);
            out << "swept " << m.at("points").get<std::size_t>() << " point(s) on " << req.jobs
                << " worker(s); summary in " << (req.out_dir / "summary.csv").string() << "\n";
        }
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return kIoFailure;
    } catch (const RequestError& e) {
        err << "error: " << e.what() << "\n";
        return kInvalidRequest;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kSolverFailure;
    }
    return kOk;
}

}  // namespace rps::cli
