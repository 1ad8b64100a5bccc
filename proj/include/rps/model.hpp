// Physical constants, pulse envelopes and scenarios for the pumped
// Lambda-atom / single-pole cavity model.
//
// Units: every time is measured in 1/Gamma_k and every frequency in Gamma_k,
// with c = 1, so lengths are in c/Gamma_k.

#pragma once

#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

#include <json.hpp>

namespace rps {

struct PhysicalParams {
    double rabi_vacuum = 0.0;  // R_k, maximum single-mode vacuum Rabi frequency
    double beta = 1.0;         // radiative fraction of the total cavity decay
    double delta_p = 0.0;      // pump detuning omega_p - omega_0
    double delta_c = 0.0;      // cavity detuning omega_k - omega_0
    double gamma = 1.0;        // total cavity linewidth; the time unit

    /// Throws std::invalid_argument when an invariant is broken.
    void validate() const;

    bool operator==(const PhysicalParams&) const = default;
};

struct Gaussian {
    double amplitude = 1.0;
    double center = 0.0;
    double width = 1.0;  // sigma in exp[-(t - center)^2 / sigma^2]
    bool operator==(const Gaussian&) const = default;
};

// Two equal-width Gaussians, the second centred three widths after the
// first.
struct TwinPeak {
    double amplitude = 1.0;
    double center = 0.0;  // first peak
    double width = 1.0;

    double second_center() const { return center + 3.0 * width; }
    bool operator==(const TwinPeak&) const = default;
};

// Flat top between t_on and t_off with quintic smoothstep edges of total
// width `edge` centred on each switching time. Exactly zero outside
// [t_on - edge/2, t_off + edge/2].
struct SmoothedSquare {
    double amplitude = 1.0;
    double t_on = 0.0;
    double t_off = 1.0;
    double edge = 0.1;
    bool operator==(const SmoothedSquare&) const = default;
};

struct Tabulated {
    std::vector<double> times;  // strictly increasing
    std::vector<double> values;
    bool operator==(const Tabulated&) const = default;
};

struct Constant {
    double amplitude = 0.0;
    bool operator==(const Constant&) const = default;
};

class PulseEnvelope {
public:
    using Variant = std::variant<Gaussian, TwinPeak, SmoothedSquare, Tabulated, Constant>;

    PulseEnvelope() : shape_(Constant{}) {}
    PulseEnvelope(Variant shape);  // NOLINT: implicit by intent

    template <class Shape>
        requires std::is_constructible_v<Variant, Shape> && (!std::is_same_v<std::decay_t<Shape>, Variant>)
    PulseEnvelope(Shape shape) : PulseEnvelope(Variant(std::move(shape)))  // NOLINT
    {
    }

    double operator()(double t) const;

    /// Largest value the envelope takes on [t0, t1], sampled at `n` points
    /// plus any analytic peak location inside the interval.
    double peak(double t0, double t1, std::size_t n = 4097) const;

    const Variant& shape() const { return shape_; }
    std::string_view kind() const;

    bool operator==(const PulseEnvelope&) const = default;

private:
    Variant shape_;
};

double eval_envelope(const PulseEnvelope& p, double t);

struct Scenario {
    PhysicalParams params;
    PulseEnvelope pump;      // Omega_p(t)
    PulseEnvelope coupling;  // g_c(t), unit maximum
    double t_end = 1.0;
    double dt = 1e-3;

    void validate() const;
    std::size_t steps() const;  // number of dt intervals covering [0, t_end]

    bool operator==(const Scenario&) const = default;
};

/// dt = min(1e-3, 0.05 / max(Omega_p,max, R_k)).
double default_step(const Scenario& s);

// JSON; the document carries "units": "gamma_k".
void to_json(nlohmann::json& j, const PhysicalParams& p);
void from_json(const nlohmann::json& j, PhysicalParams& p);
void to_json(nlohmann::json& j, const PulseEnvelope& p);
void from_json(const nlohmann::json& j, PulseEnvelope& p);
void to_json(nlohmann::json& j, const Scenario& s);
void from_json(const nlohmann::json& j, Scenario& s);

Scenario scenario_from_json(const nlohmann::json& j);
nlohmann::json scenario_to_json(const Scenario& s);

// Presets reconstructing the published figure scenarios.
const std::vector<std::string>& figure_scenario_names();
Scenario make_figure_scenario(std::string_view name);

/// The twin-peak family behind fig5_4 and fig5_5: 700-Gamma_k pump peaks of
/// the given width, first centre at three widths, R_k = 30, constant
/// coupling ramped (over one width) to zero `coupling_off` widths after the
/// second peak.
Scenario twin_peak_scenario(double width, double coupling_off, double t_end, double dt);

/// Snapshot time used for the wave-packet panel of each figure.
double figure_snapshot_time(std::string_view name);

}  // namespace rps
