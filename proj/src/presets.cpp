// Figure presets. Amplitudes and detunings are the published values; pulse
// centres, widths and durations are reconstructions of the drawn sequences
// and live here as named constants so they can be retuned in one place.

#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

#include "rps/model.hpp"

namespace rps {

namespace {

constexpr double kBeta = 0.9;
constexpr double kDetuning = 1e-3;

// Adiabatic passage: the cavity coupling is established before the pump.
constexpr double kStirapRabiVacuum = 5.0;
constexpr double kStirapPump = 10.0;
constexpr double kStirapCouplingCenter = 12.0;
constexpr double kStirapCouplingWidth = 6.0;
constexpr double kFig51PumpCenter = 18.0;
constexpr double kFig51PumpWidth = 5.0;
// fig5_3 swaps the Gaussian pump for a flat-topped one with slow edges.
constexpr double kFig53PumpOn = 15.0;
constexpr double kFig53PumpOff = 32.0;
constexpr double kFig53PumpEdge = 16.0;
constexpr double kFig51End = 30.0;
constexpr double kFig53End = 40.0;
constexpr double kStirapStep = 1e-3;

// Short intense pumping with a constant cavity coupling that is ramped off
// before the pump ends.
constexpr double kTwinRabiVacuum = 30.0;
constexpr double kTwinPump = 700.0;
// Each Gaussian of the fig5_4 pump has area 4 pi, so the Rabi angle passes
// pi exactly at each pump maximum: C2 changes sign there and the intracavity
// amplitude peaks in step with the pump.
const double kFig54Width = 4.0 * std::sqrt(std::numbers::pi) / kTwinPump;
constexpr double kFig55Width = 0.04;
constexpr double kTwinFirstCenter = 3.0;   // in widths
// Coupling zero this many widths after the second centre. The final
// efficiency swings strongly with this choice (it sets how much upper-state
// population is left for the cavity), so each preset carries its own.
constexpr double kFig54CouplingOff = 2.5;
constexpr double kFig55CouplingOff = 2.0;
constexpr double kFig54End = 1.0;
constexpr double kFig55End = 1.5;
constexpr double kFig54Step = 8e-6;
constexpr double kFig55Step = 4e-6;

constexpr double kSquareRabiVacuum = 70.0;
constexpr double kSquarePump = 570.0;
constexpr double kSquareStart = 0.05;
constexpr double kSquareDuration = 0.5;
constexpr double kSquareEdge = 0.01;
constexpr double kSquareCouplingOff = 0.5;  // coupling is zero from here on
constexpr double kSquareCouplingEdge = 0.05;
constexpr double kFig58End = 1.5;
constexpr double kFig58Step = 3e-6;

PhysicalParams params(double rabi_vacuum)
{
    return {rabi_vacuum, kBeta, kDetuning, kDetuning, 1.0};
}

Scenario stirap(PulseEnvelope pump, double t_end)
{
    Scenario s;
    s.params = params(kStirapRabiVacuum);
    s.pump = std::move(pump);
    s.coupling = Gaussian{1.0, kStirapCouplingCenter, kStirapCouplingWidth};
    s.t_end = t_end;
    s.dt = kStirapStep;
    return s;
}

}  // namespace

Scenario twin_peak_scenario(double width, double coupling_off, double t_end, double dt)
{
    Scenario s;
    s.params = params(kTwinRabiVacuum);
    const TwinPeak pump{kTwinPump, kTwinFirstCenter * width, width};
    s.pump = pump;
    // Ramp of one width ending coupling_off widths after the second peak.
    const double zero_from = pump.second_center() + coupling_off * width;
    s.coupling = SmoothedSquare{1.0, -1.0, zero_from - 0.5 * width, width};
    s.t_end = t_end;
    s.dt = dt;
    return s;
}

const std::vector<std::string>& figure_scenario_names()
{
    static const std::vector<std::string> names{"fig5_1", "fig5_3", "fig5_4", "fig5_5", "fig5_8"};
    return names;
}

Scenario make_figure_scenario(std::string_view name)
{
    if (name == "fig5_1")
        return stirap(Gaussian{kStirapPump, kFig51PumpCenter, kFig51PumpWidth}, kFig51End);
    if (name == "fig5_3")
        return stirap(SmoothedSquare{kStirapPump, kFig53PumpOn, kFig53PumpOff, kFig53PumpEdge}, kFig53End);
    if (name == "fig5_4")
        return twin_peak_scenario(kFig54Width, kFig54CouplingOff, kFig54End, kFig54Step);
    if (name == "fig5_5")
        return twin_peak_scenario(kFig55Width, kFig55CouplingOff, kFig55End, kFig55Step);
    if (name == "fig5_8") {
        Scenario s;
        s.params = params(kSquareRabiVacuum);
        s.pump = SmoothedSquare{kSquarePump, kSquareStart + 0.5 * kSquareEdge,
                                kSquareStart + kSquareDuration - 0.5 * kSquareEdge, kSquareEdge};
        s.coupling = SmoothedSquare{1.0, -1.0, kSquareCouplingOff - 0.5 * kSquareCouplingEdge, kSquareCouplingEdge};
        s.t_end = kFig58End;
        s.dt = kFig58Step;
        return s;
    }
    throw std::invalid_argument("unknown scenario '" + std::string(name) + "'");
}

double figure_snapshot_time(std::string_view name)
{
    static const std::map<std::string, double, std::less<>> snapshots{
        {"fig5_1", 30.0}, {"fig5_3", 40.0}, {"fig5_4", 0.3}, {"fig5_5", 1.0}, {"fig5_8", 1.0}};
    const auto it = snapshots.find(name);
    if (it == snapshots.end())
        throw std::invalid_argument("unknown scenario '" + std::string(name) + "'");
    return it->second;
}

}  // namespace rps
