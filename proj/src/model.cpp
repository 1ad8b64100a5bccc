#include "rps/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rps {

namespace {

void require_finite(double v, const char* name)
{
    if (!std::isfinite(v))
        throw std::invalid_argument(std::string(name) + " must be finite");
}

// Quintic smoothstep, 0 for x <= 0 and 1 for x >= 1.
double smoothstep(double x)
{
    if (x <= 0.0)
        return 0.0;
    if (x >= 1.0)
        return 1.0;
    return x * x * x * (10.0 + x * (-15.0 + 6.0 * x));
}

double gaussian(double amplitude, double center, double width, double t)
{
    const double u = (t - center) / width;
    return amplitude * std::exp(-u * u);
}

struct Evaluator {
    double t;

    double operator()(const Gaussian& g) const { return gaussian(g.amplitude, g.center, g.width, t); }

    double operator()(const TwinPeak& p) const
    {
        return gaussian(p.amplitude, p.center, p.width, t) + gaussian(p.amplitude, p.second_center(), p.width, t);
    }

    double operator()(const SmoothedSquare& s) const
    {
        if (s.edge == 0.0)
            return (t >= s.t_on && t <= s.t_off) ? s.amplitude : 0.0;
        const double up = smoothstep((t - (s.t_on - 0.5 * s.edge)) / s.edge);
        const double down = 1.0 - smoothstep((t - (s.t_off - 0.5 * s.edge)) / s.edge);
        return s.amplitude * up * down;
    }

    double operator()(const Tabulated& tab) const
    {
        const auto& ts = tab.times;
        if (ts.empty() || t < ts.front() || t > ts.back())
            return 0.0;
        if (ts.size() == 1)
            return tab.values.front();
        auto it = std::upper_bound(ts.begin(), ts.end(), t);
        if (it == ts.end())
            return tab.values.back();
        const auto hi = static_cast<std::size_t>(it - ts.begin());
        const auto lo = hi - 1;
        const double f = (t - ts[lo]) / (ts[hi] - ts[lo]);
        return tab.values[lo] + f * (tab.values[hi] - tab.values[lo]);
    }

    double operator()(const Constant& c) const { return c.amplitude; }
};

void validate_shape(const PulseEnvelope::Variant& v)
{
    std::visit(
        [](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Gaussian>) {
                require_finite(s.amplitude, "gaussian amplitude");
                require_finite(s.center, "gaussian center");
                require_finite(s.width, "gaussian width");
                if (s.amplitude < 0.0 || s.width <= 0.0)
                    throw std::invalid_argument("gaussian needs amplitude >= 0 and width > 0");
            } else if constexpr (std::is_same_v<T, TwinPeak>) {
                require_finite(s.amplitude, "twin_peak amplitude");
                require_finite(s.center, "twin_peak center");
                require_finite(s.width, "twin_peak width");
                if (s.amplitude < 0.0 || s.width <= 0.0)
                    throw std::invalid_argument("twin_peak needs amplitude >= 0 and width > 0");
            } else if constexpr (std::is_same_v<T, SmoothedSquare>) {
                require_finite(s.amplitude, "smoothed_square amplitude");
                require_finite(s.t_on, "smoothed_square t_on");
                require_finite(s.t_off, "smoothed_square t_off");
                require_finite(s.edge, "smoothed_square edge");
                if (s.amplitude < 0.0 || s.edge < 0.0 || s.t_off < s.t_on)
                    throw std::invalid_argument("smoothed_square needs amplitude >= 0, edge >= 0, t_off >= t_on");
            } else if constexpr (std::is_same_v<T, Tabulated>) {
                if (s.times.size() != s.values.size())
                    throw std::invalid_argument("tabulated times and values differ in length");
                for (std::size_t i = 0; i < s.times.size(); ++i) {
                    require_finite(s.times[i], "tabulated time");
                    require_finite(s.values[i], "tabulated value");
                    if (s.values[i] < 0.0)
                        throw std::invalid_argument("tabulated values must be >= 0");
                    if (i > 0 && s.times[i] <= s.times[i - 1])
                        throw std::invalid_argument("tabulated times must be strictly increasing");
                }
            } else {
                require_finite(s.amplitude, "constant amplitude");
                if (s.amplitude < 0.0)
                    throw std::invalid_argument("constant amplitude must be >= 0");
            }
        },
        v);
}

}  // namespace

void PhysicalParams::validate() const
{
    require_finite(rabi_vacuum, "rabi_vacuum");
    require_finite(beta, "beta");
    require_finite(delta_p, "delta_p");
    require_finite(delta_c, "delta_c");
    require_finite(gamma, "gamma");
    if (rabi_vacuum < 0.0)
        throw std::invalid_argument("rabi_vacuum must be >= 0");
    if (beta < 0.0 || beta > 1.0)
        throw std::invalid_argument("beta must lie in [0, 1]");
    if (gamma != 1.0)
        throw std::invalid_argument("gamma is the unit of frequency and must equal 1");
}

PulseEnvelope::PulseEnvelope(Variant shape) : shape_(std::move(shape))
{
    validate_shape(shape_);
}

double PulseEnvelope::operator()(double t) const
{
    return std::visit(Evaluator{t}, shape_);
}

double PulseEnvelope::peak(double t0, double t1, std::size_t n) const
{
    double best = std::max((*this)(t0), (*this)(t1));
    if (n >= 2 && t1 > t0) {
        const double h = (t1 - t0) / static_cast<double>(n - 1);
        for (std::size_t i = 0; i < n; ++i)
            best = std::max(best, (*this)(t0 + h * static_cast<double>(i)));
    }
    std::vector<double> candidates;
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Gaussian>) {
                candidates.push_back(s.center);
            } else if constexpr (std::is_same_v<T, TwinPeak>) {
                candidates.push_back(s.center);
                candidates.push_back(s.second_center());
            } else if constexpr (std::is_same_v<T, SmoothedSquare>) {
                candidates.push_back(0.5 * (s.t_on + s.t_off));
            } else if constexpr (std::is_same_v<T, Tabulated>) {
                candidates = s.times;
            }
        },
        shape_);
    for (double c : candidates)
        if (c >= t0 && c <= t1)
            best = std::max(best, (*this)(c));
    return best;
}

std::string_view PulseEnvelope::kind() const
{
    switch (shape_.index()) {
    case 0: return "gaussian";
    case 1: return "twin_peak";
    case 2: return "smoothed_square";
    case 3: return "tabulated";
    default: return "constant";
    }
}

double eval_envelope(const PulseEnvelope& p, double t)
{
    return p(t);
}

void Scenario::validate() const
{
    params.validate();
    require_finite(t_end, "t_end");
    require_finite(dt, "dt");
    if (!(t_end > 0.0))
        throw std::invalid_argument("t_end must be > 0");
    if (!(dt > 0.0) || dt > t_end)
        throw std::invalid_argument("dt must satisfy 0 < dt <= t_end");
    if (coupling.peak(0.0, t_end) > 1.0 + 1e-12)
        throw std::invalid_argument("coupling envelope must stay within [0, 1]");
}

std::size_t Scenario::steps() const
{
    return static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
}

double default_step(const Scenario& s)
{
    const double fastest = std::max(s.pump.peak(0.0, s.t_end), s.params.rabi_vacuum);
    if (fastest <= 0.0)
        return 1e-3;
    return std::min(1e-3, 0.05 / fastest);
}

// ---------------------------------------------------------------- JSON

void to_json(nlohmann::json& j, const PhysicalParams& p)
{
    j = {{"rabi_vacuum", p.rabi_vacuum},
         {"beta", p.beta},
         {"delta_p", p.delta_p},
         {"delta_c", p.delta_c},
         {"gamma", p.gamma}};
}

void from_json(const nlohmann::json& j, PhysicalParams& p)
{
    p.rabi_vacuum = j.at("rabi_vacuum").get<double>();
    p.beta = j.at("beta").get<double>();
    p.delta_p = j.value("delta_p", 0.0);
    p.delta_c = j.value("delta_c", 0.0);
    p.gamma = j.value("gamma", 1.0);
    p.validate();
}

void to_json(nlohmann::json& j, const PulseEnvelope& p)
{
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Gaussian>)
                j = {{"amplitude", s.amplitude}, {"center", s.center}, {"width", s.width}};
            else if constexpr (std::is_same_v<T, TwinPeak>)
                j = {{"amplitude", s.amplitude}, {"center", s.center}, {"width", s.width}};
            else if constexpr (std::is_same_v<T, SmoothedSquare>)
                j = {{"amplitude", s.amplitude}, {"t_on", s.t_on}, {"t_off", s.t_off}, {"edge", s.edge}};
            else if constexpr (std::is_same_v<T, Tabulated>)
                j = {{"times", s.times}, {"values", s.values}};
            else
                j = {{"amplitude", s.amplitude}};
        },
        p.shape());
    j["type"] = std::string(p.kind());
}

void from_json(const nlohmann::json& j, PulseEnvelope& p)
{
    const auto type = j.at("type").get<std::string>();
    if (type == "gaussian")
        p = Gaussian{j.at("amplitude").get<double>(), j.at("center").get<double>(), j.at("width").get<double>()};
    else if (type == "twin_peak")
        p = TwinPeak{j.at("amplitude").get<double>(), j.at("center").get<double>(), j.at("width").get<double>()};
    else if (type == "smoothed_square")
        p = SmoothedSquare{j.at("amplitude").get<double>(), j.at("t_on").get<double>(), j.at("t_off").get<double>(),
                           j.at("edge").get<double>()};
    else if (type == "tabulated")
        p = Tabulated{j.at("times").get<std::vector<double>>(), j.at("values").get<std::vector<double>>()};
    else if (type == "constant")
        p = Constant{j.at("amplitude").get<double>()};
    else
        throw std::invalid_argument("unknown envelope type '" + type + "'");
}

void to_json(nlohmann::json& j, const Scenario& s)
{
    j = {{"units", "gamma_k"},
         {"params", s.params},
         {"pump", s.pump},
         {"coupling", s.coupling},
         {"t_end", s.t_end},
         {"dt", s.dt}};
}

void from_json(const nlohmann::json& j, Scenario& s)
{
    if (j.value("units", std::string("gamma_k")) != "gamma_k")
        throw std::invalid_argument("scenario units must be \"gamma_k\"");
    s.params = j.at("params").get<PhysicalParams>();
    s.pump = j.at("pump").get<PulseEnvelope>();
    s.coupling = j.at("coupling").get<PulseEnvelope>();
    s.t_end = j.at("t_end").get<double>();
    s.dt = j.contains("dt") ? j.at("dt").get<double>() : default_step(s);
    s.validate();
}

Scenario scenario_from_json(const nlohmann::json& j)
{
    return j.get<Scenario>();
}

nlohmann::json scenario_to_json(const Scenario& s)
{
    return s;
}

}  // namespace rps
