#include "rps/embedding.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace rps {

namespace {

// (C1, C2, C_cav, emitted) with emitted carried as the real part of slot 3.
using State = std::array<cplx, 4>;

constexpr cplx I{0.0, 1.0};

struct EmbeddedSystem {
    const Scenario& s;

    State rhs(double t, const State& y) const
    {
        const double pump = s.pump(t);
        const double cav = s.params.rabi_vacuum * s.coupling(t);
        const cplx phase = std::polar(1.0, s.params.delta_p * t);
        const cplx a{0.5, s.params.delta_c};
        return {0.5 * I * pump * phase * y[1],
                0.5 * I * pump * std::conj(phase) * y[0] + 0.5 * I * cav * y[2],
                0.5 * I * cav * y[1] - a * y[2],
                cplx{std::norm(y[2]), 0.0}};
    }

    State rk4(double t, const State& y, double h) const
    {
        auto axpy = [](const State& base, double f, const State& k) {
            State r;
            for (std::size_t i = 0; i < r.size(); ++i)
                r[i] = base[i] + f * k[i];
            return r;
        };
        const State k1 = rhs(t, y);
        const State k2 = rhs(t + 0.5 * h, axpy(y, 0.5 * h, k1));
        const State k3 = rhs(t + 0.5 * h, axpy(y, 0.5 * h, k2));
        const State k4 = rhs(t + h, axpy(y, h, k3));
        State r;
        for (std::size_t i = 0; i < r.size(); ++i)
            r[i] = y[i] + (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        return r;
    }
};

}  // namespace

std::size_t AmplitudeTrajectory::index_at(double t) const
{
    if (times.empty() || t <= 0.0)
        return 0;
    const auto i = static_cast<std::size_t>(std::llround(t / dt));
    return std::min(i, times.size() - 1);
}

AmplitudeTrajectory solve_embedded(const Scenario& s, const EmbeddingOptions& opts, EmbeddingReport* report)
{
    s.validate();
    const std::size_t n = s.steps();
    const double h = s.t_end / static_cast<double>(n);

    AmplitudeTrajectory traj;
    traj.dt = h;
    traj.times.resize(n + 1);
    traj.c1.resize(n + 1);
    traj.c2.resize(n + 1);
    traj.c_cav.resize(n + 1);
    traj.emitted.resize(n + 1);

    const EmbeddedSystem sys{s};
    State y{opts.initial.c1, opts.initial.c2, opts.initial.c_cav, cplx{}};
    double err = 0.0;

    for (std::size_t k = 0;; ++k) {
        const double t = h * static_cast<double>(k);
        traj.times[k] = t;
        traj.c1[k] = y[0];
        traj.c2[k] = y[1];
        traj.c_cav[k] = y[2];
        traj.emitted[k] = y[3].real();
        if (k == n)
            break;

        const State full = sys.rk4(t, y, h);
        const State half = sys.rk4(t + 0.5 * h, sys.rk4(t, y, 0.5 * h), 0.5 * h);
        double diff = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i)
            diff = std::max(diff, std::abs(half[i] - full[i]));
        err += diff / 15.0;
        y = half;
    }

    if (report)
        report->error_estimate = err;
    if (err > opts.tolerance_per_time * s.t_end) {
        std::ostringstream msg;
        msg << "step-halving error estimate " << err << " exceeds " << opts.tolerance_per_time
            << " per unit time; try dt <= " << 0.5 * h;
        throw SolverError(msg.str());
    }
    return traj;
}

std::vector<cplx> outgoing_amplitude(const AmplitudeTrajectory& traj, double beta)
{
    if (!traj.has_cavity())
        throw std::invalid_argument("trajectory carries no cavity amplitude");
    if (!(beta >= 0.0 && beta <= 1.0))
        throw std::invalid_argument("beta must lie in [0, 1]");
    const double scale = std::sqrt(beta);
    std::vector<cplx> out(traj.c_cav.size());
    std::transform(traj.c_cav.begin(), traj.c_cav.end(), out.begin(), [&](cplx c) { return scale * c; });
    return out;
}

}  // namespace rps
