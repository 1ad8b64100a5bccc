#include "rps/volterra.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rps {

namespace {

constexpr cplx I{0.0, 1.0};

// exp[-i(delta_c - i/2) tau] = exp[-(1/2 + i delta_c) tau]
cplx cavity_decay(const PhysicalParams& p, double tau)
{
    return std::exp(-cplx{0.5, p.delta_c} * tau);
}

}  // namespace

cplx eval_cavity_kernel(const KernelSpec& k, double t, double t_prime)
{
    if (t < t_prime)
        throw std::invalid_argument("non-causal kernel argument");
    const double r = k.params.rabi_vacuum;
    return -0.25 * r * r * k.coupling(t) * k.coupling(t_prime) * cavity_decay(k.params, t - t_prime);
}

cplx eval_kernel(const KernelSpec& k, double t, double t_prime)
{
    if (t < t_prime)
        throw std::invalid_argument("non-causal kernel argument");
    const cplx pump_term =
        -0.25 * k.pump(t) * k.pump(t_prime) * std::polar(1.0, -k.params.delta_p * (t - t_prime));
    return pump_term + eval_cavity_kernel(k, t, t_prime);
}

AmplitudeTrajectory solve_volterra(const Scenario& s, const VolterraOptions& opts)
{
    s.validate();
    const std::size_t n = s.steps();
    const double h = s.t_end / static_cast<double>(n);
    const double r = s.params.rabi_vacuum;

    std::vector<double> g(n + 1);
    std::vector<cplx> p(n + 1);  // (i/2) Omega_p e^{-i Delta_p t}, drives C2 from C1
    std::vector<cplx> q(n + 1);  // (i/2) Omega_p e^{+i Delta_p t}, drives C1 from C2
    double pump_max = 0.0;
    for (std::size_t k = 0; k <= n; ++k) {
        const double t = h * static_cast<double>(k);
        const double om = s.pump(t);
        pump_max = std::max(pump_max, om);
        g[k] = s.coupling(t);
        const cplx phase = std::polar(1.0, s.params.delta_p * t);
        p[k] = 0.5 * I * om * std::conj(phase);
        q[k] = 0.5 * I * om * phase;
    }

    if (pump_max * h >= 0.5 || r * h >= 0.5) {
        std::ostringstream msg;
        msg << "step too large for given Rabi frequencies: need dt < " << 0.5 / std::max(pump_max, r);
        throw SolverError(msg.str());
    }

    const double c = -0.25 * r * r;
    const cplx step_decay = cavity_decay(s.params, h);

    // Direct summation uses a lag table exp[-a h m].
    std::vector<cplx> lag;
    if (opts.memory == MemorySum::Direct) {
        lag.resize(n + 1);
        for (std::size_t m = 0; m <= n; ++m)
            lag[m] = cavity_decay(s.params, h * static_cast<double>(m));
    }

    AmplitudeTrajectory traj;
    traj.dt = h;
    traj.times.resize(n + 1);
    traj.c1.resize(n + 1);
    traj.c2.resize(n + 1);
    for (std::size_t k = 0; k <= n; ++k)
        traj.times[k] = h * static_cast<double>(k);
    traj.c1[0] = opts.initial.c1;
    traj.c2[0] = opts.initial.c2;

    // history(k) = sum_{j<k} w_j g_j e^{-a h (k-j)} C2_j, with trapezoid
    // weights w_0 = h/2, w_j = h otherwise. The memory integral at step k is
    // then c g_k (history(k) + h/2 g_k C2_k).
    cplx history{0.0, 0.0};
    cplx memory{0.0, 0.0};  // memory integral at the current step, zero at t = 0

    for (std::size_t k = 0; k < n; ++k) {
        const cplx c1 = traj.c1[k];
        const cplx c2 = traj.c2[k];
        const std::size_t next = k + 1;

        if (opts.memory == MemorySum::Recursive) {
            const double w = (k == 0) ? 0.5 * h : h;
            history = step_decay * (history + w * g[k] * c2);
        } else {
            history = 0.0;
            if (g[next] != 0.0) {
                for (std::size_t j = 0; j <= k; ++j) {
                    const double w = (j == 0) ? 0.5 * h : h;
                    history += w * g[j] * lag[next - j] * traj.c2[j];
                }
            }
        }

        const cplx a = 0.5 * h * q[next];
        const cplx b = 0.5 * h * p[next];
        const double d = 0.25 * h * h * c * g[next] * g[next];
        const cplx r1 = c1 + 0.5 * h * q[k] * c2;
        const cplx r2 = c2 + 0.5 * h * p[k] * c1 + 0.5 * h * (memory + c * g[next] * history);
        const cplx det = (1.0 - d) - a * b;
        const cplx c2_next = (r2 + b * r1) / det;
        const cplx c1_next = r1 + a * c2_next;

        traj.c1[next] = c1_next;
        traj.c2[next] = c2_next;
        memory = c * g[next] * (history + 0.5 * h * g[next] * c2_next);
    }
    return traj;
}

}  // namespace rps
