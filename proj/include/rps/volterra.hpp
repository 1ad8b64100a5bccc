// Direct solution of the amplitude equations with the cavity field
// eliminated into a memory kernel:
//
//   C1' = (i/2) Omega_p(t) e^{i Delta_p t} C2
//   C2' = (i/2) Omega_p(t) e^{-i Delta_p t} C1 + int_0^t K_cav(t,t') C2(t') dt'
//
// with K_cav(t,t') = -R_k^2/4 g_c(t) g_c(t') exp[-i(delta_c - i/2)(t - t')].

#pragma once

#include "rps/embedding.hpp"
#include "rps/model.hpp"
#include "rps/trajectory.hpp"

namespace rps {

struct KernelSpec {
    PulseEnvelope pump;
    PulseEnvelope coupling;
    PhysicalParams params;

    static KernelSpec from(const Scenario& s) { return {s.pump, s.coupling, s.params}; }
};

/// Full two-term kernel
///   K(t,t') = -1/4 Omega_p(t) Omega_p(t') e^{-i Delta_p (t-t')}
///             -1/4 R_k^2 g_c(t) g_c(t') e^{-i(delta_c - i/2)(t-t')}.
/// Throws std::invalid_argument for t < t_prime.
cplx eval_kernel(const KernelSpec& k, double t, double t_prime);

/// Cavity part of the kernel only.
cplx eval_cavity_kernel(const KernelSpec& k, double t, double t_prime);

enum class MemorySum {
    // Exponential kernel factorised into a running sum; O(N) total work.
    Recursive,
    // Every history point summed at every step; O(N^2) total work.
    Direct,
};

struct VolterraOptions {
    InitialAmplitudes initial{};
    MemorySum memory = MemorySum::Recursive;
};

/// Trapezoidal product integration of the memory term, trapezoidal rule for
/// the local pump coupling; each step solves the resulting 2x2 implicit
/// system. Second order in dt. Requires Omega_p,max * dt < 0.5 and
/// R_k * dt < 0.5 (SolverError otherwise). The returned trajectory has no
/// cavity amplitude.
AmplitudeTrajectory solve_volterra(const Scenario& s, const VolterraOptions& opts = {});

}  // namespace rps
