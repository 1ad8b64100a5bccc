// Markovian embedding of the single-pole cavity kernel.
//
// The cavity memory term of the C2 equation is replaced by an auxiliary
// intracavity amplitude C_cav with
//
//   C1'    = (i/2) Omega_p(t) e^{+i Delta_p t} C2
//   C2'    = (i/2) Omega_p(t) e^{-i Delta_p t} C1 + (i/2) R_k g_c(t) C_cav
//   C_cav' = (i/2) R_k g_c(t) C2 - (i delta_c + 1/2) C_cav
//
// Eliminating C_cav gives back the kernel -R_k^2/4 g_c(t) g_c(t')
// exp[-(i delta_c + 1/2)(t - t')]. The norm leaks only through C_cav:
// d/dt (|C1|^2 + |C2|^2 + |C_cav|^2) = -|C_cav|^2.

#pragma once

#include <stdexcept>
#include <vector>

#include "rps/model.hpp"
#include "rps/trajectory.hpp"

namespace rps {

class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct InitialAmplitudes {
    cplx c1{1.0, 0.0};
    cplx c2{0.0, 0.0};
    cplx c_cav{0.0, 0.0};
};

struct EmbeddingOptions {
    InitialAmplitudes initial{};
    // Accumulated step-halving error estimate allowed per unit time.
    double tolerance_per_time = 1e-6;
};

struct EmbeddingReport {
    double error_estimate = 0.0;  // accumulated local error estimate
};

/// Fixed-step RK4 with step halving on every step: each grid interval is
/// advanced once with dt and once with two dt/2 steps; the half-step result
/// is kept and |difference|/15 is accumulated as the error estimate.
/// Throws SolverError when the estimate exceeds tolerance_per_time * t_end.
AmplitudeTrajectory solve_embedded(const Scenario& s, const EmbeddingOptions& opts = {},
                                   EmbeddingReport* report = nullptr);

/// a_out(t) = sqrt(beta) C_cav(t): temporal amplitude of the outgoing field at
/// the coupling mirror, normalised so that its squared integral is the
/// one-photon efficiency.
std::vector<cplx> outgoing_amplitude(const AmplitudeTrajectory& traj, double beta);

}  // namespace rps
