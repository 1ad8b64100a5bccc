// Photon observables derived from an embedded-solver trajectory: one-photon
// efficiency, the normalised spectral mode function and the spatio-temporal
// shape of the outgoing wave packet.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "rps/model.hpp"
#include "rps/trajectory.hpp"

namespace rps {

class ConsistencyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct EfficiencyCurve {
    std::vector<double> times;
    std::vector<double> eta;
};

/// eta(t) = beta * emitted(t).
EfficiencyCurve efficiency(const AmplitudeTrajectory& traj, double beta);

/// beta * (emitted + |C_cav|^2) at the last grid point: the photon already
/// emitted plus the part still stored in the cavity, all of which leaves
/// through the mirrors once the atom is decoupled. Equals eta(t -> infinity)
/// whenever the atom-cavity coupling has ended by the end of the grid.
double asymptotic_efficiency(const AmplitudeTrajectory& traj, double beta);

struct ModeFunction {
    double t = 0.0;
    double eta = 0.0;            // beta * emitted(t)
    double spectral_norm = 0.0;  // integral of |F(omega, t)|^2 over the grid
    std::vector<double> omegas;  // detuning from omega_0, units Gamma_k
    std::vector<cplx> f1;        // F / sqrt(spectral_norm)
};

struct SpectrumOptions {
    std::size_t points = 4096;
    double span_factor = 20.0;  // half span = span_factor * max(1, width estimate)
};

/// Normalised Fourier transform of a_out over [0, t]:
///   F(omega, t) = (2 pi)^{-1/2} int_0^t a_out(t') e^{i omega t'} dt',
/// phase-fixed so that F1 is real and positive at its magnitude peak.
/// Throws std::invalid_argument("no excitation to normalize") when eta(t) = 0.
ModeFunction mode_function(const AmplitudeTrajectory& traj, double beta, double t,
                           const SpectrumOptions& opts = {});

/// Full width at half maximum of |F1|^2 around its peak.
double spectral_fwhm(const ModeFunction& mode);

struct WavePacket {
    double t_snapshot = 0.0;
    double eta = 0.0;
    double intracavity_fraction = 0.0;  // norm share still inside [-l, 0]
    std::vector<double> z;              // uniform grid on [0, t_snapshot]
    std::vector<cplx> phi;              // unit L2 norm over z

    /// Linear interpolation; zero outside [0, t_snapshot].
    cplx at(double zz) const;
};

struct WavePacketOptions {
    double cavity_length = 1e-3;  // l, units c/Gamma_k
    double route_tolerance = 1e-3;
};

/// Spatial shape of the escaped part of the outgoing packet at time t on
/// n_z points of [0, t]. Evaluated twice: by direct quadrature of the
/// retarded convolution of g_c(t') C2*(t') with the cavity pole, and by the
/// retarded lookup conj(a_out(t - z)). Throws ConsistencyError if the two
/// normalised shapes differ by more than route_tolerance in relative L2.
WavePacket wavepacket(const AmplitudeTrajectory& traj, const Scenario& s, double t, std::size_t n_z,
                      const WavePacketOptions& opts = {});

/// Maximum over relative translations of |<a, b>|^2, global phase removed.
/// Symmetric in its arguments. Throws std::invalid_argument on a zero-norm
/// packet.
double packet_overlap(const WavePacket& a, const WavePacket& b);

/// RMS width of |phi|^2 along z.
double packet_width(const WavePacket& w);

/// Retarded times t - z of the local maxima of |phi|^2 whose height is at
/// least `min_relative` of the global maximum, ordered by retarded time.
std::vector<double> packet_peak_times(const WavePacket& w, double min_relative = 0.05);

}  // namespace rps
