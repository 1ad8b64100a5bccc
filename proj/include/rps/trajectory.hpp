#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace rps {

using cplx = std::complex<double>;

// Amplitudes on the uniform grid t_n = n * dt, n = 0..size()-1.
// c_cav and emitted are filled only by the embedding solver.
struct AmplitudeTrajectory {
    double dt = 0.0;
    std::vector<double> times;
    std::vector<cplx> c1;
    std::vector<cplx> c2;
    std::vector<cplx> c_cav;
    std::vector<double> emitted;  // integral of |c_cav|^2 from 0 to t

    std::size_t size() const { return times.size(); }
    bool has_cavity() const { return !c_cav.empty() && c_cav.size() == times.size(); }

    /// Index of the grid point closest to t, clamped to the grid.
    std::size_t index_at(double t) const;
};

}  // namespace rps
