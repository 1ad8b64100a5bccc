// Quantum state of the excited outgoing mode: a mixture of the one-photon
// Fock state (weight eta) and the vacuum. Every other outgoing mode is in
// its vacuum state.

#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <vector>

namespace rps {

class ModeState {
public:
    explicit ModeState(double eta);

    double eta() const { return eta_; }

private:
    double eta_;
};

/// Vacuum Wigner function (2/pi) exp(-2|alpha|^2); integrates to 1 over d^2 alpha.
double wigner_vacuum(std::complex<double> alpha);

/// One-photon Fock Wigner function (2/pi)(4|alpha|^2 - 1) exp(-2|alpha|^2).
double wigner_fock1(std::complex<double> alpha);

/// (1 - eta) W_vacuum + eta W_fock1.
double wigner(const ModeState& st, std::complex<double> alpha);

/// Row-major n x n samples on [-half_width, half_width]^2; row index runs
/// over Im(alpha), column index over Re(alpha).
struct WignerGrid {
    double half_width = 0.0;
    std::size_t n = 0;
    std::vector<double> values;

    double spacing() const { return 2.0 * half_width / static_cast<double>(n - 1); }
    double coordinate(std::size_t i) const { return -half_width + spacing() * static_cast<double>(i); }
    double at(std::size_t row, std::size_t col) const { return values[row * n + col]; }
    double cell_sum() const;  // sum of samples times the cell area
};

WignerGrid wigner_grid(const ModeState& st, double half_width, std::size_t n);

/// CSV with header "re_alpha,im_alpha,w".
void write_wigner_csv(std::ostream& os, const WignerGrid& grid);

}  // namespace rps
