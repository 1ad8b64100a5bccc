#include "rps/state.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "rps/csv.hpp"

namespace rps {

ModeState::ModeState(double eta) : eta_(eta)
{
    if (!(eta >= 0.0 && eta <= 1.0))
        throw std::invalid_argument("eta must lie in [0, 1]");
}

double wigner_vacuum(std::complex<double> alpha)
{
    return 2.0 / std::numbers::pi * std::exp(-2.0 * std::norm(alpha));
}

double wigner_fock1(std::complex<double> alpha)
{
    const double r2 = std::norm(alpha);
    return 2.0 / std::numbers::pi * (4.0 * r2 - 1.0) * std::exp(-2.0 * r2);
}

double wigner(const ModeState& st, std::complex<double> alpha)
{
    const double eta = st.eta();
    return (1.0 - eta) * wigner_vacuum(alpha) + eta * wigner_fock1(alpha);
}

double WignerGrid::cell_sum() const
{
    double sum = 0.0;
    for (double v : values)
        sum += v;
    const double h = spacing();
    return sum * h * h;
}

WignerGrid wigner_grid(const ModeState& st, double half_width, std::size_t n)
{
    if (!(half_width > 0.0) || n < 2)
        throw std::invalid_argument("wigner grid needs half_width > 0 and n >= 2");
    WignerGrid g;
    g.half_width = half_width;
    g.n = n;
    g.values.resize(n * n);
    for (std::size_t row = 0; row < n; ++row)
        for (std::size_t col = 0; col < n; ++col)
            g.values[row * n + col] = wigner(st, {g.coordinate(col), g.coordinate(row)});
    return g;
}

void write_wigner_csv(std::ostream& os, const WignerGrid& grid)
{
    CsvWriter csv(os, {"re_alpha", "im_alpha", "w"});
    for (std::size_t row = 0; row < grid.n; ++row)
        for (std::size_t col = 0; col < grid.n; ++col)
            csv.row({grid.coordinate(col), grid.coordinate(row), grid.at(row, col)});
}

}  // namespace rps
