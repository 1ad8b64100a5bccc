#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "rps/state.hpp"

using namespace rps;

TEST_CASE("wigner values at the origin")
{
    const double two_over_pi = 2.0 / std::numbers::pi;
    CHECK(wigner(ModeState(0.0), 0.0) == two_over_pi);
    CHECK(wigner(ModeState(1.0), 0.0) == -two_over_pi);
    CHECK(wigner(ModeState(0.5), 0.0) == 0.0);
    CHECK(wigner(ModeState(0.0), 0.0) == doctest::Approx(0.6366).epsilon(1e-4));
}

TEST_CASE("mode state range")
{
    CHECK_THROWS_AS(ModeState(-0.01), std::invalid_argument);
    CHECK_THROWS_AS(ModeState(1.01), std::invalid_argument);
    CHECK_THROWS_AS(ModeState(std::nan("")), std::invalid_argument);
    CHECK(ModeState(0.25).eta() == 0.25);
}

TEST_CASE("wigner is linear in eta")
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> e(0.0, 1.0), x(-3.0, 3.0);
    for (int i = 0; i < 1000; ++i) {
        const double eta = e(rng);
        const std::complex<double> a{x(rng), x(rng)};
        const double mix = (1.0 - eta) * wigner(ModeState(0.0), a) + eta * wigner(ModeState(1.0), a);
        CHECK(wigner(ModeState(eta), a) == doctest::Approx(mix).epsilon(1e-14));
        CHECK(wigner(ModeState(0.0), a) == wigner_vacuum(a));
        CHECK(wigner(ModeState(1.0), a) == wigner_fock1(a));
    }
}

TEST_CASE("grid integral")
{
    const auto g = wigner_grid(ModeState(0.9), 4.0, 257);
    CHECK(g.values.size() == 257u * 257u);
    CHECK(g.cell_sum() == doctest::Approx(1.0).epsilon(1e-3));
    for (double eta : {0.0, 0.3, 0.5, 1.0})
        CHECK(wigner_grid(ModeState(eta), 4.0, 257).cell_sum() == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("grid minimum for eta = 0.9")
{
    const auto g = wigner_grid(ModeState(0.9), 4.0, 257);
    const double mn = *std::min_element(g.values.begin(), g.values.end());
    CHECK(mn == doctest::Approx(2.0 / std::numbers::pi * (1.0 - 2.0 * 0.9)).epsilon(1e-12));
    CHECK(mn == doctest::Approx(-0.5093).epsilon(1e-4));
    CHECK(g.at(128, 128) == mn);
    CHECK(g.coordinate(128) == 0.0);
}

TEST_CASE("grid is rotationally symmetric")
{
    for (double eta : {0.0, 0.2, 0.7, 1.0}) {
        const auto g = wigner_grid(ModeState(eta), 4.0, 257);
        const std::size_t n = g.n;
        double worst = 0.0;
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c) {
                const double v = g.at(r, c);
                worst = std::max({worst, std::abs(v - g.at(c, r)), std::abs(v - g.at(n - 1 - r, c)),
                                  std::abs(v - g.at(r, n - 1 - c))});
            }
        CHECK(worst <= 1e-12);

        // Points at equal |alpha| off the grid axes.
        std::mt19937_64 rng(9);
        std::uniform_real_distribution<double> rad(0.0, 3.0), ang(0.0, 2.0 * std::numbers::pi);
        for (int i = 0; i < 200; ++i) {
            const double r = rad(rng);
            CHECK(std::abs(wigner(ModeState(eta), std::polar(r, ang(rng))) - wigner(ModeState(eta), r)) <= 1e-12);
        }
    }
}

TEST_CASE("negativity iff eta > 1/2")
{
    for (int k = 0; k <= 40; ++k) {
        const double eta = k / 40.0;
        const auto g = wigner_grid(ModeState(eta), 4.0, 129);
        const double mn = *std::min_element(g.values.begin(), g.values.end());
        CAPTURE(eta);
        CHECK((mn < 0.0) == (eta > 0.5));
    }
}

TEST_CASE("grid argument checks and CSV export")
{
    CHECK_THROWS_AS(wigner_grid(ModeState(0.5), 0.0, 10), std::invalid_argument);
    CHECK_THROWS_AS(wigner_grid(ModeState(0.5), 1.0, 1), std::invalid_argument);

    const auto g = wigner_grid(ModeState(0.5), 1.0, 3);
    std::ostringstream os;
    write_wigner_csv(os, g);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "re_alpha,im_alpha,w");
    std::size_t rows = 0;
    while (std::getline(is, line))
        ++rows;
    CHECK(rows == 9);
    CHECK(os.str().find("\n-1,-1,") != std::string::npos);
}
