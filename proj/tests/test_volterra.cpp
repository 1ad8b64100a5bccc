#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "rps/embedding.hpp"
#include "rps/volterra.hpp"

using namespace rps;

namespace {

Scenario constant_rabi(double omega, double t_end, double dt)
{
    Scenario s;
    s.params = {5.0, 1.0, 0.0, 0.0, 1.0};
    s.pump = Constant{omega};
    s.coupling = Constant{0.0};
    s.t_end = t_end;
    s.dt = dt;
    return s;
}

double rabi_error(const AmplitudeTrajectory& tr, double omega)
{
    double err = 0.0;
    for (std::size_t i = 0; i < tr.size(); ++i) {
        const auto ref = oracle::rabi(omega, tr.times[i]);
        err = std::max({err, std::abs(tr.c1[i] - ref.c1), std::abs(tr.c2[i] - ref.c2)});
    }
    return err;
}

double max_c2_gap(const AmplitudeTrajectory& a, const AmplitudeTrajectory& b)
{
    REQUIRE(a.size() == b.size());
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        d = std::max(d, std::abs(a.c2[i] - b.c2[i]));
    return d;
}

}  // namespace

TEST_CASE("kernel examples")
{
    KernelSpec pump_only{Constant{2.0}, Constant{1.0}, {0.0, 1.0, 0.3, 0.0, 1.0}};
    CHECK(eval_kernel(pump_only, 1.5, 1.5) == cplx(-1.0, 0.0));
    const cplx k = eval_kernel(pump_only, 2.0, 0.5);
    CHECK(std::abs(k - (-1.0) * std::polar(1.0, -0.3 * 1.5)) < 1e-15);

    KernelSpec cavity_only{Constant{0.0}, Constant{1.0}, {2.0, 1.0, 0.0, 0.0, 1.0}};
    CHECK(eval_kernel(cavity_only, 3.0, 3.0) == cplx(-1.0, 0.0));
    CHECK(std::abs(eval_kernel(cavity_only, 3.0, 1.0) - cplx(-std::exp(-1.0), 0.0)) < 1e-15);
    CHECK(eval_kernel(cavity_only, 3.0, 1.0).real() == doctest::Approx(-0.3679).epsilon(1e-4));
    CHECK(eval_cavity_kernel(cavity_only, 3.0, 1.0) == eval_kernel(cavity_only, 3.0, 1.0));
}

TEST_CASE("kernel rejects non-causal arguments")
{
    const KernelSpec k = KernelSpec::from(make_figure_scenario("fig5_1"));
    CHECK_THROWS_WITH_AS(eval_kernel(k, 1.0, 2.0), doctest::Contains("non-causal kernel argument"),
                         std::invalid_argument);
}

TEST_CASE("kernel diagonal is real and non-positive, off-diagonal bounded")
{
    std::mt19937_64 rng(3);
    for (const auto& name : figure_scenario_names()) {
        const Scenario s = make_figure_scenario(name);
        const KernelSpec k = KernelSpec::from(s);
        const double r = s.params.rabi_vacuum;
        std::uniform_real_distribution<double> u(0.0, s.t_end);
        for (int i = 0; i < 300; ++i) {
            double t = u(rng), tp = u(rng);
            if (t < tp)
                std::swap(t, tp);
            const cplx diag = eval_kernel(k, t, t);
            const double expect = -0.25 * s.pump(t) * s.pump(t) - 0.25 * r * r * s.coupling(t) * s.coupling(t);
            CHECK(diag.imag() == 0.0);
            CHECK(diag.real() <= 0.0);
            CHECK(diag.real() == doctest::Approx(expect).epsilon(1e-13));
            const double bound = 0.25 * s.pump(t) * s.pump(tp) +
                                 0.25 * r * r * s.coupling(t) * s.coupling(tp) * std::exp(-0.5 * (t - tp));
            CHECK(std::abs(eval_kernel(k, t, tp)) <= bound * (1.0 + 1e-12) + 1e-300);
        }
    }
}

TEST_CASE("undriven atom stays in the initial state")
{
    Scenario s = make_figure_scenario("fig5_1");
    s.pump = Constant{0.0};
    const auto tr = solve_volterra(s);
    for (std::size_t i = 0; i < tr.size(); ++i) {
        CHECK(tr.c1[i] == cplx(1.0, 0.0));
        CHECK(tr.c2[i] == cplx(0.0, 0.0));
    }
    CHECK_FALSE(tr.has_cavity());
}

TEST_CASE("constant-Rabi two-level solution")
{
    const double omega = 10.0;
    const auto tr = solve_volterra(constant_rabi(omega, 2.0, 1e-3 / omega));
    CHECK(tr.c1.front() == cplx(1.0, 0.0));
    CHECK(tr.c2.front() == cplx(0.0, 0.0));
    CHECK(rabi_error(tr, omega) <= 1e-4);
}

TEST_CASE("second-order convergence under step halving")
{
    const double omega = 10.0;
    const double coarse = rabi_error(solve_volterra(constant_rabi(omega, 2.0, 0.01)), omega);
    const double fine = rabi_error(solve_volterra(constant_rabi(omega, 2.0, 0.005)), omega);
    const double ratio = coarse / fine;
    CAPTURE(coarse);
    CAPTURE(fine);
    CHECK(ratio >= 3.5);
    CHECK(ratio <= 4.5);
}

TEST_CASE("second-order convergence against a fine reference with the cavity on")
{
    Scenario s = make_figure_scenario("fig5_1");
    s.t_end = 20.0;
    auto with_dt = [&](double dt) {
        Scenario c = s;
        c.dt = dt;
        return solve_volterra(c);
    };
    const double dt = 0.04;
    const auto ref = with_dt(dt / 16.0);
    const auto a = with_dt(dt);
    const auto b = with_dt(dt / 2.0);
    auto err = [&](const AmplitudeTrajectory& tr) {
        const std::size_t stride = (ref.size() - 1) / (tr.size() - 1);
        double e = 0.0;
        for (std::size_t i = 0; i < tr.size(); ++i)
            e = std::max(e, std::abs(tr.c2[i] - ref.c2[i * stride]));
        return e;
    };
    const double ratio = err(a) / err(b);
    CAPTURE(ratio);
    CHECK(ratio >= 3.5);
    CHECK(ratio <= 4.5);
}

TEST_CASE("stability guard")
{
    Scenario s = make_figure_scenario("fig5_4");
    s.dt = 1e-3;
    CHECK_THROWS_WITH_AS(solve_volterra(s), doctest::Contains("step too large for given Rabi frequencies"),
                         SolverError);
    s = constant_rabi(1.0, 10.0, 1.0);
    s.params.rabi_vacuum = 0.6;
    s.coupling = Constant{1.0};
    CHECK_THROWS_AS(solve_volterra(s), SolverError);
}

TEST_CASE("recursive and direct memory sums agree")
{
    Scenario s = make_figure_scenario("fig5_1");
    s.t_end = 24.0;
    s.dt = 4e-3;
    VolterraOptions rec, dir;
    dir.memory = MemorySum::Direct;
    const auto a = solve_volterra(s, rec);
    const auto b = solve_volterra(s, dir);
    CHECK(max_c2_gap(a, b) < 1e-10);

    Scenario f5 = make_figure_scenario("fig5_5");
    f5.t_end = 0.3;
    f5.dt = 2e-5;
    const auto c = solve_volterra(f5, rec);
    const auto d = solve_volterra(f5, dir);
    CHECK(max_c2_gap(c, d) < 1e-10);
}

TEST_CASE("without pump the atomic population decays")
{
    Scenario s;
    s.params = {0.4, 0.9, 0.0, 0.3, 1.0};
    s.pump = Constant{0.0};
    s.coupling = Gaussian{1.0, 2.0, 1.5};
    s.t_end = 8.0;
    s.dt = 1e-3;
    VolterraOptions opts;
    opts.initial = {cplx(0.6, 0.0), cplx(0.0, 0.8), cplx(0.0, 0.0)};

    // Overdamped (R_k < 1/2): no vacuum Rabi revivals, monotone decay.
    const auto tr = solve_volterra(s, opts);
    double prev = std::norm(tr.c1[0]) + std::norm(tr.c2[0]);
    for (std::size_t i = 1; i < tr.size(); ++i) {
        const double p = std::norm(tr.c1[i]) + std::norm(tr.c2[i]);
        CHECK(p <= prev + 1e-12);
        prev = p;
    }
    CHECK(std::norm(tr.c1.back()) == doctest::Approx(0.36).epsilon(1e-12));

    // Strong coupling: the cavity hands population back, so |c2| oscillates,
    // but never above its starting value.
    s.params.rabi_vacuum = 5.0;
    const auto strong = solve_volterra(s, opts);
    bool rose = false;
    for (std::size_t i = 1; i < strong.size(); ++i) {
        const double p = std::norm(strong.c1[i]) + std::norm(strong.c2[i]);
        CHECK(p <= 1.0 + 1e-9);
        rose = rose || std::norm(strong.c2[i]) > std::norm(strong.c2[i - 1]) + 1e-6;
    }
    CHECK(rose);
}

TEST_CASE("stirap keeps the upper state nearly empty")
{
    const Scenario s = make_figure_scenario("fig5_1");
    Scenario fine = s;
    fine.dt = s.dt / 10.0;
    const auto ref = solve_embedded(fine);
    double ref_max = 0.0;
    for (const auto& c : ref.c2)
        ref_max = std::max(ref_max, std::abs(c));
    const auto tr = solve_volterra(s);
    double max_c2 = 0.0;
    for (const auto& c : tr.c2)
        max_c2 = std::max(max_c2, std::abs(c));
    CHECK(ref_max < 0.15);
    CHECK(max_c2 < 0.15);
    CHECK(std::abs(max_c2 - ref_max) < 1e-5);
}

TEST_CASE("volterra and embedding agree on every preset")
{
    for (const auto& name : figure_scenario_names()) {
        const Scenario s = make_figure_scenario(name);
        CAPTURE(name);
        CHECK(max_c2_gap(solve_volterra(s), solve_embedded(s)) <= 1e-5);
    }
}

TEST_CASE("volterra is deterministic")
{
    const Scenario s = make_figure_scenario("fig5_3");
    const auto a = solve_volterra(s);
    const auto b = solve_volterra(s);
    CHECK(a.c1 == b.c1);
    CHECK(a.c2 == b.c2);
}
