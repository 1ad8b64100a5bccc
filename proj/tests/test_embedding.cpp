#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "rps/embedding.hpp"

using namespace rps;

namespace {

Scenario undriven(double r, double t_end, double dt)
{
    Scenario s;
    s.params = {r, 0.9, 0.0, 0.0, 1.0};
    s.pump = Constant{0.0};
    s.coupling = Constant{1.0};
    s.t_end = t_end;
    s.dt = dt;
    return s;
}

}  // namespace

TEST_CASE("no pump, no dynamics")
{
    Scenario s = make_figure_scenario("fig5_1");
    s.pump = Constant{0.0};
    const auto tr = solve_embedded(s);
    REQUIRE(tr.has_cavity());
    for (std::size_t i = 0; i < tr.size(); ++i) {
        CHECK(tr.c1[i] == cplx(1.0, 0.0));
        CHECK(tr.c2[i] == cplx(0.0, 0.0));
        CHECK(tr.c_cav[i] == cplx(0.0, 0.0));
        CHECK(tr.emitted[i] == 0.0);
    }
    for (const auto& a : outgoing_amplitude(tr, 0.9))
        CHECK(a == cplx(0.0, 0.0));
}

TEST_CASE("damped vacuum Rabi oscillation")
{
    for (double r : {5.0, 2.0, 30.0}) {
        CAPTURE(r);
        const Scenario s = undriven(r, 10.0, std::min(1e-3, 0.05 / r));
        EmbeddingOptions opts;
        opts.initial = {cplx(0.0, 0.0), cplx(1.0, 0.0), cplx(0.0, 0.0)};
        const auto tr = solve_embedded(s, opts);
        double err = 0.0;
        for (std::size_t i = 0; i < tr.size(); ++i) {
            const auto ref = oracle::damped_vacuum_rabi(r, tr.times[i]);
            err = std::max({err, std::abs(tr.c2[i] - ref.c2), std::abs(tr.c_cav[i] - ref.c_cav)});
            CHECK(tr.c1[i] == cplx(0.0, 0.0));
        }
        CHECK(err <= 1e-6);
    }
}

TEST_CASE("bare cavity decays at the full linewidth")
{
    Scenario s = undriven(5.0, 6.0, 1e-3);
    s.coupling = Constant{0.0};
    s.params.delta_c = 0.7;
    EmbeddingOptions opts;
    opts.initial = {cplx(0.0, 0.0), cplx(0.0, 0.0), cplx(1.0, 0.0)};
    const auto tr = solve_embedded(s, opts);
    for (std::size_t i = 0; i < tr.size(); i += 100) {
        const double t = tr.times[i];
        CHECK(std::abs(tr.c_cav[i] - std::exp(cplx(-0.5, -0.7) * t)) < 1e-10);
        CHECK(tr.emitted[i] == doctest::Approx(1.0 - std::exp(-t)).epsilon(1e-9));
    }
}

TEST_CASE("norm conservation, monotone emission on every preset")
{
    for (const auto& name : figure_scenario_names()) {
        const Scenario s = make_figure_scenario(name);
        CAPTURE(name);
        EmbeddingReport report;
        const auto tr = solve_embedded(s, {}, &report);
        CHECK(tr.size() == s.steps() + 1);
        CHECK(tr.times.back() == doctest::Approx(s.t_end));
        CHECK(report.error_estimate <= 1e-6 * s.t_end);
        double worst = 0.0;
        for (std::size_t i = 0; i < tr.size(); ++i) {
            const double total =
                std::norm(tr.c1[i]) + std::norm(tr.c2[i]) + std::norm(tr.c_cav[i]) + tr.emitted[i];
            worst = std::max(worst, std::abs(total - 1.0));
            if (i > 0)
                CHECK(tr.emitted[i] >= tr.emitted[i - 1]);
            CHECK(tr.emitted[i] >= 0.0);
            CHECK(tr.emitted[i] <= 1.0);
        }
        CHECK(worst <= 1e-6);
    }
}

TEST_CASE("stirap emits nearly the whole photon")
{
    const Scenario s = make_figure_scenario("fig5_1");
    const auto tr = solve_embedded(s);
    CHECK(tr.emitted.back() >= 0.98);

    const auto a = outgoing_amplitude(tr, s.params.beta);
    std::vector<double> power(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        power[i] = std::norm(a[i]);
    const double integral = oracle::trapezoid(power, tr.dt);
    CHECK(integral == doctest::Approx(0.90).epsilon(0.02 / 0.90));
    CHECK(integral == doctest::Approx(s.params.beta * tr.emitted.back()).epsilon(1e-6));
}

TEST_CASE("outgoing amplitude scales with sqrt(beta)")
{
    const auto tr = solve_embedded(make_figure_scenario("fig5_3"));
    for (const auto& v : outgoing_amplitude(tr, 0.0))
        CHECK(v == cplx(0.0, 0.0));
    const auto one = outgoing_amplitude(tr, 1.0);
    const auto quarter = outgoing_amplitude(tr, 0.25);
    for (std::size_t i = 0; i < one.size(); i += 97) {
        CHECK(one[i] == tr.c_cav[i]);
        CHECK(std::abs(quarter[i] - 0.5 * one[i]) < 1e-16);
    }
    CHECK_THROWS_AS(outgoing_amplitude(tr, 1.5), std::invalid_argument);
    AmplitudeTrajectory bare = tr;
    bare.c_cav.clear();
    CHECK_THROWS_AS(outgoing_amplitude(bare, 0.5), std::invalid_argument);
}

TEST_CASE("flipping both detunings conjugates the amplitudes")
{
    Scenario s = make_figure_scenario("fig5_1");
    s.params.delta_p = 0.3;
    s.params.delta_c = -0.2;
    Scenario flipped = s;
    flipped.params.delta_p = -0.3;
    flipped.params.delta_c = 0.2;
    const auto a = solve_embedded(s);
    const auto b = solve_embedded(flipped);
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        worst = std::max({worst, std::abs(b.c1[i] - std::conj(a.c1[i])), std::abs(b.c2[i] + std::conj(a.c2[i])),
                          std::abs(b.c_cav[i] - std::conj(a.c_cav[i])), std::abs(b.emitted[i] - a.emitted[i])});
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("error estimate rejects a coarse step")
{
    Scenario s = make_figure_scenario("fig5_4");
    s.dt = 1e-3;
    CHECK_THROWS_WITH_AS(solve_embedded(s), doctest::Contains("dt"), SolverError);

    // A looser tolerance lets the same step through.
    EmbeddingOptions loose;
    loose.tolerance_per_time = 1.0;
    CHECK_NOTHROW(solve_embedded(s, loose));
}

TEST_CASE("embedding is deterministic")
{
    const Scenario s = make_figure_scenario("fig5_5");
    const auto a = solve_embedded(s);
    const auto b = solve_embedded(s);
    CHECK(a.c2 == b.c2);
    CHECK(a.c_cav == b.c_cav);
    CHECK(a.emitted == b.emitted);
}

TEST_CASE("grid covers t_end with a uniform step")
{
    Scenario s = undriven(5.0, 1.0, 0.3);
    const auto tr = solve_embedded(s, EmbeddingOptions{{}, 1.0});
    CHECK(tr.size() == 5);
    CHECK(tr.dt == doctest::Approx(0.25));
    CHECK(tr.times.back() == doctest::Approx(1.0));
    CHECK(tr.index_at(0.6) == 2);
    CHECK(tr.index_at(-1.0) == 0);
    CHECK(tr.index_at(9.0) == 4);
}
