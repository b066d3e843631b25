#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "test_support.hpp"
#include "zlab/evolution.hpp"
#include "zlab/functionals.hpp"
#include "zlab/ground_state.hpp"

using namespace zlab;
using zlab::testing::max_abs;
using zlab::testing::max_abs_diff;

namespace {

RadialField gaussian(const RadialGrid& g, double a) {
    return RadialField::from_function(g, [=](double r) { return cplx(a * std::exp(-0.5 * r * r), 0.0); });
}

// u_t = -i Lap u started from e^{-r^2/2}.
RadialField free_gaussian(const RadialGrid& g, double t) {
    const cplx s(1.0, -2.0 * t);
    return RadialField::from_function(g, [=](double r) { return std::pow(s, -1.5) * std::exp(-r * r / (2.0 * s)); });
}

State random_state(const RadialGrid& g, unsigned seed, double alpha = 1.0) {
    const auto u = zlab::testing::random_smooth_field(g, seed);
    const auto n = zlab::testing::random_smooth_field(g, seed + 100);
    return State(u, n, alpha);
}

}  // namespace

TEST_CASE("second-order data round trip") {
    const auto g = make_grid(511, 24.0);
    for (double alpha : {0.5, 1.0, 2.0}) {
        const auto s = random_state(g, 3, alpha);
        const auto so = to_second_order(s);
        const auto back = from_second_order(s.u, so.n, so.n_dot, alpha);
        CHECK(max_abs_diff(back.n_field, s.n_field) < 1e-11 * (1.0 + max_abs(s.n_field)));
        // The second-order energy is twice the first-order one.
        CHECK(second_order_energy(s.u, so.n, so.n_dot, alpha) ==
              doctest::Approx(2.0 * zakharov_energy(s)).epsilon(1e-10));
    }
    const auto z = RadialField::zeros(g);
    CHECK_THROWS_AS(from_second_order(z, z, z, 0.0), std::invalid_argument);
}

TEST_CASE("linear flow matches the free Gaussian") {
    const auto g = make_grid(1023, 48.0);
    const State s(gaussian(g, 1.0), RadialField::zeros(g), 1.0);
    for (double t : {0.1, 0.5, 1.0}) {
        const auto out = linear_flow(s, t);
        CHECK(max_abs_diff(out.u, free_gaussian(g, t)) < 1e-10);
        CHECK(out.time == doctest::Approx(t));
    }
}

TEST_CASE("linear flow acts on sine eigenmodes by the stated multipliers") {
    const auto g = make_grid(255, 16.0);
    const std::size_t m = 7;
    const double k = g.wavenumber(m);
    const auto mode = RadialField::from_function(g, [=](double r) { return cplx(std::sin(k * r) / r, 0.0); });
    for (double alpha : {0.5, 2.0}) {
        const State s(mode, mode, alpha);
        const double dt = 0.37;
        const auto out = linear_flow(s, dt);
        CHECK(max_abs_diff(out.u, mode * std::polar(1.0, k * k * dt)) < 1e-11);
        CHECK(max_abs_diff(out.n_field, mode * std::polar(1.0, alpha * k * dt)) < 1e-11);
    }
}

TEST_CASE("nonlinear step is the exact coupling flow") {
    const auto g = make_grid(255, 16.0);
    const auto s = random_state(g, 5, 1.5);
    const double dt = 0.05;
    const auto out = nonlinear_step(s, dt);
    for (std::size_t j = 0; j < g.size(); ++j) {
        CHECK(std::abs(out.u[j]) == doctest::Approx(std::abs(s.u[j])).epsilon(1e-14));
        const cplx expected = s.u[j] * std::polar(1.0, -dt * s.n_field[j].real());
        CHECK(std::abs(out.u[j] - expected) < 1e-13);
    }
    // |u|^2 is invariant under the phase, so the N increment is linear in dt
    // and D^2 = -Lap ties it to the Laplacian of |u|^2.
    auto inc = out.n_field;
    inc -= s.n_field;
    const auto lap = apply_laplacian(abs_squared(s.u));
    const auto d_inc = apply_D_power(inc, 1.0);
    const auto expected = lap * cplx(0.0, dt * s.alpha);
    CHECK(max_abs_diff(d_inc, expected) < 1e-9 * (1.0 + max_abs(expected)));
}

TEST_CASE("strang step is time reversible") {
    const auto g = make_grid(511, 24.0);
    const auto s = random_state(g, 11);
    const auto fwd = strang_step(s, 0.01);
    const auto back = strang_step(fwd, -0.01);
    CHECK(max_abs_diff(back.u, s.u) < 1e-12 * (1.0 + max_abs(s.u)));
    CHECK(max_abs_diff(back.n_field, s.n_field) < 1e-12 * (1.0 + max_abs(s.n_field)));
    CHECK(back.time == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("evolve conserves mass and has second-order energy drift") {
    const auto g = make_grid(1023, 32.0);
    const State s(gaussian(g, 1.0), RadialField::zeros(g), 1.0);
    double prev = 0.0;
    for (double dt : {0.02, 0.01, 0.005}) {
        EvolveOptions opts;
        opts.sample_every = static_cast<int>(std::lround(0.1 / dt));
        const auto tr = evolve(s, 2.0, dt, opts);
        const auto cr = conservation_report(tr);
        CHECK(cr.mass_drift < 1e-12);
        if (prev > 0.0) CHECK(prev / cr.energy_drift == doctest::Approx(4.0).epsilon(0.2));
        prev = cr.energy_drift;
    }
}

TEST_CASE("evolve sampling and step landing") {
    const auto g = make_grid(255, 16.0);
    const State s(gaussian(g, 0.5), RadialField::zeros(g), 1.0);
    EvolveOptions opts;
    opts.sample_every = 3;
    opts.keep_states = true;
    const auto tr = evolve(s, 0.1, 0.03, opts);  // 4 steps of 0.025
    REQUIRE(!tr.samples.empty());
    CHECK(tr.samples.front().t == 0.0);
    CHECK(tr.samples.back().t == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(tr.dt == doctest::Approx(0.025));
    CHECK(tr.samples.size() == 3);
    CHECK(tr.samples.back().state.has_value());
    CHECK_FALSE(tr.blowup_suspected);
    CHECK_THROWS_AS(evolve(s, 0.1, 0.0), std::invalid_argument);
}

TEST_CASE("zero data stays zero") {
    const auto g = make_grid(127, 8.0);
    const State s(RadialField::zeros(g), RadialField::zeros(g), 1.0);
    const auto tr = evolve(s, 0.5, 0.01);
    for (const auto& smp : tr.samples) {
        CHECK(smp.rec.mass == 0.0);
        CHECK(smp.rec.n_l2 == 0.0);
    }
}

TEST_CASE("standing wave error converges at second order over short times") {
    const auto g = make_grid(1023, 24.0);
    const auto gs = solve_ground_state(g);
    const auto s = standing_wave_state(gs, 1.0, 0.0);
    const double t_end = 0.2;
    auto error = [&](double dt) {
        EvolveOptions opts;
        opts.sample_every = 1 << 20;
        opts.keep_states = true;
        const auto tr = evolve(s, t_end, dt, opts);
        State exact(gs.profile * std::polar(1.0, -t_end), abs_squared(gs.profile), 1.0);
        return h1l2_distance(*tr.samples.back().state, exact) / h1l2_norm(exact);
    };
    const double e1 = error(0.004), e2 = error(0.002);
    CHECK(e1 < 1e-3);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.2));
}

TEST_CASE("conservation report and csv output") {
    const auto g = make_grid(127, 8.0);
    Trajectory empty(g);
    CHECK_THROWS_AS(conservation_report(empty), std::invalid_argument);

    const State s(gaussian(g, 0.3), RadialField::zeros(g), 1.0);
    const auto tr = evolve(s, 0.05, 0.01);
    std::ostringstream out;
    write_trajectory_csv(tr, out);
    const auto text = out.str();
    CHECK(text.rfind("# zlab-trajectory v1", 0) == 0);
    std::size_t lines = 0;
    for (char c : text) lines += c == '\n';
    CHECK(lines == tr.samples.size() + 2);
}

TEST_CASE("h1 x l2 norms") {
    const auto g = make_grid(511, 16.0);
    const auto s = random_state(g, 2);
    CHECK(h1l2_distance(s, s) == 0.0);
    const double expected = std::sqrt(inner(s.u, s.u) + gradient_norm_sq(s.u) + inner(s.n_field, s.n_field));
    CHECK(h1l2_norm(s) == doctest::Approx(expected).epsilon(1e-14));
}
