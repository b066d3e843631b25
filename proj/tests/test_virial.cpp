#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "test_support.hpp"
#include "zlab/evolution.hpp"
#include "zlab/functionals.hpp"
#include "zlab/virial.hpp"

using namespace zlab;

namespace {

State random_state(const RadialGrid& g, unsigned seed, double alpha = 1.0) {
    return State(zlab::testing::random_smooth_field(g, seed), zlab::testing::random_smooth_field(g, seed + 50), alpha);
}

RadialField gaussian(const RadialGrid& g, double a) {
    return RadialField::from_function(g, [=](double r) { return cplx(a * std::exp(-0.5 * r * r), 0.0); });
}

// <f|i r d_r g> by a plain midpoint-free trapezoid on an analytic grid.
double dense_pair(const std::function<cplx(double)>& f, const std::function<cplx(double)>& rdg, double r_max) {
    const int n = 200000;
    const double h = r_max / n;
    double s = 0.0;
    for (int j = 1; j < n; ++j) {
        const double r = j * h;
        s -= (std::conj(f(r)) * rdg(r)).imag() * r * r;
    }
    return 4.0 * std::numbers::pi * h * s;
}

}  // namespace

TEST_CASE("cutoff profile") {
    const CutoffProfile psi(3.0);
    CHECK(psi.value(0.5) == 1.0);
    CHECK(psi.value(3.0) == 1.0);
    CHECK(psi.value(6.0) == 0.0);
    CHECK(psi.value(9.0) == 0.0);
    CHECK(psi.value(4.5) == doctest::Approx(0.5).epsilon(1e-14));
    double prev = 1.0;
    for (double r = 3.0; r <= 6.0; r += 0.01) {
        const double v = psi.value(r);
        CHECK(v <= prev + 1e-15);
        prev = v;
        const double e = 1e-6;
        const double fd = (psi.value(r + e) - psi.value(r - e)) / (2.0 * e);
        CHECK(psi.derivative(r) == doctest::Approx(fd).epsilon(1e-6).scale(1.0));
    }
    CHECK_THROWS_AS(CutoffProfile(0.0), std::invalid_argument);
}

TEST_CASE("real data has zero virial") {
    const auto g = make_grid(511, 24.0);
    const auto u = gaussian(g, 1.3);
    const State s(u, real_part(zlab::testing::random_smooth_field(g, 4)), 1.0);
    CHECK(std::abs(virial_value(s)) < 1e-12);
    CHECK(std::abs(merle_virial_value(s)) < 1e-12);
    CHECK(std::abs(localized_virial(s, CutoffProfile(4.0))) < 1e-12);
}

TEST_CASE("virial value against dense quadrature") {
    // u = e^{-r^2/2 + i c r^2}: r d_r u = (-r^2 + 2 i c r^2) u, so
    // <u|i r d_r u> = -Im int conj(u) r d_r u = -2c int r^2 |u|^2.
    const auto g = make_grid(1023, 24.0);
    const double c = 0.3;
    auto f = [=](double r) { return std::exp(cplx(-0.5 * r * r, c * r * r)); };
    auto rdf = [=](double r) { return cplx(-r * r, 2.0 * c * r * r) * f(r); };
    const State s(RadialField::from_function(g, f), RadialField::zeros(g), 1.0);
    const double oracle = dense_pair(f, rdf, 24.0);
    CHECK(virial_value(s) == doctest::Approx(oracle).epsilon(1e-9));
    CHECK(oracle == doctest::Approx(-2.0 * c * 1.5 * std::pow(std::numbers::pi, 1.5)).epsilon(1e-9));
}

TEST_CASE("algebraic relations between the virial quantities") {
    const auto g = make_grid(511, 24.0);
    for (unsigned seed = 1; seed <= 4; ++seed) {
        for (double alpha : {0.5, 2.0}) {
            const auto s = random_state(g, seed, alpha);
            CHECK(merle_virial_rhs(s) == doctest::Approx(merle_virial_rhs_middle(s)).epsilon(1e-10));
        }
    }
}

TEST_CASE("the two virials differ by the difference term in the whole-space limit") {
    // D^{-1} Im N has an algebraic tail, so on the Dirichlet box the relation
    // holds up to O(r_max^{-2}); the mismatch must shrink fourfold per doubling.
    double prev = 0.0;
    for (double r_max : {24.0, 48.0, 96.0}) {
        const auto g = make_grid(static_cast<std::size_t>(21.0 * r_max), r_max);
        const auto s = random_state(g, 1, 0.5);
        const double v = virial_value(s), m = merle_virial_value(s), d = virial_difference_term(s);
        const double rel = std::abs(v - m + d) / std::abs(d);
        if (prev > 0.0) CHECK(prev / rel == doctest::Approx(4.0).epsilon(0.25));
        prev = rel;
    }
    CHECK(prev < 1e-3);
}

TEST_CASE("virial identities along the flow") {
    const auto g = make_grid(1023, 32.0);
    const State s(gaussian(g, 1.5), zlab::testing::random_smooth_field(g, 9) * cplx(0.3, 0.0), 1.0);
    EvolveOptions opts;
    opts.sample_every = 2;
    opts.virial = true;
    const double dt = 5e-4;
    const auto tr = evolve(s, 0.5, dt, opts);
    REQUIRE(tr.samples.size() > 10);
    for (std::size_t i = 1; i + 1 < tr.samples.size(); ++i) {
        const auto& a = *tr.samples[i - 1].virial;
        const auto& b = *tr.samples[i + 1].virial;
        const auto& c = *tr.samples[i].virial;
        const double span = tr.samples[i + 1].t - tr.samples[i - 1].t;
        CHECK(std::abs((b.v - a.v) / span - c.rhs) <= 1e-3 * (1.0 + std::abs(c.rhs)));
        CHECK(std::abs((b.merle_v - a.merle_v) / span - c.merle_rhs) <= 1e-3 * (1.0 + std::abs(c.merle_rhs)));
        CHECK(std::abs((b.diff_term - a.diff_term) / span - c.diff_rate) <= 1e-3 * (1.0 + std::abs(c.diff_rate)));
    }
}

TEST_CASE("localized virial tends to the full virial") {
    const auto g = make_grid(1023, 48.0);
    const State s(RadialField::from_function(g, [](double r) { return std::exp(cplx(-0.5 * r * r, 0.2 * r * r)); }),
                  zlab::testing::random_smooth_field(g, 3) * cplx(0.1, 0.0), 1.0);
    const double v = virial_value(s);
    // The N part carries D^{-1}, which is nonlocal, so convergence in R is algebraic.
    const double e8 = std::abs(localized_virial(s, CutoffProfile(8.0)) - v);
    const double e20 = std::abs(localized_virial(s, CutoffProfile(20.0)) - v);
    CHECK(e20 <= e8 + 1e-14);
    CHECK(e20 < 1e-3 * (1.0 + std::abs(v)));
    CHECK_THROWS_AS(localized_virial(s, CutoffProfile(30.0)), std::invalid_argument);
    CHECK_THROWS_AS(rho_r(s, CutoffProfile(30.0)), std::invalid_argument);
}

TEST_CASE("rho_R") {
    const auto g = make_grid(511, 24.0);
    const auto u = gaussian(g, 1.0);
    const State on_manifold(u, abs_squared(u), 1.0);
    CHECK(rho_r(on_manifold, CutoffProfile(4.0)) < 1e-24);
    const auto s = random_state(g, 6);
    CHECK(rho_r(s, CutoffProfile(4.0)) > 0.0);
}

TEST_CASE("radial Sobolev ratio respects the sharp bound") {
    const auto g = make_grid(2047, 32.0);
    const double bound = 1.0 / std::sqrt(2.0 * std::numbers::pi);
    for (unsigned seed = 1; seed <= 10; ++seed) {
        const auto u = zlab::testing::random_smooth_field(g, seed);
        const double ratio = radial_sobolev_ratio(u);
        CHECK(ratio > 0.0);
        CHECK(ratio <= bound);
    }
    CHECK_THROWS_AS(radial_sobolev_ratio(RadialField::zeros(g)), std::invalid_argument);
}

TEST_CASE("tail mass") {
    const auto g = make_grid(511, 24.0);
    const auto s = random_state(g, 8);
    const auto full = tail_mass(s, 0.0);
    CHECK(full.u2 == doctest::Approx(inner(s.u, s.u)).epsilon(1e-12));
    CHECK(full.grad_u == doctest::Approx(gradient_norm_sq(s.u)).epsilon(1e-3));
    double prev = full.total();
    for (double R : {1.0, 2.0, 4.0, 8.0, 16.0}) {
        const double t = tail_mass(s, R).total();
        CHECK(t <= prev);
        CHECK(t >= 0.0);
        prev = t;
    }
    CHECK_THROWS_AS(tail_mass(s, 24.0), std::invalid_argument);
}

TEST_CASE("verdict names and empty audits") {
    CHECK(to_string(Verdict::Scattering) == "Scattering");
    CHECK(to_string(Verdict::GrowUp) == "GrowUp");
    CHECK(to_string(Verdict::ZeroSolution) == "ZeroSolution");
    CHECK(to_string(Verdict::NotBelowThreshold) == "NotBelowThreshold");

    const auto g = make_grid(255, 16.0);
    const State s(gaussian(g, 0.5), RadialField::zeros(g), 1.0);
    const auto tr = evolve(s, 0.05, 0.01, EvolveOptions{.sample_every = 1});
    const GroundState dummy{RadialField::zeros(g)};
    CHECK(monotonicity_audit(tr, dummy, 1.0, Verdict::NotBelowThreshold).passed());
    CHECK_THROWS_AS(monotonicity_audit(tr, dummy, 1.0, Verdict::Scattering), std::invalid_argument);
}
