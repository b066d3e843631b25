#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "test_support.hpp"
#include "zlab/functionals.hpp"

using namespace zlab;

namespace {

const double pi32 = std::pow(std::numbers::pi, 1.5);

RadialField gaussian(const RadialGrid& g, double a, double sigma = 1.0) {
    return RadialField::from_function(g, [=](double r) { return cplx(a * std::exp(-0.5 * r * r / (sigma * sigma)), 0.0); });
}

}  // namespace

TEST_CASE("gaussian closed forms") {
    // u = a e^{-r^2/2}: ||u||^2 = a^2 pi^{3/2}, ||grad u||^2 = (3/2) a^2 pi^{3/2},
    // ||u||_4^4 = a^4 (pi/2)^{3/2}.
    const auto g = make_grid(512, 16.0);
    const double a = 1.3;
    const auto u = gaussian(g, a);
    CHECK(mass(u) == doctest::Approx(0.5 * a * a * pi32).epsilon(1e-10));
    const double quartic = std::pow(a, 4) * std::pow(std::numbers::pi / 2.0, 1.5);
    CHECK(l4_norm4(u) == doctest::Approx(quartic).epsilon(1e-10));
    const double grad2 = 1.5 * a * a * pi32;
    CHECK(nls_energy(u) == doctest::Approx(0.5 * grad2 - 0.25 * quartic).epsilon(1e-10));
    CHECK(k_functional(u) == doctest::Approx(grad2 - 0.75 * quartic).epsilon(1e-10));
}

TEST_CASE("zakharov energy with N = |u|^2 equals the NLS energy") {
    const auto g = make_grid(256, 16.0);
    for (unsigned seed = 1; seed <= 4; ++seed) {
        const auto u = zlab::testing::random_smooth_field(g, seed);
        const State s(u, abs_squared(u), 1.0);
        CHECK(zakharov_energy(s) == doctest::Approx(nls_energy(u)).epsilon(1e-10));
        CHECK(evaluate_functionals(s).nu_l2 < 1e-12);
    }
}

TEST_CASE("zakharov energy split identity on random data") {
    const auto g = make_grid(256, 16.0);
    for (unsigned seed = 1; seed <= 4; ++seed) {
        const auto u = zlab::testing::random_smooth_field(g, seed);
        const auto n = zlab::testing::random_smooth_field(g, seed + 50);
        const State s(u, n, 0.7);
        const auto rec = evaluate_functionals(s);
        CHECK(rec.e_z == doctest::Approx(rec.e_s + 0.25 * rec.nu_l2 * rec.nu_l2).epsilon(1e-10));
        CHECK(rec.e_z >= rec.e_s - 1e-12);
        const auto dev = deviation(s);
        CHECK(lp_norm(dev.complex_dev, 2.0) == doctest::Approx(rec.nu_l2).epsilon(1e-12));
        for (std::size_t j = 0; j < dev.real_dev.size(); ++j) CHECK(dev.real_dev[j].imag() == 0.0);
    }
}

TEST_CASE("action and G relations") {
    const auto g = make_grid(256, 16.0);
    const auto u = zlab::testing::random_smooth_field(g, 7);
    for (double lambda : {0.5, 1.0, 2.0}) {
        CHECK(action(u, lambda) == doctest::Approx(nls_energy(u) + lambda * lambda * mass(u)).epsilon(1e-12));
        CHECK(g_functional(u, lambda) == doctest::Approx(action(u, lambda) - k_functional(u) / 3.0).epsilon(1e-10));
    }
    CHECK_THROWS_AS(action(u, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(g_functional(u, -1.0), std::invalid_argument);
}

TEST_CASE("scaling laws") {
    // u_mu(r) = mu^{3/2} u(mu r) keeps the mass and scales K: K(u_mu) = mu^2 ||grad u||^2 - (3/4) mu^3 ||u||_4^4.
    const auto g = make_grid(512, 16.0);
    const auto u = gaussian(g, 1.1);
    const double mu = 1.6;
    const auto gs = make_grid(512, 16.0 / mu);
    const auto um = RadialField::from_function(gs, [&](double r) { return cplx(std::pow(mu, 1.5) * 1.1 * std::exp(-0.5 * mu * mu * r * r), 0.0); });
    CHECK(mass(um) == doctest::Approx(mass(u)).epsilon(1e-12));
    const double expect = mu * mu * gradient_norm_sq(u) - 0.75 * std::pow(mu, 3) * l4_norm4(u);
    CHECK(k_functional(um) == doctest::Approx(expect).epsilon(1e-10));
}

TEST_CASE("state validation") {
    const auto g = make_grid(64, 8.0);
    const auto u = gaussian(g, 1.0);
    CHECK_THROWS_AS(State(u, u, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(State(u, gaussian(make_grid(32, 8.0), 1.0), 1.0), std::invalid_argument);
    CHECK_THROWS_AS(State(u, to_spectral(u), 1.0), std::invalid_argument);
}
