#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "test_support.hpp"
#include "zlab/evolution.hpp"
#include "zlab/functionals.hpp"
#include "zlab/normal_form.hpp"

using namespace zlab;
using zlab::testing::max_abs;
using zlab::testing::max_abs_diff;

namespace {

int count_containing(std::initializer_list<RegionKind> kinds, double beta, int j, int k) {
    int c = 0;
    for (auto kind : kinds) c += region_contains({kind, beta}, j, k);
    return c;
}

RadialField gaussian(const RadialGrid& g, double a, double width) {
    return RadialField::from_function(g, [=](double r) { return cplx(a * std::exp(-0.5 * r * r / (width * width)), 0.0); });
}

}  // namespace

TEST_CASE("regions form two partitions of Z^2") {
    using K = RegionKind;
    for (double beta : {8.0, 10.0, 15.0}) {
        for (int j = -20; j <= 20; ++j)
            for (int k = -20; k <= 20; ++k) {
                CHECK(count_containing({K::XL, K::RL, K::LL, K::LH}, beta, j, k) == 1);
                CHECK(count_containing({K::XL, K::HH, K::RR, K::LX}, beta, j, k) == 1);
            }
    }
    CHECK(region_contains({K::XL, 10.0}, 12, 3));
    CHECK_FALSE(region_contains({K::LH, 10.0}, 12, 3));
    CHECK(region_contains({K::LH, 10.0}, 0, 0));
    CHECK(region_contains({K::RR, 10.0}, 0, 0));
    CHECK(region_contains({K::LL, 10.0}, -10, -12));
    CHECK(region_contains({K::LX, 10.0}, 3, 12));
    CHECK(to_string(K::XL) == "XL");
    CHECK(to_string(K::LX) == "LX");
}

TEST_CASE("beta bounds") {
    CHECK(minimal_beta(1.0) == 5.0);
    CHECK(minimal_beta(0.25) == doctest::Approx(7.0));
    CHECK(default_beta(1.0) == 10.0);
    CHECK(default_beta(1.0 / 4096.0) == 17.0);
    CHECK_THROWS_AS(minimal_beta(0.0), std::invalid_argument);
}

TEST_CASE("Littlewood-Paley bumps") {
    for (double xi = 1e-3; xi < 1e3; xi *= 1.0137) {
        double sum = 0.0, sq = 0.0;
        for (int k = -15; k <= 15; ++k) {
            const double p = lp_bump(k, xi);
            CHECK(p >= 0.0);
            CHECK(p <= 1.0);
            sum += p;
            sq += p * p;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(sq >= 0.5 - 1e-14);
        CHECK(sq <= 1.0 + 1e-14);
    }
    CHECK(lp_bump(3, 8.0) == 1.0);
    CHECK(lp_bump(3, std::exp2(3.2)) == 1.0);
    CHECK(lp_bump(3, std::exp2(3.8)) == 0.0);
    CHECK(lp_bump(3, 0.0) == 0.0);
    CHECK(dyadic_index(8.0) == 3);
    CHECK(dyadic_index(0.25) == -2);
    CHECK_THROWS_AS(dyadic_index(0.0), std::invalid_argument);
}

TEST_CASE("Littlewood-Paley projections on the grid") {
    const auto g = make_grid(511, 32.0);
    const auto [lo, hi] = lp_index_range(g);
    CHECK(lp_bump(lo - 1, g.wavenumber(0)) == 0.0);
    CHECK(lp_bump(hi + 1, g.k_max()) == 0.0);
    CHECK(lp_bump(lo, g.wavenumber(0)) > 0.0);

    const auto f = zlab::testing::random_smooth_field(g, 3);
    auto sum = RadialField::zeros(g);
    double pieces = 0.0;
    for (int k = lo; k <= hi; ++k) {
        const auto p = lp_project(f, k);
        sum += p;
        pieces += inner(p, p);
    }
    CHECK(max_abs_diff(sum, f) < 1e-12 * max_abs(f));
    const double total = inner(f, f);
    CHECK(pieces <= total * (1.0 + 1e-12));
    CHECK(pieces >= 0.5 * total * (1.0 - 1e-12));

    // An eigenmode whose wavenumber sits at 2^k is fixed by P_k and killed by its neighbours' far bumps.
    std::size_t m = 0;
    while (g.wavenumber(m) < 4.0) ++m;
    REQUIRE(std::abs(std::log2(g.wavenumber(m)) - 2.0) < 0.25);
    const double km = g.wavenumber(m);
    const auto mode = RadialField::from_function(g, [=](double r) { return cplx(std::sin(km * r) / r, 0.0); });
    CHECK(max_abs_diff(lp_project(mode, 2), mode) < 1e-10 * max_abs(mode));
    CHECK(max_abs(lp_project(mode, 1)) < 1e-10 * max_abs(mode));
    CHECK(max_abs(lp_project(mode, 3)) < 1e-10 * max_abs(mode));
}

TEST_CASE("masked products") {
    const auto g = make_grid(255, 16.0);
    const auto f = zlab::testing::random_smooth_field(g, 5);
    const auto h = zlab::testing::random_smooth_field(g, 6);
    const auto direct = pointwise_product(f, h);
    for (double beta : {3.0, 10.0}) {
        const RegionUnion first{{RegionKind::XL, RegionKind::RL, RegionKind::LL, RegionKind::LH}, beta};
        const RegionUnion second{{RegionKind::XL, RegionKind::HH, RegionKind::RR, RegionKind::LX}, beta};
        CHECK(max_abs_diff(masked_product(f, h, first), direct) < 1e-12 * max_abs(direct));
        CHECK(max_abs_diff(masked_product(f, h, second), direct) < 1e-12 * max_abs(direct));
    }
    // Nothing on this grid reaches 2^10 or 2^-10.
    CHECK(max_abs(masked_product(f, h, FrequencyRegion{RegionKind::XL, 10.0})) == 0.0);
    CHECK(max_abs(masked_product(f, h, FrequencyRegion{RegionKind::LL, 10.0})) == 0.0);
    // XL and LX are mirror images.
    const auto xl = masked_product(f, h, FrequencyRegion{RegionKind::XL, 3.0});
    const auto lx = masked_product(h, f, FrequencyRegion{RegionKind::LX, 3.0});
    CHECK(max_abs(xl) > 0.0);
    CHECK(max_abs_diff(xl, lx) < 1e-13 * (1.0 + max_abs(xl)));
    CHECK_THROWS_AS(masked_product(f, RadialField::zeros(make_grid(127, 16.0)), FrequencyRegion{}),
                    std::invalid_argument);
}

TEST_CASE("bilinear multiplier consistency hooks") {
    const auto g = make_grid(511, 32.0);
    const auto f = gaussian(g, 1.0, 0.05);
    const auto h = RadialField::from_function(g, [](double r) { return cplx(std::exp(-0.5 * r * r), 0.2 * std::exp(-r * r)); });
    for (double beta : {3.0, 5.0}) {
        for (const RegionUnion& mask : {RegionUnion{{RegionKind::XL}, beta}, RegionUnion{{RegionKind::XL, RegionKind::LH}, beta},
                                        RegionUnion{{RegionKind::HH, RegionKind::RR}, beta}}) {
            const auto mp = masked_product(f, h, mask);
            const auto unit = bilinear_multiplier(f, h, mask, Denominator::Unit, 1.0);
            CHECK(max_abs_diff(unit, mp) < 1e-6 * (1.0 + max_abs(mp)));
            const auto rt = bilinear_multiplier(f, h, mask, Denominator::SchrodingerPlus, 1.0, false, DenominatorUse::RoundTrip);
            CHECK(max_abs_diff(rt, mp) < 1e-8 * (1.0 + max_abs(mp)));
        }
    }
    const RegionUnion xl{{RegionKind::XL}, 5.0};
    CHECK(max_abs(bilinear_multiplier(f, h, xl, Denominator::Unit, 1.0)) > 1e-3);
    // Conjugating the second argument's spectrum is the product with conj(h).
    const auto mc = masked_product(f, conj(h), xl);
    CHECK(max_abs_diff(bilinear_multiplier(f, h, xl, Denominator::Unit, 1.0, true), mc) < 1e-6 * (1.0 + max_abs(mc)));

    CHECK(max_abs(omega_tilde(f, RadialField::zeros(g), 5.0, 1.0)) == 0.0);
    CHECK(max_abs(omega(RadialField::zeros(g), h, 5.0, 1.0)) == 0.0);
    CHECK(max_abs(omega(f, h, 5.0, 1.0)) > 0.0);
    CHECK_THROWS_AS(omega(f, h, 4.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(omega_tilde(f, h, 6.0, 0.25), std::invalid_argument);

    // A denominator that vanishes inside the mask is reported, not divided by.
    // With r_max = pi the wavenumbers are integers and -3^2 + 8 + 1^2 = 0.
    const auto gi = make_grid(63, std::numbers::pi);
    const auto fi = zlab::testing::random_field(gi, 1), hi = zlab::testing::random_field(gi, 2);
    CHECK_THROWS_AS(bilinear_multiplier(fi, hi, RegionUnion{{RegionKind::LH}, 10.0}, Denominator::SchrodingerPlus, 1.0),
                    std::runtime_error);
}

TEST_CASE("denominators") {
    CHECK(denominator_value(Denominator::SchrodingerPlus, 2.0, 3.0, 1.0, 0.5) == doctest::Approx(-4.0 + 1.5 + 1.0));
    CHECK(denominator_value(Denominator::SchrodingerMinus, 2.0, 3.0, 1.0, 0.5) == doctest::Approx(-4.0 - 1.5 + 1.0));
    CHECK(denominator_value(Denominator::Wave, 2.0, 3.0, 1.0, 0.5) == doctest::Approx(9.0 - 1.0 - 1.0));
    CHECK(denominator_value(Denominator::Unit, 2.0, 3.0, 1.0, 0.5) == 1.0);
}

TEST_CASE("resonance scan stays away from zero for admissible beta") {
    for (double alpha : {0.5, 1.0, 2.0}) {
        const auto sc = resonance_scan(default_beta(alpha), alpha);
        CHECK(sc.beta_admissible);
        CHECK(sc.evaluations > 0);
        CHECK(sc.min_ratio_xl >= 0.5);
        CHECK(sc.min_ratio_wave >= 0.5);
        CHECK(sc.min_ratio_ll >= 0.5);
        CHECK(sc.max_ratio_ll <= 2.0);
        // Regression values of the dense scan.
        CHECK(sc.min_ratio_xl == doctest::Approx(0.904).epsilon(0.01));
        CHECK(sc.min_ratio_wave == doctest::Approx(0.841).epsilon(0.01));
    }
    // Below the bound the low-low denominator nearly vanishes.
    const auto low = resonance_scan(2.0, 1.0);
    CHECK_FALSE(low.beta_admissible);
    CHECK(low.min_ratio_ll < 1e-2);
    CHECK_THROWS_AS(resonance_scan(10.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(resonance_scan(10.0, 1.0, 1), std::invalid_argument);
}

TEST_CASE("normal form residual") {
    SUBCASE("zero solution") {
        const auto g = make_grid(127, 8.0);
        const State s(RadialField::zeros(g), RadialField::zeros(g), 1.0);
        EvolveOptions o;
        o.keep_states = true;
        o.sample_every = 1;
        const auto tr = evolve(s, 0.1, 0.01, o);
        const auto r = normal_form_residual(tr, 10.0);
        CHECK(r.max_residual == 0.0);
        CHECK(r.times.size() == tr.samples.size());
    }
    SUBCASE("free solution with empty masks") {
        // Only Q and T survive; the residual measures the Duhamel quadrature,
        // so dt and the sample spacing are refined together.
        const auto g = make_grid(511, 32.0);
        const State s(gaussian(g, 0.1, 1.0), RadialField::zeros(g), 1.0);
        auto run = [&](double dt) {
            EvolveOptions o;
            o.keep_states = true;
            o.sample_every = 1;
            return normal_form_residual(evolve(s, 1.0, dt, o), 10.0);
        };
        const auto coarse = run(0.01), fine = run(0.005);
        CHECK(coarse.max_boundary_norm == 0.0);
        CHECK(coarse.max_duhamel_norm > 1e-3);
        CHECK(coarse.max_residual < 1e-5);
        CHECK(fine.max_residual < 0.5 * coarse.max_residual);
    }
    SUBCASE("active boundary term") {
        // High-frequency N against low-frequency u puts mass in XL at beta = 5.
        const auto g = make_grid(255, 16.0);
        const State s(gaussian(g, 0.1, 1.0), gaussian(g, 0.1, 0.08), 1.0);
        EvolveOptions o;
        o.keep_states = true;
        o.sample_every = 5;
        const auto r = normal_form_residual(evolve(s, 0.3, 0.001, o), 5.0);
        CHECK(r.max_boundary_norm > 1e-6);
        // With the opposite sign on B the mismatch would be 2|B|.
        CHECK(r.max_residual < 0.25 * r.max_boundary_norm);
    }
    SUBCASE("preconditions") {
        const auto g = make_grid(127, 8.0);
        const State s(gaussian(g, 0.1, 1.0), RadialField::zeros(g), 1.0);
        CHECK_THROWS_AS(normal_form_residual(evolve(s, 0.1, 0.01), 10.0), std::invalid_argument);
        EvolveOptions o;
        o.keep_states = true;
        o.sample_every = 5;
        CHECK_THROWS_AS(normal_form_residual(evolve(s, 0.2, 0.01, o), 10.0), std::invalid_argument);
    }
}
