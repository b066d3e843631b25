#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>

#include "oracles.hpp"
#include "test_support.hpp"
#include "zlab/functionals.hpp"
#include "zlab/ground_state.hpp"

using namespace zlab;

namespace {

const GroundState& shared_ground_state() {
    static const GroundState gs = solve_ground_state(make_grid(1023, 24.0), 1e-8);
    return gs;
}

}  // namespace

TEST_CASE("Pohozaev identities") {
    const auto& gs = shared_ground_state();
    const double grad2 = gradient_norm_sq(gs.profile);
    const double l2 = inner(gs.profile, gs.profile);
    CHECK(std::abs(k_functional(gs.profile)) <= 1e-6 * grad2);
    CHECK(grad2 / l2 == doctest::Approx(3.0).epsilon(1e-5));
    CHECK(l4_norm4(gs.profile) / l2 == doctest::Approx(4.0).epsilon(1e-5));
    CHECK(std::abs(gs.e_s - gs.mass) <= 1e-6 * gs.mass);
    CHECK(std::abs(gs.j * gs.j / 4.0 - gs.threshold) <= 1e-8 * gs.threshold);
}

TEST_CASE("profile is positive and decreasing") {
    const auto& gs = shared_ground_state();
    for (std::size_t j = 0; j < gs.profile.size(); ++j) {
        CHECK(gs.profile[j].real() > 0.0);
        CHECK(gs.profile[j].imag() == 0.0);
        if (j > 0) CHECK(gs.profile[j].real() < gs.profile[j - 1].real());
    }
    CHECK(value_at_origin(gs.profile).real() == doctest::Approx(gs.q0).epsilon(1e-8));
}

TEST_CASE("agreement with the fixed-point oracle") {
    const auto& gs = shared_ground_state();
    const auto oracle = zlab::testing::petviashvili(gs.grid());
    const double q0_oracle = value_at_origin(oracle).real();
    CHECK(gs.q0 == doctest::Approx(q0_oracle).epsilon(1e-5));
    CHECK(gs.mass == doctest::Approx(mass(oracle)).epsilon(1e-5));
}

TEST_CASE("grid refinement") {
    const auto& fine = shared_ground_state();
    const auto coarse = solve_ground_state(make_grid(511, 24.0), 1e-8);
    CHECK(std::abs(coarse.mass - fine.mass) < 4.0 * 1e-8 * fine.mass);
    CHECK(coarse.q0 == doctest::Approx(fine.q0).epsilon(1e-12));
}

TEST_CASE("preconditions") {
    CHECK_THROWS_AS(solve_ground_state(make_grid(256, 10.0), 1e-8), std::invalid_argument);
    CHECK_THROWS_AS(solve_ground_state(make_grid(256, 20.0), 1e-3), std::invalid_argument);
    CHECK_THROWS_AS(solve_ground_state(make_grid(256, 20.0), 0.0), std::invalid_argument);
    CHECK_THROWS_AS(scale_ground_state(shared_ground_state(), 0.0), std::invalid_argument);
    CHECK_THROWS_AS(scale_ground_state(shared_ground_state(), -1.0), std::invalid_argument);
}

TEST_CASE("scaling family") {
    const auto& gs = shared_ground_state();
    const auto same = scale_ground_state(gs, 1.0);
    CHECK(zlab::testing::max_abs_diff(same, gs.profile) == 0.0);

    // Interpolating at the nodes themselves reproduces the samples.
    const auto g = gs.grid();
    for (std::size_t j = 0; j < g.size(); j += 37) CHECK(gs.evaluate(g.node(j)) == doctest::Approx(gs.profile[j].real()).epsilon(1e-14));
    CHECK(gs.evaluate(0.0) == doctest::Approx(gs.q0).epsilon(1e-14));

    // Wide target box so that Q_lambda has decayed at its edge for every lambda.
    const auto target = make_grid(2047, 48.0);
    for (double lambda : {0.6, 0.9, 1.5, 2.0}) {
        const auto ql = scale_ground_state(gs, lambda, target);
        CHECK(mass(ql) == doctest::Approx(gs.mass / lambda).epsilon(1e-5));
        // -Lap Q_l + l^2 Q_l - Q_l^3 relative to ||Q_l^3||.
        auto residual = apply_laplacian(ql);
        residual *= -1.0;
        auto lin = ql;
        lin *= lambda * lambda;
        residual += lin;
        residual -= pointwise_product(ql, abs_squared(ql));
        const double scale = lp_norm(pointwise_product(ql, abs_squared(ql)), 2.0);
        CHECK(lp_norm(residual, 2.0) < 1e-6 * scale);
        CHECK(std::abs(k_functional(ql)) < 1e-5 * gradient_norm_sq(ql));
    }
}

TEST_CASE("standing waves and threshold constants") {
    const auto& gs = shared_ground_state();
    const auto tc = threshold_constants(gs);
    CHECK(tc.product == doctest::Approx(tc.j_q * tc.j_q / 4.0).epsilon(1e-8));
    CHECK(tc.e_s_q == doctest::Approx(tc.m_q).epsilon(1e-5));
    CHECK(tc.j_q == doctest::Approx(2.0 * tc.m_q).epsilon(1e-5));

    for (double lambda : {0.8, 1.0, 1.3}) {
        const auto s = standing_wave_state(gs, lambda, 0.7, 2.0);
        const auto rec = evaluate_functionals(s);
        CHECK(rec.nu_l2 < 1e-14);
        CHECK(rec.e_z * rec.mass == doctest::Approx(tc.product).epsilon(1e-5));
        CHECK(std::abs(rec.k) < 1e-5 * rec.grad_u_l2 * rec.grad_u_l2);
        CHECK(std::arg(s.u[0]) == doctest::Approx(0.7));
    }
}

TEST_CASE("cache round trip") {
    const auto& gs = shared_ground_state();
    const auto dir = std::filesystem::temp_directory_path() / "zlab_gs_cache_test";
    std::filesystem::remove_all(dir);
    const auto path = dir / "q.txt";
    const auto a = cached_ground_state(gs.grid(), path);
    CHECK(std::filesystem::exists(path));
    GroundState b{RadialField::zeros(gs.grid()), {}};
    REQUIRE(load_ground_state(path, gs.grid(), b));
    CHECK(b.q0 == a.q0);
    CHECK(zlab::testing::max_abs_diff(a.profile, b.profile) == 0.0);
    CHECK(b.mass == a.mass);
    CHECK_FALSE(load_ground_state(path, make_grid(511, 24.0), b));
    CHECK_FALSE(load_ground_state(dir / "missing.txt", gs.grid(), b));
    std::filesystem::remove_all(dir);
}
