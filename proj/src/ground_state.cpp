#include "zlab/ground_state.hpp"

#include <algorithm>
#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>

#include "zlab/functionals.hpp"

namespace zlab {

namespace {

namespace ode = boost::numeric::odeint;
using Vec2 = std::array<double, 2>;

constexpr double kStartRadius = 1e-4;
constexpr double kShotLimit = 80.0;
constexpr double kMatchLevel = 1e-5;
constexpr const char* kCacheMagic = "zlab-ground-state";
constexpr int kCacheVersion = 1;

void rhs(const Vec2& y, Vec2& dy, double r) {
    dy[0] = y[1];
    dy[1] = y[0] - y[0] * y[0] * y[0] - 2.0 * y[1] / r;
}

Vec2 series_start(double q, double r) {
    const double c = (q - q * q * q) / 6.0;
    return {q + c * r * r, 2.0 * c * r};
}

auto make_stepper(double tol) {
    return ode::make_dense_output(1e-3 * tol, tol, ode::runge_kutta_dopri5<Vec2>());
}

enum class Shot { Crossing, Undershoot, Undecided };

// Too large a Q(0) overshoots through zero; too small a Q(0) turns around
// while still positive and falls back into the well at Q = 1.
Shot shoot(double q, double ode_tol) {
    auto stepper = make_stepper(ode_tol);
    stepper.initialize(series_start(q, kStartRadius), kStartRadius, 1e-3);
    while (stepper.current_time() < kShotLimit) {
        stepper.do_step(rhs);
        const Vec2& y = stepper.current_state();
        if (!std::isfinite(y[0])) return Shot::Crossing;
        if (y[0] < 0.0) return Shot::Crossing;
        if (y[1] > 0.0) return Shot::Undershoot;
    }
    return Shot::Undecided;
}

double tail_value(double q_match, double r_match, double r) {
    return q_match * (r_match / r) * std::exp(-(r - r_match));
}

// Q'' from the profile equation.
double curvature(double q, double dq, double r) { return q - q * q * q - 2.0 * dq / r; }

// Fritsch-Carlson limited cubic Hermite on one interval.
double monotone_cubic(double t, double dx, double y0, double y1, double m0, double m1) {
    const double secant = (y1 - y0) / dx;
    if (secant == 0.0) {
        m0 = m1 = 0.0;
    } else {
        const double a = m0 / secant, b = m1 / secant;
        if (a < 0.0) m0 = 0.0;
        if (b < 0.0) m1 = 0.0;
        const double s = a * a + b * b;
        if (a >= 0.0 && b >= 0.0 && s > 9.0) {
            const double tau = 3.0 / std::sqrt(s);
            m0 = tau * a * secant;
            m1 = tau * b * secant;
        }
    }
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * dx * m0 + (-2 * t3 + 3 * t2) * y1 +
           (t3 - t2) * dx * m1;
}

void fill_invariants(GroundState& gs) {
    const double grad2 = gradient_norm_sq(gs.profile);
    gs.mass = mass(gs.profile);
    gs.e_s = nls_energy(gs.profile);
    gs.j = gs.e_s + gs.mass;
    gs.threshold = gs.e_s * gs.mass;
    const double k = k_functional(gs.profile);
    if (std::abs(k) > 1e-6 * grad2)
        throw std::runtime_error("ground state: K(Q) not small on this grid, refine n");
    if (std::abs(gs.e_s - gs.mass) > 1e-6 * gs.mass)
        throw std::runtime_error("ground state: Pohozaev identity violated on this grid, refine n");
}

}  // namespace

GroundState solve_ground_state(const RadialGrid& grid, double tol) {
    if (grid.r_max() < 15.0) throw std::invalid_argument("solve_ground_state: r_max must be >= 15");
    if (!(tol > 0.0) || tol > 1e-4) throw std::invalid_argument("solve_ground_state: tol must lie in (0, 1e-4]");
    const double ode_tol = std::clamp(1e-4 * tol, 1e-13, 1e-10);

    double lo = 2.0, hi = 8.0;
    if (shoot(lo, ode_tol) != Shot::Undershoot || shoot(hi, ode_tol) != Shot::Crossing)
        throw std::runtime_error("solve_ground_state: initial interval does not bracket Q(0)");
    int iter = 0;
    for (; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const Shot s = shoot(mid, ode_tol);
        if (s == Shot::Crossing)
            hi = mid;
        else if (s == Shot::Undershoot)
            lo = mid;
        else
            break;
    }
    if (iter == 200) throw std::runtime_error("solve_ground_state: bisection did not converge");

    GroundState gs{RadialField::zeros(grid), std::vector<double>(grid.size()), lo};

    // Integrate the converged shot until Q drops below kMatchLevel; past that
    // point the equation is linear to O(Q^3) and the tail is e^{-r}/r.
    auto stepper = make_stepper(ode_tol);
    stepper.initialize(series_start(lo, kStartRadius), kStartRadius, 1e-3);
    std::size_t j = 0;
    while (j < grid.size() && grid.node(j) < kStartRadius) {
        const Vec2 y = series_start(lo, grid.node(j));
        gs.profile[j] = y[0];
        gs.slope[j] = y[1];
        ++j;
    }
    while (true) {
        stepper.do_step(rhs);
        const double r_now = stepper.current_time();
        const Vec2& y = stepper.current_state();
        if (y[0] <= kMatchLevel || y[1] >= 0.0 || r_now >= grid.r_max()) {
            // Locate the match point inside the last step.
            double a = stepper.previous_time(), b = r_now;
            Vec2 ya;
            for (int k = 0; k < 60; ++k) {
                const double m = 0.5 * (a + b);
                stepper.calc_state(m, ya);
                (ya[0] > kMatchLevel && ya[1] < 0.0 ? a : b) = m;
            }
            stepper.calc_state(a, ya);
            gs.r_match = a;
            gs.q_match = ya[0];
            while (j < grid.size() && grid.node(j) <= a) {
                Vec2 yn;
                stepper.calc_state(grid.node(j), yn);
                gs.profile[j] = yn[0];
                gs.slope[j] = yn[1];
                ++j;
            }
            break;
        }
        while (j < grid.size() && grid.node(j) <= r_now) {
            Vec2 yn;
            stepper.calc_state(grid.node(j), yn);
            gs.profile[j] = yn[0];
            gs.slope[j] = yn[1];
            ++j;
        }
    }
    for (; j < grid.size(); ++j) {
        const double r = grid.node(j);
        const double q = tail_value(gs.q_match, gs.r_match, r);
        gs.profile[j] = q;
        gs.slope[j] = -q * (1.0 + 1.0 / r);
    }

    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(gs.profile[i].real() > 0.0)) throw std::runtime_error("ground state: profile not positive");
        if (i > 0 && !(gs.profile[i].real() < gs.profile[i - 1].real()))
            throw std::runtime_error("ground state: profile not decreasing");
    }
    fill_invariants(gs);
    return gs;
}

double GroundState::evaluate(double r) const {
    if (r < 0.0) throw std::invalid_argument("GroundState::evaluate: negative radius");
    const auto& g = grid();
    const std::size_t n = g.size();
    if (r >= g.node(n - 1)) return tail_value(q_match, r_match, std::max(r, r_match));

    // Interval [x0, x1] with the origin node (0, q0, 0) prepended.
    const auto nodes = g.nodes();
    const std::size_t hi = static_cast<std::size_t>(std::upper_bound(nodes.begin(), nodes.end(), r) - nodes.begin());
    double x0, y0, m0;
    if (hi == 0) {
        x0 = 0.0;
        y0 = q0;
        m0 = 0.0;
    } else {
        x0 = nodes[hi - 1];
        y0 = profile[hi - 1].real();
        m0 = slope[hi - 1];
    }
    const double x1 = nodes[hi], y1 = profile[hi].real();
    const double m1 = slope[hi];
    const double dx = x1 - x0;
    const double t = (r - x0) / dx;

    // Quintic Hermite with the curvature taken from the equation itself.
    const double c0 = hi == 0 ? (q0 - q0 * q0 * q0) / 3.0 : curvature(y0, m0, x0);
    const double c1 = curvature(y1, m1, x1);
    const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
    const double quintic = (1 - 10 * t3 + 15 * t4 - 6 * t5) * y0 + (t - 6 * t3 + 8 * t4 - 3 * t5) * dx * m0 +
                           0.5 * (t2 - 3 * t3 + 3 * t4 - t5) * dx * dx * c0 +
                           (10 * t3 - 15 * t4 + 6 * t5) * y1 + (-4 * t3 + 7 * t4 - 3 * t5) * dx * m1 +
                           0.5 * (t3 - 2 * t4 + t5) * dx * dx * c1;
    if (quintic <= y0 && quintic >= y1) return quintic;
    return monotone_cubic(t, dx, y0, y1, m0, m1);
}

RadialField scale_ground_state(const GroundState& gs, double lambda) {
    return scale_ground_state(gs, lambda, gs.grid());
}

RadialField scale_ground_state(const GroundState& gs, double lambda, const RadialGrid& target) {
    if (!(lambda > 0.0)) throw std::invalid_argument("scale_ground_state: lambda must be positive");
    if (lambda == 1.0 && target == gs.grid()) return gs.profile;
    return RadialField::from_function(target, [&](double r) { return cplx(lambda * gs.evaluate(lambda * r), 0.0); });
}

State standing_wave_state(const GroundState& gs, double lambda, double theta, double alpha) {
    auto q = scale_ground_state(gs, lambda);
    auto n = abs_squared(q);
    q *= std::polar(1.0, theta);
    return State(std::move(q), std::move(n), alpha);
}

ThresholdConstants threshold_constants(const GroundState& gs) {
    return {gs.e_s, gs.mass, gs.j, gs.threshold};
}

void save_ground_state(const GroundState& gs, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_ground_state: cannot open " + path.string());
    out << kCacheMagic << ' ' << kCacheVersion << '\n';
    out << std::setprecision(17);
    out << gs.grid().size() << ' ' << gs.grid().r_max() << '\n';
    out << gs.q0 << ' ' << gs.r_match << ' ' << gs.q_match << '\n';
    for (std::size_t j = 0; j < gs.grid().size(); ++j) out << gs.profile[j].real() << ' ' << gs.slope[j] << '\n';
    if (!out) throw std::runtime_error("save_ground_state: write failed for " + path.string());
}

bool load_ground_state(const std::filesystem::path& path, const RadialGrid& grid, GroundState& out) {
    std::ifstream in(path);
    if (!in) return false;
    std::string magic;
    int version = 0;
    in >> magic >> version;
    if (magic != kCacheMagic) throw std::runtime_error("load_ground_state: not a ground-state cache: " + path.string());
    if (version != kCacheVersion) return false;
    std::size_t n = 0;
    double r_max = 0.0;
    in >> n >> r_max;
    if (!in) throw std::runtime_error("load_ground_state: malformed header in " + path.string());
    if (n != grid.size() || r_max != grid.r_max()) return false;

    GroundState gs{RadialField::zeros(grid), std::vector<double>(n)};
    in >> gs.q0 >> gs.r_match >> gs.q_match;
    for (std::size_t j = 0; j < n; ++j) {
        double q = 0.0;
        in >> q >> gs.slope[j];
        gs.profile[j] = q;
    }
    if (!in) throw std::runtime_error("load_ground_state: truncated file " + path.string());
    fill_invariants(gs);
    out = std::move(gs);
    return true;
}

GroundState cached_ground_state(const RadialGrid& grid, const std::filesystem::path& path, double tol) {
    GroundState gs{RadialField::zeros(grid), {}};
    if (load_ground_state(path, grid, gs)) return gs;
    gs = solve_ground_state(grid, tol);
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    save_ground_state(gs, path);
    return gs;
}

}  // namespace zlab
