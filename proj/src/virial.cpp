#include "zlab/virial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "spectral.hpp"
#include "zlab/evolution.hpp"
#include "zlab/functionals.hpp"

namespace zlab {

namespace {

double step_f(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }
double step_df(double x) { return x > 0.0 ? std::exp(-1.0 / x) / (x * x) : 0.0; }

// <f|i g> = Re int conj(f) i g = -Im int conj(f) g.
double pair_i(const RadialField& f, const RadialField& g) {
    const auto& grid = f.grid();
    double sum = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j) {
        const double r = grid.node(j);
        sum -= (std::conj(f[j]) * g[j]).imag() * r * r;
    }
    return detail::measure_weight(grid) * sum;
}

double norm_sq(const RadialField& f) { return inner(f, f); }

}  // namespace

CutoffProfile::CutoffProfile(double R) : R_(R) {
    if (!(R > 0.0) || !std::isfinite(R)) throw std::invalid_argument("CutoffProfile: R must be positive");
}

double CutoffProfile::value(double r) const {
    const double x = 2.0 - r / R_;
    if (x >= 1.0) return 1.0;
    if (x <= 0.0) return 0.0;
    const double a = step_f(x), b = step_f(1.0 - x);
    return a / (a + b);
}

double CutoffProfile::derivative(double r) const {
    const double x = 2.0 - r / R_;
    if (x >= 1.0 || x <= 0.0) return 0.0;
    const double a = step_f(x), b = step_f(1.0 - x);
    const double da = step_df(x), db = -step_df(1.0 - x);
    const double ds = (da * (a + b) - a * (da + db)) / ((a + b) * (a + b));
    return -ds / R_;
}

double virial_value(const State& s) {
    const auto y = apply_D_power(s.n_field, -1.0);
    return pair_i(s.u, radial_scaling_derivative(s.u)) +
           pair_i(s.n_field, radial_scaling_derivative(y)) / (2.0 * s.alpha);
}

double virial_rhs(const State& s) {
    const auto dev = deviation(s);
    return 2.0 * k_functional(s.u) + 0.5 * norm_sq(dev.complex_dev) - inner(dev.complex_dev, abs_squared(s.u));
}

double merle_virial_value(const State& s) {
    const auto y = apply_D_power(imag_part(s.n_field), -1.0);
    return pair_i(s.u, radial_scaling_derivative(s.u)) -
           inner(real_part(s.n_field), radial_scaling_derivative(y)) / s.alpha;
}

double merle_virial_rhs(const State& s) {
    return 6.0 * zakharov_energy(s) - gradient_norm_sq(s.u) - 2.0 * norm_sq(imag_part(s.n_field));
}

double merle_virial_rhs_middle(const State& s) {
    const auto dev = deviation(s);
    return 2.0 * k_functional(s.u) + 1.5 * norm_sq(dev.complex_dev) - 2.0 * norm_sq(imag_part(s.n_field));
}

double virial_difference_term(const State& s) {
    return inner(real_part(s.n_field), apply_D_power(imag_part(s.n_field), -1.0)) / s.alpha;
}

double virial_difference_rate(const State& s) {
    const auto dev = deviation(s);
    return inner(real_part(s.n_field), dev.real_dev) - norm_sq(imag_part(s.n_field));
}

double localized_virial(const State& s, const CutoffProfile& cutoff) {
    const auto& g = s.grid();
    if (2.0 * cutoff.radius() > g.r_max()) throw std::invalid_argument("localized_virial: 2R exceeds r_max");
    const std::size_t n = g.size();
    std::vector<double> psi(n), dpsi(n);
    for (std::size_t j = 0; j < n; ++j) {
        psi[j] = cutoff.value(g.node(j));
        dpsi[j] = cutoff.derivative(g.node(j));
    }

    const auto ru = radial_scaling_derivative(s.u);
    auto psi_ru = ru;
    for (std::size_t j = 0; j < n; ++j) psi_ru[j] *= psi[j];
    const double u_part = pair_i(s.u, psi_ru);

    const auto rn = radial_scaling_derivative(s.n_field);
    auto sym = s.n_field;
    for (std::size_t j = 0; j < n; ++j)
        sym[j] = g.node(j) * dpsi[j] * s.n_field[j] + 2.0 * psi[j] * rn[j] + 4.0 * psi[j] * s.n_field[j];
    const double n_part = pair_i(apply_D_power(s.n_field, -1.0), sym) / (4.0 * s.alpha);
    return u_part + n_part;
}

double rho_r(const State& s, const CutoffProfile& cutoff) {
    const auto& g = s.grid();
    const double R = cutoff.radius();
    if (2.0 * R > g.r_max()) throw std::invalid_argument("rho_r: 2R exceeds r_max");
    const auto y = apply_D_power(deviation(s).real_dev, -1.0);
    std::vector<double> density(g.size());
    for (std::size_t j = 0; j < density.size(); ++j) density[j] = std::norm(y[j]) / (R * R);
    return radial_integral(g, density, R, 2.0 * R);
}

double radial_sobolev_ratio(const RadialField& u) {
    const double l2 = lp_norm(u, 2.0);
    if (l2 == 0.0) throw std::invalid_argument("radial_sobolev_ratio: zero field");
    double mx = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) mx = std::max(mx, u.grid().node(j) * std::abs(u[j]));
    return mx / std::sqrt(l2 * gradient_norm(u));
}

TailMass tail_mass(const State& s, double R) {
    const auto& g = s.grid();
    if (!(R >= 0.0) || R >= g.r_max()) throw std::invalid_argument("tail_mass: R must lie inside the box");
    const auto du = radial_derivative(s.u);
    const auto nu = deviation(s).complex_dev;
    const auto y = apply_D_power(nu, -1.0);
    const auto dy = radial_derivative(y);
    const std::size_t n = g.size();
    std::vector<double> d(n);
    auto integrate = [&](auto fn) {
        for (std::size_t j = 0; j < n; ++j) d[j] = fn(j);
        return radial_integral(g, d, R);
    };
    TailMass t;
    t.grad_u = integrate([&](std::size_t j) { return std::norm(du[j]); });
    t.u2 = integrate([&](std::size_t j) { return std::norm(s.u[j]); });
    t.u4 = integrate([&](std::size_t j) { return std::pow(std::norm(s.u[j]), 2); });
    t.u6 = integrate([&](std::size_t j) { return std::pow(std::norm(s.u[j]), 3); });
    t.nu2 = integrate([&](std::size_t j) { return std::norm(nu[j]); });
    t.grad_y = integrate([&](std::size_t j) { return std::norm(dy[j]); });
    t.y_over_r = integrate([&](std::size_t j) { return std::norm(y[j]) / (g.node(j) * g.node(j)); });
    return t;
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Scattering: return "Scattering";
        case Verdict::GrowUp: return "GrowUp";
        case Verdict::ZeroSolution: return "ZeroSolution";
        case Verdict::NotBelowThreshold: return "NotBelowThreshold";
    }
    return "unknown";
}

MonotonicityReport monotonicity_audit(const Trajectory& traj, const GroundState& gs, double lambda, Verdict verdict,
                                      double r_min, double tail_eps) {
    MonotonicityReport rep;
    rep.verdict = verdict;
    if (verdict != Verdict::Scattering && verdict != Verdict::GrowUp) return rep;
    if (traj.samples.size() < 3) throw std::invalid_argument("monotonicity_audit: too few samples");
    for (const auto& smp : traj.samples)
        if (!smp.virial) throw std::invalid_argument("monotonicity_audit: trajectory has no virial monitors");

    const auto& first = traj.samples.front().rec;
    double t_from = traj.samples.front().t;
    if (verdict == Verdict::GrowUp) {
        rep.kappa_est = 2.0 * (lambda * gs.j - (first.e_z + lambda * lambda * first.mass));
        rep.bound = -0.5 * rep.kappa_est;
        const double t0 = traj.samples.front().t, t1 = traj.samples.back().t;
        t_from = t0 + 0.75 * (t1 - t0);
    } else {
        rep.min_k = std::numeric_limits<double>::infinity();
        for (const auto& smp : traj.samples) rep.min_k = std::min(rep.min_k, smp.rec.k);
        rep.bound = 0.5 * (1.0 - 2.0 / std::sqrt(6.0)) * rep.min_k;
    }

    for (std::size_t ir = 0; ir < traj.virial_radii.size(); ++ir) {
        const double R = traj.virial_radii[ir];
        if (verdict == Verdict::Scattering && R < r_min) continue;
        const bool gated = verdict == Verdict::Scattering && tail_eps > 0.0;
        std::size_t it = 0;
        if (gated) {
            while (it < traj.tail_radii.size() && traj.tail_radii[it] != R) ++it;
            if (it == traj.tail_radii.size())
                throw std::invalid_argument("monotonicity_audit: tail gate needs R among the tail radii");
        }
        const double h0 = traj.samples.front().h1l2;
        const double tail_max = tail_eps * h0 * h0;
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        std::size_t count = 0;
        for (std::size_t i = 0; i + 1 < traj.samples.size(); ++i) {
            const auto& a = traj.samples[i];
            const auto& b = traj.samples[i + 1];
            if (a.t < t_from) continue;
            if (gated && (a.tails[it] > tail_max || b.tails[it] > tail_max)) continue;
            ++count;
            const double slope = (b.virial->v_r[ir] - a.virial->v_r[ir]) / (b.t - a.t);
            lo = std::min(lo, slope);
            hi = std::max(hi, slope);
            const bool bad = verdict == Verdict::GrowUp ? !(slope <= rep.bound) : !(slope >= rep.bound);
            if (bad) rep.violations.push_back({R, 0.5 * (a.t + b.t), slope});
        }
        rep.radii.push_back(R);
        rep.audited.push_back(count);
        rep.min_slope.push_back(lo);
        rep.max_slope.push_back(hi);
    }
    return rep;
}

}  // namespace zlab
