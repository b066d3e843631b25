#include "zlab/evolution.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>

#include "spectral.hpp"
#include "zlab/virial.hpp"

namespace zlab {

State from_second_order(const RadialField& u0, const RadialField& n0, const RadialField& n1, double alpha) {
    if (!(alpha > 0.0)) throw std::invalid_argument("from_second_order: alpha must be positive");
    auto im = apply_D_power(real_part(n1), -1.0);
    im *= cplx(0.0, -1.0 / alpha);
    auto n = real_part(n0);
    n += im;
    return State(u0, std::move(n), alpha);
}

SecondOrderData to_second_order(const State& s) {
    auto n_dot = apply_D_power(imag_part(s.n_field), 1.0);
    n_dot *= -s.alpha;
    return {real_part(s.n_field), std::move(n_dot)};
}

double second_order_energy(const RadialField& u, const RadialField& n, const RadialField& n_dot, double alpha) {
    if (!(alpha > 0.0)) throw std::invalid_argument("second_order_energy: alpha must be positive");
    const auto y = apply_D_power(n_dot, -1.0);
    std::vector<double> density(u.size());
    for (std::size_t j = 0; j < density.size(); ++j)
        density[j] = 0.5 * (std::norm(y[j]) / (alpha * alpha) + std::norm(n[j])) - n[j].real() * std::norm(u[j]);
    return gradient_norm_sq(u) + radial_integral(u.grid(), density);
}

namespace {

// Strang stepping on the w-spectra of u and N.  Each step costs two complex
// and one real sine transform plus one complex transform back.
class SplitStepper {
public:
    SplitStepper(const RadialGrid& grid, double alpha, double dt)
        : grid_(grid), alpha_(alpha), dt_(dt), half_u_(grid.size()), half_n_(grid.size()),
          u_(grid.size()), n_(grid.size()), density_(grid.size()) {
        for (std::size_t m = 0; m < grid.size(); ++m) {
            const double k = grid.wavenumber(m);
            half_u_[m] = std::polar(1.0, 0.5 * k * k * dt);
            half_n_[m] = std::polar(1.0, 0.5 * alpha * k * dt);
        }
    }

    void load(const State& s) {
        U_ = detail::w_spectrum(s.u);
        V_ = detail::w_spectrum(s.n_field);
    }

    void half_linear() {
        for (std::size_t m = 0; m < U_.size(); ++m) {
            U_[m] *= half_u_[m];
            V_[m] *= half_n_[m];
        }
    }

    void coupling() {
        const std::size_t n = U_.size();
        const long double before = power(U_);
        u_ = U_;
        n_ = V_;
        detail::sine_transform(std::span<cplx>(u_));
        detail::sine_transform(std::span<cplx>(n_));
        // Both arrays now hold w = r f; the phase and r|u|^2 need f = w/r.
        for (std::size_t j = 0; j < n; ++j) {
            const double r = grid_.node(j);
            const double re_n = n_[j].real() / r;
            u_[j] *= std::polar(1.0, -dt_ * re_n);
            density_[j] = std::norm(u_[j]) / r;
        }
        detail::sine_transform(std::span<double>(density_));
        for (std::size_t m = 0; m < n; ++m)
            V_[m] += cplx(0.0, -dt_ * alpha_ * grid_.wavenumber(m) * density_[m]);
        detail::sine_transform(std::span<cplx>(u_));
        U_ = u_;
        // The phase rotation preserves sum |w|^2 exactly; undo the bias that
        // the two rounded transform normalizations leave behind.
        const long double after = power(U_);
        if (after > 0.0L) {
            const double fix = static_cast<double>(std::sqrt(before / after));
            for (auto& v : U_) v *= fix;
        }
    }

    static long double power(const std::vector<cplx>& a) {
        long double s = 0.0L;
        for (const auto& v : a) s += static_cast<long double>(std::norm(v));
        return s;
    }

    void step() {
        half_linear();
        coupling();
        half_linear();
    }

    void linear_only() {
        for (std::size_t m = 0; m < U_.size(); ++m) {
            U_[m] *= half_u_[m] * half_u_[m];
            V_[m] *= half_n_[m] * half_n_[m];
        }
    }

    State state(double t) const {
        return State(detail::from_w_spectrum(grid_, U_), detail::from_w_spectrum(grid_, V_), alpha_, t);
    }

private:
    RadialGrid grid_;
    double alpha_, dt_;
    std::vector<cplx> half_u_, half_n_;
    std::vector<cplx> U_, V_;
    std::vector<cplx> u_, n_;
    std::vector<double> density_;
};

double resolution_fraction(const RadialField& u) {
    const auto spec = detail::w_spectrum(u);
    const std::size_t n = spec.size();
    const std::size_t cut = n - n / 10;
    double top = 0.0, total = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
        const double k = u.grid().wavenumber(m);
        const double e = (1.0 + k * k) * std::norm(spec[m]);
        total += e;
        if (m >= cut) top += e;
    }
    return total > 0.0 ? top / total : 0.0;
}

double boundary_fraction(const RadialField& u) {
    const auto& g = u.grid();
    const double edge = 0.9 * g.r_max();
    double outer = 0.0, total = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) {
        const double r = g.node(j);
        const double e = std::norm(u[j]) * r * r;
        total += e;
        if (r >= edge) outer += e;
    }
    return total > 0.0 ? outer / total : 0.0;
}

}  // namespace

State linear_flow(const State& s, double dt) {
    if (!std::isfinite(dt)) throw std::invalid_argument("linear_flow: dt must be finite");
    SplitStepper st(s.grid(), s.alpha, dt);
    st.load(s);
    st.linear_only();
    return st.state(s.time + dt);
}

State nonlinear_step(const State& s, double dt) {
    if (!std::isfinite(dt)) throw std::invalid_argument("nonlinear_step: dt must be finite");
    std::vector<cplx> u(s.u.values().begin(), s.u.values().end());
    for (std::size_t j = 0; j < u.size(); ++j) u[j] *= std::polar(1.0, -dt * s.n_field[j].real());
    RadialField uf(s.grid(), std::move(u));
    auto inc = apply_D_power(abs_squared(uf), 1.0);
    inc *= cplx(0.0, -dt * s.alpha);
    auto n = s.n_field;
    n += inc;
    return State(std::move(uf), std::move(n), s.alpha, s.time + dt);
}

State strang_step(const State& s, double dt) {
    if (!std::isfinite(dt)) throw std::invalid_argument("strang_step: dt must be finite");
    SplitStepper st(s.grid(), s.alpha, dt);
    st.load(s);
    st.step();
    return st.state(s.time + dt);
}

double h1l2_norm(const State& s) {
    return std::sqrt(inner(s.u, s.u) + gradient_norm_sq(s.u) + inner(s.n_field, s.n_field));
}

double h1l2_distance(const State& a, const State& b) {
    auto du = a.u;
    du -= b.u;
    auto dn = a.n_field;
    dn -= b.n_field;
    return std::sqrt(inner(du, du) + gradient_norm_sq(du) + inner(dn, dn));
}

Sample make_sample(const State& s, const EvolveOptions& opts) {
    Sample out;
    out.t = s.time;
    out.rec = evaluate_functionals(s);
    out.h1l2 = std::sqrt(2.0 * out.rec.mass + out.rec.grad_u_l2 * out.rec.grad_u_l2 + out.rec.n_l2 * out.rec.n_l2);
    out.boundary_fraction = boundary_fraction(s.u);
    out.resolution_fraction = resolution_fraction(s.u);
    if (opts.virial) {
        VirialMonitor vm;
        vm.v = virial_value(s);
        vm.rhs = virial_rhs(s);
        vm.merle_v = merle_virial_value(s);
        vm.merle_rhs = merle_virial_rhs(s);
        vm.merle_rhs_middle = merle_virial_rhs_middle(s);
        vm.diff_term = virial_difference_term(s);
        vm.diff_rate = virial_difference_rate(s);
        for (double R : opts.virial_radii) {
            const CutoffProfile cutoff(R);
            vm.v_r.push_back(localized_virial(s, cutoff));
            vm.rho.push_back(rho_r(s, cutoff));
        }
        out.virial = std::move(vm);
    }
    for (double R : opts.tail_radii) out.tails.push_back(tail_mass(s, R).total());
    if (opts.keep_states) out.state = s;
    return out;
}

Trajectory evolve(const State& s, double t_final, double dt, const EvolveOptions& opts) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("evolve: dt must be positive");
    if (!(t_final > s.time)) throw std::invalid_argument("evolve: t_final must exceed the start time");
    if (opts.sample_every < 1) throw std::invalid_argument("evolve: sample_every must be >= 1");
    for (double R : opts.virial_radii)
        if (!(R > 0.0) || 2.0 * R > s.grid().r_max())
            throw std::invalid_argument("evolve: virial radius must satisfy 0 < 2R <= r_max");
    for (double R : opts.tail_radii)
        if (!(R > 0.0) || R >= s.grid().r_max()) throw std::invalid_argument("evolve: tail radius must lie inside the box");

    const double span = t_final - s.time;
    const auto steps = static_cast<long>(std::ceil(span / dt - 1e-9));
    const double h = span / static_cast<double>(steps);

    Trajectory traj(s.grid());
    traj.alpha = s.alpha;
    traj.dt = h;
    traj.virial_radii = opts.virial_radii;
    traj.tail_radii = opts.tail_radii;

    auto check_boundary = [&](const Sample& smp) {
        if (!traj.boundary_warning && smp.boundary_fraction > opts.boundary_guard) {
            traj.boundary_warning = true;
            traj.boundary_time = smp.t;
        }
    };

    traj.samples.push_back(make_sample(s, opts));
    check_boundary(traj.samples.back());

    SplitStepper stepper(s.grid(), s.alpha, h);
    stepper.load(s);
    for (long k = 1; k <= steps; ++k) {
        stepper.step();
        if (k % opts.sample_every != 0 && k != steps) continue;
        const State cur = stepper.state(s.time + static_cast<double>(k) * h);
        if (!cur.is_finite()) {
            traj.blowup_suspected = true;
            traj.blowup_time = cur.time;
            traj.blowup_reason = "non-finite values";
            break;
        }
        Sample smp = make_sample(cur, opts);
        if (!std::isfinite(smp.h1l2)) {
            traj.blowup_suspected = true;
            traj.blowup_time = cur.time;
            traj.blowup_reason = "non-finite norms";
            break;
        }
        if (smp.resolution_fraction > opts.resolution_guard) {
            traj.blowup_suspected = true;
            traj.blowup_time = cur.time;
            traj.blowup_reason = "spectral resolution lost";
            break;
        }
        check_boundary(smp);
        traj.samples.push_back(std::move(smp));
    }
    return traj;
}

ConservationReport conservation_report(const Trajectory& traj) {
    if (traj.samples.empty()) throw std::invalid_argument("conservation_report: empty trajectory");
    const auto& first = traj.samples.front().rec;
    ConservationReport rep;
    for (const auto& smp : traj.samples) {
        if (first.mass > 0.0) rep.mass_drift = std::max(rep.mass_drift, std::abs(smp.rec.mass - first.mass) / first.mass);
        rep.energy_drift = std::max(rep.energy_drift, std::abs(smp.rec.e_z - first.e_z) / (1.0 + std::abs(first.e_z)));
    }
    return rep;
}

void write_trajectory_csv(const Trajectory& traj, std::ostream& out) {
    out << "# zlab-trajectory v1\n";
    out << "t,M,E_Z,K,grad_u_l2,u_l4,nu_l2,im_n_l2,h1l2";
    const bool virial = !traj.samples.empty() && traj.samples.front().virial.has_value();
    if (virial) {
        out << ",V,V_rhs,V_merle,V_merle_rhs";
        for (double R : traj.virial_radii) out << ",V_R_" << R;
        for (double R : traj.virial_radii) out << ",rho_R_" << R;
    }
    for (double R : traj.tail_radii) out << ",tail_" << R;
    out << '\n';
    out << std::setprecision(17);
    for (const auto& smp : traj.samples) {
        const auto& r = smp.rec;
        out << smp.t << ',' << r.mass << ',' << r.e_z << ',' << r.k << ',' << r.grad_u_l2 << ',' << r.u_l4 << ','
            << r.nu_l2 << ',' << r.im_n_l2 << ',' << smp.h1l2;
        if (virial && smp.virial) {
            const auto& v = *smp.virial;
            out << ',' << v.v << ',' << v.rhs << ',' << v.merle_v << ',' << v.merle_rhs;
            for (double x : v.v_r) out << ',' << x;
            for (double x : v.rho) out << ',' << x;
        }
        for (double x : smp.tails) out << ',' << x;
        out << '\n';
    }
}

}  // namespace zlab
