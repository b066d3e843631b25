#include "zlab/functionals.hpp"

#include <cmath>
#include <stdexcept>

namespace zlab {

State::State(RadialField u_, RadialField n_, double alpha_, double time_)
    : u(std::move(u_)), n_field(std::move(n_)), alpha(alpha_), time(time_) {
    if (!(alpha > 0.0)) throw std::invalid_argument("state: alpha must be positive");
    if (!(u.grid() == n_field.grid())) throw std::invalid_argument("state: fields on different grids");
    if (u.representation() != Representation::Physical ||
        n_field.representation() != Representation::Physical)
        throw std::invalid_argument("state: fields must be physical");
}

double l4_norm4(const RadialField& u) {
    std::vector<double> density(u.size());
    for (std::size_t j = 0; j < u.size(); ++j) {
        const double a = std::norm(u[j]);
        density[j] = a * a;
    }
    return radial_integral(u.grid(), density);
}

double mass(const RadialField& u) { return 0.5 * inner(u, u); }

double nls_energy(const RadialField& u) {
    return 0.5 * gradient_norm_sq(u) - 0.25 * l4_norm4(u);
}

namespace {

// \int Re N |u|^2 dx
double coupling(const State& s) {
    std::vector<double> density(s.u.size());
    for (std::size_t j = 0; j < density.size(); ++j)
        density[j] = s.n_field[j].real() * std::norm(s.u[j]);
    return radial_integral(s.grid(), density);
}

double deviation_norm_sq(const State& s) {
    std::vector<double> density(s.u.size());
    for (std::size_t j = 0; j < density.size(); ++j)
        density[j] = std::norm(s.n_field[j] - std::norm(s.u[j]));
    return radial_integral(s.grid(), density);
}

}  // namespace

double zakharov_energy(const State& state) {
    const double grad2 = gradient_norm_sq(state.u);
    const double n2 = inner(state.n_field, state.n_field);
    const double direct = 0.5 * grad2 + 0.25 * n2 - 0.5 * coupling(state);
    const double split = 0.5 * grad2 - 0.25 * l4_norm4(state.u) + 0.25 * deviation_norm_sq(state);
    if (std::abs(direct - split) > 1e-10 * (1.0 + std::abs(direct)))
        throw std::logic_error("zakharov_energy: direct and split forms disagree");
    return direct;
}

double k_functional(const RadialField& u) {
    return gradient_norm_sq(u) - 0.75 * l4_norm4(u);
}

double action(const RadialField& u, double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("action: lambda must be positive");
    return nls_energy(u) + lambda * lambda * mass(u);
}

double g_functional(const RadialField& u, double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("g_functional: lambda must be positive");
    return gradient_norm_sq(u) / 6.0 + 0.5 * lambda * lambda * inner(u, u);
}

Deviation deviation(const State& state) {
    std::vector<cplx> c(state.u.size()), r(state.u.size());
    for (std::size_t j = 0; j < c.size(); ++j) {
        const double a = std::norm(state.u[j]);
        c[j] = state.n_field[j] - a;
        r[j] = state.n_field[j].real() - a;
    }
    return {RadialField(state.grid(), std::move(c)), RadialField(state.grid(), std::move(r))};
}

FunctionalRecord evaluate_functionals(const State& state) {
    FunctionalRecord rec;
    const double grad2 = gradient_norm_sq(state.u);
    const double quartic = l4_norm4(state.u);
    rec.mass = mass(state.u);
    rec.e_s = 0.5 * grad2 - 0.25 * quartic;
    rec.e_z = zakharov_energy(state);
    rec.k = grad2 - 0.75 * quartic;
    rec.nu_l2 = std::sqrt(deviation_norm_sq(state));
    rec.grad_u_l2 = std::sqrt(grad2);
    rec.u_l4 = std::pow(quartic, 0.25);
    rec.im_n_l2 = lp_norm(imag_part(state.n_field), 2.0);
    rec.n_l2 = lp_norm(state.n_field, 2.0);
    return rec;
}

}  // namespace zlab
