#include "zlab/radial_grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "spectral.hpp"

namespace zlab {

RadialGrid::RadialGrid(std::size_t n, double r_max) {
    if (n < 8) throw std::invalid_argument("radial grid needs n >= 8, got " + std::to_string(n));
    if (!(r_max > 0.0) || !std::isfinite(r_max))
        throw std::invalid_argument("radial grid needs a positive finite r_max");
    Data d;
    d.n = n;
    d.r_max = r_max;
    d.h = r_max / static_cast<double>(n + 1);
    d.nodes.resize(n);
    d.wavenumbers.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        d.nodes[j] = static_cast<double>(j + 1) * r_max / static_cast<double>(n + 1);
        d.wavenumbers[j] = static_cast<double>(j + 1) * std::numbers::pi / r_max;
    }
    data_ = std::make_shared<const Data>(std::move(d));
}

RadialGrid make_grid(std::size_t n, double r_max) { return RadialGrid(n, r_max); }

RadialField::RadialField(RadialGrid grid, std::vector<cplx> values, Representation rep)
    : grid_(std::move(grid)), values_(std::move(values)), rep_(rep) {
    if (values_.size() != grid_.size())
        throw std::invalid_argument("radial field: value count does not match grid size");
}

RadialField RadialField::zeros(const RadialGrid& grid, Representation rep) {
    return RadialField(grid, std::vector<cplx>(grid.size()), rep);
}

RadialField RadialField::from_function(const RadialGrid& grid,
                                       const std::function<cplx(double)>& f) {
    std::vector<cplx> v(grid.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = f(grid.node(j));
    return RadialField(grid, std::move(v));
}

bool RadialField::is_finite() const {
    return std::all_of(values_.begin(), values_.end(), [](cplx z) {
        return std::isfinite(z.real()) && std::isfinite(z.imag());
    });
}

void RadialField::check_compatible(const RadialField& other) const {
    if (!(grid_ == other.grid_)) throw std::invalid_argument("radial field: grid mismatch");
    if (rep_ != other.rep_) throw std::invalid_argument("radial field: representation mismatch");
}

RadialField& RadialField::operator+=(const RadialField& other) {
    check_compatible(other);
    for (std::size_t j = 0; j < values_.size(); ++j) values_[j] += other.values_[j];
    return *this;
}

RadialField& RadialField::operator-=(const RadialField& other) {
    check_compatible(other);
    for (std::size_t j = 0; j < values_.size(); ++j) values_[j] -= other.values_[j];
    return *this;
}

RadialField& RadialField::operator*=(cplx c) {
    for (auto& v : values_) v *= c;
    return *this;
}

namespace {

void require_physical(const RadialField& f, const char* op) {
    if (f.representation() != Representation::Physical)
        throw std::invalid_argument(std::string(op) + ": expected a physical field");
}

template <class Fn>
RadialField map_physical(const RadialField& f, const char* op, Fn fn) {
    require_physical(f, op);
    std::vector<cplx> v(f.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = fn(f[j]);
    return RadialField(f.grid(), std::move(v));
}

}  // namespace

RadialField conj(const RadialField& f) {
    // Sine coefficients are real-linear, so conjugation commutes with the transform.
    std::vector<cplx> v(f.values().begin(), f.values().end());
    for (auto& z : v) z = std::conj(z);
    return RadialField(f.grid(), std::move(v), f.representation());
}

RadialField real_part(const RadialField& f) {
    return map_physical(f, "real_part", [](cplx z) { return cplx(z.real(), 0.0); });
}

RadialField imag_part(const RadialField& f) {
    return map_physical(f, "imag_part", [](cplx z) { return cplx(z.imag(), 0.0); });
}

RadialField abs_squared(const RadialField& f) {
    return map_physical(f, "abs_squared", [](cplx z) { return cplx(std::norm(z), 0.0); });
}

RadialField pointwise_product(const RadialField& f, const RadialField& g) {
    require_physical(f, "pointwise_product");
    require_physical(g, "pointwise_product");
    if (!(f.grid() == g.grid())) throw std::invalid_argument("pointwise_product: grid mismatch");
    std::vector<cplx> v(f.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = f[j] * g[j];
    return RadialField(f.grid(), std::move(v));
}

RadialField to_spectral(const RadialField& f) {
    require_physical(f, "to_spectral");
    return RadialField(f.grid(), detail::w_spectrum(f), Representation::Spectral);
}

RadialField to_physical(const RadialField& f) {
    if (f.representation() != Representation::Spectral)
        throw std::invalid_argument("to_physical: expected a spectral field");
    return detail::from_w_spectrum(f.grid(), {f.values().begin(), f.values().end()});
}

namespace {

template <class Multiplier>
RadialField spectral_multiplier(const RadialField& f, const char* op, Multiplier mult) {
    require_physical(f, op);
    auto spec = detail::w_spectrum(f);
    for (std::size_t m = 0; m < spec.size(); ++m) spec[m] *= mult(f.grid().wavenumber(m));
    return detail::from_w_spectrum(f.grid(), std::move(spec));
}

}  // namespace

RadialField apply_laplacian(const RadialField& f) {
    return spectral_multiplier(f, "apply_laplacian", [](double k) { return -k * k; });
}

RadialField apply_D_power(const RadialField& f, double s, Weight weight) {
    if (weight == Weight::Homogeneous)
        return spectral_multiplier(f, "apply_D_power", [s](double k) { return std::pow(k, s); });
    return spectral_multiplier(f, "apply_D_power",
                               [s](double k) { return std::pow(1.0 + k * k, 0.5 * s); });
}

RadialField radial_scaling_derivative(const RadialField& f) {
    require_physical(f, "radial_scaling_derivative");
    auto dw = detail::w_derivative(f.grid(), detail::w_spectrum(f));
    for (std::size_t j = 0; j < dw.size(); ++j) dw[j] -= f[j];
    return RadialField(f.grid(), std::move(dw));
}

RadialField radial_derivative(const RadialField& f) {
    auto rf = radial_scaling_derivative(f);
    for (std::size_t j = 0; j < rf.size(); ++j) rf[j] /= f.grid().node(j);
    return rf;
}

cplx value_at_origin(const RadialField& f) {
    require_physical(f, "value_at_origin");
    const auto spec = detail::w_spectrum(f);
    const double c = std::sqrt(2.0 / static_cast<double>(f.size() + 1));
    cplx sum = 0.0;
    for (std::size_t m = 0; m < spec.size(); ++m) sum += spec[m] * f.grid().wavenumber(m);
    return c * sum;
}

double inner(const RadialField& f, const RadialField& g) {
    require_physical(f, "inner");
    require_physical(g, "inner");
    if (!(f.grid() == g.grid())) throw std::invalid_argument("inner: grid mismatch");
    const auto& grid = f.grid();
    double sum = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j) {
        const double r = grid.node(j);
        sum += (std::conj(f[j]) * g[j]).real() * r * r;
    }
    return detail::measure_weight(grid) * sum;
}

double lp_norm(const RadialField& f, double p) {
    require_physical(f, "lp_norm");
    if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
    if (std::isinf(p)) {
        double mx = 0.0;
        for (auto z : f.values()) mx = std::max(mx, std::abs(z));
        return mx;
    }
    const auto& grid = f.grid();
    double sum = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j) {
        const double r = grid.node(j);
        sum += std::pow(std::abs(f[j]), p) * r * r;
    }
    return std::pow(detail::measure_weight(grid) * sum, 1.0 / p);
}

double gradient_norm_sq(const RadialField& f) {
    require_physical(f, "gradient_norm");
    const auto spec = detail::w_spectrum(f);
    double sum = 0.0;
    for (std::size_t m = 0; m < spec.size(); ++m) {
        const double k = f.grid().wavenumber(m);
        sum += k * k * std::norm(spec[m]);
    }
    return detail::measure_weight(f.grid()) * sum;
}

double gradient_norm(const RadialField& f) { return std::sqrt(gradient_norm_sq(f)); }

double radial_integral(const RadialGrid& grid, std::span<const double> density, double r_lo,
                       double r_hi) {
    if (density.size() != grid.size())
        throw std::invalid_argument("radial_integral: density size mismatch");
    if (r_hi < 0.0) r_hi = grid.r_max();
    double sum = 0.0;
    for (std::size_t j = 0; j < density.size(); ++j) {
        const double r = grid.node(j);
        if (r < r_lo || r > r_hi) continue;
        sum += density[j] * r * r;
    }
    return detail::measure_weight(grid) * sum;
}

}  // namespace zlab
