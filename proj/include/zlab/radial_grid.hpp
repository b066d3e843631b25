#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace zlab {

using cplx = std::complex<double>;

/// Uniform radial grid on (0, r_max) with Dirichlet truncation at r_max.
///
/// Nodes are r_j = j*h for j = 1..n with h = r_max/(n+1); the matching
/// sine-basis wavenumbers are k_m = m*pi/r_max.  Copies share the node and
/// wavenumber tables, so passing grids by value is cheap.
class RadialGrid {
public:
    RadialGrid(std::size_t n, double r_max);

    std::size_t size() const { return data_->n; }
    double r_max() const { return data_->r_max; }
    double spacing() const { return data_->h; }

    /// 0-based access: node(0) is r_1 = h.
    double node(std::size_t j) const { return data_->nodes[j]; }
    double wavenumber(std::size_t m) const { return data_->wavenumbers[m]; }
    std::span<const double> nodes() const { return data_->nodes; }
    std::span<const double> wavenumbers() const { return data_->wavenumbers; }
    double k_max() const { return data_->wavenumbers.back(); }

    friend bool operator==(const RadialGrid& a, const RadialGrid& b) {
        return a.data_ == b.data_ || (a.size() == b.size() && a.r_max() == b.r_max());
    }

private:
    struct Data {
        std::size_t n;
        double r_max;
        double h;
        std::vector<double> nodes;
        std::vector<double> wavenumbers;
    };
    std::shared_ptr<const Data> data_;
};

RadialGrid make_grid(std::size_t n, double r_max);

enum class Representation { Physical, Spectral };

/// A radial complex function sampled on the interior nodes of a grid.
///
/// In the Physical representation values[j] = f(r_{j+1}).  In the Spectral
/// representation values[m] are the orthonormal sine coefficients of the
/// auxiliary function w = r*f, i.e. w(r_j) = sqrt(2/(n+1)) sum_m w_m sin(k_m r_j).
class RadialField {
public:
    RadialField(RadialGrid grid, std::vector<cplx> values,
                Representation rep = Representation::Physical);

    static RadialField zeros(const RadialGrid& grid,
                             Representation rep = Representation::Physical);
    static RadialField from_function(const RadialGrid& grid,
                                     const std::function<cplx(double)>& f);

    const RadialGrid& grid() const { return grid_; }
    Representation representation() const { return rep_; }
    std::size_t size() const { return values_.size(); }

    std::span<const cplx> values() const { return values_; }
    std::span<cplx> values() { return values_; }
    cplx operator[](std::size_t j) const { return values_[j]; }
    cplx& operator[](std::size_t j) { return values_[j]; }

    bool is_finite() const;

    RadialField& operator+=(const RadialField& other);
    RadialField& operator-=(const RadialField& other);
    RadialField& operator*=(cplx c);

    friend RadialField operator+(RadialField a, const RadialField& b) { return a += b; }
    friend RadialField operator-(RadialField a, const RadialField& b) { return a -= b; }
    friend RadialField operator*(RadialField a, cplx c) { return a *= c; }
    friend RadialField operator*(cplx c, RadialField a) { return a *= c; }

private:
    void check_compatible(const RadialField& other) const;

    RadialGrid grid_;
    std::vector<cplx> values_;
    Representation rep_;
};

// Pointwise helpers on physical fields.
RadialField conj(const RadialField& f);
RadialField real_part(const RadialField& f);
RadialField imag_part(const RadialField& f);
RadialField abs_squared(const RadialField& f);
RadialField pointwise_product(const RadialField& f, const RadialField& g);

RadialField to_spectral(const RadialField& f);
RadialField to_physical(const RadialField& f);

RadialField apply_laplacian(const RadialField& f);

enum class Weight { Homogeneous, Inhomogeneous };

/// Spectral multiplier k^s (homogeneous) or (1+k^2)^{s/2} (inhomogeneous).
RadialField apply_D_power(const RadialField& f, double s,
                          Weight weight = Weight::Homogeneous);

/// r * d/dr f, computed as w' - f with w' from the cosine series of w.
RadialField radial_scaling_derivative(const RadialField& f);

/// d/dr f = (w' - f)/r.
RadialField radial_derivative(const RadialField& f);

/// f(0) = w'(0), the even extrapolation of the field to the origin.
cplx value_at_origin(const RadialField& f);

/// Re \int conj(f) g dx over R^3 with the trapezoidal radial measure 4 pi r^2 h.
double inner(const RadialField& f, const RadialField& g);

/// (\int |f|^p dx)^{1/p}; p = infinity returns max |f_j|.
double lp_norm(const RadialField& f, double p);

/// ||grad f||_2^2 = <-Lap f | f>, exact on the grid.
double gradient_norm_sq(const RadialField& f);
double gradient_norm(const RadialField& f);

/// Quadrature of \int_{r >= r_lo, r <= r_hi} density dx on the nodes.
double radial_integral(const RadialGrid& grid, std::span<const double> density,
                       double r_lo = 0.0, double r_hi = -1.0);

}  // namespace zlab
