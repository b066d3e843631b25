#pragma once

// Internal transform kernels shared by the modules.  Everything here works on
// raw coefficient arrays; the public surface is radial_grid.hpp.

#include <span>

#include "zlab/radial_grid.hpp"

namespace zlab::detail {

/// Orthonormal DST-I in place (self-inverse).
void sine_transform(std::span<cplx> data);
void sine_transform(std::span<double> data);

/// out[j] = sqrt(2/(n+1)) * sum_{m=1..n} coeffs[m-1] cos(pi m j/(n+1)) for
/// j = 0..n+1; out must have size n+2.
void cosine_synthesis(std::span<const cplx> coeffs, std::span<cplx> out);

/// Spectrum of w = r f for a physical field (no validation).
std::vector<cplx> w_spectrum(const RadialField& f);

/// Physical field from the spectrum of w.
RadialField from_w_spectrum(const RadialGrid& grid, std::vector<cplx> spectrum);

/// d/dr of w at nodes j = 1..n (size n) from its spectrum.
std::vector<cplx> w_derivative(const RadialGrid& grid, std::span<const cplx> spectrum);

/// 4 pi h, the weight that turns sum |w_j|^2 into the L^2(R^3) norm.
inline double measure_weight(const RadialGrid& grid) {
    return 4.0 * 3.14159265358979323846 * grid.spacing();
}

}  // namespace zlab::detail
