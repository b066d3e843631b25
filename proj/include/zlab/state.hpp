#pragma once

#include "zlab/radial_grid.hpp"

namespace zlab {

/// One point (u, N) of the first-order Zakharov flow
///
///     (i d_t - Lap) u = (Re N) u,    (i d_t + alpha D) N = alpha D |u|^2,
///
/// with N = n - i D^{-1} n_t / alpha.  Both fields are physical and live on
/// the same grid.
struct State {
    RadialField u;
    RadialField n_field;
    double alpha = 1.0;
    double time = 0.0;

    State(RadialField u_, RadialField n_, double alpha_, double time_ = 0.0);

    const RadialGrid& grid() const { return u.grid(); }
    bool is_finite() const { return u.is_finite() && n_field.is_finite(); }
};

}  // namespace zlab
