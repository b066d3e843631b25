#pragma once

#include <limits>
#include <vector>

#include "zlab/evolution.hpp"
#include "zlab/radial_grid.hpp"

namespace zlab {

/// (b, d, s): L^{1/b}_t B^s_{1/d,2}.  b = 0 means the supremum in time.
struct NormSpec {
    double b = 0.0;
    double d = 0.5;
    double s = 0.0;
    bool homogeneous = true;
};

enum class Component { U, N };

/// (sum_k 2^{2sk} ||P_k f||_p^2)^{1/2} over the grid's dyadic indices.  The
/// inhomogeneous variant replaces all blocks with 2^k <= 1 by the single
/// block sum_{k<=0} P_k f at weight 1.
double besov_norm(const RadialField& f, double s, double p, bool homogeneous = true);

/// Low blocks (2^k <= 1) at regularity s_low, the rest at s_high, both
/// homogeneous.  An upper bound for the sum-space norm of the two.
double split_besov_norm(const RadialField& f, double s_low, double s_high, double p);

struct ZNorm {
    double x = 0.0;  ///< sup_t ||u||_{B^{-1/2-delta}_{inf,2}}
    double y = 0.0;  ///< sup_t of the split bound for Re N in Bdot^{-3/2-delta} + Bdot^{-3/2+delta}
};

/// Over the samples with t in [t_min, t_max].  Needs keep_states.
ZNorm z_norm(const Trajectory& traj, double delta = 0.1, double t_min = 0.0,
             double t_max = std::numeric_limits<double>::infinity());

/// Spatial norm of one component, then the L^{1/b} trapezoid in time over
/// [0, t_max] (the sup when b = 0).  Needs keep_states and uniform sampling.
double spacetime_norm(const Trajectory& traj, const NormSpec& spec, Component component,
                      double t_max = std::numeric_limits<double>::infinity());

struct ScatteringIndicator {
    double u4_slope = 0.0;           ///< least-squares slope of ||u||_4 over the trailing half
    double u4_relative_change = 0.0; ///< slope * window / mean
    std::vector<double> cauchy_increments;  ///< H^1 x L^2 gaps of consecutive pulled-back states
    double trailing_x = 0.0;         ///< x-norm over the trailing half
    bool u4_decreasing = false;
    bool cauchy_decreasing = false;
    bool scattering_consistent = false;
};

/// Probes a K >= 0 run: ||u||_4 must fall over the trailing half (relative
/// change below -1e-3) and the last `window` Cauchy increments of
/// U(-t)(u, N)(t) must not grow.  Needs keep_states and >= 4 samples.
ScatteringIndicator scattering_indicator(const Trajectory& traj, std::size_t window = 5, double delta = 0.1);

struct GrowupIndicator {
    double max_h1l2 = 0.0;
    double trailing_trend = 0.0;  ///< slope of ||(u,N)||_{H^1 x L^2} over the trailing half, divided by its mean
    bool blowup_suspected = false;
    bool growup_consistent = false;
};

/// growup_consistent when the run was cut short or the relative trend exceeds
/// trend_threshold per unit time.  Needs >= 4 samples.
GrowupIndicator growup_indicator(const Trajectory& traj, double trend_threshold = 1e-2);

}  // namespace zlab
