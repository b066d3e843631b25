#pragma once

#include <filesystem>
#include <vector>

#include "zlab/radial_grid.hpp"
#include "zlab/state.hpp"

namespace zlab {

/// The positive radial solution of -Lap Q + Q = Q^3 sampled on a grid.
struct GroundState {
    RadialField profile;          ///< real, positive, decreasing
    std::vector<double> slope;    ///< Q'(r_j), used for interpolation
    double q0 = 0.0;              ///< Q(0)
    double mass = 0.0;            ///< M(Q)
    double e_s = 0.0;             ///< E_S(Q)
    double j = 0.0;               ///< J(Q) = E_S(Q) + M(Q)
    double threshold = 0.0;       ///< E_S(Q) M(Q)
    double r_match = 0.0;         ///< beyond this radius Q is the linear tail
    double q_match = 0.0;         ///< Q(r_match)

    const RadialGrid& grid() const { return profile.grid(); }

    /// Q(r) for any r >= 0.  Between nodes this is quintic Hermite
    /// interpolation with Q'' taken from the equation, falling back to a
    /// Fritsch-Carlson cubic if the quintic leaves the monotone envelope;
    /// beyond the last node it is the exact decaying tail.
    double evaluate(double r) const;
};

/// Shooting on Q'' + (2/r)Q' - Q + Q^3 = 0 with bisection on Q(0).  Requires
/// r_max >= 15 and tol in (0, 1e-4]; throws std::invalid_argument otherwise
/// and std::runtime_error if the bracket or the invariants fail.
GroundState solve_ground_state(const RadialGrid& grid, double tol = 1e-8);

/// lambda Q(lambda r) on the nodes of `target` (defaults to the solver grid).
RadialField scale_ground_state(const GroundState& gs, double lambda);
RadialField scale_ground_state(const GroundState& gs, double lambda, const RadialGrid& target);

/// (u, N) = (e^{i theta} Q_lambda, Q_lambda^2) at t = 0.
State standing_wave_state(const GroundState& gs, double lambda, double theta, double alpha = 1.0);

struct ThresholdConstants {
    double e_s_q = 0.0;
    double m_q = 0.0;
    double j_q = 0.0;
    double product = 0.0;
};
ThresholdConstants threshold_constants(const GroundState& gs);

/// Plain-text cache with a versioned header.  `load` returns false if the file
/// is missing or was written for a different grid; a malformed file throws.
void save_ground_state(const GroundState& gs, const std::filesystem::path& path);
bool load_ground_state(const std::filesystem::path& path, const RadialGrid& grid, GroundState& out);

/// Load from `path` when it matches the grid, otherwise solve and write it.
GroundState cached_ground_state(const RadialGrid& grid, const std::filesystem::path& path,
                                double tol = 1e-8);

}  // namespace zlab
