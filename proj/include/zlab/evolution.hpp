#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "zlab/functionals.hpp"
#include "zlab/radial_grid.hpp"
#include "zlab/state.hpp"

namespace zlab {

/// N = n0 - i D^{-1} n1 / alpha.
State from_second_order(const RadialField& u0, const RadialField& n0, const RadialField& n1, double alpha);

struct SecondOrderData {
    RadialField n;      ///< Re N
    RadialField n_dot;  ///< -alpha D Im N
};
SecondOrderData to_second_order(const State& s);

/// int |grad u|^2 + (|D^{-1} n_t|^2/alpha^2 + |n|^2)/2 - n |u|^2.  This is
/// twice the first-order energy E_Z.
double second_order_energy(const RadialField& u, const RadialField& n, const RadialField& n_dot, double alpha);

/// Free propagator: e^{i k^2 dt} on the u spectrum, e^{i alpha k dt} on the N spectrum.
State linear_flow(const State& s, double dt);

/// Exact flow of the coupling terms: u <- e^{-i dt Re N} u, then N <- N - i dt alpha D |u|^2.
State nonlinear_step(const State& s, double dt);

/// linear_flow(dt/2) o nonlinear_step(dt) o linear_flow(dt/2).  Time
/// reversible: strang_step(strang_step(s, dt), -dt) == s up to roundoff.
State strang_step(const State& s, double dt);

struct VirialMonitor {
    double v = 0.0;
    double rhs = 0.0;
    double merle_v = 0.0;
    double merle_rhs = 0.0;
    double merle_rhs_middle = 0.0;
    double diff_term = 0.0;   ///< (1/alpha) <Re N|D^{-1} Im N>
    double diff_rate = 0.0;   ///< its exact time derivative
    std::vector<double> v_r;  ///< localized virial, one per monitored radius
    std::vector<double> rho;  ///< rho_R, one per monitored radius
};

struct Sample {
    double t = 0.0;
    FunctionalRecord rec;
    double h1l2 = 0.0;               ///< sqrt(||u||^2 + ||grad u||^2 + ||N||^2)
    double boundary_fraction = 0.0;  ///< share of ||u||^2 in the outer 10% of the box
    double resolution_fraction = 0.0;
    std::optional<VirialMonitor> virial;
    std::vector<double> tails;       ///< total tail mass, one per tail radius
    std::optional<State> state;
};

struct EvolveOptions {
    int sample_every = 10;
    bool keep_states = false;
    bool virial = false;
    std::vector<double> virial_radii;
    std::vector<double> tail_radii;
    /// Truncate when the share of sum (1 + k^2)|u_k|^2 carried by the top
    /// tenth of the wavenumbers exceeds this; the solution is then no longer
    /// resolved by the grid.
    double resolution_guard = 1e-4;
    /// Warn when this share of ||u||^2 sits in the outer 10% of the box.
    double boundary_guard = 1e-6;
};

struct Trajectory {
    RadialGrid grid;
    double alpha = 1.0;
    double dt = 0.0;
    std::vector<double> virial_radii;
    std::vector<double> tail_radii;
    std::vector<Sample> samples;
    bool blowup_suspected = false;
    double blowup_time = 0.0;
    std::string blowup_reason;
    bool boundary_warning = false;
    double boundary_time = 0.0;

    explicit Trajectory(RadialGrid g) : grid(std::move(g)) {}
};

/// Strang splitting from s.time to t_final.  The step count is
/// ceil((t_final - t0)/dt) and the step is shrunk to land on t_final.
/// Non-finite values or loss of resolution truncate the trajectory and set
/// blowup_suspected.
Trajectory evolve(const State& s, double t_final, double dt, const EvolveOptions& opts = {});

Sample make_sample(const State& s, const EvolveOptions& opts);

struct ConservationReport {
    double mass_drift = 0.0;
    double energy_drift = 0.0;
};
ConservationReport conservation_report(const Trajectory& traj);

/// CSV with a versioned comment header; one row per sample.
void write_trajectory_csv(const Trajectory& traj, std::ostream& out);

/// Norm of (u, N) in H^1 x L^2.
double h1l2_norm(const State& s);
/// H^1 x L^2 norm of the difference of two states on the same grid.
double h1l2_distance(const State& a, const State& b);

}  // namespace zlab
