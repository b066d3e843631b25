#pragma once

#include <string>
#include <vector>

#include "zlab/ground_state.hpp"
#include "zlab/radial_grid.hpp"
#include "zlab/state.hpp"

namespace zlab {

struct Trajectory;

/// psi_R(r) = s(2 - r/R) with the C-infinity step s(x) = f(x)/(f(x) + f(1-x)),
/// f(x) = e^{-1/x}: equal to 1 on r <= R, 0 on r >= 2R, non-increasing.
class CutoffProfile {
public:
    explicit CutoffProfile(double R);
    double radius() const { return R_; }
    double value(double r) const;
    double derivative(double r) const;

private:
    double R_;
};

/// V = <u|i r d_r u> + (1/2 alpha) <N|i r d_r D^{-1} N>.
///
/// With this orientation dV/dt = virial_rhs: the free Schrodinger part
/// alone gives +2||grad u||^2.
double virial_value(const State& s);

/// 2K(u) + ||nu||^2/2 - <nu||u|^2>, nu = N - |u|^2.
double virial_rhs(const State& s);

/// <u|i r d_r u> - (1/alpha) <Re N|r d_r D^{-1} Im N>.
double merle_virial_value(const State& s);

/// 6 E_Z - ||grad u||^2 - 2||Im N||^2.
double merle_virial_rhs(const State& s);

/// 2K + (3/2)||nu||^2 - 2||Im N||^2; algebraically equal to merle_virial_rhs.
double merle_virial_rhs_middle(const State& s);

/// (1/alpha) <Re N|D^{-1} Im N>.  The two virial quantities differ by minus
/// this: virial_value - merle_virial_value = -virial_difference_term.
double virial_difference_term(const State& s);

/// Time derivative of virial_difference_term along the flow:
/// <Re N|nu_r> - ||Im N||^2 with nu_r = Re N - |u|^2.
double virial_difference_rate(const State& s);

/// Localized virial, normalized so that it tends to virial_value as R grows:
///
///   V_R = <u|i psi r d_r u> + (1/4 alpha) <D^{-1}N|i (r psi' + 2 psi r d_r + 4 psi) N>.
///
/// Throws std::invalid_argument if 2R exceeds r_max.
double localized_virial(const State& s, const CutoffProfile& cutoff);

/// int_{R <= r <= 2R} |D^{-1} nu_r|^2 / R^2 dx with nu_r = Re N - |u|^2.
double rho_r(const State& s, const CutoffProfile& cutoff);

/// ||r u||_inf / (||u||_2^{1/2} ||grad u||_2^{1/2}); the sharp radial bound is 1/sqrt(2 pi).
double radial_sobolev_ratio(const RadialField& u);

struct TailMass {
    double grad_u = 0.0;
    double u2 = 0.0;
    double u4 = 0.0;
    double u6 = 0.0;
    double nu2 = 0.0;
    double grad_y = 0.0;     ///< |D^{-1} grad nu|^2 = |d_r D^{-1} nu|^2
    double y_over_r = 0.0;   ///< |D^{-1} nu|^2 / r^2
    double total() const { return grad_u + u2 + u4 + u6 + nu2 + grad_y + y_over_r; }
};

/// The seven tail integrals over r >= R (nu = N - |u|^2).
TailMass tail_mass(const State& s, double R);

enum class Verdict { Scattering, GrowUp, ZeroSolution, NotBelowThreshold };
std::string to_string(Verdict v);

struct SlopeViolation {
    double R = 0.0;
    double t = 0.0;
    double slope = 0.0;
};

struct MonotonicityReport {
    Verdict verdict = Verdict::NotBelowThreshold;
    double bound = 0.0;       ///< required slope bound (upper for grow-up, lower for scattering)
    double kappa_est = 0.0;   ///< 2 (lambda J(Q) - E_Z - lambda^2 M), grow-up only
    double min_k = 0.0;
    std::vector<double> radii;
    std::vector<double> min_slope;   ///< per radius, over the audited window
    std::vector<double> max_slope;
    std::vector<std::size_t> audited;  ///< per radius, number of audited intervals
    std::vector<SlopeViolation> violations;
    bool passed() const { return violations.empty(); }
};

/// Finite-difference slopes of the monitored V_R.  Grow-up: slopes on the
/// trailing quarter of the run must be <= -kappa_est/2.  Scattering: slopes
/// must be >= (1 - 2/sqrt 6) min_t K / 2 for every R >= r_min.  Other
/// verdicts produce an empty audit.
///
/// The scattering bound is only available while the tail integrals beyond R
/// are small.  With tail_eps > 0, an interval is audited only if the recorded
/// tail_mass(R).total() at both ends is <= tail_eps times the initial
/// ||(u,N)||^2_{H^1 x L^2}; R must then be among the trajectory's tail radii.
MonotonicityReport monotonicity_audit(const Trajectory& traj, const GroundState& gs, double lambda,
                                      Verdict verdict, double r_min = 0.0, double tail_eps = -1.0);

}  // namespace zlab
