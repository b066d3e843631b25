#pragma once

#include <cstdint>
#include <optional>

#include "zlab/ground_state.hpp"
#include "zlab/state.hpp"
#include "zlab/virial.hpp"

namespace zlab {

struct Trajectory;

struct Classification {
    double product = 0.0;    ///< E_Z(u0, N0) M(u0)
    double threshold = 0.0;  ///< E_S(Q) M(Q)
    double k0 = 0.0;         ///< K(u0)
    double tol_k = 0.0;
    std::optional<double> lambda_star;
    Verdict verdict = Verdict::NotBelowThreshold;
};

/// 1e-8 (1 + ||grad u0||^2).
double default_tol_k(const RadialField& u0);

/// The sharp threshold dichotomy.  A product within `threshold_rtol` of the
/// threshold counts as not below it, so the standing waves (which sit on it)
/// are classified NotBelowThreshold despite roundoff.  tol_k < 0 selects
/// default_tol_k.
Classification classify(const State& state, const GroundState& gs, double tol_k = -1.0,
                        double threshold_rtol = 1e-6);

/// Vertex j_q/(2m) of m lambda^2 - j_q lambda + e_z when that quadratic has a
/// negative minimum, otherwise empty.  Throws if m <= 0.
std::optional<double> admissible_lambda(double e_z, double m, double j_q);

/// mu = 4||grad u||^2 / (3||u||_4^4).  Throws for u = 0.
double mu_root(const RadialField& u);

/// b(mu) = 3 sqrt(2/(mu+2)) + (mu-1) sqrt((mu+2)/2).  Throws for mu < 0.
double b_function(double mu);

struct Lemma24Margin {
    bool hypothesis_ok = false;
    double k = 0.0;
    double margin = 0.0;
};

/// Margin of the sign-dependent inequality for (u, lambda, nu): with
/// hypothesis E_S + lambda^2 M + nu^2/4 <= lambda J(Q),
///   K >= 0: margin = 4K + nu^2 - sqrt6 nu ||u||_4^2,
///   K <  0: margin = -2 nu ||u||_4^2 - (4K + nu^2).
Lemma24Margin lemma24_margin(const RadialField& u, double lambda, double nu, const GroundState& gs);

/// The same margin from the scalar ingredients ||grad u||^2, ||u||_4^4, ||u||_2^2.
Lemma24Margin lemma24_margin_from(double grad2, double quartic, double l2sq, double lambda, double nu,
                                  double j_q);

struct Lemma24Audit {
    long samples = 0;            ///< admissible samples evaluated
    long rejected = 0;           ///< draws failing the hypothesis
    long k_nonnegative = 0;
    long k_negative = 0;
    long violations = 0;         ///< margins below -slack
    double min_margin_nonnegative = 0.0;
    double min_margin_negative = 0.0;
    double slack = 1e-9;
    bool passed() const { return violations == 0; }
};

/// Random admissible triples: Gaussian mixtures and multiples of Q on the
/// ground-state grid, lambda in [0.25, 4], nu up to the hypothesis bound.
Lemma24Audit lemma24_audit(const GroundState& gs, long samples, std::uint64_t seed = 1, double slack = 1e-9);

struct SignPersistence {
    double min_k = 0.0;
    double max_k = 0.0;
    int initial_sign = 0;
    bool sign_changed = false;
    double first_change_time = 0.0;
};

/// K(u(t)) over the samples; a change of sign beyond `tol` sets sign_changed.
SignPersistence sign_persistence_audit(const Trajectory& traj, double tol);

}  // namespace zlab
