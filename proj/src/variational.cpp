#include "zlab/variational.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "zlab/evolution.hpp"
#include "zlab/functionals.hpp"

namespace zlab {

double default_tol_k(const RadialField& u0) { return 1e-8 * (1.0 + gradient_norm_sq(u0)); }

Classification classify(const State& state, const GroundState& gs, double tol_k, double threshold_rtol) {
    Classification c;
    const double m = mass(state.u);
    const double e_z = zakharov_energy(state);
    c.product = e_z * m;
    c.threshold = gs.threshold;
    c.k0 = k_functional(state.u);
    c.tol_k = tol_k < 0.0 ? default_tol_k(state.u) : tol_k;

    if (c.product >= c.threshold * (1.0 - threshold_rtol)) {
        c.verdict = Verdict::NotBelowThreshold;
        return c;
    }
    if (m > 0.0) c.lambda_star = admissible_lambda(e_z, m, gs.j);
    if (c.k0 > c.tol_k)
        c.verdict = Verdict::Scattering;
    else if (c.k0 < -c.tol_k)
        c.verdict = Verdict::GrowUp;
    else
        c.verdict = Verdict::ZeroSolution;
    return c;
}

std::optional<double> admissible_lambda(double e_z, double m, double j_q) {
    if (!(m > 0.0)) throw std::invalid_argument("admissible_lambda: mass must be positive");
    const double lambda = j_q / (2.0 * m);
    const double vertex = e_z - j_q * j_q / (4.0 * m);
    if (!(vertex < 0.0) || !(lambda > 0.0)) return std::nullopt;
    return lambda;
}

double mu_root(const RadialField& u) {
    const double quartic = l4_norm4(u);
    if (!(quartic > 0.0)) throw std::invalid_argument("mu_root: zero field");
    return 4.0 * gradient_norm_sq(u) / (3.0 * quartic);
}

double b_function(double mu) {
    if (!(mu >= 0.0)) throw std::invalid_argument("b_function: mu must be >= 0");
    return 3.0 * std::sqrt(2.0 / (mu + 2.0)) + (mu - 1.0) * std::sqrt((mu + 2.0) / 2.0);
}

Lemma24Margin lemma24_margin_from(double grad2, double quartic, double l2sq, double lambda, double nu,
                                  double j_q) {
    if (!(lambda > 0.0)) throw std::invalid_argument("lemma24_margin: lambda must be positive");
    if (!(nu >= 0.0)) throw std::invalid_argument("lemma24_margin: nu must be >= 0");
    Lemma24Margin out;
    const double e_s = 0.5 * grad2 - 0.25 * quartic;
    const double m = 0.5 * l2sq;
    out.hypothesis_ok = e_s + lambda * lambda * m + 0.25 * nu * nu <= lambda * j_q;
    out.k = grad2 - 0.75 * quartic;
    const double l4sq = std::sqrt(quartic);
    const double lhs = 4.0 * out.k + nu * nu;
    out.margin = out.k >= 0.0 ? lhs - std::sqrt(6.0) * nu * l4sq : -2.0 * nu * l4sq - lhs;
    return out;
}

Lemma24Margin lemma24_margin(const RadialField& u, double lambda, double nu, const GroundState& gs) {
    return lemma24_margin_from(gradient_norm_sq(u), l4_norm4(u), inner(u, u), lambda, nu, gs.j);
}

Lemma24Audit lemma24_audit(const GroundState& gs, long samples, std::uint64_t seed, double slack) {
    if (samples < 0) throw std::invalid_argument("lemma24_audit: negative sample count");
    Lemma24Audit audit;
    audit.slack = slack;
    audit.min_margin_nonnegative = std::numeric_limits<double>::infinity();
    audit.min_margin_negative = std::numeric_limits<double>::infinity();

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto& grid = gs.grid();
    // Shape ingredients are computed once per profile; amplitude scaling is
    // then exact: grad2 ~ c^2, quartic ~ c^4, l2sq ~ c^2.
    const int draws_per_shape = 20;
    long attempts = 0;
    while (audit.samples < samples) {
        if (++attempts > 1000 * (samples + 1)) throw std::runtime_error("lemma24_audit: too many rejected draws");
        RadialField shape = RadialField::zeros(grid);
        if (unit(rng) < 0.2) {
            shape = gs.profile;
        } else {
            const int terms = 1 + static_cast<int>(unit(rng) * 3.0);
            for (int t = 0; t < terms; ++t) {
                const double amp = 0.2 + unit(rng);
                const double width = std::exp(std::log(0.4) + unit(rng) * std::log(3.0 / 0.4));
                const double centre = unit(rng) < 0.5 ? 0.0 : 2.0 * unit(rng);
                for (std::size_t j = 0; j < grid.size(); ++j) {
                    const double r = grid.node(j);
                    const double a = (r - centre) / width, b = (r + centre) / width;
                    shape[j] += amp * (std::exp(-a * a) + std::exp(-b * b));
                }
            }
        }
        const double g0 = gradient_norm_sq(shape), q0 = l4_norm4(shape), m0 = inner(shape, shape);
        // K(c shape) changes sign at c^2 = 4 g0 / (3 q0).
        const double c_crit2 = 4.0 * g0 / (3.0 * q0);
        for (int d = 0; d < draws_per_shape && audit.samples < samples; ++d) {
            const double c2 = c_crit2 * std::exp(std::log(0.05) + unit(rng) * std::log(3.0 / 0.05));
            const double lambda = std::exp(std::log(0.25) + unit(rng) * std::log(16.0));
            const double grad2 = c2 * g0, quartic = c2 * c2 * q0, l2sq = c2 * m0;
            const double gap = lambda * gs.j - (0.5 * grad2 - 0.25 * quartic + 0.5 * lambda * lambda * l2sq);
            if (!(gap >= 0.0)) {
                ++audit.rejected;
                continue;
            }
            const double nu = 2.0 * std::sqrt(gap) * unit(rng);
            const auto m = lemma24_margin_from(grad2, quartic, l2sq, lambda, nu, gs.j);
            if (!m.hypothesis_ok) {
                ++audit.rejected;
                continue;
            }
            ++audit.samples;
            if (m.k >= 0.0) {
                ++audit.k_nonnegative;
                audit.min_margin_nonnegative = std::min(audit.min_margin_nonnegative, m.margin);
            } else {
                ++audit.k_negative;
                audit.min_margin_negative = std::min(audit.min_margin_negative, m.margin);
            }
            if (m.margin < -slack) ++audit.violations;
        }
    }
    return audit;
}

SignPersistence sign_persistence_audit(const Trajectory& traj, double tol) {
    if (traj.samples.empty()) throw std::invalid_argument("sign_persistence_audit: empty trajectory");
    SignPersistence sp;
    const double k0 = traj.samples.front().rec.k;
    sp.initial_sign = k0 > tol ? 1 : (k0 < -tol ? -1 : 0);
    sp.min_k = sp.max_k = k0;
    for (const auto& smp : traj.samples) {
        const double k = smp.rec.k;
        sp.min_k = std::min(sp.min_k, k);
        sp.max_k = std::max(sp.max_k, k);
        const bool flipped = (sp.initial_sign > 0 && k < -tol) || (sp.initial_sign < 0 && k > tol) ||
                             (sp.initial_sign == 0 && std::abs(k) > tol);
        if (flipped && !sp.sign_changed) {
            sp.sign_changed = true;
            sp.first_change_time = smp.t;
        }
    }
    return sp;
}

}  // namespace zlab
