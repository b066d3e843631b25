#pragma once

#include <string>
#include <utility>
#include <vector>

#include "zlab/radial_grid.hpp"
#include "zlab/state.hpp"

namespace zlab {

struct Trajectory;

// ---------------------------------------------------------------------------
// Littlewood-Paley pieces

/// phi_k(xi): smooth dyadic bump, 1 for log2 xi in [k - 1/4, k + 1/4], 0
/// outside (k - 3/4, k + 3/4).  sum_k phi_k = 1 on (0, inf).
double lp_bump(int k, double xi);

/// Dyadic indices whose bumps touch the grid wavenumbers [k_1, k_max].
std::pair<int, int> lp_index_range(const RadialGrid& grid);

/// P_k f: spectral coefficients times phi_k(k_m).
RadialField lp_project(const RadialField& f, int k);

/// Nearest-integer log2, the index a continuous wavenumber is assigned to.
int dyadic_index(double xi);

// ---------------------------------------------------------------------------
// Frequency regions on Z^2

enum class RegionKind { XL, RL, LL, LH, HH, RR, LX };
std::string to_string(RegionKind k);

struct FrequencyRegion {
    RegionKind kind = RegionKind::XL;
    double beta = 10.0;
};

bool region_contains(const FrequencyRegion& region, int j, int k);

/// Union of regions sharing one beta.
struct RegionUnion {
    std::vector<RegionKind> kinds;
    double beta = 10.0;
    bool contains(int j, int k) const;
};

/// max(10, ceil(5 + |log2 alpha|)).
double default_beta(double alpha);

/// 5 + |log2 alpha|, the smallest admissible beta.
double minimal_beta(double alpha);

/// sum_{(j,k) in A} (P_j f)(P_k g), formed in physical space.
RadialField masked_product(const RadialField& f, const RadialField& g, const RegionUnion& region);
RadialField masked_product(const RadialField& f, const RadialField& g, const FrequencyRegion& region);

// ---------------------------------------------------------------------------
// Bilinear multipliers

/// s = |xi|, b = |xi - eta| (first argument), a = |eta| (second argument).
enum class Denominator {
    SchrodingerPlus,   ///< -s^2 + alpha b + a^2
    SchrodingerMinus,  ///< -s^2 - alpha b + a^2
    Wave,              ///< b^2 - a^2 - alpha s
    Unit,              ///< 1, the consistency hook
};
double denominator_value(Denominator d, double s, double b, double a, double alpha);

enum class DenominatorUse {
    Divide,
    /// Divide, then multiply the integrand back: the round-trip hook.
    RoundTrip,
};

/// sum over (b, a) in the mask support and all output wavenumbers s of
/// T(s, b, a) w_A(b, a) f_b g_a / denominator, where T is the exact discrete
/// kernel of the grid product and w_A the smooth pair weight.  In the
/// continuum T is supported on the triangle |a-b| <= s <= a+b; on the grid it
/// has a Gibbs tail outside it, which is kept so that the unit denominator
/// reproduces masked_product to roundoff.  When conjugate_second is set,
/// g's spectrum enters conjugated.  Throws std::runtime_error if a denominator
/// falls below 1e-12 alpha b (1 + s) at any evaluated node.
RadialField bilinear_multiplier(const RadialField& f, const RadialField& g, const RegionUnion& mask,
                                Denominator denom, double alpha, bool conjugate_second = false,
                                DenominatorUse use = DenominatorUse::Divide);

/// Omega(f, g) = (Omega_+(f, g) + Omega_-(conj f, g))/2 on XL u LL.
/// Requires beta >= 5 + |log2 alpha|.
RadialField omega(const RadialField& n_field, const RadialField& u, double beta, double alpha);

/// Omega~(f, g) with the wave denominator and g conjugated, on XL u LX.
RadialField omega_tilde(const RadialField& u, const RadialField& u2, double beta, double alpha);

// ---------------------------------------------------------------------------
// Resonance scan

struct ResonanceScan {
    double beta = 0.0;
    double alpha = 0.0;
    bool beta_admissible = false;
    /// |omega_pm| / (b (1 + s)) over XL u LL.
    double min_ratio_schrodinger = 0.0;
    /// |omega_pm| / (alpha b) over LL.
    double min_ratio_ll = 0.0;
    double max_ratio_ll = 0.0;
    /// |omega_pm| / (b (1 + s)) over XL.
    double min_ratio_xl = 0.0;
    /// |b^2 - a^2 - alpha s| / (s (1 + s)) over XL u LX.
    double min_ratio_wave = 0.0;
    long evaluations = 0;
};

/// Dense sampling of the triangles (s, b, a) whose dyadic pair lies in the
/// masks, over a window of pairs next to the region edges.  Any beta > 0 is
/// accepted; below 5 + |log2 alpha| the scan exhibits near-resonances.
ResonanceScan resonance_scan(double beta, double alpha, int samples = 24);

// ---------------------------------------------------------------------------
// Transformed-equation residual

struct NormalFormResidual {
    double beta = 0.0;
    double max_residual = 0.0;      ///< max_t ||lhs - rhs|| / max(1, sup_t ||(u, N)||)
    double scale = 1.0;
    double max_boundary_norm = 0.0; ///< max_t ||B(u(t))||, H^1 x L^2
    double max_duhamel_norm = 0.0;  ///< max_t ||Q + T||, H^1 x L^2
    std::vector<double> times;
    std::vector<double> residuals;
};

/// Checks u = U(t)u(0) - U(t)B(u(0)) + B(u) + Q(u) + T(u) along a trajectory
/// recorded with keep_states and sample spacing <= 0.01.  Duhamel integrals
/// use piecewise-linear Filon weights for the free propagator.
NormalFormResidual normal_form_residual(const Trajectory& traj, double beta);

}  // namespace zlab
