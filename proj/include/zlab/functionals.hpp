#pragma once

#include "zlab/radial_grid.hpp"
#include "zlab/state.hpp"

namespace zlab {

/// Snapshot of the conserved and variational quantities of a state.
struct FunctionalRecord {
    double mass = 0.0;       ///< M(u) = ||u||_2^2 / 2
    double e_s = 0.0;        ///< cubic NLS energy
    double e_z = 0.0;        ///< Zakharov energy (direct form)
    double k = 0.0;          ///< scaling derivative ||grad u||^2 - (3/4)||u||_4^4
    double nu_l2 = 0.0;      ///< ||N - |u|^2||_2
    double grad_u_l2 = 0.0;  ///< ||grad u||_2
    double u_l4 = 0.0;       ///< ||u||_4
    double im_n_l2 = 0.0;    ///< ||Im N||_2
    double n_l2 = 0.0;       ///< ||N||_2
};

double mass(const RadialField& u);
double nls_energy(const RadialField& u);

/// Direct form \int |grad u|^2/2 + |N|^2/4 - Re N |u|^2/2.  The value is
/// cross-checked against E_S(u) + ||N - |u|^2||^2/4; a mismatch beyond
/// 1e-10 (1 + |E_Z|) throws std::logic_error.
double zakharov_energy(const State& state);

double k_functional(const RadialField& u);

/// J_lambda(u) = E_S(u) + lambda^2 M(u).
double action(const RadialField& u, double lambda);

/// G_lambda(u) = ||grad u||^2/6 + (lambda^2/2)||u||^2, equal to J_lambda - K/3.
double g_functional(const RadialField& u, double lambda);

/// The two deviation conventions: N - |u|^2 (complex, used in the energies and
/// the virial identity) and Re N - |u|^2 (real, used by the localized virial).
struct Deviation {
    RadialField complex_dev;
    RadialField real_dev;
};
Deviation deviation(const State& state);

FunctionalRecord evaluate_functionals(const State& state);

/// ||u||_4^4 with the grid quadrature.
double l4_norm4(const RadialField& u);

}  // namespace zlab
