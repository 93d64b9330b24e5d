#pragma once

#include "wavelab/grid.hpp"
#include "wavelab/model.hpp"

namespace wavelab {

enum class Branch { Plus, Minus, Numeric };

// Traveling-wave pair (R_omega, Q_omega) sampled in the co-moving variable.
struct SolitonProfile {
    double omega = 0.0;
    Branch branch = Branch::Numeric;
    double alpha = 0.0;  // Chen amplitude when analytic
    Field R;
    Field Q;
    AbcdParams params;
    double residual_sup = 0.0;  // sup-norm residual of the profile equations

    const GridSpec& grid() const { return R.grid; }
    FieldPair as_pair() const { return FieldPair(R, Q); }
};

// omega = sign * (3 + 2 alpha) / sqrt(3 (3 + alpha)), alpha in (-3, inf) \ {0}
double chen_alpha_to_omega(double alpha, Branch sign);

// G_pm(omega) = (3/8)(omega^2 - 4 +- omega sqrt(omega^2 + 8)); inverse of the above
double g_branch(double omega, Branch sign);

// exact Chen solution, valid only for a = c = -1
SolitonProfile chen_profile(double alpha, Branch sign, const GridSpec& grid,
                            const AbcdParams& params);

// sup-norm residual of the traveling-wave system on the sampled profile
double exact0_residual(const SolitonProfile& p);
FieldPair exact0_residual_fields(const SolitonProfile& p);

struct NewtonOptions {
    double tol = 1e-10;   // sup-norm residual target
    int max_iter = 50;
    double collapse_norm = 1e-6;
};

// spectral Newton solve of the traveling-wave system at speed omega,
// even-symmetrized each iteration; seed must be nontrivial
SolitonProfile newton_solitary(const AbcdParams& params, double omega,
                               const SolitonProfile& seed,
                               const NewtonOptions& opts = {});

// quadrature P = int(R Q + R' Q') and E = H evaluated on the profile
double momentum_quadrature(const SolitonProfile& p);
double energy_quadrature(const SolitonProfile& p);

// closed forms for the Chen branches (a = c = -1), omega in (0,1)
double momentum_closed_form(double omega, Branch sign);
double energy_closed_form(double omega, Branch sign);

// centered finite difference of quadrature momentum over profiles at omega +- dw.
// For Branch::Numeric the profiles come from Newton continuation off the seed.
double slope_dP_domega(const AbcdParams& params, double omega, Branch sign,
                       const GridSpec& grid, double dw = 1e-4,
                       const SolitonProfile* numeric_seed = nullptr);

// omega-derivative of the profile by centered Newton differences
FieldPair profile_omega_derivative(const AbcdParams& params, double omega, Branch sign,
                                   const GridSpec& grid, double dw = 1e-4,
                                   const SolitonProfile* numeric_seed = nullptr);

// profile at given omega: Chen when a = c = -1, else Newton from the seed
SolitonProfile profile_at_omega(const AbcdParams& params, double omega, Branch sign,
                                const GridSpec& grid,
                                const SolitonProfile* numeric_seed = nullptr);

}  // namespace wavelab
