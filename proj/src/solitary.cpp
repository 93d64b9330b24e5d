#include "wavelab/solitary.hpp"

#include <cmath>

#include "wavelab/linop.hpp"
#include "wavelab/spectral.hpp"

namespace wavelab {

namespace {

double branch_sign(Branch b) {
    if (b == Branch::Plus) return 1.0;
    if (b == Branch::Minus) return -1.0;
    throw std::invalid_argument("branch must be plus or minus here");
}

void even_symmetrize(Field& f) {
    const int n = f.size();
    // grid point i pairs with (n - i) mod n under z -> -z
    for (int i = 1; i < n / 2; ++i) {
        const double avg = 0.5 * (f.v[i] + f.v[n - i]);
        f.v[i] = avg;
        f.v[n - i] = avg;
    }
}

}  // namespace

double chen_alpha_to_omega(double alpha, Branch sign) {
    if (alpha <= -3.0 || alpha == 0.0)
        throw std::invalid_argument("chen_alpha_to_omega: alpha must lie in (-3,inf)\\{0}");
    return branch_sign(sign) * (3.0 + 2.0 * alpha) / std::sqrt(3.0 * (3.0 + alpha));
}

double g_branch(double omega, Branch sign) {
    const double s = branch_sign(sign);
    return 0.375 * (omega * omega - 4.0 + s * omega * std::sqrt(omega * omega + 8.0));
}

SolitonProfile chen_profile(double alpha, Branch sign, const GridSpec& grid,
                            const AbcdParams& params) {
    if (!params.is_chen_case())
        throw std::invalid_argument("chen_profile: explicit family requires a = c = -1");
    if (alpha <= -3.0 || alpha == 0.0)
        throw std::invalid_argument("chen_profile: alpha must lie in (-3,inf)\\{0}");
    SolitonProfile p;
    p.omega = chen_alpha_to_omega(alpha, sign);
    p.branch = sign;
    p.alpha = alpha;
    p.params = params;
    p.R = Field(grid);
    p.Q = Field(grid);
    const double q_amp = branch_sign(sign) * alpha * std::sqrt(3.0 / (3.0 + alpha));
    for (int i = 0; i < grid.n; ++i) {
        const double s = 1.0 / std::cosh(0.5 * grid.node(i));
        const double s2 = s * s;
        p.R.v[i] = alpha * s2;
        p.Q.v[i] = q_amp * s2;
    }
    p.residual_sup = exact0_residual(p);
    return p;
}

FieldPair exact0_residual_fields(const SolitonProfile& p) {
    const AbcdParams& par = p.params;
    const Field R2 = deriv(p.R, 2);
    const Field Q2 = deriv(p.Q, 2);
    Field r1(p.grid()), r2(p.grid());
    for (int i = 0; i < p.grid().n; ++i) {
        const double R = p.R.v[i], Q = p.Q.v[i];
        r1.v[i] = -p.omega * (R - R2.v[i]) + par.a * Q2.v[i] + Q + R * Q;
        r2.v[i] = -p.omega * (Q - Q2.v[i]) + par.c * R2.v[i] + R + 0.5 * Q * Q;
    }
    return FieldPair(std::move(r1), std::move(r2));
}

double exact0_residual(const SolitonProfile& p) {
    return sup_norm(exact0_residual_fields(p));
}

SolitonProfile newton_solitary(const AbcdParams& params, double omega,
                               const SolitonProfile& seed, const NewtonOptions& opts) {
    const double wstar = sonic_speed(params);
    if (!(omega > 0.0 && omega < wstar))
        throw std::invalid_argument("newton_solitary: omega outside (0, omega*)");
    if (l2_norm(seed.as_pair()) < opts.collapse_norm)
        throw std::invalid_argument("newton_solitary: trivial seed");

    SolitonProfile cur = seed;
    cur.omega = omega;
    cur.params = params;
    cur.branch = Branch::Numeric;
    even_symmetrize(cur.R);
    even_symmetrize(cur.Q);

    double res = exact0_residual(cur);
    for (int it = 0; it < opts.max_iter; ++it) {
        if (res < opts.tol) break;
        // Newton correction: the Jacobian of the profile system is J L, so
        // the step solves L d = -J F with the kernel direction pinned
        OperatorHandle op = assemble_L(cur, params);
        FieldPair F = exact0_residual_fields(cur);
        FieldPair rhs(F.u, F.eta);  // J F
        rhs *= -1.0;
        // project off the kernel direction (translation mode); the even
        // symmetrization below removes it from the iterate anyway
        const double qq = inner(op.kernel_vec, op.kernel_vec);
        if (qq > 0.0) {
            const double c = inner(rhs, op.kernel_vec) / qq;
            rhs.eta -= c * op.kernel_vec.eta;
            rhs.u -= c * op.kernel_vec.u;
        }
        FieldPair step = constrained_solve(op, rhs);

        double lambda = 1.0;
        SolitonProfile trial = cur;
        for (int back = 0; back < 8; ++back) {
            trial.R = cur.R + lambda * step.eta;
            trial.Q = cur.Q + lambda * step.u;
            even_symmetrize(trial.R);
            even_symmetrize(trial.Q);
            const double tres = exact0_residual(trial);
            if (tres < res || tres < opts.tol) {
                cur = trial;
                res = tres;
                break;
            }
            lambda *= 0.5;  // damping on residual increase
            if (back == 7) {
                cur = trial;
                res = tres;
            }
        }
        if (l2_norm(cur.as_pair()) < opts.collapse_norm)
            throw std::runtime_error("newton_solitary: collapsed to the zero profile");
    }
    if (res >= opts.tol)
        throw std::runtime_error("newton_solitary: no convergence after max iterations");
    cur.residual_sup = res;
    return cur;
}

double momentum_quadrature(const SolitonProfile& p) {
    return inner(p.R, p.Q) + inner(deriv(p.R, 1), deriv(p.Q, 1));
}

double energy_quadrature(const SolitonProfile& p) {
    const AbcdParams& par = p.params;
    const Field dR = deriv(p.R, 1);
    const Field dQ = deriv(p.Q, 1);
    Field integrand(p.grid());
    for (int i = 0; i < p.grid().n; ++i) {
        const double R = p.R.v[i], Q = p.Q.v[i];
        integrand.v[i] = -par.a * dQ.v[i] * dQ.v[i] - par.c * dR.v[i] * dR.v[i] +
                         Q * Q + R * R + Q * Q * R;
    }
    return 0.5 * integrate(integrand);
}

double momentum_closed_form(double omega, Branch sign) {
    if (sign == Branch::Plus) {
        const double g = g_branch(omega, Branch::Plus);
        return 3.2 * g * g / std::sqrt(1.0 + g / 3.0);
    }
    const double gm = g_branch(omega, Branch::Minus);
    const double gp = g_branch(omega, Branch::Plus);
    return -6.4 * gm * gm * std::sqrt(1.0 + gp / 3.0);
}

double energy_closed_form(double omega, Branch sign) {
    const double g = g_branch(omega, sign);
    return 3.6 * (1.0 + omega * omega * (g - 1.0));
}

SolitonProfile profile_at_omega(const AbcdParams& params, double omega, Branch sign,
                                const GridSpec& grid, const SolitonProfile* numeric_seed) {
    if (sign != Branch::Numeric && params.is_chen_case())
        return chen_profile(g_branch(omega, sign), sign, grid, params);
    const SolitonProfile* seed = numeric_seed;
    SolitonProfile chen_seed;
    if (!seed) {
        // fall back to the Chen shape as a generic seed
        AbcdParams chen = params;
        chen.a = chen.c = -1.0;
        chen_seed = chen_profile(g_branch(std::min(omega, 0.9), Branch::Plus), Branch::Plus,
                                 grid, chen);
        chen_seed.params = params;
        seed = &chen_seed;
    }
    return newton_solitary(params, omega, *seed);
}

FieldPair profile_omega_derivative(const AbcdParams& params, double omega, Branch sign,
                                   const GridSpec& grid, double dw,
                                   const SolitonProfile* numeric_seed) {
    SolitonProfile plus = profile_at_omega(params, omega + dw, sign, grid, numeric_seed);
    SolitonProfile minus = profile_at_omega(params, omega - dw, sign, grid, numeric_seed);
    Field dR = plus.R - minus.R;
    Field dQ = plus.Q - minus.Q;
    dR *= 1.0 / (2.0 * dw);
    dQ *= 1.0 / (2.0 * dw);
    return FieldPair(std::move(dR), std::move(dQ));
}

double slope_dP_domega(const AbcdParams& params, double omega, Branch sign,
                       const GridSpec& grid, double dw, const SolitonProfile* numeric_seed) {
    SolitonProfile plus = profile_at_omega(params, omega + dw, sign, grid, numeric_seed);
    SolitonProfile minus = profile_at_omega(params, omega - dw, sign, grid, numeric_seed);
    return (momentum_quadrature(plus) - momentum_quadrature(minus)) / (2.0 * dw);
}

}  // namespace wavelab
