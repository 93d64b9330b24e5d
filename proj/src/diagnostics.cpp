#include "wavelab/diagnostics.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include "wavelab/spectral.hpp"

namespace wavelab {

double energy_H(const FieldPair& state, const AbcdParams& params) {
    const GridSpec& g = state.grid();
    const Field ux = deriv(state.u, 1);
    const Field ex = deriv(state.eta, 1);
    Field integrand(g);
    for (int i = 0; i < g.n; ++i) {
        const double e = state.eta.v[i], u = state.u.v[i];
        integrand.v[i] = -params.a * ux.v[i] * ux.v[i] - params.c * ex.v[i] * ex.v[i] +
                         u * u + e * e + u * u * e;
    }
    return 0.5 * integrate(integrand);
}

double energy_Hh(const FieldPair& state, const AbcdParams& params, const BottomSpec& bottom,
                 double t) {
    double extra = 0.0;
    const GridSpec& g = state.grid();
    for (int i = 0; i < g.n; ++i) {
        const double u = state.u.v[i];
        extra += u * u * bottom.h(t, g.node(i));
    }
    return energy_H(state, params) + 0.5 * extra * g.dx();
}

double momentum_P(const FieldPair& state) {
    return inner(state.eta, state.u) + inner(deriv(state.eta, 1), deriv(state.u, 1));
}

double dHh_dt_rhs(const FieldPair& state, const AbcdParams& params, const BottomSpec& bottom,
                  double t) {
    if (bottom.is_flat()) return 0.0;
    const GridSpec& g = state.grid();
    const int n = g.n;
    Field ht(g), httx(g), ht_x(g);
    for (int i = 0; i < n; ++i) {
        const double x = g.node(i);
        ht.v[i] = bottom.h(t, x, 1, 0);
        ht_x.v[i] = bottom.h(t, x, 1, 1);
        httx.v[i] = bottom.h(t, x, 2, 1);
    }
    const Field inv_httx = helmholtz_inv(httx);
    const Field inv_ht = helmholtz_inv(ht);
    const Field ex = deriv(state.eta, 1);

    double term1 = 0.0;  // -a c1 int u htt_x
    double term2 = 0.0;  // c1 int (1 + a + eta + h) u Hinv(htt_x)
    double term3 = 0.0;  // c int eta ht
    double term4 = 0.0;  // c a1 int eta_x ht_x
    double term5 = 0.0;  // (a1 - 1) int ((1+c) eta + u^2/2) Hinv(ht)
    double term6 = 0.0;  // -a1 int ((1+c) eta + u^2/2) ht + (1/2) int u^2 ht
    for (int i = 0; i < n; ++i) {
        const double x = g.node(i);
        const double e = state.eta.v[i], u = state.u.v[i];
        const double h = bottom.h(t, x);
        const double quad = (1.0 + params.c) * e + 0.5 * u * u;
        term1 += u * httx.v[i];
        term2 += (1.0 + params.a + e + h) * u * inv_httx.v[i];
        term3 += e * ht.v[i];
        term4 += ex.v[i] * ht_x.v[i];
        term5 += quad * inv_ht.v[i];
        term6 += -params.a1 * quad * ht.v[i] + 0.5 * u * u * ht.v[i];
    }
    const double dx = g.dx();
    return dx * (-params.a * params.c1 * term1 + params.c1 * term2 + params.c * term3 +
                 params.c * params.a1 * term4 + (params.a1 - 1.0) * term5 + term6);
}

double dP_dt_rhs(const FieldPair& state, const AbcdParams& params, const BottomSpec& bottom,
                 double t) {
    if (bottom.is_flat()) return 0.0;
    const GridSpec& g = state.grid();
    Field ht(g), htxx(g), htt(g), hx(g);
    for (int i = 0; i < g.n; ++i) {
        const double x = g.node(i);
        hx.v[i] = bottom.h(t, x, 0, 1);
        ht.v[i] = bottom.h(t, x, 1, 0);
        htxx.v[i] = bottom.h(t, x, 1, 2);
        htt.v[i] = bottom.h(t, x, 2, 0);
    }
    const Field ex = deriv(state.eta, 1);
    double acc = 0.0;
    for (int i = 0; i < g.n; ++i) {
        const double u = state.u.v[i];
        acc += -0.5 * hx.v[i] * u * u - u * (ht.v[i] - params.a1 * htxx.v[i]) -
               params.c1 * ex.v[i] * htt.v[i];
    }
    return acc * g.dx();
}

double local_energy(const FieldPair& state, const Field& psi, const AbcdParams& params,
                    const BottomSpec& bottom, double t) {
    state.eta.check_same_grid(psi);
    for (double w : psi.v)
        if (w < 0.0) throw std::invalid_argument("local_energy: psi must be nonnegative");
    const GridSpec& g = state.grid();
    const Field ux = deriv(state.u, 1);
    const Field ex = deriv(state.eta, 1);
    Field integrand(g);
    for (int i = 0; i < g.n; ++i) {
        const double e = state.eta.v[i], u = state.u.v[i];
        const double h = bottom.h(t, g.node(i));
        integrand.v[i] = psi.v[i] * (-params.a * ux.v[i] * ux.v[i] -
                                     params.c * ex.v[i] * ex.v[i] + u * u + e * e +
                                     u * u * (e + h));
    }
    return 0.5 * integrate(integrand);
}

double m0_eval(double tau, double rho2, double rho, const BottomSpec& bottom) {
    if (rho2 == 0.0 || bottom.is_flat()) return 0.0;
    // 16-point Gauss-Legendre nodes/weights on [-1,1], mapped to sigma in [0,1]
    static const std::array<double, 8> xg = {0.0950125098376374, 0.2816035507792589,
                                             0.4580167776572274, 0.6178762444026438,
                                             0.7554044083550030, 0.8656312023878318,
                                             0.9445750230732326, 0.9894009349916499};
    static const std::array<double, 8> wg = {0.1894506104550685, 0.1826034150449236,
                                             0.1691565193950025, 0.1495959888165767,
                                             0.1246289712555339, 0.0951585116824928,
                                             0.0622535239386479, 0.0271524594117541};
    const double e = bottom.epsilon;
    double acc = 0.0;
    for (int i = 0; i < 8; ++i) {
        for (double sgn : {-1.0, 1.0}) {
            const double sig = 0.5 * (1.0 + sgn * xg[i]);
            acc += 0.5 * wg[i] * bottom.h0(e * (tau + sig * rho2), e * rho, 1, 0);
        }
    }
    return -e * e * rho2 * acc;
}

double lyapunov_F2(const FieldPair& eta2, const FieldPair& U, const Field& Q_omega,
                   double omega, double rho, double m0, const BottomSpec& bottom,
                   double tau, const AbcdParams& params) {
    const GridSpec& g = eta2.grid();
    // U and Q_omega enter at the moving-frame variable z = x - rho; the h in
    // the cubic term stays in the lab frame
    const FieldPair Us = rho == 0.0 ? U : shift(U, rho);
    const Field Qs = rho == 0.0 ? Q_omega : shift(Q_omega, rho);
    const Field de = deriv(eta2.eta, 1);
    const Field du = deriv(eta2.u, 1);
    double quad = 0.0, coupling = 0.0, cubic = 0.0, mom = 0.0, drive = 0.0;
    for (int i = 0; i < g.n; ++i) {
        const double e2 = eta2.eta.v[i], u2 = eta2.u.v[i];
        const double x = g.node(i);
        const double h = bottom.h(tau, x);
        quad += -params.a * du.v[i] * du.v[i] - params.c * de.v[i] * de.v[i] + u2 * u2 +
                e2 * e2;
        coupling += 2.0 * Us.u.v[i] * e2 * u2 + Us.eta.v[i] * u2 * u2;
        cubic += u2 * u2 * (e2 + h);
        mom += de.v[i] * du.v[i] + e2 * u2;
        drive += Qs.v[i] * u2;
    }
    const double dx = g.dx();
    return 0.5 * dx * quad + 0.5 * dx * coupling + 0.5 * dx * cubic -
           omega * dx * mom - m0 * dx * drive;
}

}  // namespace wavelab
