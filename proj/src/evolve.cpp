#include "wavelab/evolve.hpp"

#include <cmath>
#include <stdexcept>

#include "wavelab/diagnostics.hpp"
#include "wavelab/spectral.hpp"

namespace wavelab {

FieldPair rhs(const FieldPair& state, double t, const AbcdParams& params,
              const BottomSpec& bottom, bool dealias) {
    const GridSpec& g = state.grid();
    const int n = g.n;

    // nonlinear products, optionally dealiased by the 2/3 rule
    Field prod_eta(g);  // u (eta + h)
    Field prod_u(g);    // u^2 / 2
    for (int i = 0; i < n; ++i) {
        const double h = bottom.h(t, g.node(i));
        prod_eta.v[i] = state.u.v[i] * (state.eta.v[i] + h);
        prod_u.v[i] = 0.5 * state.u.v[i] * state.u.v[i];
    }
    if (dealias) {
        prod_eta = dealias_23(prod_eta);
        prod_u = dealias_23(prod_u);
    }

    // d_t eta = a u_x - (1+a)(1-d2)^{-1} u_x - (1-d2)^{-1} d_x(u(eta+h))
    //           + (1-d2)^{-1}(-1 + a1 d2) d_t h
    const Field ux = deriv(state.u, 1);
    const Field ex = deriv(state.eta, 1);
    Field deta = params.a * ux - (1.0 + params.a) * helmholtz_inv(ux) -
                 helmholtz_inv(deriv(prod_eta, 1));
    Field du = params.c * ex - (1.0 + params.c) * helmholtz_inv(ex) -
               helmholtz_inv(deriv(prod_u, 1));

    if (!bottom.is_flat()) {
        Field ht(g), httx(g);
        for (int i = 0; i < n; ++i) {
            ht.v[i] = bottom.h(t, g.node(i), 1, 0);
            httx.v[i] = bottom.h(t, g.node(i), 2, 1);
        }
        // (-1 + a1 d2) applied spectrally to the closed-form d_t h
        deta += helmholtz_inv((-1.0) * ht + params.a1 * deriv(ht, 2));
        du += params.c1 * helmholtz_inv(httx);
    }
    return FieldPair(std::move(deta), std::move(du));
}

FieldPair step_rk4(const FieldPair& state, double t, double dt, const AbcdParams& params,
                   const BottomSpec& bottom, bool dealias) {
    const FieldPair k1 = rhs(state, t, params, bottom, dealias);
    const FieldPair k2 =
        rhs(state + (0.5 * dt) * k1, t + 0.5 * dt, params, bottom, dealias);
    const FieldPair k3 =
        rhs(state + (0.5 * dt) * k2, t + 0.5 * dt, params, bottom, dealias);
    const FieldPair k4 = rhs(state + dt * k3, t + dt, params, bottom, dealias);
    FieldPair out = state;
    const double c = dt / 6.0;
    for (int i = 0; i < state.grid().n; ++i) {
        out.eta.v[i] += c * (k1.eta.v[i] + 2.0 * k2.eta.v[i] + 2.0 * k3.eta.v[i] + k4.eta.v[i]);
        out.u.v[i] += c * (k1.u.v[i] + 2.0 * k2.u.v[i] + 2.0 * k3.u.v[i] + k4.u.v[i]);
    }
    if (!out.all_finite())
        throw std::runtime_error("step_rk4: non-finite state (blow-up or dt too large) at t=" +
                                 std::to_string(t));
    return out;
}

double sigma_symbol(double k, const AbcdParams& params) {
    const double k2 = k * k;
    return std::sqrt((1.0 - params.a * k2) * (1.0 - params.c * k2)) / (1.0 + k2);
}

FieldPair linear_exact_step(const FieldPair& state, double dt, const AbcdParams& params) {
    if (params.a >= 0.0 || params.c >= 0.0)
        throw std::invalid_argument("linear_exact_step: requires a < 0 and c < 0");
    const GridSpec& g = state.grid();
    const int n = g.n;
    auto se = rfft(state.eta);
    auto su = rfft(state.u);
    for (int j = 0; j <= n / 2; ++j) {
        const double k = g.wavenumber(j);
        const double k2 = k * k;
        const double hk = std::sqrt((1.0 - params.a * k2) / (1.0 - params.c * k2));
        const double sg = sigma_symbol(k, params);
        // eta = H(v + w), u = v - w; v, w advect with speeds +-sigma
        const std::complex<double> v0 = 0.5 * (se[j] / hk + su[j]);
        const std::complex<double> w0 = 0.5 * (se[j] / hk - su[j]);
        const std::complex<double> pv = std::exp(std::complex<double>(0.0, -k * sg * dt));
        const std::complex<double> pw = std::exp(std::complex<double>(0.0, +k * sg * dt));
        const std::complex<double> v1 = v0 * pv;
        const std::complex<double> w1 = w0 * pw;
        se[j] = hk * (v1 + w1);
        su[j] = v1 - w1;
    }
    return FieldPair(irfft(g, se), irfft(g, su));
}

Trajectory run(const FieldPair& initial, const EvolveConfig& config, const AbcdParams& params,
               const BottomSpec& bottom) {
    if (config.t_end <= config.t_start)
        throw std::invalid_argument("run: t_end must exceed t_start");
    const GridSpec& g = initial.grid();
    double dt = config.dt > 0.0 ? config.dt : 0.25 * g.dx();
    const int nsteps = static_cast<int>(std::ceil((config.t_end - config.t_start) / dt));
    dt = (config.t_end - config.t_start) / nsteps;
    const int stride = config.output_stride > 0
                           ? config.output_stride
                           : std::max(1, static_cast<int>(std::lround(0.5 / dt)));

    Trajectory traj;
    traj.dt = dt;
    FieldPair state = initial;
    double t = config.t_start;
    auto record = [&](const FieldPair& s, double tt) {
        DiagnosticsRow row;
        row.t = tt;
        row.H = energy_H(s, params);
        row.H_h = energy_Hh(s, params, bottom, tt);
        row.P = momentum_P(s);
        row.dHh_dt_analytic = dHh_dt_rhs(s, params, bottom, tt);
        row.dP_dt_analytic = dP_dt_rhs(s, params, bottom, tt);
        traj.times.push_back(tt);
        traj.snapshots.push_back(s);
        traj.rows.push_back(row);
    };
    // nonlinear-plus-forcing remainder used by the Strang stepper
    auto remainder = [&](const FieldPair& s, double tt) {
        FieldPair full = rhs(s, tt, params, bottom, config.dealias);
        const Field ux = deriv(s.u, 1);
        const Field ex = deriv(s.eta, 1);
        full.eta -= params.a * ux - (1.0 + params.a) * helmholtz_inv(ux);
        full.u -= params.c * ex - (1.0 + params.c) * helmholtz_inv(ex);
        return full;
    };

    record(state, t);
    for (int i = 0; i < nsteps; ++i) {
        if (config.stepper == Stepper::SplitStep) {
            // Strang: exact linear half steps around a midpoint nonlinear kick
            state = linear_exact_step(state, 0.5 * dt, params);
            const FieldPair k1 = remainder(state, t);
            const FieldPair k2 = remainder(state + (0.5 * dt) * k1, t + 0.5 * dt);
            state += dt * k2;
            state = linear_exact_step(state, 0.5 * dt, params);
            if (!state.all_finite())
                throw std::runtime_error("run: non-finite state at t=" + std::to_string(t));
        } else {
            state = step_rk4(state, t, dt, params, bottom, config.dealias);
        }
        t = config.t_start + (i + 1) * dt;
        if ((i + 1) % stride == 0 || i + 1 == nsteps) record(state, t);
    }
    return traj;
}

}  // namespace wavelab
