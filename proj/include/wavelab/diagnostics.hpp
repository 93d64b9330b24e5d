#pragma once

#include "wavelab/grid.hpp"
#include "wavelab/model.hpp"

namespace wavelab {

// H = (1/2) int(-a u_x^2 - c eta_x^2 + u^2 + eta^2 + u^2 eta)
double energy_H(const FieldPair& state, const AbcdParams& params);

// modified energy: the cubic term becomes u^2 (eta + h)
double energy_Hh(const FieldPair& state, const AbcdParams& params,
                 const BottomSpec& bottom, double t);

// P = int(eta u + eta_x u_x)
double momentum_P(const FieldPair& state);

// exact analytic d/dt of H_h along the flow (six-term identity)
double dHh_dt_rhs(const FieldPair& state, const AbcdParams& params,
                  const BottomSpec& bottom, double t);

// exact analytic d/dt of P along the flow
double dP_dt_rhs(const FieldPair& state, const AbcdParams& params,
                 const BottomSpec& bottom, double t);

// weighted energy with nonnegative weight psi
double local_energy(const FieldPair& state, const Field& psi, const AbcdParams& params,
                    const BottomSpec& bottom, double t);

// m0(tau) = -eps^2 rho2 int_0^1 (ds h0)(eps(tau + sigma rho2), eps rho) dsigma,
// 16-point Gauss-Legendre in sigma
double m0_eval(double tau, double rho2, double rho, const BottomSpec& bottom);

// Lyapunov functional F2 of the exit-regime argument; U and Q are evaluated
// in the frame z = x - rho, h in the lab frame
double lyapunov_F2(const FieldPair& eta2, const FieldPair& U, const Field& Q_omega,
                   double omega, double rho, double m0, const BottomSpec& bottom,
                   double tau, const AbcdParams& params);

}  // namespace wavelab
