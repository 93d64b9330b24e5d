#pragma once

#include <memory>
#include <vector>

#include "wavelab/grid.hpp"
#include "wavelab/linop.hpp"
#include "wavelab/model.hpp"
#include "wavelab/solitary.hpp"

namespace wavelab {

// Even, exponentially decaying solution of L (A0, B0) = (0, Q_omega),
// orthogonal to the kernel direction.
struct FirstOrderKernel {
    Field A0;
    Field B0;
    double omega = 0.0;
};

FirstOrderKernel solve_first_order(const OperatorHandle& op);

// Modulation trajectory of the effective dynamical system
// omega' = eps^2 f1(t), rho' = omega + eps^2 f2(t).
struct EffectiveTrajectory {
    std::vector<double> times;
    std::vector<double> omega_series;
    std::vector<double> rho_series;
    std::vector<double> f1_series;
    std::vector<double> f2_series;

    double omega_at(double t) const;
    double rho_at(double t) const;
};

struct SecondOrderCorrection {
    Field A2;
    Field B2;
    double f2 = 0.0;
    double f1 = 0.0;
    double rhs_defect = 0.0;  // kernel-orthogonality defect before projection
};

// Bundles the omega-dependent machinery (profile, operator, first-order
// kernel, omega-derivatives, cached constrained inverses) and refreshes it
// when the modulation speed drifts past refresh_tol.
class CorrectionEngine {
  public:
    CorrectionEngine(const AbcdParams& params, const BottomSpec& bottom,
                     const GridSpec& grid, double omega0, Branch branch = Branch::Plus,
                     double refresh_tol = 2e-3);

    void set_omega(double omega);  // rebuilds the kernel if needed
    double omega_ref() const { return omega_ref_; }

    const OperatorHandle& op() const { return *op_; }
    const FirstOrderKernel& kernel() const { return kernel_; }
    const SolitonProfile& profile() const { return op_->profile; }
    const BottomSpec& bottom() const { return bottom_; }
    const GridSpec& grid() const { return grid_; }
    const AbcdParams& params() const { return params_; }

    double d0() const { return d0_; }        // (dP/domega)^{-1}
    double d2_coef() const { return d2_; }   // int(R (1-d2)B0 + Q (1-d2)A0)
    double vk_value() const { return vk_; }  // <L^{-1} v, v> < 0
    const FieldPair& lam_pair() const { return lam_; }

    // solvability coefficient of the first modulation equation
    double f1(double t, double rho) const;
    // f2 without the extra linear solve, via <L^{-1}rhs, v> = <rhs, L^{-1}v>
    double f2_light(double t, double rho) const;
    // full second-order correction (A2, B2) with both orthogonality conditions
    SecondOrderCorrection second_order(double t, double rho) const;

    // (A1, B1) = -h0(eps t, eps rho) (A0, B0)
    FieldPair first_order_pair(double t, double rho) const;

    // modulated state Q_omega(z) + W at correction order 0, 1 or 2, built in
    // the co-moving frame and shifted so the grid carries x = z + rho_frame
    FieldPair build_state(double t, double omega, double rho, double rho_frame,
                          int order) const;

  private:
    struct Bounded {  // the analytically differentiated bounded part A20
        FieldPair val;
        FieldPair dval;
    };
    Bounded bounded_part(double t, double rho, double f1v) const;
    FieldPair rhs21(double t, double rho, const Bounded& b) const;

    AbcdParams params_;
    BottomSpec bottom_;
    GridSpec grid_;
    Branch branch_;
    double refresh_tol_;
    double omega_ref_ = 0.0;

    std::shared_ptr<OperatorHandle> op_;
    FirstOrderKernel kernel_;
    FieldPair lam_;      // d/domega (R, Q)
    FieldPair linv_v_;   // L^{-1} J(1-d2)Q
    FieldPair linv_w_;   // L^{-1} (B0^2/2, -B0 + A0 B0)
    FieldPair wpair_;
    double d0_ = 0.0, d2_ = 0.0, int_q2_ = 0.0, vk_ = 0.0;

    void rebuild(double omega);
};

// smooth bump: 1 on |z| <= 1/eps, 0 on |z| >= 2/eps; C^5 polynomial
// transition (the residual metric differentiates it five times)
Field cutoff_chi(double epsilon, const GridSpec& grid);

// W# = eps (A1,B1) + eps^2 (A2 chi, B2 chi); order selects how much is kept
FieldPair build_W_sharp(const CorrectionEngine& engine, double t, double rho,
                        int order = 2);

// state of the construction at one time, for reporting
struct ApproxState {
    double t = 0.0;
    double omega = 0.0;
    double rho = 0.0;
    double epsilon = 0.0;
    FieldPair A1B1;
    FieldPair A2B2;
    FieldPair W_sharp;
    double f1 = 0.0;
    double f2 = 0.0;
};

ApproxState build_approx_state(CorrectionEngine& engine, double t, double omega,
                               double rho);

// RK4 on [-T_eps, t_end] from (omega0, -omega0 T_eps); throws if omega
// leaves (0, omega*)
EffectiveTrajectory integrate_effective_ode(CorrectionEngine& engine, double omega0,
                                            double t_end, double dt = 0.0);

struct ResidualReport {
    double h2h2 = 0.0;           // discrete interior H2 x H2 norm of S_h
    double richardson_check = 0.0;  // |r(dt) - r(dt/2)| / r(dt/2)
    bool richardson_ok = true;
};

// S_h applied to the constructed state, time derivatives by centered
// differences with the effective ODE supplying (omega, rho) at t +- dtau
ResidualReport residual_R_sharp(CorrectionEngine& engine, double t, double omega,
                                double rho, int order = 2, double margin = 5.0,
                                double dtau = 0.0, bool do_richardson = false);

}  // namespace wavelab
