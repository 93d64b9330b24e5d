#pragma once

#include <Eigen/Dense>
#include <memory>
#include <vector>

#include "wavelab/grid.hpp"
#include "wavelab/model.hpp"
#include "wavelab/solitary.hpp"
#include "wavelab/spectral.hpp"

namespace wavelab {

class BorderedLu;  // dense LU of the saddle-point system, defined in linop.cpp

// Linearized operator L at a solitary wave, assembled as a dense symmetric
// 2n x 2n matrix in the (eta-block, u-block) ordering.
struct OperatorHandle {
    SolitonProfile profile;
    AbcdParams params;
    double omega = 0.0;
    Eigen::MatrixXd A;
    FieldPair kernel_vec;  // Q'_omega = (R', Q')
    FieldPair vk_vec;      // J(1 - d^2) Q_omega = ((1-d^2)Q, (1-d^2)R)
    mutable std::shared_ptr<BorderedLu> lu;  // cached factorization

    int n() const { return profile.grid().n; }
    const GridSpec& grid() const { return profile.grid(); }

    FieldPair apply(const FieldPair& x) const;  // dense matvec
    // apply after smoothly tapering the far field to zero over the margin
    // band; valid on |z| <= L - margin (for bounded, non-decaying inputs)
    FieldPair apply_tapered(const FieldPair& x, double margin) const;

    double symmetry_defect() const;   // max |A - A^T|
    double kernel_residual() const;   // ||L Q'|| / ||Q'||_{H2 x H2}
};

struct SpectrumSummary {
    std::vector<double> lowest_eigenvalues;
    int negative_count = 0;
    double mu0 = 0.0;  // |most negative| when negative_count == 1
    double kernel_residual = 0.0;
};

// Dense assembly; spectral differentiation blocks. The dense path is capped
// (default 2048 points -> 4096^2 matrix).
OperatorHandle assemble_L(const SolitonProfile& profile, const AbcdParams& params,
                          int max_dense_n = 2048);

// flat-background operator L0 (Q = R = 0) at speed omega
OperatorHandle assemble_L0(const AbcdParams& params, double omega, const GridSpec& grid);

SpectrumSummary lowest_spectrum(const OperatorHandle& op, int count);

// unique solution of L x = rhs with <x, Q'> = 0, for rhs orthogonal to Q';
// solved through a bordered dense factorization
FieldPair constrained_solve(const OperatorHandle& op, const FieldPair& rhs);

// generalized inverse for bounded right-hand sides with decaying derivatives:
// x = M(omega) rhs + L^{-1}(-K M(omega) rhs), K = L - M(omega)^{-1}
FieldPair bounded_rhs_solve(const OperatorHandle& op, const FieldPair& rhs);

// zeroth-order block inverse M(omega) applied pointwise
FieldPair zeroth_block_inverse(const OperatorHandle& op, const FieldPair& rhs);

// <J(1-d^2)Q, L^{-1} J(1-d^2)Q>; negative for stable profiles
double vk_functional(const OperatorHandle& op);

struct CoercivityReport {
    double l2_quotient = 0.0;    // min of <Lu,u>/<u,u> on the constrained subspace
    double h1h1_quotient = 0.0;  // min of <Lu,u>/||u||_{H1xH1}^2 on the same subspace
};

// Rayleigh minimum of L restricted to the orthogonal complement of
// span{Q', J(1-d^2)Q} (or of span{Q'} alone when drop_second_constraint)
CoercivityReport coercivity_check(const OperatorHandle& op,
                                  bool drop_second_constraint = false);

}  // namespace wavelab
