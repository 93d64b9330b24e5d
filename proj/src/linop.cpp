#include "wavelab/linop.hpp"

#include <cmath>

#include "lina.hpp"

namespace wavelab {

namespace {

// first column of the circulant spectral d^2 matrix
std::vector<double> d2_column(const GridSpec& g) {
    Field delta(g);
    delta.v[0] = 1.0;
    return deriv(delta, 2).v;
}

Eigen::VectorXd to_vec(const FieldPair& p) {
    const int n = p.grid().n;
    Eigen::VectorXd v(2 * n);
    for (int i = 0; i < n; ++i) {
        v[i] = p.eta.v[i];
        v[n + i] = p.u.v[i];
    }
    return v;
}

FieldPair from_vec(const GridSpec& g, const Eigen::VectorXd& v) {
    FieldPair p(g);
    for (int i = 0; i < g.n; ++i) {
        p.eta.v[i] = v[i];
        p.u.v[i] = v[g.n + i];
    }
    return p;
}

// smooth C^5 taper: 1 on |z| <= L - margin, 0 at the edges (high smoothness
// keeps the spectral derivative of the tapered field clean in the interior)
Field taper_field(const GridSpec& g, double margin) {
    Field t(g);
    const double L = g.half_length;
    for (int i = 0; i < g.n; ++i) {
        const double s = (std::abs(g.node(i)) - (L - margin)) / margin;
        if (s <= 0.0) {
            t.v[i] = 1.0;
        } else if (s >= 1.0) {
            t.v[i] = 0.0;
        } else {
            const double u6 = s * s * s * s * s * s;
            t.v[i] = 1.0 - u6 * (462.0 - 1980.0 * s + 3465.0 * s * s - 3080.0 * s * s * s +
                                 1386.0 * s * s * s * s - 252.0 * s * s * s * s * s);
        }
    }
    return t;
}

}  // namespace

// Bordered saddle-point factorization [A q; q^T 0], used for the
// kernel-orthogonal solves; keeps the solve well-conditioned near the
// zero eigenvalue.
class BorderedLu {
  public:
    BorderedLu(const Eigen::MatrixXd& A, const Eigen::VectorXd& q)
        : lu_(make_bordered(A, q)), size_(static_cast<int>(A.rows())) {}

    Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const {
        Eigen::VectorXd b(size_ + 1);
        b.head(size_) = rhs;
        b[size_] = 0.0;
        return lu_.solve(b).head(size_);
    }

  private:
    static Eigen::MatrixXd make_bordered(const Eigen::MatrixXd& A, const Eigen::VectorXd& q) {
        const int m = static_cast<int>(A.rows());
        Eigen::MatrixXd B(m + 1, m + 1);
        B.setZero();
        B.topLeftCorner(m, m) = A;
        B.block(0, m, m, 1) = q;
        B.block(m, 0, 1, m) = q.transpose();
        return B;
    }
    lina::Lu lu_;
    int size_;
};

OperatorHandle assemble_L(const SolitonProfile& profile, const AbcdParams& params,
                          int max_dense_n) {
    const GridSpec& g = profile.grid();
    const int n = g.n;
    if (n > max_dense_n)
        throw std::invalid_argument("assemble_L: grid too large for the dense path");

    OperatorHandle op;
    op.profile = profile;
    op.params = params;
    op.omega = profile.omega;
    op.A.resize(2 * n, 2 * n);
    op.A.setZero();

    const std::vector<double> c2 = d2_column(g);
    // circulant blocks: D2[i][j] = c2[(i-j) mod n]
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const double d2 = c2[(i - j + n) % n];
            const double off = params.c * d2;              // c d^2
            const double offa = params.a * d2;             // a d^2
            const double mid = op.omega * d2;              // omega d^2 (from -omega(1-d^2))
            op.A(i, j) += off;
            op.A(n + i, n + j) += offa;
            op.A(i, n + j) += mid;
            op.A(n + i, j) += mid;
        }
        op.A(j, j) += 1.0;
        op.A(n + j, n + j) += 1.0 + profile.R.v[j];
        op.A(j, n + j) += -op.omega + profile.Q.v[j];
        op.A(n + j, j) += -op.omega + profile.Q.v[j];
    }
    // enforce exact symmetry against roundoff in the circulant fill
    op.A = 0.5 * (op.A + op.A.transpose()).eval();

    op.kernel_vec = FieldPair(deriv(profile.R, 1), deriv(profile.Q, 1));
    op.vk_vec = FieldPair(helmholtz_fwd(profile.Q), helmholtz_fwd(profile.R));
    return op;
}

OperatorHandle assemble_L0(const AbcdParams& params, double omega, const GridSpec& grid) {
    SolitonProfile flat;
    flat.omega = omega;
    flat.params = params;
    flat.R = Field(grid);
    flat.Q = Field(grid);
    flat.branch = Branch::Numeric;
    return assemble_L(flat, params);
}

FieldPair OperatorHandle::apply(const FieldPair& x) const {
    return from_vec(grid(), A * to_vec(x));
}

FieldPair OperatorHandle::apply_tapered(const FieldPair& x, double margin) const {
    const Field t = taper_field(grid(), margin);
    return apply(FieldPair(hadamard(t, x.eta), hadamard(t, x.u)));
}

double OperatorHandle::symmetry_defect() const {
    return (A - A.transpose()).cwiseAbs().maxCoeff();
}

double OperatorHandle::kernel_residual() const {
    const FieldPair img = apply(kernel_vec);
    const double h2 = std::sqrt(std::pow(hs_norm(kernel_vec.eta, 2), 2) +
                                std::pow(hs_norm(kernel_vec.u, 2), 2));
    return l2_norm(img) / h2;
}

SpectrumSummary lowest_spectrum(const OperatorHandle& op, int count) {
    SpectrumSummary s;
    const std::vector<double> w = lina::sym_eigenvalues(op.A);
    const int m = std::min<int>(count, static_cast<int>(w.size()));
    s.lowest_eigenvalues.assign(w.begin(), w.begin() + m);
    const double neg_tol = 1e-6;
    for (double ev : w)
        if (ev < -neg_tol) ++s.negative_count;
    if (s.negative_count == 1) s.mu0 = -w[0];
    s.kernel_residual = op.kernel_residual();
    return s;
}

FieldPair constrained_solve(const OperatorHandle& op, const FieldPair& rhs) {
    const double qq = l2_norm(op.kernel_vec);
    const double rr = l2_norm(rhs);
    if (rr > 0.0) {
        const double defect = std::abs(inner(rhs, op.kernel_vec)) / (rr * qq);
        if (defect > 1e-8)
            throw std::invalid_argument("constrained_solve: rhs is not kernel-orthogonal");
    }
    if (!op.lu) op.lu = std::make_shared<BorderedLu>(op.A, to_vec(op.kernel_vec));
    Eigen::VectorXd x = op.lu->solve(to_vec(rhs));
    FieldPair out = from_vec(op.grid(), x);
    // postcondition: two-sided residual check
    const FieldPair img = op.apply(out);
    const double res = l2_norm(img - rhs);
    if (rr > 0.0 && res > 1e-6 * rr)
        throw std::runtime_error("constrained_solve: near-singular projected system");
    return out;
}

FieldPair zeroth_block_inverse(const OperatorHandle& op, const FieldPair& rhs) {
    const double w = op.omega;
    const double det = 1.0 - w * w;
    FieldPair out(op.grid());
    for (int i = 0; i < op.n(); ++i) {
        out.eta.v[i] = (rhs.eta.v[i] + w * rhs.u.v[i]) / det;
        out.u.v[i] = (w * rhs.eta.v[i] + rhs.u.v[i]) / det;
    }
    return out;
}

FieldPair bounded_rhs_solve(const OperatorHandle& op, const FieldPair& rhs) {
    const FieldPair mg = zeroth_block_inverse(op, rhs);
    // K (M rhs) with K = [c d2, w d2 + Q; w d2 + Q, a d2 + R]; the input may be
    // bounded (non-periodic tail), so differentiate with the jump-corrected rule
    const Field d2e = deriv_nonperiodic(mg.eta, 2);
    const Field d2u = deriv_nonperiodic(mg.u, 2);
    FieldPair kmg(op.grid());
    for (int i = 0; i < op.n(); ++i) {
        const double Q = op.profile.Q.v[i];
        const double R = op.profile.R.v[i];
        kmg.eta.v[i] = op.params.c * d2e.v[i] + op.omega * d2u.v[i] + Q * mg.u.v[i];
        kmg.u.v[i] = op.omega * d2e.v[i] + Q * mg.eta.v[i] + op.params.a * d2u.v[i] +
                     R * mg.u.v[i];
    }
    kmg *= -1.0;
    // the correction right side is kernel-orthogonal up to quadrature error;
    // project the numerical defect off before the strict solve
    const double qq = inner(op.kernel_vec, op.kernel_vec);
    const double c = inner(kmg, op.kernel_vec) / qq;
    kmg.eta -= c * op.kernel_vec.eta;
    kmg.u -= c * op.kernel_vec.u;
    FieldPair corr = constrained_solve(op, kmg);
    return mg + corr;
}

double vk_functional(const OperatorHandle& op) {
    const double denom = l2_norm(op.vk_vec) * l2_norm(op.kernel_vec);
    const double defect = std::abs(inner(op.vk_vec, op.kernel_vec)) / denom;
    if (defect > 1e-8)
        throw std::runtime_error("vk_functional: J(1-d2)Q lost kernel orthogonality");
    const FieldPair inv = constrained_solve(op, op.vk_vec);
    return inner(inv, op.vk_vec);
}

CoercivityReport coercivity_check(const OperatorHandle& op, bool drop_second_constraint) {
    const int n2 = 2 * op.n();
    // collect nonzero constraint directions (the flat operator has none)
    std::vector<Eigen::VectorXd> cons;
    Eigen::VectorXd q = to_vec(op.kernel_vec);
    if (q.norm() > 1e-14) cons.push_back(q / q.norm());
    if (!drop_second_constraint) {
        Eigen::VectorXd v = to_vec(op.vk_vec);
        for (const auto& u : cons) v -= u.dot(v) * u;
        if (v.norm() > 1e-14) cons.push_back(v / v.norm());
    }
    Eigen::MatrixXd C;
    if (cons.empty()) {
        C = Eigen::MatrixXd::Identity(n2, n2);
    } else {
        Eigen::MatrixXd U(n2, static_cast<int>(cons.size()));
        for (size_t j = 0; j < cons.size(); ++j) U.col(static_cast<int>(j)) = cons[j];
        C = lina::orthogonal_complement(U);
    }
    const Eigen::MatrixXd M = C.transpose() * op.A * C;

    CoercivityReport rep;
    rep.l2_quotient = lina::sym_eigenvalues(M)[0];

    // H1 x H1 Gram: block-diagonal (1 - d^2) per component
    const std::vector<double> c2 = d2_column(op.grid());
    const int n = op.n();
    Eigen::MatrixXd G(n2, n2);
    G.setZero();
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const double d2 = c2[(i - j + n) % n];
            G(i, j) -= d2;
            G(n + i, n + j) -= d2;
        }
        G(j, j) += 1.0;
        G(n + j, n + j) += 1.0;
    }
    G = 0.5 * (G + G.transpose()).eval();
    const Eigen::MatrixXd Gp = C.transpose() * G * C;
    rep.h1h1_quotient = lina::sym_generalized_min_eig(M, Gp);
    return rep;
}

}  // namespace wavelab
