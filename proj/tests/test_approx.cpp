#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "wavelab/approx.hpp"
#include "wavelab/spectral.hpp"

using namespace wavelab;

namespace {
const GridSpec kGrid(512, 60.0);
const AbcdParams kChen;

BottomSpec gaussian_bottom(double eps, double amp = 0.25, double s0 = 0.3) {
    BottomSpec bot;
    bot.epsilon = eps;
    bot.amplitude = amp;
    bot.s0 = s0;
    return bot;
}

BottomSpec flat_bottom() {
    BottomSpec bot;
    bot.kind = BottomKind::Zero;
    return bot;
}
}  // namespace

TEST_CASE("solve_first_order") {
    SolitonProfile p = chen_profile(g_branch(0.5, Branch::Plus), Branch::Plus, kGrid, kChen);
    OperatorHandle op = assemble_L(p, kChen);
    FirstOrderKernel k = solve_first_order(op);

    FieldPair rhs(Field(kGrid), p.Q);
    FieldPair img = op.apply(FieldPair(k.A0, k.B0));
    CHECK(l2_norm(img - rhs) < 1e-8);

    for (int i = 1; i < kGrid.n / 2; i += 53) {
        CHECK(k.A0.v[i] == doctest::Approx(k.A0.v[kGrid.n - i]).epsilon(1e-8));
        CHECK(k.B0.v[i] == doctest::Approx(k.B0.v[kGrid.n - i]).epsilon(1e-8));
    }
    CHECK(std::abs(k.A0.v[0]) < 1e-9);  // boundary decay
    CHECK(std::abs(k.B0.v[0]) < 1e-9);

    // self-adjointness identity <(A0,B0), (0,Q)> = <L(A0,B0), (A0,B0)>
    const FieldPair ab(k.A0, k.B0);
    CHECK(inner(ab, rhs) == doctest::Approx(inner(img, ab)).epsilon(1e-10));
}

TEST_CASE("f1: flat bottom, pure-time bump, decay envelope") {
    CorrectionEngine flat(kChen, flat_bottom(), kGrid, 0.5);
    CHECK(flat.f1(0.0, 0.0) == 0.0);

    // pure-time bump: l0 = 0 freezes the y-dependence (h0 independent of y)
    BottomSpec puretime = gaussian_bottom(0.1, 0.4, 0.0);
    puretime.l0 = 0.0;
    CorrectionEngine eng(kChen, puretime, kGrid, 0.5);
    const double t = 2.0, rho = 1.3;
    // term-by-term oracle: f1 = -d0 (int ds_h0 Q + broad) with the y-terms absent
    const SolitonProfile& prof = eng.profile();
    double broad = 0.0;
    for (int i = 0; i < kGrid.n; ++i)
        broad += puretime.h0(0.1 * t, 0.1 * (kGrid.node(i) + rho), 1, 0) * prof.Q.v[i];
    broad *= kGrid.dx();
    const double hs = puretime.h0(0.1 * t, 0.1 * rho, 1, 0);
    const double expect = -eng.d0() * (broad - eng.d2_coef() * hs);
    CHECK(eng.f1(t, rho) == doctest::Approx(expect).epsilon(1e-12));

    // decay envelope |f1(t)| <= C e^{-k0 eps|t| - l0 eps|rho|} along a ray
    CorrectionEngine eng2(kChen, gaussian_bottom(0.1), kGrid, 0.5);
    const double C = 10.0 * std::abs(eng2.f1(0.0, 0.0)) + 1.0;
    for (double tt : {5.0, 15.0, 30.0, 60.0}) {
        const double rr = 0.5 * tt;
        const double bound = C * std::exp(-0.1 * tt - 0.1 * std::abs(rr));
        CHECK(std::abs(eng2.f1(tt, rr)) <= bound);
    }
}

TEST_CASE("second order correction: flat, solvability sign, substitution") {
    CorrectionEngine flat(kChen, flat_bottom(), kGrid, 0.5);
    SecondOrderCorrection c0 = flat.second_order(0.0, 0.0);
    CHECK(sup_norm(c0.A2) == 0.0);
    CHECK(sup_norm(c0.B2) == 0.0);
    CHECK(c0.f2 == 0.0);

    BottomSpec bot = gaussian_bottom(0.1);
    CorrectionEngine eng(kChen, bot, kGrid, 0.5);
    // the f2 solvability pairing is negative (VK)
    CHECK(eng.vk_value() < 0.0);

    const double t = 0.0, rho = -0.1;
    SecondOrderCorrection c = eng.second_order(t, rho);
    CHECK(std::abs(c.rhs_defect) < 1e-8);

    // orthogonality conditions of the correction
    FieldPair a2(c.A2, c.B2);
    const OperatorHandle& op = eng.op();
    CHECK(std::abs(inner(a2, op.kernel_vec)) / l2_norm(a2) < 1e-9);
    CHECK(std::abs(inner(a2, op.vk_vec)) / (l2_norm(a2) * l2_norm(op.vk_vec)) < 1e-8);

    // far field: decaying to the right, bounded (nonzero) to the left
    const int iright = static_cast<int>((55.0 + kGrid.half_length) / kGrid.dx());
    const int ileft = static_cast<int>((-55.0 + kGrid.half_length) / kGrid.dx());
    CHECK(std::abs(c.A2.v[iright]) < 1e-4 * sup_norm(c.A2));
    CHECK(std::abs(c.A2.v[ileft]) > 1e-3 * sup_norm(c.A2));

    // direct substitution: L (A2,B2) equals the assembled right-hand side
    const double e = bot.epsilon;
    const double H = bot.h0(e * t, e * rho);
    const double Hs = bot.h0(e * t, e * rho, 1, 0);
    const double Hy = bot.h0(e * t, e * rho, 0, 1);
    const double coef = Hs + eng.omega_ref() * Hy;
    const SolitonProfile& prof = eng.profile();
    const FirstOrderKernel& ker = eng.kernel();
    Field ps(kGrid);
    for (int i = 0; i < kGrid.n; ++i)
        ps.v[i] = bot.h0(e * t, e * (kGrid.node(i) + rho), 1, 0);
    auto om2anti = [](const Field& gf) { return antideriv_from_right(gf) + deriv(gf, 1); };
    Field rhs1 = (-coef) * om2anti(ker.B0) + c.f1 * om2anti(eng.lam_pair().u) +
                 (-H * H) * Field(kGrid);
    Field rhs2 = antideriv_from_right(ps) + (-coef) * om2anti(ker.A0) +
                 c.f1 * om2anti(eng.lam_pair().eta);
    for (int i = 0; i < kGrid.n; ++i) {
        rhs1.v[i] += -Hy * 0.0 - H * H * 0.5 * ker.B0.v[i] * ker.B0.v[i] +
                     c.f2 * op.vk_vec.eta.v[i];
        rhs2.v[i] += -Hy * kGrid.node(i) * prof.Q.v[i] -
                     H * H * (-ker.B0.v[i] + ker.A0.v[i] * ker.B0.v[i]) +
                     c.f2 * op.vk_vec.u.v[i];
    }
    FieldPair img = op.apply_tapered(a2, 6.0);
    double err = 0.0, scale = std::max(sup_norm(rhs1), sup_norm(rhs2));
    for (int i = 0; i < kGrid.n; ++i) {
        if (std::abs(kGrid.node(i)) > kGrid.half_length - 8.0) continue;
        err = std::max(err, std::abs(img.eta.v[i] - rhs1.v[i]));
        err = std::max(err, std::abs(img.u.v[i] - rhs2.v[i]));
    }
    CHECK(err / scale < 1e-6);
}

TEST_CASE("cutoff_chi") {
    Field chi = cutoff_chi(0.1, kGrid);
    for (int i = 0; i < kGrid.n; ++i) {
        const double z = std::abs(kGrid.node(i));
        if (z <= 10.0) CHECK(chi.v[i] == 1.0);
        if (z >= 20.0) CHECK(chi.v[i] == 0.0);
    }
    for (int i = 1; i < kGrid.n / 2; i += 41)
        CHECK(chi.v[i] == doctest::Approx(chi.v[kGrid.n - i]).epsilon(1e-14));

    // |d^k chi_eps| <= C eps^k on samples, k = 1, 2
    const Field d1 = deriv(chi, 1);
    const Field d2 = deriv(chi, 2);
    CHECK(sup_norm(d1) <= 3.0 * 0.1);
    CHECK(sup_norm(d2) <= 15.0 * 0.01);

    CHECK_THROWS_AS(cutoff_chi(0.02, kGrid), std::invalid_argument);  // 2/eps > L
}

TEST_CASE("build_W_sharp: flat gives zero; norms finite") {
    CorrectionEngine flat(kChen, flat_bottom(), kGrid, 0.5);
    FieldPair w0 = build_W_sharp(flat, 0.0, 0.0, 2);
    CHECK(sup_norm(w0) == 0.0);

    CorrectionEngine eng(kChen, gaussian_bottom(0.1), kGrid, 0.5);
    FieldPair w = build_W_sharp(eng, 0.0, 0.2, 2);
    CHECK(w.all_finite());
    CHECK(l2_norm(w) > 0.0);

    // first-derivative L2 norm scales like eps (third line of the W# bounds),
    // in contrast with the eps^{1/2} of the undifferentiated L2 norm
    double dnorm[2];
    int k = 0;
    for (double eps : {0.1, 0.05}) {
        CorrectionEngine e(kChen, gaussian_bottom(eps), kGrid, 0.5);
        EffectiveTrajectory tr = integrate_effective_ode(e, 0.5, 0.0);
        FieldPair ws = build_W_sharp(e, 0.0, tr.rho_series.back(), 2);
        dnorm[k++] = std::sqrt(std::pow(l2_norm(deriv(ws.eta, 1)), 2) +
                               std::pow(l2_norm(deriv(ws.u, 1)), 2));
    }
    const double slope = std::log(dnorm[0] / dnorm[1]) / std::log(2.0);
    CHECK(slope > 0.6);  // clearly steeper than the 1/2 of the plain L2 norm
}

TEST_CASE("build_approx_state invariants") {
    BottomSpec bot = gaussian_bottom(0.1);
    CorrectionEngine eng(kChen, bot, kGrid, 0.5);
    const double t = 1.0, rho = 0.4;
    ApproxState st = build_approx_state(eng, t, 0.5, rho);
    // (A1, B1) = -h0(eps t, eps rho) (A0, B0) pointwise
    const double h = bot.h0(0.1 * t, 0.1 * rho);
    const FirstOrderKernel& ker = eng.kernel();
    double err = 0.0;
    for (int i = 0; i < kGrid.n; ++i) {
        err = std::max(err, std::abs(st.A1B1.eta.v[i] + h * ker.A0.v[i]));
        err = std::max(err, std::abs(st.A1B1.u.v[i] + h * ker.B0.v[i]));
    }
    CHECK(err < 1e-14);
    // W# = eps (A1,B1) + eps^2 chi (A2,B2)
    const Field chi = cutoff_chi(0.1, kGrid);
    for (int i = 0; i < kGrid.n; i += 37) {
        const double expect =
            0.1 * st.A1B1.eta.v[i] + 0.01 * chi.v[i] * st.A2B2.eta.v[i];
        CHECK(st.W_sharp.eta.v[i] == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("integrate_effective_ode") {
    // flat bottom: omega constant, rho = omega t, to integrator tolerance
    CorrectionEngine flat(kChen, flat_bottom(), kGrid, 0.5);
    BottomSpec fb = flat_bottom();
    fb.epsilon = 0.1;
    CorrectionEngine flat2(kChen, fb, kGrid, 0.5);
    EffectiveTrajectory tr = integrate_effective_ode(flat2, 0.5, 5.0);
    const double T = interaction_horizon(0.1);
    for (size_t i = 0; i < tr.times.size(); i += 7) {
        CHECK(std::abs(tr.omega_series[i] - 0.5) < 1e-10);
        CHECK(std::abs(tr.rho_series[i] - 0.5 * tr.times[i]) < 1e-10);
    }
    CHECK(tr.rho_at(-T) == doctest::Approx(-0.5 * T).epsilon(1e-12));

    // gaussian bump: |omega(t_end) - omega0| <= C eps; the constant below was
    // measured once on this configuration and frozen as a regression value
    BottomSpec bot = gaussian_bottom(0.1);
    CorrectionEngine eng(kChen, bot, kGrid, 0.5);
    EffectiveTrajectory tg = integrate_effective_ode(eng, 0.5, 0.0);
    const double drift = std::abs(tg.omega_series.back() - 0.5);
    CHECK(drift < 0.35 * bot.epsilon);

    // f1 and f2 decay envelopes along the trajectory: the values near the
    // start of the window sit well below the peak, consistent with the
    // e^{-k0 eps |t|} envelope (trend check, not a constant fit)
    double f1_peak = 0.0, f2_peak = 0.0;
    for (size_t i = 0; i < tg.times.size(); ++i) {
        f1_peak = std::max(f1_peak, std::abs(tg.f1_series[i]));
        f2_peak = std::max(f2_peak, std::abs(tg.f2_series[i]));
    }
    CHECK(std::abs(tg.f1_series.front()) < 0.6 * f1_peak);
    CHECK(std::abs(tg.f2_series.front()) < 0.6 * f2_peak);

    // RK4 order: halving dt changes omega(t_end) by O(dt^4). The kernel is
    // frozen (huge refresh tolerance) so the right side is smooth in omega.
    CorrectionEngine e1(kChen, bot, kGrid, 0.5, Branch::Plus, 1.0);
    EffectiveTrajectory a = integrate_effective_ode(e1, 0.5, 0.0, 2.0);
    EffectiveTrajectory b = integrate_effective_ode(e1, 0.5, 0.0, 1.0);
    EffectiveTrajectory c3 = integrate_effective_ode(e1, 0.5, 0.0, 0.5);
    const double d1 = std::abs(a.omega_series.back() - b.omega_series.back());
    const double d2 = std::abs(b.omega_series.back() - c3.omega_series.back());
    CHECK(d1 / d2 == doctest::Approx(16.0).epsilon(0.8));  // fourth order
}

TEST_CASE("residual_R_sharp: flat bottom sanity and Richardson flag") {
    BottomSpec fb = flat_bottom();
    fb.epsilon = 0.1;
    CorrectionEngine flat(kChen, fb, kGrid, 0.5);
    ResidualReport rep = residual_R_sharp(flat, 0.0, 0.5, 0.0, 2);
    CHECK(rep.h2h2 < 1e-8);

    CorrectionEngine eng(kChen, gaussian_bottom(0.1), kGrid, 0.5);
    EffectiveTrajectory tr = integrate_effective_ode(eng, 0.5, 0.0);
    ResidualReport r2 = residual_R_sharp(eng, 0.0, tr.omega_series.back(),
                                         tr.rho_series.back(), 2, 5.0, 0.0, true);
    CHECK(r2.richardson_ok);
    CHECK(r2.h2h2 > 0.0);
    // the full correction must decay strictly faster in epsilon than the
    // first-order one (the pointwise crossover sits below desk-scale eps;
    // the slope comparison is the meaningful one and is asserted in the
    // sweep scenario and the acceptance suite)
    ResidualReport r1 = residual_R_sharp(eng, 0.0, tr.omega_series.back(),
                                         tr.rho_series.back(), 1);
    CHECK(r1.h2h2 > 0.0);
}
