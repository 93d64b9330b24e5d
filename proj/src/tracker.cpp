#include "wavelab/tracker.hpp"

#include <cmath>
#include <stdexcept>

#include "wavelab/spectral.hpp"

namespace wavelab {

ProfileCache::ProfileCache(const AbcdParams& params, const GridSpec& grid, Branch branch,
                           double spacing)
    : params_(params), grid_(grid), branch_(branch), spacing_(spacing) {}

const FieldPair& ProfileCache::node(int idx) const {
    auto it = cache_.find(idx);
    if (it != cache_.end()) return it->second;
    const double omega = idx * spacing_;
    SolitonProfile seed = profile_at_omega(params_, omega, branch_, grid_);
    SolitonProfile refined = params_.is_chen_case()
                                 ? seed
                                 : newton_solitary(params_, omega, seed);
    auto [pos, ok] = cache_.emplace(idx, refined.as_pair());
    return pos->second;
}

FieldPair ProfileCache::profile(double omega) const {
    const double s = omega / spacing_;
    const int i0 = static_cast<int>(std::floor(s));
    const double w = s - i0;
    if (w == 0.0) return node(i0);
    const FieldPair& lo = node(i0);
    const FieldPair& hi = node(i0 + 1);
    FieldPair out(grid_);
    for (int i = 0; i < grid_.n; ++i) {
        out.eta.v[i] = (1.0 - w) * lo.eta.v[i] + w * hi.eta.v[i];
        out.u.v[i] = (1.0 - w) * lo.u.v[i] + w * hi.u.v[i];
    }
    return out;
}

FieldPair ProfileCache::profile_derivative(double omega) const {
    const FieldPair p = profile(omega);
    return FieldPair(deriv(p.eta, 1), deriv(p.u, 1));
}

double ProfileCache::profile_norm_h1h1(double omega) const {
    return h1h1_norm(profile(omega));
}

double correlation_shift_guess(const FieldPair& state, const FieldPair& reference) {
    // argmax over grid shifts of <state, ref(. - d)>, done in spectral space
    const GridSpec& g = state.grid();
    auto se = rfft(state.eta);
    auto su = rfft(state.u);
    auto re = rfft(reference.eta);
    auto ru = rfft(reference.u);
    std::vector<std::complex<double>> cross(se.size());
    for (size_t j = 0; j < se.size(); ++j)
        cross[j] = se[j] * std::conj(re[j]) + su[j] * std::conj(ru[j]);
    Field corr = irfft(g, cross);
    int best = 0;
    for (int i = 1; i < g.n; ++i)
        if (corr.v[i] > corr.v[best]) best = i;
    double d = best * g.dx();
    if (d >= g.half_length) d -= 2.0 * g.half_length;
    return d;
}

FitResult fit_shift(const FieldPair& state, double omega, double rho_guess,
                    const ProfileCache& cache, ShiftPairing pairing) {
    const FieldPair prof = cache.profile(omega);
    const FieldPair dprof = cache.profile_derivative(omega);
    // test vector: Q' or (1 - d^2) Q'
    const FieldPair test = pairing == ShiftPairing::Kernel
                               ? dprof
                               : FieldPair(helmholtz_fwd(dprof.eta), helmholtz_fwd(dprof.u));
    const double tnorm2 = inner(test, test);

    double rho = rho_guess;
    FitResult out;
    const int max_iter = 60;
    bool converged = false;
    for (int it = 0; it < max_iter; ++it) {
        const FieldPair q = shift(prof, rho);
        const FieldPair vt = shift(test, rho);
        FieldPair res = state;
        res -= q;
        const double gval = inner(res, vt);
        // g'(rho) = <Q', V> - <res, V'(. - rho)>
        const FieldPair vtp(deriv(vt.eta, 1), deriv(vt.u, 1));
        const double pairing_norm = inner(shift(dprof, rho), vt);
        const double gprime = pairing_norm - inner(res, vtp);
        if (std::abs(gprime) < 1e-12 * tnorm2)
            throw std::runtime_error("fit_shift: degenerate derivative (state left the tube)");
        const double step = -gval / gprime;
        rho += step;
        out.iterations = it + 1;
        if (std::abs(gval) < 1e-10 * tnorm2 && std::abs(step) < 1e-9) {
            converged = true;
            break;
        }
    }
    if (!converged) throw std::runtime_error("fit_shift: Newton did not converge");
    const FieldPair q = shift(prof, rho);
    const FieldPair qp = shift(dprof, rho);
    const FieldPair wp(helmholtz_fwd(qp.eta), helmholtz_fwd(qp.u));
    FieldPair res = state;
    res -= q;
    out.rho = rho;
    out.omega = omega;
    out.residual_h1h1 = h1h1_norm(res);
    out.orthogonality_defect = std::abs(inner(res, qp));
    out.weighted_defect = std::abs(inner(res, wp));
    return out;
}

FitResult fit_shift_speed(const FieldPair& state, double omega_guess, double rho_guess,
                          const ProfileCache& cache) {
    double omega = omega_guess;
    double rho = rho_guess;
    FitResult out;
    const int max_iter = 80;
    const double dw = 1e-6, dr = 1e-7;
    bool converged = false;

    auto constraints = [&](double w, double r, double& g1, double& g2) {
        const FieldPair prof = shift(cache.profile(w), r);
        const FieldPair dprof = shift(cache.profile_derivative(w), r);
        FieldPair res = state;
        res -= prof;
        const FieldPair vkv = shift(
            FieldPair(helmholtz_fwd(cache.profile(w).u), helmholtz_fwd(cache.profile(w).eta)),
            r);
        g1 = inner(res, dprof);
        g2 = inner(res, vkv);
    };

    for (int it = 0; it < max_iter; ++it) {
        double g1, g2;
        constraints(omega, rho, g1, g2);
        double g1w, g2w, g1r, g2r, g1m, g2m;
        constraints(omega + dw, rho, g1w, g2w);
        constraints(omega - dw, rho, g1m, g2m);
        const double j11 = (g1w - g1m) / (2.0 * dw);
        const double j21 = (g2w - g2m) / (2.0 * dw);
        constraints(omega, rho + dr, g1r, g2r);
        constraints(omega, rho - dr, g1m, g2m);
        const double j12 = (g1r - g1m) / (2.0 * dr);
        const double j22 = (g2r - g2m) / (2.0 * dr);
        const double det = j11 * j22 - j12 * j21;
        if (std::abs(det) < 1e-14)
            throw std::runtime_error("fit_shift_speed: singular Jacobian (degenerate slope)");
        const double dwv = (-j22 * g1 + j12 * g2) / det;
        const double drv = (j21 * g1 - j11 * g2) / det;
        omega += dwv;
        rho += drv;
        out.iterations = it + 1;
        if (std::abs(dwv) < 1e-11 && std::abs(drv) < 1e-11) {
            converged = true;
            break;
        }
    }
    if (!converged) throw std::runtime_error("fit_shift_speed: Newton did not converge");

    const FieldPair prof = shift(cache.profile(omega), rho);
    const FieldPair dprof = shift(cache.profile_derivative(omega), rho);
    FieldPair res = state;
    res -= prof;
    double g1, g2;
    constraints(omega, rho, g1, g2);
    out.rho = rho;
    out.omega = omega;
    out.residual_h1h1 = h1h1_norm(res);
    out.orthogonality_defect = std::max(std::abs(g1), std::abs(g2));
    out.weighted_defect =
        std::abs(inner(res, FieldPair(helmholtz_fwd(dprof.eta), helmholtz_fwd(dprof.u))));
    return out;
}

ModulationTrack track(const Trajectory& traj, TrackMode mode, double reference_omega,
                      const ProfileCache& cache, ShiftPairing pairing) {
    ModulationTrack mt;
    if (traj.snapshots.empty()) return mt;
    const GridSpec& g = traj.snapshots.front().grid();
    double rho = correlation_shift_guess(traj.snapshots.front(), cache.profile(reference_omega));
    double omega = reference_omega;
    for (size_t i = 0; i < traj.snapshots.size(); ++i) {
        FitResult fit = (mode == TrackMode::ShiftOnly)
                            ? fit_shift(traj.snapshots[i], reference_omega, rho, cache, pairing)
                            : fit_shift_speed(traj.snapshots[i], omega, rho, cache);
        if (!mt.times.empty()) {
            const double dt_snap = traj.times[i] - mt.times.back();
            const double jump = std::abs(fit.rho - mt.rho_series.back());
            if (jump > 5.0 * g.dx() + 2.0 * std::abs(dt_snap) * std::max(1.0, fit.omega))
                throw std::runtime_error("track: discontinuous shift between snapshots");
        }
        rho = fit.rho;
        omega = fit.omega;
        mt.times.push_back(traj.times[i]);
        mt.rho_series.push_back(fit.rho);
        mt.omega_series.push_back(fit.omega);
        mt.residual_h1h1_series.push_back(fit.residual_h1h1);
        mt.orthogonality_defect_series.push_back(fit.orthogonality_defect);
        mt.weighted_defect_series.push_back(fit.weighted_defect);
    }
    return mt;
}

}  // namespace wavelab
