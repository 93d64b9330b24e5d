#pragma once

#include <map>
#include <vector>

#include "wavelab/evolve.hpp"
#include "wavelab/grid.hpp"
#include "wavelab/model.hpp"
#include "wavelab/solitary.hpp"

namespace wavelab {

// Solitary profiles on an omega lattice (spacing 1e-3), Newton-built with the
// Chen seed and linearly interpolated between lattice nodes.
class ProfileCache {
  public:
    ProfileCache(const AbcdParams& params, const GridSpec& grid,
                 Branch branch = Branch::Plus, double spacing = 1e-3);

    // interpolated profile pair (R, Q) at speed omega, centered at z = 0
    FieldPair profile(double omega) const;
    FieldPair profile_derivative(double omega) const;  // (R', Q')
    double profile_norm_h1h1(double omega) const;

    const GridSpec& grid() const { return grid_; }
    const AbcdParams& params() const { return params_; }

  private:
    const FieldPair& node(int idx) const;
    AbcdParams params_;
    GridSpec grid_;
    Branch branch_;
    double spacing_;
    mutable std::map<int, FieldPair> cache_;
};

// test vector of the shift condition: the kernel direction Q', or its
// Helmholtz-weighted variant (1 - d^2) Q' used in the exit-regime analysis
enum class ShiftPairing { Kernel, HelmholtzWeighted };

struct FitResult {
    double rho = 0.0;
    double omega = 0.0;
    double residual_h1h1 = 0.0;         // ||state - Q_omega(. - rho)||_{H1 x H1}
    double orthogonality_defect = 0.0;  // |<res, Q'(. - rho)>| (plus speed defect in 2-D)
    double weighted_defect = 0.0;       // |<res, (1-d^2) Q'(. - rho)>|, always reported
    int iterations = 0;
};

// scalar Newton root of g(rho) = <state - Q(. - rho), V(. - rho)> with the
// selected test vector V; both orthogonality defects are reported either way
FitResult fit_shift(const FieldPair& state, double omega, double rho_guess,
                    const ProfileCache& cache,
                    ShiftPairing pairing = ShiftPairing::Kernel);

// 2-D Newton on <res, Q'> = 0 and <res, J(1-d2)Q> = 0
FitResult fit_shift_speed(const FieldPair& state, double omega_guess, double rho_guess,
                          const ProfileCache& cache);

// initial shift guess from the cross-correlation argmax
double correlation_shift_guess(const FieldPair& state, const FieldPair& reference);

enum class TrackMode { ShiftOnly, ShiftSpeed };

struct ModulationTrack {
    std::vector<double> times;
    std::vector<double> rho_series;
    std::vector<double> omega_series;
    std::vector<double> residual_h1h1_series;
    std::vector<double> orthogonality_defect_series;
    std::vector<double> weighted_defect_series;
};

// warm-started fits across the snapshots of a trajectory
ModulationTrack track(const Trajectory& traj, TrackMode mode, double reference_omega,
                      const ProfileCache& cache,
                      ShiftPairing pairing = ShiftPairing::Kernel);

}  // namespace wavelab
