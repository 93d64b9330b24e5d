#pragma once

#include <vector>

#include "wavelab/grid.hpp"
#include "wavelab/model.hpp"

namespace wavelab {

enum class Stepper { Rk4, SplitStep };

struct EvolveConfig {
    double dt = 0.0;  // 0 -> 0.25 dx
    double t_start = 0.0;
    double t_end = 0.0;
    bool dealias = true;
    int output_stride = 0;  // 0 -> max(1, round(0.5/dt)) steps per snapshot
    Stepper stepper = Stepper::Rk4;
};

struct DiagnosticsRow {
    double t = 0.0;
    double H = 0.0;
    double H_h = 0.0;
    double P = 0.0;
    double dHh_dt_analytic = 0.0;
    double dP_dt_analytic = 0.0;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<FieldPair> snapshots;
    std::vector<DiagnosticsRow> rows;
    double dt = 0.0;
};

// instantaneous time derivative of the abcd system in evolution form,
// bottom forcing from the closed-form derivative stack
FieldPair rhs(const FieldPair& state, double t, const AbcdParams& params,
              const BottomSpec& bottom, bool dealias = true);

// classical 4-stage step; NaN/Inf aborts with a diagnostic
FieldPair step_rk4(const FieldPair& state, double t, double dt, const AbcdParams& params,
                   const BottomSpec& bottom, bool dealias = true);

// exact flat-bottom linear evolution through the diagonalizing transform;
// sigma(k) = sqrt((1-ak^2)(1-ck^2))/(1+k^2)
FieldPair linear_exact_step(const FieldPair& state, double dt, const AbcdParams& params);

double sigma_symbol(double k, const AbcdParams& params);

Trajectory run(const FieldPair& initial, const EvolveConfig& config,
               const AbcdParams& params, const BottomSpec& bottom);

}  // namespace wavelab
