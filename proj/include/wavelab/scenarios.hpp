#pragma once

#include <string>
#include <vector>

#include "wavelab/approx.hpp"
#include "wavelab/config.hpp"
#include "wavelab/tracker.hpp"

namespace wavelab {

// One check line of a scenario report.
struct CheckLine {
    std::string name;
    bool pass = false;
    double value = 0.0;
};

struct ScenarioResult {
    std::vector<CheckLine> checks;
    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

// Full three-regime interaction experiment at a single epsilon.
struct InteractionResult {
    double epsilon = 0.0;
    double T_eps = 0.0;
    ModulationTrack track;
    double profile_norm = 0.0;          // ||Q_omega0||_{H1xH1}
    double max_residual = 0.0;          // over the whole run
    double post_max_residual = 0.0;     // sup over t >= T_eps
    double post_max_speed_dev = 0.0;    // max |rho' - omega0| over t >= T_eps
    std::vector<double> pre_window_means;  // 4 window means on [-T_eps, -T_eps/2]
    bool pre_trend_ok = false;
    int recenter_count = 0;
};

InteractionResult run_interaction(const AbcdParams& params, const BottomSpec& bottom,
                                  const GridSpec& grid, double omega0, double post_window,
                                  const std::string& out_dir,
                                  ShiftPairing exit_pairing = ShiftPairing::Kernel);

// epsilon-sweep of the approximate-solution construction at t = 0
struct ApproxSweepResult {
    std::vector<double> epsilons;
    std::vector<double> w_l2, w_linf, res_order1, res_order2;
    SweepReport w_l2_fit, w_linf_fit, res2_fit;
    double res1_exponent = 0.0;
    bool order_comparison_ok = false;  // first-order exponent < full exponent
};

ApproxSweepResult run_approx_sweep(const AbcdParams& params, BottomSpec bottom,
                                   const GridSpec& grid, double omega0,
                                   const std::vector<double>& epsilons,
                                   const std::string& out_dir);

// dispatch on config.kind; writes artifacts + summary.txt; returns exit status
int run_scenario(const ScenarioConfig& config);

void write_summary(const std::string& out_dir, const ScenarioResult& result);

}  // namespace wavelab
