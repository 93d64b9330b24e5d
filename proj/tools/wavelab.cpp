// wavelab: numerical laboratory for solitary waves of the abcd Boussinesq
// system over a slowly varying bottom.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "wavelab/approx.hpp"
#include "wavelab/diagnostics.hpp"
#include "wavelab/io.hpp"
#include "wavelab/linop.hpp"
#include "wavelab/scenarios.hpp"
#include "wavelab/spectral.hpp"

using namespace wavelab;

namespace {

GridSpec make_grid(int n, double L) { return GridSpec(n, L); }

int cmd_soliton(double alpha, double omega, const std::string& branch, double a, double c,
                int n, double L, const std::string& out) {
    AbcdParams params;
    params.a = a;
    params.c = c;
    const GridSpec grid = make_grid(n, L);
    Branch br = branch == "minus" ? Branch::Minus
                                  : (branch == "numeric" ? Branch::Numeric : Branch::Plus);
    SolitonProfile prof;
    if (alpha != 0.0 && params.is_chen_case() && br != Branch::Numeric) {
        prof = chen_profile(alpha, br, grid, params);
    } else if (omega > 0.0) {
        prof = profile_at_omega(params, omega, br, grid);
    } else {
        std::cerr << "soliton: give --alpha (Chen) or --omega\n";
        return 2;
    }
    const double E = energy_quadrature(prof);
    const double P = momentum_quadrature(prof);
    std::filesystem::create_directories(std::filesystem::path(out).parent_path().string().empty()
                                            ? "."
                                            : std::filesystem::path(out).parent_path().string());
    std::ofstream hdr(out + ".txt");
    hdr << "omega\t" << format_full(prof.omega) << "\nalpha\t" << format_full(prof.alpha)
        << "\nresidual_sup\t" << format_full(prof.residual_sup) << "\nE\t" << format_full(E)
        << "\nP\t" << format_full(P) << "\n";
    write_pair_binary(out, prof.as_pair());
    write_field_text(out + ".R.tsv", prof.R);
    write_field_text(out + ".Q.tsv", prof.Q);
    std::cout << "soliton: omega=" << prof.omega << " residual=" << prof.residual_sup
              << " E=" << E << " P=" << P << "\n";
    return 0;
}

int cmd_spectrum(double alpha, double omega, int count, int n, double L) {
    AbcdParams params;
    const GridSpec grid = make_grid(n, L);
    SolitonProfile prof = (alpha != 0.0)
                              ? chen_profile(alpha, Branch::Plus, grid, params)
                              : profile_at_omega(params, omega, Branch::Plus, grid);
    OperatorHandle op = assemble_L(prof, params);
    SpectrumSummary spec = lowest_spectrum(op, count);
    std::cout << "omega\t" << format_full(prof.omega) << "\n";
    std::cout << "kernel_residual\t" << format_full(spec.kernel_residual) << "\n";
    std::cout << "negative_count\t" << spec.negative_count << "\n";
    if (spec.negative_count == 1) std::cout << "mu0\t" << format_full(spec.mu0) << "\n";
    std::cout << "lowest_eigenvalues";
    for (double ev : spec.lowest_eigenvalues) std::cout << '\t' << format_full(ev);
    std::cout << "\n";
    const double vk = vk_functional(op);
    const CoercivityReport coer = coercivity_check(op);
    std::cout << "vk_functional\t" << format_full(vk) << "\n";
    std::cout << "coercivity_l2\t" << format_full(coer.l2_quotient) << "\n";
    std::cout << "coercivity_h1h1\t" << format_full(coer.h1h1_quotient) << "\n";
    return 0;
}

int cmd_approx(double epsilon, double omega0, double t_eval, int n, double L,
               double amplitude, double s0, const std::string& out_dir) {
    AbcdParams params;
    BottomSpec bottom;
    bottom.epsilon = epsilon;
    bottom.amplitude = amplitude;
    bottom.s0 = s0;
    const GridSpec grid = make_grid(n, L);
    CorrectionEngine engine(params, bottom, grid, omega0);
    EffectiveTrajectory traj = integrate_effective_ode(engine, omega0, t_eval);
    const double w = traj.omega_series.back();
    const double rho = traj.rho_series.back();
    ApproxState state = build_approx_state(engine, t_eval, w, rho);
    ResidualReport res2 = residual_R_sharp(engine, t_eval, w, rho, 2, 5.0, 0.0, true);
    ResidualReport res1 = residual_R_sharp(engine, t_eval, w, rho, 1);

    std::filesystem::create_directories(out_dir);
    write_pair_binary(out_dir + "/W_sharp", state.W_sharp);
    TextTable traj_table;
    traj_table.columns = {"t", "omega", "rho", "f1", "f2"};
    for (size_t i = 0; i < traj.times.size(); ++i)
        traj_table.add_row({traj.times[i], traj.omega_series[i], traj.rho_series[i],
                            traj.f1_series[i], traj.f2_series[i]});
    traj_table.write(out_dir + "/effective_ode.tsv");
    std::ofstream rep(out_dir + "/residual_report.txt");
    rep << "t\t" << format_full(t_eval) << "\nomega\t" << format_full(w) << "\nrho\t"
        << format_full(rho) << "\nf1\t" << format_full(state.f1) << "\nf2\t"
        << format_full(state.f2) << "\nresidual_h2h2_order2\t" << format_full(res2.h2h2)
        << "\nresidual_h2h2_order1\t" << format_full(res1.h2h2) << "\nrichardson_check\t"
        << format_full(res2.richardson_check) << "\n";
    std::cout << "approx: omega(t)=" << w << " rho(t)=" << rho << " |R#|_H2xH2=" << res2.h2h2
              << " (order1: " << res1.h2h2 << ")\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"wavelab: abcd Boussinesq solitary waves over a slowly varying bottom"};
    app.require_subcommand(1);

    // soliton
    auto* soliton = app.add_subcommand("soliton", "build a solitary-wave profile");
    double alpha = 0.0, omega = 0.0, a = -1.0, c = -1.0, L = 60.0;
    int n = 1024;
    std::string branch = "plus", out = "soliton_out";
    soliton->add_option("--alpha", alpha, "Chen amplitude (a=c=-1)");
    soliton->add_option("--omega", omega, "speed in (0, omega*)");
    soliton->add_option("--branch", branch, "plus|minus|numeric");
    soliton->add_option("--a", a, "dispersion constant a");
    soliton->add_option("--c", c, "dispersion constant c");
    soliton->add_option("--grid-n", n, "grid points (power of two)");
    soliton->add_option("--grid-L", L, "half length");
    soliton->add_option("--out", out, "output path prefix");

    // spectrum
    auto* spectrum = app.add_subcommand("spectrum", "linearized-operator spectrum report");
    double s_alpha = -1.0, s_omega = 0.0;
    int s_count = 6, s_n = 1024;
    double s_L = 60.0;
    spectrum->add_option("--alpha", s_alpha, "Chen amplitude");
    spectrum->add_option("--omega", s_omega, "speed (used when alpha == 0)");
    spectrum->add_option("--count", s_count, "eigenvalues to report");
    spectrum->add_option("--grid-n", s_n, "grid points");
    spectrum->add_option("--grid-L", s_L, "half length");

    // approx
    auto* approx = app.add_subcommand("approx", "build W# and evaluate the residual");
    double a_eps = 0.1, a_w0 = 0.5, a_t = 0.0, a_amp = 0.25, a_s0 = 0.3, a_L = 60.0;
    int a_n = 512;
    std::string a_out = "approx_out";
    approx->add_option("--epsilon", a_eps, "bottom slowness parameter");
    approx->add_option("--omega0", a_w0, "incoming speed");
    approx->add_option("--t", a_t, "evaluation time");
    approx->add_option("--amplitude", a_amp, "bottom amplitude");
    approx->add_option("--s0", a_s0, "bottom temporal center");
    approx->add_option("--grid-n", a_n, "grid points");
    approx->add_option("--grid-L", a_L, "half length");
    approx->add_option("--out", a_out, "output directory");

    // config-driven subcommands
    std::string cfg_path, out_dir_override;
    for (const char* name : {"evolve", "interact", "sweep"}) {
        auto* sub = app.add_subcommand(
            name, std::string(name) == "evolve"
                      ? "time-evolve a configured initial state"
                      : (std::string(name) == "interact" ? "evolve + track end to end"
                                                         : "run the configured sweep scenario"));
        sub->add_option("--config", cfg_path, "scenario config file")->required();
        sub->add_option("--out-dir", out_dir_override, "override output directory");
    }

    CLI11_PARSE(app, argc, argv);

    try {
        if (soliton->parsed())
            return cmd_soliton(alpha, omega, branch, a, c, n, L, out);
        if (spectrum->parsed()) return cmd_spectrum(s_alpha, s_omega, s_count, s_n, s_L);
        if (approx->parsed())
            return cmd_approx(a_eps, a_w0, a_t, a_n, a_L, a_amp, a_s0, a_out);

        ScenarioConfig cfg = load_scenario(cfg_path);
        if (!out_dir_override.empty()) cfg.out_dir = out_dir_override;
        if (app.get_subcommand("evolve")->parsed()) {
            // evolve: run the configured evolution and dump trajectory + diagnostics;
            // initial data from seed_path when given, else the omega0 soliton
            FieldPair initial = cfg.seed_path.empty()
                                    ? profile_at_omega(cfg.params, cfg.omega0, Branch::Plus,
                                                       cfg.grid)
                                          .as_pair()
                                    : read_pair_binary(cfg.seed_path);
            Trajectory traj = run(initial, cfg.evolve, cfg.params, cfg.bottom);
            std::filesystem::create_directories(cfg.out_dir);
            TextTable table;
            table.columns = {"t", "H", "H_h", "P", "dHh_dt_analytic", "dP_dt_analytic",
                             "mass_eta", "mass_u"};
            for (size_t i = 0; i < traj.rows.size(); ++i) {
                const auto& row = traj.rows[i];
                table.add_row({row.t, row.H, row.H_h, row.P, row.dHh_dt_analytic,
                               row.dP_dt_analytic, integrate(traj.snapshots[i].eta),
                               integrate(traj.snapshots[i].u)});
            }
            table.write(cfg.out_dir + "/diagnostics.tsv");
            char buf[64];
            for (size_t i = 0; i < traj.snapshots.size(); ++i) {
                std::snprintf(buf, sizeof(buf), "/snapshot_%05zu", i);
                write_pair_binary(cfg.out_dir + buf, traj.snapshots[i]);
            }
            std::cout << "evolve: " << traj.snapshots.size() << " snapshots -> " << cfg.out_dir
                      << "\n";
            return 0;
        }
        if (app.get_subcommand("interact")->parsed()) {
            if (cfg.kind != "interaction" && cfg.kind != "exit-stability") cfg.kind = "interaction";
            return run_scenario(cfg);
        }
        // sweep
        if (cfg.kind != "approx-sweep" && cfg.kind != "exit-stability") cfg.kind = "approx-sweep";
        return run_scenario(cfg);
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
}
