#pragma once

#include <map>
#include <string>
#include <vector>

#include "wavelab/evolve.hpp"
#include "wavelab/grid.hpp"
#include "wavelab/model.hpp"

namespace wavelab {

// Minimal INI-style reader: [section] headers, key = value lines,
// '#' or ';' comments. Lookup is "section.key".
class IniFile {
  public:
    static IniFile parse_file(const std::string& path);
    static IniFile parse_string(const std::string& text);

    bool has(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback = "") const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<double> get_list(const std::string& key) const;

  private:
    std::map<std::string, std::string> kv_;
};

struct ScenarioConfig {
    AbcdParams params;
    BottomSpec bottom;
    GridSpec grid{1024, 60.0};
    EvolveConfig evolve;
    std::string kind = "soliton-validate";
    std::vector<double> epsilon_list;
    double omega0 = 0.5;
    std::string out_dir = "out";
    std::string seed_path;
    double post_window = 0.0;        // 0 -> chosen by the scenario
    bool exit_weighted_pairing = false;  // (1-d^2)-weighted shift fit past T_eps
};

ScenarioConfig load_scenario(const std::string& path);
ScenarioConfig scenario_from_ini(const IniFile& ini);

struct SweepReport {
    std::vector<double> epsilons;
    std::vector<double> values;
    double exponent = 0.0;
    double lsq_residual = 0.0;
    double window_lo = 0.0;
    double window_hi = 0.0;
    bool pass = false;
};

// least-squares slope of log(value) against log(epsilon); needs >= 3 points
SweepReport fit_scaling(const std::vector<double>& epsilons,
                        const std::vector<double>& values, double window_lo,
                        double window_hi);

}  // namespace wavelab
