#include "wavelab/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace wavelab {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), ::tolower);
    return s;
}

}  // namespace

IniFile IniFile::parse_string(const std::string& text) {
    IniFile ini;
    std::istringstream in(text);
    std::string line, section;
    while (std::getline(in, line)) {
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            const auto close = line.find(']');
            if (close == std::string::npos)
                throw std::runtime_error("config: unterminated section header: " + line);
            section = lower(trim(line.substr(1, close - 1)));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config: expected key = value, got: " + line);
        const std::string key = lower(trim(line.substr(0, eq)));
        const std::string val = trim(line.substr(eq + 1));
        ini.kv_[section + "." + key] = val;
    }
    return ini;
}

IniFile IniFile::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_string(ss.str());
}

bool IniFile::has(const std::string& key) const { return kv_.count(lower(key)) > 0; }

std::string IniFile::get_string(const std::string& key, const std::string& fallback) const {
    auto it = kv_.find(lower(key));
    return it == kv_.end() ? fallback : it->second;
}

double IniFile::get_double(const std::string& key, double fallback) const {
    auto it = kv_.find(lower(key));
    if (it == kv_.end()) return fallback;
    try {
        return std::stod(it->second);
    } catch (...) {
        throw std::runtime_error("config: bad numeric value for " + key + ": " + it->second);
    }
}

int IniFile::get_int(const std::string& key, int fallback) const {
    auto it = kv_.find(lower(key));
    if (it == kv_.end()) return fallback;
    try {
        return std::stoi(it->second);
    } catch (...) {
        throw std::runtime_error("config: bad integer value for " + key + ": " + it->second);
    }
}

bool IniFile::get_bool(const std::string& key, bool fallback) const {
    auto it = kv_.find(lower(key));
    if (it == kv_.end()) return fallback;
    const std::string v = lower(it->second);
    if (v == "true" || v == "on" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "off" || v == "0" || v == "no") return false;
    throw std::runtime_error("config: bad boolean for " + key + ": " + it->second);
}

std::vector<double> IniFile::get_list(const std::string& key) const {
    std::vector<double> out;
    auto it = kv_.find(lower(key));
    if (it == kv_.end()) return out;
    std::string s = it->second;
    std::replace(s.begin(), s.end(), ',', ' ');
    std::istringstream in(s);
    double x;
    while (in >> x) out.push_back(x);
    return out;
}

ScenarioConfig scenario_from_ini(const IniFile& ini) {
    ScenarioConfig cfg;
    if (ini.has("params.theta")) {
        cfg.params = params_from_theta(ini.get_double("params.theta", 0.0),
                                       ini.get_double("params.lambda", 1.0),
                                       ini.get_double("params.mu", 1.0));
    } else {
        cfg.params.a = ini.get_double("params.a", -1.0);
        cfg.params.b = ini.get_double("params.b", 1.0);
        cfg.params.c = ini.get_double("params.c", -1.0);
        cfg.params.d = ini.get_double("params.d", 1.0);
    }
    cfg.params.a1 = ini.get_double("params.a1", 1.0 / 3.0);
    cfg.params.c1 = ini.get_double("params.c1", 1.0);

    cfg.bottom.kind = BottomSpec::kind_from_string(ini.get_string("bottom.kind", "gaussian"));
    cfg.bottom.epsilon = ini.get_double("bottom.epsilon", 0.1);
    cfg.bottom.amplitude = ini.get_double("bottom.amplitude", 0.25);
    cfg.bottom.k0 = ini.get_double("bottom.k0", 1.0);
    cfg.bottom.l0 = ini.get_double("bottom.l0", 1.0);
    cfg.bottom.s0 = ini.get_double("bottom.s0", 0.0);
    cfg.bottom.y0 = ini.get_double("bottom.y0", 0.0);

    cfg.grid = GridSpec(ini.get_int("grid.n", 1024), ini.get_double("grid.half_length", 60.0));

    cfg.evolve.dt = ini.get_double("evolve.dt", 0.0);
    cfg.evolve.t_start = ini.get_double("evolve.t_start", 0.0);
    cfg.evolve.t_end = ini.get_double("evolve.t_end", 50.0);
    cfg.evolve.dealias = ini.get_bool("evolve.dealias", true);
    cfg.evolve.output_stride = ini.get_int("evolve.output_stride", 0);
    cfg.evolve.stepper = lower(ini.get_string("evolve.stepper", "rk4")) == "splitstep"
                             ? Stepper::SplitStep
                             : Stepper::Rk4;

    cfg.kind = lower(ini.get_string("scenario.kind", "soliton-validate"));
    cfg.epsilon_list = ini.get_list("scenario.epsilon_list");
    std::sort(cfg.epsilon_list.rbegin(), cfg.epsilon_list.rend());
    cfg.omega0 = ini.get_double("scenario.omega0", 0.5);
    cfg.out_dir = ini.get_string("scenario.out_dir", "out");
    cfg.seed_path = ini.get_string("scenario.seed_path", "");
    cfg.post_window = ini.get_double("scenario.post_window", 0.0);
    cfg.exit_weighted_pairing = ini.get_bool("scenario.exit_weighted_pairing", false);
    return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
    return scenario_from_ini(IniFile::parse_file(path));
}

SweepReport fit_scaling(const std::vector<double>& epsilons,
                        const std::vector<double>& values, double window_lo,
                        double window_hi) {
    if (epsilons.size() != values.size())
        throw std::invalid_argument("fit_scaling: length mismatch");
    if (epsilons.size() < 3)
        throw std::invalid_argument("fit_scaling: need at least 3 epsilon points");
    SweepReport rep;
    rep.epsilons = epsilons;
    rep.values = values;
    rep.window_lo = window_lo;
    rep.window_hi = window_hi;

    const size_t m = epsilons.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < m; ++i) {
        if (!(values[i] > 0.0) || !(epsilons[i] > 0.0))
            throw std::invalid_argument("fit_scaling: values and epsilons must be positive");
        const double x = std::log(epsilons[i]);
        const double y = std::log(values[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double denom = m * sxx - sx * sx;
    rep.exponent = (m * sxy - sx * sy) / denom;
    const double intercept = (sy - rep.exponent * sx) / m;
    double rss = 0.0;
    for (size_t i = 0; i < m; ++i) {
        const double pred = intercept + rep.exponent * std::log(epsilons[i]);
        const double d = std::log(values[i]) - pred;
        rss += d * d;
    }
    rep.lsq_residual = std::sqrt(rss / m);
    rep.pass = rep.exponent >= window_lo && rep.exponent <= window_hi;
    return rep;
}

}  // namespace wavelab
