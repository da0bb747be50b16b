#include "rissim/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace rissim {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return d;
    } catch (const std::exception&) {
        throw ConfigError("config: bad numeric value for " + key + ": '" + v + "'");
    }
}

int parse_int(const std::string& key, const std::string& v) {
    const double d = parse_double(key, v);
    if (d != std::floor(d)) throw ConfigError("config: " + key + " must be an integer");
    return static_cast<int>(d);
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("config: bad boolean for " + key + ": '" + v + "'");
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(parse_double(key, item));
    }
    if (out.empty()) throw ConfigError("config: empty list for " + key);
    return out;
}

Vec3 parse_vec3(const std::string& key, const std::string& v) {
    const std::vector<double> list = parse_list(key, v);
    if (list.size() != 3) throw ConfigError("config: " + key + " needs three components");
    return {list[0], list[1], list[2]};
}

}  // namespace

ScenarioConfig preset_config(const std::string& name) {
    ScenarioConfig cfg;  // defaults already hold the reference setup
    cfg.id = name;
    if (name == "default" || name == "fig9") {
        return cfg;
    }
    if (name == "fig5") {
        // M_s sweep happens across preset_sweep variants
        return cfg;
    }
    if (name == "fig6") {
        cfg.rho_dbm = 10.0;
        cfg.rho_grid = {0.0};
        cfg.rho_tradeoff = 0.0;
        // UE moved out to 10 m at the same bearing
        cfg.ue_pos = {8.2567, -4.7699, 0.0};
        return cfg;
    }
    if (name == "fig12") {
        cfg.rho_dbm = 0.0;
        cfg.tau1 = 20;
        cfg.tau2 = 20;
        return cfg;
    }
    if (name == "fig13") {
        cfg.n_blocks = 10;
        cfg.rho_grid = {0.0};
        cfg.rho_tradeoff = 0.0;
        cfg.n_trials = 50;
        return cfg;
    }
    throw ConfigError("unknown preset: " + name);
}

SweepPlan preset_sweep(const std::string& name) {
    SweepPlan plan;
    if (name == "default" || name == "fig9") {
        plan.scenarios = {preset_config(name)};
        plan.algorithms = {Algorithm::s_sdr, Algorithm::s_mbs, Algorithm::oracle};
        return plan;
    }
    if (name == "fig5") {
        for (int ms : {4, 6}) {
            ScenarioConfig cfg = preset_config(name);
            cfg.ms_y = cfg.ms_z = ms;
            cfg.id = "fig5_ms" + std::to_string(ms * ms);
            plan.scenarios.push_back(cfg);
        }
        plan.algorithms = {Algorithm::s_sdr};
        return plan;
    }
    if (name == "fig6") {
        for (int tau1 : {1, 5, 10, 20, 50}) {
            ScenarioConfig cfg = preset_config(name);
            cfg.tau1 = tau1;
            cfg.tau2 = 100 - tau1;
            cfg.id = "fig6_tau1_" + std::to_string(tau1);
            plan.scenarios.push_back(cfg);
        }
        plan.algorithms = {Algorithm::s_sdr};
        return plan;
    }
    if (name == "fig12") {
        for (double d : {0.5, 2.0, 5.0, 20.0}) {
            ScenarioConfig cfg = preset_config(name);
            cfg.d_s2s = d;
            std::ostringstream id;
            id << "fig12_ds" << d;
            cfg.id = id.str();
            plan.scenarios.push_back(cfg);
        }
        plan.algorithms = {Algorithm::s_sdr};
        return plan;
    }
    if (name == "fig13") {
        plan.scenarios = {preset_config(name)};
        plan.algorithms = {Algorithm::s_sdr, Algorithm::oracle};
        plan.mobility = true;
        plan.speeds = {1.0, 5.0, 10.0, 20.0};
        return plan;
    }
    throw ConfigError("unknown preset: " + name);
}

std::map<std::string, std::string> parse_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file: " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: line " + std::to_string(lineno) + " is not key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("config: empty key on line " + std::to_string(lineno));
        kv[key] = value;
    }
    return kv;
}

void apply_config_key(ScenarioConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "id") cfg.id = value;
    else if (key == "bs_pos") cfg.bs_pos = parse_vec3(key, value);
    else if (key == "ris_pos") cfg.ris_pos = parse_vec3(key, value);
    else if (key == "d_s2s") cfg.d_s2s = parse_double(key, value);
    else if (key == "ue_pos") cfg.ue_pos = parse_vec3(key, value);
    else if (key == "ue_random") cfg.ue_random = parse_bool(key, value);
    else if (key == "ue_dist_min") cfg.ue_dist_min = parse_double(key, value);
    else if (key == "ue_dist_max") cfg.ue_dist_max = parse_double(key, value);
    else if (key == "ue_az_min_deg") cfg.ue_az_min_deg = parse_double(key, value);
    else if (key == "ue_az_max_deg") cfg.ue_az_max_deg = parse_double(key, value);
    else if (key == "n_bs") cfg.n_bs = parse_int(key, value);
    else if (key == "n_ue") cfg.n_ue = parse_int(key, value);
    else if (key == "m1_y") cfg.m1_y = parse_int(key, value);
    else if (key == "m1_z") cfg.m1_z = parse_int(key, value);
    else if (key == "ms_y") cfg.ms_y = parse_int(key, value);
    else if (key == "ms_z") cfg.ms_z = parse_int(key, value);
    else if (key == "delta_tau1") cfg.delta_tau1 = parse_int(key, value);
    else if (key == "tau1") cfg.tau1 = parse_int(key, value);
    else if (key == "tau2") cfg.tau2 = parse_int(key, value);
    else if (key == "rho_dbm") cfg.rho_dbm = parse_double(key, value);
    else if (key == "sigma0_dbm") cfg.sigma0_dbm = parse_double(key, value);
    else if (key == "pl0_db") cfg.pathloss.pl0_db = parse_double(key, value);
    else if (key == "exp_r2b") cfg.pathloss.exp_r2b = parse_double(key, value);
    else if (key == "exp_u2r") cfg.pathloss.exp_u2r = parse_double(key, value);
    else if (key == "exp_r2r") cfg.pathloss.exp_r2r = parse_double(key, value);
    else if (key == "rho_grid") cfg.rho_grid = parse_list(key, value);
    else if (key == "rho_tradeoff") cfg.rho_tradeoff = parse_double(key, value);
    else if (key == "epsilon") cfg.epsilon = parse_double(key, value);
    else if (key == "ecsi") {
        if (value == "perfect") cfg.ecsi = EcsiMethod::perfect;
        else if (value == "ls_pilot") cfg.ecsi = EcsiMethod::ls_pilot;
        else throw ConfigError("config: ecsi must be perfect or ls_pilot");
    }
    else if (key == "l_gr") cfg.l_gr = parse_int(key, value);
    else if (key == "pso_particles") cfg.pso.n_particles = parse_int(key, value);
    else if (key == "pso_iters") cfg.pso.n_iters = parse_int(key, value);
    else if (key == "pso_c1") cfg.pso.c1 = parse_double(key, value);
    else if (key == "pso_c2") cfg.pso.c2 = parse_double(key, value);
    else if (key == "pso_c3") cfg.pso.c3 = parse_double(key, value);
    else if (key == "pso_vmin") cfg.pso.v_min = parse_double(key, value);
    else if (key == "pso_vmax") cfg.pso.v_max = parse_double(key, value);
    else if (key == "pso_hinge") cfg.pso.hinge_penalty = parse_bool(key, value);
    else if (key == "n_trials") cfg.n_trials = parse_int(key, value);
    else if (key == "seed") cfg.seed = static_cast<uint64_t>(parse_double(key, value));
    else if (key == "n_blocks") cfg.n_blocks = parse_int(key, value);
    else if (key == "block_duration_s") cfg.block_duration_s = parse_double(key, value);
    else if (key == "ue_velocity_dir") cfg.ue_velocity_dir = parse_vec3(key, value);
    else throw ConfigError("config: unknown key '" + key + "'");
}

void apply_config(ScenarioConfig& cfg, const std::map<std::string, std::string>& kv) {
    for (const auto& [key, value] : kv) apply_config_key(cfg, key, value);
}

}  // namespace rissim
