#include "metascope/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>

#include "json.hpp"
#include "metascope/version.hpp"

namespace metascope {

using json = nlohmann::ordered_json;

[[noreturn]] static void bad(const std::string& msg) { throw ConfigError(msg); }

static void check_keys(const json& obj, const std::string& prefix,
                       std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* a : allowed)
            if (it.key() == a) {
                ok = true;
                break;
            }
        if (!ok) bad("unrecognized key \"" + prefix + it.key() + "\"");
    }
}

static const json& section(const json& j, const char* key, const std::string& path) {
    const json& s = j.at(key);
    if (!s.is_object()) bad(path + " must be an object");
    return s;
}

static double get_num(const json& j, const std::string& path) {
    if (!j.is_number()) bad(path + " must be a number");
    return j.get<double>();
}

static int get_int(const json& j, const std::string& path) {
    if (!j.is_number_integer() && !j.is_number_unsigned()) bad(path + " must be an integer");
    return j.get<int>();
}

static std::vector<double> get_num_list(const json& j, const std::string& path) {
    if (!j.is_array()) bad(path + " must be an array of numbers");
    std::vector<double> out;
    for (const auto& e : j) {
        if (!e.is_number()) bad(path + " must be an array of numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

static void apply_grid_steps(ScenarioConfig& c, double theta_step, double phi_step) {
    if (!(theta_step > 0.0) || !(phi_step > 0.0)) bad("output steps must be positive");
    long nt = std::lround(90.0 / theta_step);
    if (nt < 1 || std::fabs(nt * theta_step - 90.0) > 1e-9)
        bad("output.theta_step_deg must divide 90");
    long np = std::lround(360.0 / phi_step);
    if (np < 1 || std::fabs(np * phi_step - 360.0) > 1e-9)
        bad("output.phi_step_deg must divide 360");
    c.grid = {0.0, theta_step, int(nt) + 1, 0.0, phi_step, int(np)};
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) bad("cannot open config file: " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const std::exception& e) {
        bad(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) bad("config root must be an object");

    // a manifest from a previous run carries the resolved config inside it
    if (j.contains("metascope_version")) {
        check_keys(j, "", {"metascope_version", "command", "config"});
        if (!j.contains("config") || !j["config"].is_object())
            bad("manifest lacks a config object");
        j = j["config"];
    }

    check_keys(j, "", {"geometry", "frequency", "feed", "response", "output", "seed",
                       "oam", "scan", "df"});

    ScenarioConfig c;

    if (j.contains("geometry")) {
        const json& s = section(j, "geometry", "geometry");
        check_keys(s, "geometry.", {"rows", "cols", "pitch_m", "focal_m"});
        if (s.contains("rows")) c.geometry.rows = get_int(s["rows"], "geometry.rows");
        if (s.contains("cols")) c.geometry.cols = get_int(s["cols"], "geometry.cols");
        if (s.contains("pitch_m")) c.geometry.pitch = get_num(s["pitch_m"], "geometry.pitch_m");
        if (s.contains("focal_m")) c.geometry.focal = get_num(s["focal_m"], "geometry.focal_m");
        try {
            validate(c.geometry);
        } catch (const std::exception& e) {
            bad(e.what());
        }
    }

    if (j.contains("frequency")) {
        const json& s = section(j, "frequency", "frequency");
        check_keys(s, "frequency.", {"carrier_hz", "sweep_hz"});
        if (s.contains("carrier_hz")) {
            c.freq.f_c = get_num(s["carrier_hz"], "frequency.carrier_hz");
            if (!(c.freq.f_c > 0.0)) bad("frequency.carrier_hz must be positive");
        }
        if (s.contains("sweep_hz")) {
            c.sweep_hz = get_num_list(s["sweep_hz"], "frequency.sweep_hz");
            for (double f : c.sweep_hz)
                if (!(f > 0.0)) bad("frequency.sweep_hz entries must be positive");
        }
    }

    if (j.contains("feed")) {
        const json& s = section(j, "feed", "feed");
        check_keys(s, "feed.", {"gain_dbi"});
        if (s.contains("gain_dbi")) c.feed.gain_dbi = get_num(s["gain_dbi"], "feed.gain_dbi");
    }

    if (j.contains("response")) {
        const json& s = section(j, "response", "response");
        check_keys(s, "response.", {"table_csv"});
        if (s.contains("table_csv")) {
            if (!s["table_csv"].is_string()) bad("response.table_csv must be a string");
            c.response_csv = s["table_csv"].get<std::string>();
        }
    }

    double theta_step = 0.25, phi_step = 1.0;
    if (j.contains("output")) {
        const json& s = section(j, "output", "output");
        check_keys(s, "output.", {"dir", "theta_step_deg", "phi_step_deg"});
        if (s.contains("dir")) {
            if (!s["dir"].is_string()) bad("output.dir must be a string");
            c.out_dir = s["dir"].get<std::string>();
        }
        if (s.contains("theta_step_deg"))
            theta_step = get_num(s["theta_step_deg"], "output.theta_step_deg");
        if (s.contains("phi_step_deg"))
            phi_step = get_num(s["phi_step_deg"], "output.phi_step_deg");
    }
    apply_grid_steps(c, theta_step, phi_step);

    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned()) bad("seed must be a non-negative integer");
        c.seed = j["seed"].get<std::uint64_t>();
    }

    int tasks = int(j.contains("oam")) + int(j.contains("scan")) + int(j.contains("df"));
    if (tasks != 1) bad("config must contain exactly one of oam, scan, df");

    if (j.contains("oam")) {
        c.kind = TaskKind::Oam;
        const json& s = section(j, "oam", "oam");
        check_keys(s, "oam.", {"modes"});
        if (s.contains("modes")) {
            if (!s["modes"].is_array()) bad("oam.modes must be an array of integers");
            c.oam.modes.clear();
            for (const auto& e : s["modes"]) c.oam.modes.push_back(get_int(e, "oam.modes"));
        } else {
            c.oam.modes = {0, 1, 2, 3};
        }
        if (c.oam.modes.empty()) bad("oam.modes must not be empty");
    } else if (j.contains("scan")) {
        c.kind = TaskKind::Scan;
        const json& s = section(j, "scan", "scan");
        check_keys(s, "scan.", {"theta_deg", "phi_deg"});
        if (s.contains("theta_deg"))
            c.scan.theta_deg = get_num_list(s["theta_deg"], "scan.theta_deg");
        else
            c.scan.theta_deg = {0, 15, 30, 45, 60};
        if (c.scan.theta_deg.empty()) bad("scan.theta_deg must not be empty");
        if (s.contains("phi_deg")) c.scan.phi_deg = get_num(s["phi_deg"], "scan.phi_deg");
    } else {
        c.kind = TaskKind::Df;
        const json& s = section(j, "df", "df");
        check_keys(s, "df.", {"preset_deg", "trials", "snr_db"});
        if (s.contains("preset_deg"))
            c.df.preset_deg = get_num_list(s["preset_deg"], "df.preset_deg");
        else
            for (int a = -45; a <= 45; a += 5) c.df.preset_deg.push_back(a);
        if (c.df.preset_deg.empty()) bad("df.preset_deg must not be empty");
        if (s.contains("trials")) {
            c.df.trials = get_int(s["trials"], "df.trials");
            if (c.df.trials < 1) bad("df.trials must be >= 1");
        }
        if (s.contains("snr_db")) {
            if (s["snr_db"].is_null())
                c.df.snr_db = std::nullopt;
            else
                c.df.snr_db = get_num(s["snr_db"], "df.snr_db");
        } else {
            c.df.snr_db = 20.0;
        }
    }
    return c;
}

std::string config_to_json(const ScenarioConfig& c) {
    json j;
    j["geometry"] = {{"rows", c.geometry.rows},
                     {"cols", c.geometry.cols},
                     {"pitch_m", c.geometry.pitch},
                     {"focal_m", c.geometry.focal}};
    j["frequency"] = {{"carrier_hz", c.freq.f_c}};
    if (!c.sweep_hz.empty()) j["frequency"]["sweep_hz"] = c.sweep_hz;
    j["feed"] = {{"gain_dbi", c.feed.gain_dbi}};
    if (!c.response_csv.empty()) j["response"] = {{"table_csv", c.response_csv}};
    // out_dir is where a run landed, not what it computed; reruns may relocate
    j["output"] = {{"theta_step_deg", c.grid.theta_step}, {"phi_step_deg", c.grid.phi_step}};
    j["seed"] = c.seed;
    switch (c.kind) {
        case TaskKind::Oam:
            j["oam"] = {{"modes", c.oam.modes}};
            break;
        case TaskKind::Scan:
            j["scan"] = {{"theta_deg", c.scan.theta_deg}, {"phi_deg", c.scan.phi_deg}};
            break;
        case TaskKind::Df:
            j["df"] = {{"preset_deg", c.df.preset_deg}, {"trials", c.df.trials}};
            if (c.df.snr_db)
                j["df"]["snr_db"] = *c.df.snr_db;
            else
                j["df"]["snr_db"] = nullptr;
            break;
    }
    return j.dump(2) + "\n";
}

std::string manifest_json(const ScenarioConfig& c, const std::string& command) {
    json m;
    m["metascope_version"] = METASCOPE_VERSION;
    m["command"] = command;
    m["config"] = json::parse(config_to_json(c));
    return m.dump(2) + "\n";
}

}  // namespace metascope
