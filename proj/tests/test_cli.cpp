#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "metascope/config.hpp"
#include "metascope/csvio.hpp"
#include "metascope/doa.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

using namespace metascope;
namespace fs = std::filesystem;

#ifndef METASCOPE_CLI_PATH
#error "METASCOPE_CLI_PATH must point at the command-line binary"
#endif

struct RunResult {
    int code;
    std::string output;   // stdout and stderr merged
};

static RunResult run_cli(const std::string& args) {
    std::string cmd = std::string(METASCOPE_CLI_PATH) + " " + args + " 2>&1";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::string out;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
    int st = pclose(p);
    return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

static fs::path fresh_dir(const std::string& tag) {
    fs::path d = fs::path("/tmp") / ("metascope_cli_" + tag + "_" + std::to_string(getpid()));
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

static void write_file(const fs::path& p, const std::string& text) {
    std::ofstream f(p);
    f << text;
    REQUIRE(f.good());
}

static std::string read_file(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    REQUIRE(f.good());
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

// coarse output grid keeps the runs quick without changing any code path
static const char* kCoarseOutput = R"("output": {"theta_step_deg": 1.0, "phi_step_deg": 2.0})";

TEST_CASE("pattern csv layout") {
    FarFieldPattern p;
    p.grid = {0.0, 1.0, 3, 0.0, 90.0, 4};
    p.freq_hz = 3.0e9;
    p.field.assign(12, {0.0, 0.0});
    p.field[1 * 4 + 2] = {2.0, 0.0};   // peak
    p.field[0] = {1.0, 0.0};

    std::string csv = pattern_to_csv(p);
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "theta_deg,phi_deg,re,im,mag_db");

    int rows = 0;
    double peak_db = -1e9;
    std::vector<std::string> all;
    while (std::getline(in, line)) {
        all.push_back(line);
        ++rows;
    }
    CHECK(rows == 12);
    // theta-major: second block of four has theta = 1
    CHECK(all[4].substr(0, 2) == "1,");
    // peak row is normalized to 0 dB
    std::istringstream row(all[1 * 4 + 2]);
    std::string tok;
    for (int i = 0; i < 5; ++i) std::getline(row, tok, ',');
    CHECK(std::stod(tok) == doctest::Approx(0.0).epsilon(1e-9));
    (void)peak_db;
}

TEST_CASE("plane csv is y-major") {
    NearFieldPlane pl;
    pl.z = 0.2;
    pl.pitch = 0.01;
    pl.freq_hz = 3.0e9;
    pl.count = 3;
    pl.field.assign(9, {0.0, 0.0});
    pl.field[2 * 3 + 1] = {5.0, -1.0};   // ix = 2, iy = 1

    std::string csv = plane_to_csv(pl);
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "x_m,y_m,re,im");
    std::vector<std::string> all;
    while (std::getline(in, line)) all.push_back(line);
    REQUIRE(all.size() == 9);
    // row index iy*3+ix: the nonzero entry sits at 1*3+2
    std::istringstream row(all[1 * 3 + 2]);
    double x, y, re, im;
    char c;
    row >> x >> c >> y >> c >> re >> c >> im;
    CHECK(x == doctest::Approx(pl.coord(2)));
    CHECK(y == doctest::Approx(pl.coord(1)));
    CHECK(re == doctest::Approx(5.0));
    CHECK(im == doctest::Approx(-1.0));
}

TEST_CASE("trial and summary csv headers") {
    DfResult r;
    r.rows.push_back({-30.0, 180.0, -29.9, 179.5, 0, 42});
    r.preset_deg = {-30.0};
    r.rmse_deg = {0.1};

    std::string t = df_trials_to_csv(r);
    CHECK(t.substr(0, t.find('\n')) ==
          "theta_preset_deg,phi_preset_deg,theta_est_deg,phi_est_deg,trial,seed");
    CHECK(std::count(t.begin(), t.end(), '\n') == 2);

    std::string s = df_rmse_to_csv(r);
    CHECK(s.substr(0, s.find('\n')) == "theta_preset_deg,rmse_deg");
    CHECK(std::count(s.begin(), s.end(), '\n') == 2);
}

TEST_CASE("atomic write replaces the target") {
    auto dir = fresh_dir("atomic");
    auto p = dir / "x.txt";
    atomic_write(p.string(), "first\n");
    CHECK(read_file(p) == "first\n");
    atomic_write(p.string(), "second\n");
    CHECK(read_file(p) == "second\n");
    // no stray temporaries left behind
    int entries = 0;
    for (auto& e : fs::directory_iterator(dir)) {
        (void)e;
        ++entries;
    }
    CHECK(entries == 1);
}

TEST_CASE("config defaults and round trip") {
    auto dir = fresh_dir("cfg");
    auto p = dir / "c.json";
    write_file(p, R"({"oam": {"modes": [2]}})");
    auto c = load_config(p.string());
    CHECK(c.kind == TaskKind::Oam);
    REQUIRE(c.oam.modes.size() == 1);
    CHECK(c.oam.modes[0] == 2);
    CHECK(c.geometry.rows == 20);
    CHECK(c.geometry.pitch == doctest::Approx(0.05));
    CHECK(c.freq.f_c == doctest::Approx(3.0e9));
    CHECK(c.seed == 1);
    CHECK(c.grid.theta_count == 361);
    CHECK(c.grid.phi_count == 360);

    // resolved text survives a reload unchanged
    auto q = dir / "resolved.json";
    write_file(q, config_to_json(c));
    auto c2 = load_config(q.string());
    CHECK(config_to_json(c2) == config_to_json(c));

    // a manifest is accepted wherever a config is
    auto m = dir / "manifest.json";
    write_file(m, manifest_json(c, "oam"));
    auto c3 = load_config(m.string());
    CHECK(config_to_json(c3) == config_to_json(c));
}

TEST_CASE("config rejects what it does not understand") {
    auto dir = fresh_dir("cfgbad");

    auto path_for = [&](const char* name, const std::string& body) {
        auto p = dir / name;
        write_file(p, body);
        return p.string();
    };

    // unknown keys come back with their dotted location
    try {
        load_config(path_for("unk.json",
                             R"({"geometry": {"rows": 20, "frobnicate": 1}, "oam": {"modes": [0]}})"));
        FAIL("expected a parse rejection");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("geometry.frobnicate") != std::string::npos);
    }

    CHECK_THROWS_AS(load_config(path_for("two.json",
                                         R"({"oam": {"modes": [0]}, "scan": {"theta_deg": [0]}})")),
                    ConfigError);
    CHECK_THROWS_AS(load_config(path_for("none.json", R"({"seed": 3})")), ConfigError);
    CHECK_THROWS_AS(load_config(path_for("type.json",
                                         R"({"geometry": {"rows": "x"}, "oam": {"modes": [0]}})")),
                    ConfigError);
    CHECK_THROWS_AS(load_config(path_for("syntax.json", "{not json")), ConfigError);
    CHECK_THROWS_AS(load_config((dir / "missing.json").string()), ConfigError);
}

TEST_CASE("oam run produces the full file set and reruns bit for bit") {
    auto dir = fresh_dir("oamrun");
    auto cfg = dir / "c.json";
    write_file(cfg, std::string(R"({"oam": {"modes": [1, -1]}, )") + kCoarseOutput + "}");

    auto out_a = dir / "a";
    auto r = run_cli("oam --config " + cfg.string() + " --out " + out_a.string());
    CHECK(r.code == 0);

    for (const char* f : {"coding_oam_l1.txt", "farfield_oam_l1.csv", "nearfield_oam_l1.csv",
                          "modespec_oam_l1.csv", "coding_oam_lm1.txt", "farfield_oam_lm1.csv",
                          "nearfield_oam_lm1.csv", "modespec_oam_lm1.csv", "manifest.json"}) {
        INFO(f);
        CHECK(fs::exists(out_a / f));
    }

    auto spec = read_file(out_a / "modespec_oam_l1.csv");
    CHECK(spec.substr(0, spec.find('\n')) == "mode,fraction");

    // rerun from the manifest into a fresh directory: identical bytes
    auto out_b = dir / "b";
    auto r2 = run_cli("oam --config " + (out_a / "manifest.json").string() + " --out " +
                      out_b.string());
    CHECK(r2.code == 0);
    for (auto& e : fs::directory_iterator(out_a)) {
        INFO(e.path().filename().string());
        CHECK(read_file(e.path()) == read_file(out_b / e.path().filename()));
    }
}

TEST_CASE("scan run writes a summary and a sweep") {
    auto dir = fresh_dir("scanrun");
    auto cfg = dir / "c.json";
    write_file(cfg, std::string(R"({"scan": {"theta_deg": [0, 30]}, )") +
                        R"("frequency": {"carrier_hz": 3.0e9, "sweep_hz": [2.95e9, 3.0e9]}, )" +
                        kCoarseOutput + "}");

    auto out = dir / "out";
    auto r = run_cli("scan --config " + cfg.string() + " --out " + out.string());
    CHECK(r.code == 0);

    for (const char* f : {"coding_scan_t0.txt", "farfield_scan_t0.csv", "coding_scan_t30.txt",
                          "farfield_scan_t30.csv", "summary.csv", "gain_vs_freq.csv",
                          "manifest.json"}) {
        INFO(f);
        CHECK(fs::exists(out / f));
    }

    auto summary = read_file(out / "summary.csv");
    CHECK(summary.substr(0, summary.find('\n')) ==
          "theta_preset_deg,peak_theta_deg,peak_phi_deg,gain_dbi,sll_db");
    CHECK(std::count(summary.begin(), summary.end(), '\n') == 3);

    auto sweep = read_file(out / "gain_vs_freq.csv");
    CHECK(sweep.substr(0, sweep.find('\n')) == "freq_hz,gain_dbi");
    CHECK(std::count(sweep.begin(), sweep.end(), '\n') == 3);

    // the coding files are plain bitmaps
    auto bits = read_file(out / "coding_scan_t0.txt");
    auto parsed = coding_from_bitmap(bits);
    CHECK(parsed.rows == 20);
    CHECK(parsed.cols == 20);
}

TEST_CASE("df run is seed-stable and honors the overrides") {
    auto dir = fresh_dir("dfrun");
    auto cfg = dir / "c.json";
    write_file(cfg,
               R"({"df": {"preset_deg": [-20, 10], "trials": 2, "snr_db": 20.0}, "seed": 5})");

    auto out_a = dir / "a";
    auto out_b = dir / "b";
    CHECK(run_cli("df --config " + cfg.string() + " --out " + out_a.string()).code == 0);
    CHECK(run_cli("df --config " + cfg.string() + " --out " + out_b.string()).code == 0);
    for (const char* f : {"df_trials.csv", "df_rmse.csv", "manifest.json"}) {
        INFO(f);
        CHECK(read_file(out_a / f) == read_file(out_b / f));
    }

    auto trials = read_file(out_a / "df_trials.csv");
    CHECK(trials.substr(0, trials.find('\n')) ==
          "theta_preset_deg,phi_preset_deg,theta_est_deg,phi_est_deg,trial,seed");
    CHECK(std::count(trials.begin(), trials.end(), '\n') == 1 + 2 * 2);

    // a different seed moves the estimates
    auto out_c = dir / "c";
    CHECK(run_cli("df --config " + cfg.string() + " --seed 6 --out " + out_c.string()).code == 0);
    CHECK(read_file(out_a / "df_trials.csv") != read_file(out_c / "df_trials.csv"));
    CHECK(read_file(out_c / "manifest.json").find("\"seed\": 6") != std::string::npos);

    // noiseless overrides the configured SNR and is reproducible by definition
    auto out_d = dir / "d";
    CHECK(run_cli("df --config " + cfg.string() + " --noiseless --out " + out_d.string()).code ==
          0);
    CHECK(read_file(out_a / "df_trials.csv") != read_file(out_d / "df_trials.csv"));
}

TEST_CASE("failure modes map to distinct exit codes") {
    auto dir = fresh_dir("fail");

    auto bad = dir / "bad.json";
    write_file(bad, R"({"oam": {"modes": [1]}, "bogus": true})");
    auto r1 = run_cli("oam --config " + bad.string());
    CHECK(r1.code == 1);
    CHECK(r1.output.find("bogus") != std::string::npos);

    CHECK(run_cli("oam --config " + (dir / "nope.json").string()).code == 1);
    CHECK(run_cli("frobnicate --config x.json").code == 1);
    CHECK(run_cli("oam").code == 1);
    CHECK(run_cli("--help").code == 0);

    // valid config, carrier outside the tabulated band: a runtime failure
    auto off = dir / "off.json";
    write_file(off, std::string(R"({"oam": {"modes": [0]}, )") +
                        R"("frequency": {"carrier_hz": 2.0e9}, )" + kCoarseOutput + "}");
    auto r2 = run_cli("oam --config " + off.string() + " --out " + (dir / "o").string());
    CHECK(r2.code == 2);
}
