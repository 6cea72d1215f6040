#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>

#include "CLI11.hpp"
#include "metascope/coding.hpp"
#include "metascope/config.hpp"
#include "metascope/csvio.hpp"
#include "metascope/doa.hpp"
#include "metascope/field.hpp"
#include "metascope/nearfield.hpp"
#include "metascope/response.hpp"

namespace fs = std::filesystem;
using namespace metascope;

static const double deg = M_PI / 180.0;

static std::string fmt(const char* f, double v) {
    char buf[64];
    snprintf(buf, sizeof buf, f, v);
    return buf;
}

static void run_oam(const ScenarioConfig& cfg, const MetaAtomResponse& resp) {
    fs::path dir(cfg.out_dir);
    for (int l : cfg.oam.modes) {
        std::string tag = l < 0 ? "lm" + std::to_string(-l) : "l" + std::to_string(l);
        BeamSpec spec;
        spec.kind = BeamSpec::OAM;
        spec.oam_mode = l;
        CodingMatrix coding = synthesize(cfg.geometry, cfg.freq, spec);
        atomic_write((dir / ("coding_oam_" + tag + ".txt")).string(), coding_to_bitmap(coding));

        auto pat = far_field(cfg.geometry, cfg.freq, coding, resp, cfg.feed, cfg.grid);
        atomic_write((dir / ("farfield_oam_" + tag + ".csv")).string(), pattern_to_csv(pat));

        auto plane = sample_near_field(cfg.geometry, cfg.freq, coding, resp, cfg.feed,
                                       default_plane(cfg.geometry, cfg.freq));
        atomic_write((dir / ("nearfield_oam_" + tag + ".csv")).string(), plane_to_csv(plane));

        auto ms = oam_mode_spectrum(pat, intensity_ring_row(pat), 5);
        std::string csv = "mode,fraction\n";
        for (int k = -ms.l_max; k <= ms.l_max; ++k)
            csv += std::to_string(k) + "," + fmt("%.10g", ms.fraction[k + ms.l_max]) + "\n";
        atomic_write((dir / ("modespec_oam_" + tag + ".csv")).string(), csv);
    }
}

static void run_scan(const ScenarioConfig& cfg, const MetaAtomResponse& resp) {
    fs::path dir(cfg.out_dir);
    std::string summary = "theta_preset_deg,peak_theta_deg,peak_phi_deg,gain_dbi,sll_db\n";
    for (double th : cfg.scan.theta_deg) {
        std::string tag = fmt("%g", th);
        BeamSpec spec;
        spec.kind = BeamSpec::Pencil;
        spec.steer = {th * deg, cfg.scan.phi_deg * deg};
        CodingMatrix coding = synthesize(cfg.geometry, cfg.freq, spec);
        atomic_write((dir / ("coding_scan_t" + tag + ".txt")).string(), coding_to_bitmap(coding));

        auto pat = far_field(cfg.geometry, cfg.freq, coding, resp, cfg.feed, cfg.grid);
        atomic_write((dir / ("farfield_scan_t" + tag + ".csv")).string(), pattern_to_csv(pat));

        auto met = directivity_gain(pat);
        double gain = realized_gain_dbi(cfg.geometry, cfg.freq, coding, resp, cfg.feed, met);
        auto sll = sidelobe_level(pat, met.peak_itheta, met.peak_iphi);
        summary += fmt("%.10g", th) + "," + fmt("%.10g", met.peak_theta) + "," +
                   fmt("%.10g", met.peak_phi) + "," + fmt("%.10g", gain) + "," +
                   fmt("%.10g", sll ? *sll : std::nan("")) + "\n";
    }
    atomic_write((dir / "summary.csv").string(), summary);

    if (!cfg.sweep_hz.empty()) {
        // one broadside coding fixed at the carrier, evaluated across the band
        BeamSpec spec;
        spec.kind = BeamSpec::Pencil;
        CodingMatrix coding = synthesize(cfg.geometry, cfg.freq, spec);
        std::string csv = "freq_hz,gain_dbi\n";
        for (double f : cfg.sweep_hz) {
            FrequencySpec fe{f};
            auto pat = far_field(cfg.geometry, fe, coding, resp, cfg.feed, cfg.grid);
            auto met = directivity_gain(pat);
            double gain = realized_gain_dbi(cfg.geometry, fe, coding, resp, cfg.feed, met);
            csv += fmt("%.10g", f) + "," + fmt("%.10g", gain) + "\n";
        }
        atomic_write((dir / "gain_vs_freq.csv").string(), csv);
    }
}

static void run_df(const ScenarioConfig& cfg) {
    fs::path dir(cfg.out_dir);
    auto res = df_experiment(cfg.geometry, cfg.freq, cfg.df.preset_deg, cfg.df.trials,
                             cfg.df.snr_db, cfg.seed);
    atomic_write((dir / "df_trials.csv").string(), df_trials_to_csv(res));
    atomic_write((dir / "df_rmse.csv").string(), df_rmse_to_csv(res));
}

int main(int argc, char** argv) {
    CLI::App app{"1-bit reflectarray toolkit: vortex beams, beam scanning, direction finding"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    std::uint64_t seed = 0;
    bool noiseless = false;

    const char* names[3] = {"oam", "scan", "df"};
    const char* descs[3] = {"multi-mode vortex beam patterns and near-field planes",
                            "pencil-beam presets with gain summary and frequency sweep",
                            "time-modulated direction-finding trials"};
    CLI::App* subs[3];
    CLI::Option *out_opt[3], *seed_opt[3];
    for (int i = 0; i < 3; ++i) {
        subs[i] = app.add_subcommand(names[i], descs[i]);
        subs[i]->add_option("--config", config_path, "JSON config or a manifest from a past run")
            ->required();
        out_opt[i] = subs[i]->add_option("--out", out_dir, "output directory override");
        seed_opt[i] = subs[i]->add_option("--seed", seed, "seed override");
        subs[i]->add_flag("--noiseless", noiseless, "drop receiver noise (df only)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 1;
    }

    int which = 0;
    for (int i = 0; i < 3; ++i)
        if (subs[i]->parsed()) which = i;

    ScenarioConfig cfg;
    try {
        cfg = load_config(config_path);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }

    TaskKind expect[3] = {TaskKind::Oam, TaskKind::Scan, TaskKind::Df};
    if (cfg.kind != expect[which]) {
        std::fprintf(stderr, "error: the config describes a different task than \"%s\"\n",
                     names[which]);
        return 1;
    }

    if (out_opt[which]->count()) cfg.out_dir = out_dir;
    if (seed_opt[which]->count()) cfg.seed = seed;
    if (noiseless) cfg.df.snr_db = std::nullopt;

    try {
        MetaAtomResponse resp =
            cfg.response_csv.empty() ? builtin_response() : load_response_csv(cfg.response_csv);
        validate(resp);
        fs::create_directories(cfg.out_dir);
        switch (cfg.kind) {
            case TaskKind::Oam: run_oam(cfg, resp); break;
            case TaskKind::Scan: run_scan(cfg, resp); break;
            case TaskKind::Df: run_df(cfg); break;
        }
        // written last: its presence marks a completed run
        atomic_write((fs::path(cfg.out_dir) / "manifest.json").string(),
                     manifest_json(cfg, names[which]));
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
