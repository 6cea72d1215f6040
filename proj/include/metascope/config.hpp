#pragma once
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "metascope/coding.hpp"
#include "metascope/feed.hpp"
#include "metascope/field.hpp"
#include "metascope/geometry.hpp"

namespace metascope {

// malformed or contradictory input; the CLI maps this to exit code 1
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct OamTask {
    std::vector<int> modes;            // one pattern + plane per mode
};

struct ScanTask {
    std::vector<double> theta_deg;     // pencil presets, phi fixed
    double phi_deg = 0.0;
};

struct DfTask {
    std::vector<double> preset_deg;    // signed incidence presets
    int trials = 3;
    std::optional<double> snr_db;      // nullopt = noiseless
};

enum class TaskKind { Oam, Scan, Df };

struct ScenarioConfig {
    ArrayGeometry geometry;
    FrequencySpec freq{3.0e9};
    std::vector<double> sweep_hz;      // optional gain-vs-frequency sweep
    FeedModel feed;
    std::string response_csv;          // empty = builtin table
    GridSpec grid = default_grid();
    std::string out_dir = "out";
    std::uint64_t seed = 1;
    TaskKind kind = TaskKind::Oam;
    OamTask oam;
    ScanTask scan;
    DfTask df;
};

// Strict parse: unknown keys anywhere are an error naming the offending path.
// Accepts either a bare config or a manifest produced by a previous run (the
// manifest's "config" object is extracted). Throws ConfigError.
ScenarioConfig load_config(const std::string& path);

// Fully-resolved config as JSON text (defaults filled in).
std::string config_to_json(const ScenarioConfig& c);

// {"metascope_version", "command", "config": {resolved}}
std::string manifest_json(const ScenarioConfig& c, const std::string& command);

}  // namespace metascope
