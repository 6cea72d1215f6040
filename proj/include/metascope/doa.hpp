#pragma once
#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "metascope/modulation.hpp"

namespace metascope {

// Received baseband samples at slot-midpoint times (s + 1/2) T_p / S.
// Element contribution: incident plane-wave phase x modulation state (+/-1)
// x spherical path to the feed. Optional per-sample complex AWGN with power
// P_fundamental_bin * 10^(-snr/10).
std::vector<std::complex<double>> synthesize_received(
    const ArrayGeometry& g, const FrequencySpec& fq, const ModulationPlan& plan,
    const Direction& incident, std::optional<double> snr_db, std::uint64_t seed);

struct HarmonicSet {
    int h_max;
    std::vector<std::complex<double>> bins;   // index h + h_max
    std::complex<double> at(int h) const { return bins[h + h_max]; }
};

// Leakage-free DFT bins at h * F_p; the signal must span integer periods.
HarmonicSet extract_harmonics(const std::vector<std::complex<double>>& signal,
                              const ModulationPlan& plan, int h_max);

// R = (h=+1)/(h=0). nullopt when the fundamental vanishes (pattern null).
std::optional<std::complex<double>> harmonic_ratio(const HarmonicSet& h);

struct DfEstimate {
    double theta = 0.0, phi = 0.0;     // radians; phi in [0, 2pi)
    double u = 0.0, v = 0.0;           // per-axis arctan angles
    std::complex<double> r1{0, 0}, r2{0, 0};
    bool phi_defined = true;
    double mismatch = 0.0;             // max |Im(R/c)|, model-mismatch residual
};

// u = arctan Re(R1/c), v = arctan Re(R2/c), c = -2(1+j)/pi;
// sin(theta) = lambda sqrt(u^2+v^2) / (pi D). Throws if that exceeds 1.
DfEstimate estimate_direction(std::complex<double> r1, std::complex<double> r2,
                              const ModulationPlan& plan, const FrequencySpec& fq);

struct DfTrialRow {
    double theta_preset_deg, phi_preset_deg;
    double theta_est_deg, phi_est_deg;
    int trial;
    std::uint64_t seed;
};

struct DfResult {
    std::vector<DfTrialRow> rows;
    std::vector<double> preset_deg;      // signed presets
    std::vector<double> rmse_deg;        // per preset, over trials
};

// Signed presets map to incidence (|a|, 0 or 180 deg); the estimate is signed
// by sign(cos phi_est). Trials use sub-seeds derived from (master, preset,
// trial, axis), so results are independent of execution order.
DfResult df_experiment(const ArrayGeometry& g, const FrequencySpec& fq,
                       const std::vector<double>& preset_deg, int trials,
                       std::optional<double> snr_db, std::uint64_t master_seed);

}  // namespace metascope
