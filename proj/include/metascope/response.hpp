#pragma once
#include <complex>
#include <string>
#include <vector>

namespace metascope {

// Two-state reflection table. Phases are stored unwrapped (radians) so that
// interpolation never crosses a 2pi seam; magnitudes are linear.
struct MetaAtomResponse {
    struct Entry {
        double freq_hz;
        double mag0, phase0;   // state 0
        double mag1, phase1;   // state pi
    };
    std::vector<Entry> entries;   // strictly increasing freq
};

// gamma for one bit state; linear interpolation in (magnitude, unwrapped phase).
// Out-of-range frequency throws.
std::complex<double> meta_response_at(const MetaAtomResponse& r, double f_hz, int bit);

// Built-in default table: [2.6, 3.4] GHz step 0.01, resonance-well magnitudes,
// near-180 phase difference across the band.
MetaAtomResponse builtin_response();

// CSV header: freq_hz,mag0_db,phase0_deg,mag1_db,phase1_deg
MetaAtomResponse load_response_csv(const std::string& path);
std::string response_to_csv(const MetaAtomResponse& r);

void validate(const MetaAtomResponse& r);

}  // namespace metascope
