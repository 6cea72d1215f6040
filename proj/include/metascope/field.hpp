#pragma once
#include <complex>
#include <optional>
#include <vector>

#include "metascope/coding.hpp"
#include "metascope/feed.hpp"
#include "metascope/geometry.hpp"
#include "metascope/response.hpp"

namespace metascope {

struct GridSpec {
    double theta_start = 0.0, theta_step = 0.0;
    int theta_count = 0;
    double phi_start = 0.0, phi_step = 0.0;
    int phi_count = 0;
};

// theta 0..90 deg step 0.25, phi 0..359 deg step 1: >= 2 samples per beamwidth
// for the 10-lambda default aperture.
GridSpec default_grid();

struct FarFieldPattern {
    GridSpec grid;
    double freq_hz = 0.0;
    std::vector<std::complex<double>> field;   // theta-major
    std::complex<double> at(int it, int ip) const { return field[it * grid.phi_count + ip]; }
    double theta(int it) const { return grid.theta_start + it * grid.theta_step; }
    double phi(int ip) const { return grid.phi_start + ip * grid.phi_step; }
};

enum class Engine { Serial, Parallel };

// E(theta,phi) = cos(theta) * sum_mn c_mn exp(+j k0 (x u + y v)),
// c = illuminate * gamma(bit). Serial path is the reference implementation;
// Parallel uses the separable-axis kernel under OpenMP. Results agree to
// summation roundoff; each engine alone is bit-deterministic.
FarFieldPattern far_field(const ArrayGeometry& g, const FrequencySpec& fq,
                          const CodingMatrix& coding, const MetaAtomResponse& resp,
                          const FeedModel& feed, const GridSpec& grid,
                          Engine engine = Engine::Parallel);

FarFieldPattern far_field_coeffs(const ArrayGeometry& g, const FrequencySpec& fq,
                                 const std::vector<std::complex<double>>& coeffs,
                                 const GridSpec& grid, Engine engine = Engine::Parallel);

struct PatternMetrics {
    double directivity_dbi;
    double peak_theta, peak_phi;       // parabolic-refined, degrees
    int peak_itheta, peak_iphi;        // grid argmax
};

// 4pi |E_pk|^2 / hemisphere power integral. Throws if the grid undersamples
// the main beam (< 2 theta samples per half-power width).
PatternMetrics directivity_gain(const FarFieldPattern& p);

// Loss terms that gain adds on top of pattern directivity: spillover and
// response-magnitude absorption (power-weighted mean |gamma|^2).
double absorption_efficiency(const ArrayGeometry& g, const FrequencySpec& fq,
                             const CodingMatrix& coding, const MetaAtomResponse& resp,
                             const FeedModel& feed);

// Directivity minus spillover and absorption losses, dBi. Quantization loss
// is already in the pattern shape and is not double-counted here.
double realized_gain_dbi(const ArrayGeometry& g, const FrequencySpec& fq,
                         const CodingMatrix& coding, const MetaAtomResponse& resp,
                         const FeedModel& feed, const PatternMetrics& metrics);

// Highest lobe outside the main lobe, dB relative to peak; the main lobe is
// grown from the peak by monotone descent. nullopt = no secondary lobe.
std::optional<double> sidelobe_level(const FarFieldPattern& p, int peak_itheta, int peak_iphi);

struct ModeSpectrum {
    int l_max;
    std::vector<double> fraction;      // index l + l_max, sums to 1
};

// Azimuthal DFT of E on the ring theta = ring row; needs >= 4L+2 phi samples.
ModeSpectrum oam_mode_spectrum(const FarFieldPattern& p, int ring_itheta, int l_max);

// theta row with maximal mean |E|^2 over phi.
int intensity_ring_row(const FarFieldPattern& p);

// Contiguous region around the peak with |E| >= peak * 10^(-10/20),
// 4-connected, phi wraps.
std::vector<char> mainlobe_mask(const FarFieldPattern& p, int peak_itheta, int peak_iphi);

// Magnitude correlation of two patterns over a mask (1 = proportional).
double pattern_correlation(const FarFieldPattern& a, const FarFieldPattern& b,
                           const std::vector<char>& mask);

// Radiated power of the piecewise-constant aperture cell field over the
// propagating hemisphere, divided by the power incident on the cells.
// Parseval-bounded <= 1 for any passive coding.
double radiated_fraction(const ArrayGeometry& g, const FrequencySpec& fq,
                         const CodingMatrix& coding, const MetaAtomResponse& resp,
                         const FeedModel& feed);

}  // namespace metascope
