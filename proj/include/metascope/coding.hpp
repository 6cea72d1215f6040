#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "metascope/geometry.hpp"

namespace metascope {

struct CodingMatrix {
    int rows = 0, cols = 0;
    std::vector<std::uint8_t> bits;   // row-major, bits[(m-1)*cols + (n-1)]
    std::uint8_t at(int m, int n) const { return bits[(m - 1) * cols + (n - 1)]; }
    std::uint8_t& at(int m, int n) { return bits[(m - 1) * cols + (n - 1)]; }
};

struct PhaseMap {
    int rows = 0, cols = 0;
    std::vector<double> phase;        // wrapped [0, 2pi), same layout
    double at(int m, int n) const { return phase[(m - 1) * cols + (n - 1)]; }
    double& at(int m, int n) { return phase[(m - 1) * cols + (n - 1)]; }
};

struct BeamSpec {
    enum Kind { OAM, Pencil } kind = OAM;
    int oam_mode = 0;
    Direction steer;
};

// l * atan2(y, x), wrapped to [0, 2pi); origin maps to 0 by convention.
double oam_azimuthal_phase(double x, double y, int l);

// Spherical-wave focusing term plus azimuthal term, wrapped.
double oam_compensation_phase(const ArrayGeometry& g, const FrequencySpec& fq,
                              int l, int m, int n);

// wrap(k0 * (L_mn - p . r0_hat)) for a steered pencil beam.
double pencil_compensation_phase(const ArrayGeometry& g, const FrequencySpec& fq,
                                 const Direction& steer, int m, int n);

PhaseMap compensation_map(const ArrayGeometry& g, const FrequencySpec& fq,
                          const BeamSpec& spec);

// bit 0 for [0, pi), bit 1 for [pi, 2pi).
CodingMatrix quantize_1bit(const PhaseMap& phases);

CodingMatrix synthesize(const ArrayGeometry& g, const FrequencySpec& fq,
                        const BeamSpec& spec);

// Text bitmap: rows lines of cols '0'/'1' characters, row 0 first, LF endings.
std::string coding_to_bitmap(const CodingMatrix& c, bool quadrant_comment = false);
CodingMatrix coding_from_bitmap(const std::string& text);

}  // namespace metascope
