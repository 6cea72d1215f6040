#pragma once
#include <complex>
#include <vector>

#include "metascope/field.hpp"

namespace metascope {

struct PlaneSpec {
    double z = 0.0;            // meters in front of the aperture, > 0
    double pitch = 0.0;        // sample pitch, <= lambda/2
    double half_extent = 0.0;  // plane covers [-half_extent, +half_extent]
};

// z = 2 lambda, extent 1.5x the array span, pitch 0.45 lambda.
PlaneSpec default_plane(const ArrayGeometry& g, const FrequencySpec& fq);

struct NearFieldPlane {
    double z = 0.0, pitch = 0.0, freq_hz = 0.0;
    int count = 0;                             // samples per axis, odd
    std::vector<std::complex<double>> field;   // x-major: field[ix*count+iy]
    double coord(int i) const { return (i - (count - 1) / 2) * pitch; }
};

// Exact spherical spreading exp(-j k0 d)/d from every element; no far-field
// approximation. Parallel over plane rows.
NearFieldPlane sample_near_field(const ArrayGeometry& g, const FrequencySpec& fq,
                                 const CodingMatrix& coding, const MetaAtomResponse& resp,
                                 const FeedModel& feed, const PlaneSpec& plane,
                                 Engine engine = Engine::Parallel);

NearFieldPlane near_field_coeffs(const ArrayGeometry& g, const FrequencySpec& fq,
                                 const std::vector<std::complex<double>>& coeffs,
                                 const PlaneSpec& plane, Engine engine = Engine::Parallel);

// Plane-wave-spectrum transform of the sampled plane onto a (theta, phi) grid:
// zero-padded 2-D FFT with e^{+j k.r} kernel, kz obliquity, back-propagation
// to z=0. Single-threaded stage.
FarFieldPattern nf_to_ff(const NearFieldPlane& plane, const GridSpec& grid);

// Phase winding around the beam axis, counted on circles that track the
// plane's intensity ring; returns the median integer winding.
int winding_number(const NearFieldPlane& plane);

// Winding on one circle of given radius (256-point bilinear traversal).
double winding_on_circle(const NearFieldPlane& plane, double radius);

}  // namespace metascope
