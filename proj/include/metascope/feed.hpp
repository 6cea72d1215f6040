#pragma once
#include <complex>
#include <vector>

#include "metascope/geometry.hpp"

namespace metascope {

// cos^q feed about boresight (-z from the feed toward the array center).
// q is derived from the stated gain via the analytic directivity 2(2q+1).
struct FeedModel {
    double gain_dbi = 10.0;
    double exponent() const {
        return (std::pow(10.0, gain_dbi / 10.0) / 2.0 - 1.0) / 2.0;
    }
};

// Per-element incident amplitude: cos^q(alpha) feed pattern, cos(alpha)
// element receive obliquity, spherical spreading and path phase.
// Row-major (m-1)*cols + (n-1), matching CodingMatrix layout.
std::vector<std::complex<double>> illuminate(const ArrayGeometry& g,
                                             const FrequencySpec& fq,
                                             const FeedModel& feed);

// Fraction of the feed's radiated power intercepted by the aperture cells.
double spillover_efficiency(const ArrayGeometry& g, const FeedModel& feed);

}  // namespace metascope
