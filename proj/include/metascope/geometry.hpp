#pragma once
#include <array>
#include <cmath>
#include <stdexcept>

namespace metascope {

inline constexpr double speed_of_light = 299792458.0;

// Planar reflectarray on z=0, centered on the origin, feed on the +z axis.
struct ArrayGeometry {
    int rows = 20;          // M, along x
    int cols = 20;          // N, along y
    double pitch = 0.05;    // P, meters
    double focal = 0.364;   // F, meters; feed at (0, 0, F)
};

inline void validate(const ArrayGeometry& g) {
    if (g.rows < 1 || g.cols < 1) throw std::invalid_argument("geometry: rows/cols must be >= 1");
    if (!(g.pitch > 0.0)) throw std::invalid_argument("geometry: pitch must be > 0");
    if (!(g.focal > 0.0)) throw std::invalid_argument("geometry: focal must be > 0");
}

struct FrequencySpec {
    double f_c;
    double wavelength() const { return speed_of_light / f_c; }
    double wavenumber() const { return 2.0 * M_PI / wavelength(); }
};

// theta from +z, phi from +x in the xOy plane.
struct Direction {
    double theta = 0.0;
    double phi = 0.0;
};

inline void check_indices(const ArrayGeometry& g, int m, int n) {
    if (m < 1 || m > g.rows || n < 1 || n > g.cols)
        throw std::out_of_range("element index out of range");
}

// 1-based (m,n); center offset (M+1)/2 keeps the grid symmetric about the origin.
inline std::array<double, 3> element_position(const ArrayGeometry& g, int m, int n) {
    check_indices(g, m, n);
    return {(m - (g.rows + 1) / 2.0) * g.pitch,
            (n - (g.cols + 1) / 2.0) * g.pitch, 0.0};
}

inline double feed_distance(const ArrayGeometry& g, int m, int n) {
    auto p = element_position(g, m, n);
    return std::sqrt(p[0] * p[0] + p[1] * p[1] + g.focal * g.focal);
}

inline double wrap_2pi(double a) {
    double w = std::fmod(a, 2.0 * M_PI);
    if (w < 0.0) w += 2.0 * M_PI;
    return w;
}

}  // namespace metascope
