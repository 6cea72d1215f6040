#include "metascope/feed.hpp"

#include <cmath>

namespace metascope {

std::vector<std::complex<double>> illuminate(const ArrayGeometry& g,
                                             const FrequencySpec& fq,
                                             const FeedModel& feed) {
    validate(g);
    double k0 = fq.wavenumber();
    double q = feed.exponent();
    std::vector<std::complex<double>> out(size_t(g.rows) * g.cols);
    for (int m = 1; m <= g.rows; ++m)
        for (int n = 1; n <= g.cols; ++n) {
            double L = feed_distance(g, m, n);
            double ca = g.focal / L;   // feed boresight and surface normal coincide
            out[size_t(m - 1) * g.cols + (n - 1)] =
                std::polar(std::pow(ca, q + 1.0) / L, -k0 * L);
        }
    return out;
}

double spillover_efficiency(const ArrayGeometry& g, const FeedModel& feed) {
    validate(g);
    double q = feed.exponent();
    double directivity = 2.0 * (2.0 * q + 1.0);   // cos^q pattern, front hemisphere
    double sum = 0.0;
    for (int m = 1; m <= g.rows; ++m)
        for (int n = 1; n <= g.cols; ++n) {
            double L = feed_distance(g, m, n);
            // projected cell solid angle times the feed pattern power
            sum += std::pow(g.focal / L, 2.0 * q + 1.0) * g.pitch * g.pitch / (L * L);
        }
    return directivity / (4.0 * M_PI) * sum;
}

}  // namespace metascope
