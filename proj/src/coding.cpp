#include "metascope/coding.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace metascope {

double oam_azimuthal_phase(double x, double y, int l) {
    if (x == 0.0 && y == 0.0) return 0.0;
    return wrap_2pi(l * std::atan2(y, x));
}

double oam_compensation_phase(const ArrayGeometry& g, const FrequencySpec& fq,
                              int l, int m, int n) {
    auto p = element_position(g, m, n);
    double excess = feed_distance(g, m, n) - g.focal;
    return wrap_2pi(fq.wavenumber() * excess + l * ((p[0] == 0.0 && p[1] == 0.0)
                                                        ? 0.0
                                                        : std::atan2(p[1], p[0])));
}

double pencil_compensation_phase(const ArrayGeometry& g, const FrequencySpec& fq,
                                 const Direction& steer, int m, int n) {
    auto p = element_position(g, m, n);
    double proj = p[0] * std::sin(steer.theta) * std::cos(steer.phi) +
                  p[1] * std::sin(steer.theta) * std::sin(steer.phi);
    return wrap_2pi(fq.wavenumber() * (feed_distance(g, m, n) - proj));
}

PhaseMap compensation_map(const ArrayGeometry& g, const FrequencySpec& fq,
                          const BeamSpec& spec) {
    validate(g);
    PhaseMap map;
    map.rows = g.rows;
    map.cols = g.cols;
    map.phase.resize(size_t(g.rows) * g.cols);
    for (int m = 1; m <= g.rows; ++m)
        for (int n = 1; n <= g.cols; ++n)
            map.at(m, n) = spec.kind == BeamSpec::OAM
                               ? oam_compensation_phase(g, fq, spec.oam_mode, m, n)
                               : pencil_compensation_phase(g, fq, spec.steer, m, n);
    return map;
}

CodingMatrix quantize_1bit(const PhaseMap& phases) {
    CodingMatrix c;
    c.rows = phases.rows;
    c.cols = phases.cols;
    c.bits.resize(phases.phase.size());
    for (size_t i = 0; i < phases.phase.size(); ++i)
        c.bits[i] = phases.phase[i] < M_PI ? 0 : 1;
    return c;
}

CodingMatrix synthesize(const ArrayGeometry& g, const FrequencySpec& fq,
                        const BeamSpec& spec) {
    return quantize_1bit(compensation_map(g, fq, spec));
}

std::string coding_to_bitmap(const CodingMatrix& c, bool quadrant_comment) {
    std::string out;
    if (quadrant_comment) out += "# quadrant-split: 2x2\n";
    out.reserve(out.size() + size_t(c.rows) * (c.cols + 1));
    for (int m = 1; m <= c.rows; ++m) {
        for (int n = 1; n <= c.cols; ++n) out += char('0' + c.at(m, n));
        out += '\n';
    }
    return out;
}

CodingMatrix coding_from_bitmap(const std::string& text) {
    CodingMatrix c;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] == '#') continue;
        if (line.empty()) continue;
        if (c.cols == 0) c.cols = int(line.size());
        if (int(line.size()) != c.cols)
            throw std::invalid_argument("bitmap rows have inconsistent lengths");
        for (char ch : line) {
            if (ch != '0' && ch != '1') throw std::invalid_argument("bitmap contains non-bit characters");
            c.bits.push_back(std::uint8_t(ch - '0'));
        }
        ++c.rows;
    }
    if (c.rows == 0) throw std::invalid_argument("bitmap is empty");
    return c;
}

}  // namespace metascope
