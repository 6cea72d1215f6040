#include "metascope/modulation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace metascope {

BinarySequence slot_sequence(int m_sub, int n) {
    if (m_sub < 1 || n < 1 || n > m_sub)
        throw std::invalid_argument("slot index must satisfy 1 <= n <= m_sub");
    return {{{double(n - 1) / m_sub, double(n) / m_sub}}};
}

std::complex<double> fourier_coefficient(const BinarySequence& s, int h) {
    if (h == 0) {
        double duty = 0.0;
        for (auto& [b, e] : s.on) duty += e - b;
        return {-1.0 + 2.0 * duty, 0.0};
    }
    std::complex<double> acc{0.0, 0.0};
    std::complex<double> jw{0.0, 2.0 * M_PI * h};
    for (auto& [b, e] : s.on)
        acc += 2.0 * (std::exp(-jw * b) - std::exp(-jw * e)) / jw;
    return acc;
}

ModulationPlan df_plan(const ArrayGeometry& g, ModAxis axis) {
    validate(g);
    int along_count = axis == ModAxis::X ? g.rows : g.cols;
    if (along_count < 2)
        throw std::invalid_argument("need at least two lines across the modulation axis");

    ModulationPlan plan;
    plan.axis = axis;
    plan.spacing = g.pitch;
    plan.sub1 = slot_sequence(4, 1);
    plan.sub2 = slot_sequence(4, 3);
    // on during both active slots: its h = 0, +-1 coefficients all vanish
    plan.parked = {{{0.0, 0.25}, {0.5, 0.75}}};

    int lo = along_count / 2, hi = lo + 1;   // the mirror pair straddling the origin
    for (int m = 1; m <= g.rows; ++m)
        for (int n = 1; n <= g.cols; ++n) {
            int along = axis == ModAxis::X ? m : n;
            int idx = (m - 1) * g.cols + (n - 1);
            if (along == hi)
                plan.sub1_idx.push_back(idx);
            else if (along == lo)
                plan.sub2_idx.push_back(idx);
            else
                plan.parked_idx.push_back(idx);
        }
    return plan;
}

std::vector<double> harmonic_envelope(const ModulationPlan& plan, int h_max) {
    if (h_max < 0) throw std::invalid_argument("h_max must be >= 0");
    std::vector<double> env(h_max + 1, 0.0);
    const std::pair<const BinarySequence*, size_t> parts[3] = {
        {&plan.sub1, plan.sub1_idx.size()},
        {&plan.sub2, plan.sub2_idx.size()},
        {&plan.parked, plan.parked_idx.size()}};
    for (int h = 0; h <= h_max; ++h)
        for (auto& [seq, members] : parts)
            if (members > 0) env[h] += std::abs(fourier_coefficient(*seq, h));
    double top = *std::max_element(env.begin(), env.end());
    if (top > 0.0)
        for (auto& e : env) e /= top;
    return env;
}

}  // namespace metascope
