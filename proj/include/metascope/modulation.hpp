#pragma once
#include <complex>
#include <utility>
#include <vector>

#include "metascope/coding.hpp"
#include "metascope/geometry.hpp"

namespace metascope {

// Periodic +/-1 sequence: +1 on the listed fractions-of-period intervals
// (b, e], -1 elsewhere. Intervals are disjoint, within [0, 1].
struct BinarySequence {
    std::vector<std::pair<double, double>> on;
    double value(double frac) const {
        for (auto& [b, e] : on)
            if (frac > b && frac <= e) return 1.0;
        return -1.0;
    }
};

// Slot n of an M_sub-way period split: +1 exactly on ((n-1)/M, n/M].
BinarySequence slot_sequence(int m_sub, int n);

// a_h of a BinarySequence: closed form from the interval boundaries.
std::complex<double> fourier_coefficient(const BinarySequence& s, int h);

enum class ModAxis { X, Y };

struct ModulationPlan {
    ModAxis axis = ModAxis::X;
    double t_p = 1e-5;             // modulation period, seconds
    int samples_per_period = 128;
    int periods = 8;
    double spacing = 0.0;          // D, phase-center spacing of the pair
    BinarySequence sub1, sub2;     // staggered quarter-duty pair
    BinarySequence parked;         // rest of the array; silent at h = 0, +-1
    std::vector<int> sub1_idx, sub2_idx, parked_idx;   // element linear indices
};

// DF plan: subarrays are the innermost mirror column pair (X) or row pair (Y),
// D = pitch; sub1 on (0, 1/4], sub2 on (1/2, 3/4], parked on (0,1/4]u(1/2,3/4].
ModulationPlan df_plan(const ArrayGeometry& g, ModAxis axis);

// Aggregate |a_h| per order h in [0, H] over the plan's sequences,
// normalized to the largest.
std::vector<double> harmonic_envelope(const ModulationPlan& plan, int h_max);

}  // namespace metascope
