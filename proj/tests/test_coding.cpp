#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "metascope/coding.hpp"
#include "metascope/rng.hpp"

#include <cmath>
#include <vector>

using namespace metascope;

static double ang_dist(double a, double b) { return std::fabs(std::remainder(a - b, 2.0 * M_PI)); }

TEST_CASE("azimuthal phase basics") {
    CHECK(oam_azimuthal_phase(1.0, 0.0, 2) == 0.0);
    CHECK(oam_azimuthal_phase(0.0, 1.0, 1) == doctest::Approx(M_PI_2).epsilon(1e-15));
    CHECK(oam_azimuthal_phase(-1.0, 0.0, 3) == doctest::Approx(M_PI).epsilon(1e-13));
    // origin has no defined azimuth; convention is 0
    CHECK(oam_azimuthal_phase(0.0, 0.0, 5) == 0.0);
}

TEST_CASE("helical map rotates with the coordinate frame") {
    for (int l : {1, 2, -3}) {
        double delta = 0.7;
        for (auto [x, y] : std::vector<std::pair<double, double>>{
                 {0.3, 0.1}, {-0.2, 0.4}, {-0.1, -0.5}, {0.25, -0.25}}) {
            double xr = x * std::cos(delta) - y * std::sin(delta);
            double yr = x * std::sin(delta) + y * std::cos(delta);
            double a = oam_azimuthal_phase(x, y, l);
            double b = oam_azimuthal_phase(xr, yr, l);
            CHECK(ang_dist(b, a + l * delta) < 1e-12);
        }
    }
}

TEST_CASE("vortex compensation phase") {
    ArrayGeometry odd{21, 21, 0.05, 0.364};
    FrequencySpec fq{3.0e9};
    for (int l : {0, 1, 3})
        CHECK(oam_compensation_phase(odd, fq, l, 11, 11) == 0.0);

    // additive structure: focusing part plus the helical part
    ArrayGeometry g;
    for (int l : {1, 2, 3})
        for (int m : {1, 5, 14})
            for (int n : {2, 10, 20}) {
                auto p = element_position(g, m, n);
                double focus = oam_compensation_phase(g, fq, 0, m, n);
                double az = oam_azimuthal_phase(p[0], p[1], l);
                CHECK(ang_dist(oam_compensation_phase(g, fq, l, m, n), focus + az) < 1e-12);
            }
}

TEST_CASE("corner element compensation value, mode 1") {
    ArrayGeometry g;
    FrequencySpec fq{3.0e9};
    // oracle evaluated as one expression straight from the geometry
    double x = -0.475, y = -0.475;
    double L = std::sqrt(x * x + y * y + 0.364 * 0.364);
    double want = wrap_2pi(fq.wavenumber() * (L - 0.364) + std::atan2(y, x));
    CHECK(want == doctest::Approx(3.946447247115273).epsilon(1e-12));
    CHECK(oam_compensation_phase(g, fq, 1, 1, 1) == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("pencil compensation phase") {
    ArrayGeometry g;
    ArrayGeometry odd{21, 21, 0.05, 0.364};
    FrequencySpec fq{3.0e9};
    double k0 = fq.wavenumber();

    for (double th : {0.0, 0.3, 1.0})
        CHECK(ang_dist(pencil_compensation_phase(odd, fq, {th, 0.2}, 11, 11), k0 * 0.364) < 1e-12);

    // broadside steering degenerates to the focusing map shifted by k0*F
    for (int m : {1, 7, 20})
        for (int n : {3, 10, 16}) {
            double pencil = pencil_compensation_phase(g, fq, {0.0, 0.0}, m, n);
            double focus = oam_compensation_phase(g, fq, 0, m, n);
            CHECK(ang_dist(pencil - focus, k0 * 0.364) < 1e-12);
        }
}

TEST_CASE("steered pencil map has the right progressive phase along x") {
    ArrayGeometry g;
    FrequencySpec fq{3.0e9};
    double k0 = fq.wavenumber();
    Direction steer{30.0 * M_PI / 180.0, 0.0};
    double want = -k0 * g.pitch * std::sin(steer.theta);
    for (int n : {1, 10, 20})
        for (int m = 1; m < g.rows; ++m) {
            // remove the feed path to isolate the steering ramp
            double a = pencil_compensation_phase(g, fq, steer, m, n) - k0 * feed_distance(g, m, n);
            double b = pencil_compensation_phase(g, fq, steer, m + 1, n) -
                       k0 * feed_distance(g, m + 1, n);
            CHECK(ang_dist(b - a, want) < 1e-9);
        }
}

TEST_CASE("1-bit quantization boundaries") {
    PhaseMap p;
    p.rows = 1;
    p.cols = 6;
    p.phase = {0.0, M_PI_2, M_PI - 1e-12, M_PI, 1.5 * M_PI, 2.0 * M_PI - 1e-12};
    auto c = quantize_1bit(p);
    CHECK(c.at(1, 1) == 0);
    CHECK(c.at(1, 2) == 0);
    CHECK(c.at(1, 3) == 0);
    CHECK(c.at(1, 4) == 1);
    CHECK(c.at(1, 5) == 1);
    CHECK(c.at(1, 6) == 1);
}

TEST_CASE("quantizing a half-turn-shifted map complements every bit") {
    PhaseMap p;
    p.rows = 12;
    p.cols = 9;
    p.phase.resize(p.rows * p.cols);
    SplitMix64 rng(5);
    for (auto& ph : p.phase) ph = rng.uniform() * 2.0 * M_PI;

    PhaseMap q = p;
    for (auto& ph : q.phase) ph = wrap_2pi(ph + M_PI);

    auto a = quantize_1bit(p);
    auto b = quantize_1bit(q);
    for (int m = 1; m <= p.rows; ++m)
        for (int n = 1; n <= p.cols; ++n)
            CHECK(a.at(m, n) == 1 - b.at(m, n));
}

// Walk the cells crossed by a centered circle and count bit changes.
static int ring_transitions(const CodingMatrix& c, const ArrayGeometry& g, double radius) {
    std::vector<std::pair<int, int>> cells;
    const int K = 64;
    for (int k = 0; k < K; ++k) {
        double a = 2.0 * M_PI * (k + 0.5) / K;
        double px = radius * std::cos(a), py = radius * std::sin(a);
        int m = (int)std::lround(px / g.pitch + (g.rows + 1) / 2.0);
        int n = (int)std::lround(py / g.pitch + (g.cols + 1) / 2.0);
        if (cells.empty() || cells.back() != std::make_pair(m, n)) cells.emplace_back(m, n);
    }
    if (cells.front() == cells.back()) cells.pop_back();
    int t = 0;
    for (size_t i = 0; i < cells.size(); ++i) {
        auto [m0, n0] = cells[i ? i - 1 : cells.size() - 1];
        auto [m1, n1] = cells[i];
        if (c.at(m0, n0) != c.at(m1, n1)) ++t;
    }
    return t;
}

TEST_CASE("spiral arm count: a centered ring crosses 2|l| transitions") {
    ArrayGeometry g;
    FrequencySpec fq{3.0e9};
    for (int l : {0, 1, 2, 3}) {
        auto c = synthesize(g, fq, {BeamSpec::OAM, l, {}});
        CHECK(ring_transitions(c, g, 0.075) == 2 * l);
        CHECK(ring_transitions(c, g, 0.09) == 2 * l);
    }
}

TEST_CASE("focusing map quantizes into concentric half-wave zones") {
    ArrayGeometry g;
    FrequencySpec fq{3.0e9};
    auto c = synthesize(g, fq, {BeamSpec::OAM, 0, {}});
    double lam = fq.wavelength();
    for (int m = 1; m <= g.rows; ++m)
        for (int n = 1; n <= g.cols; ++n) {
            // zone parity straight from the path-length excess
            double excess = feed_distance(g, m, n) - g.focal;
            int zone = (int)std::floor(2.0 * excess / lam);
            CHECK((int)c.at(m, n) == zone % 2);
        }
}

TEST_CASE("synthesis is deterministic and repeatable") {
    ArrayGeometry g;
    FrequencySpec fq{3.0e9};
    BeamSpec spec{BeamSpec::Pencil, 0, {45.0 * M_PI / 180.0, 0.0}};
    auto a = synthesize(g, fq, spec);
    auto b = synthesize(g, fq, spec);
    CHECK(a.bits == b.bits);
    CHECK(a.rows == g.rows);
    CHECK(a.cols == g.cols);
}

TEST_CASE("bitmap export and import") {
    ArrayGeometry g;
    FrequencySpec fq{3.0e9};
    auto c = synthesize(g, fq, {BeamSpec::OAM, 2, {}});

    auto text = coding_to_bitmap(c);
    int lines = 0;
    for (char ch : text)
        if (ch == '\n') ++lines;
    CHECK(lines == g.rows);
    CHECK(text.size() == size_t(g.rows * (g.cols + 1)));
    CHECK(text.back() == '\n');
    // first line is row m=1
    for (int n = 1; n <= g.cols; ++n) CHECK(text[n - 1] == char('0' + c.at(1, n)));

    auto back = coding_from_bitmap(text);
    CHECK(back.bits == c.bits);

    auto annotated = coding_to_bitmap(c, true);
    CHECK(annotated.rfind("# quadrant-split: 2x2\n", 0) == 0);
    CHECK(coding_from_bitmap(annotated).bits == c.bits);
}
