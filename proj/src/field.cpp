#include "metascope/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace metascope {

static const double deg = M_PI / 180.0;

GridSpec default_grid() { return {0.0, 0.25, 361, 0.0, 1.0, 360}; }

static void check_grid(const GridSpec& grid) {
    if (grid.theta_count < 1 || grid.phi_count < 1)
        throw std::invalid_argument("grid needs at least one sample per axis");
    if ((grid.theta_count > 1 && !(grid.theta_step > 0.0)) ||
        (grid.phi_count > 1 && !(grid.phi_step > 0.0)))
        throw std::invalid_argument("grid steps must be positive");
}

static std::vector<double> axis_coords(int count, double pitch) {
    std::vector<double> c(count);
    for (int i = 0; i < count; ++i) c[i] = (i + 1 - (count + 1) / 2.0) * pitch;
    return c;
}

static std::vector<std::complex<double>> coded_coeffs(const ArrayGeometry& g,
                                                      const FrequencySpec& fq,
                                                      const CodingMatrix& coding,
                                                      const MetaAtomResponse& resp,
                                                      const FeedModel& feed) {
    if (coding.rows != g.rows || coding.cols != g.cols)
        throw std::invalid_argument("coding size does not match the geometry");
    auto amps = illuminate(g, fq, feed);
    std::complex<double> gamma[2] = {meta_response_at(resp, fq.f_c, 0),
                                     meta_response_at(resp, fq.f_c, 1)};
    for (size_t i = 0; i < amps.size(); ++i) amps[i] *= gamma[coding.bits[i]];
    return amps;
}

// Shared kernel. The element factor cos(theta) is optional so the power
// audit can reuse the raw lattice sum.
static FarFieldPattern compute_pattern(const ArrayGeometry& g, const FrequencySpec& fq,
                                       const std::vector<std::complex<double>>& coeffs,
                                       const GridSpec& grid, Engine engine,
                                       bool apply_costheta) {
    validate(g);
    check_grid(grid);
    if (coeffs.size() != size_t(g.rows) * g.cols)
        throw std::invalid_argument("coefficient count does not match the geometry");

    FarFieldPattern p;
    p.grid = grid;
    p.freq_hz = fq.f_c;
    p.field.resize(size_t(grid.theta_count) * grid.phi_count);

    double k0 = fq.wavenumber();
    auto xs = axis_coords(g.rows, g.pitch);
    auto ys = axis_coords(g.cols, g.pitch);

    if (engine == Engine::Serial) {
        // reference path: plain per-element accumulation
        for (int it = 0; it < grid.theta_count; ++it) {
            double th = (grid.theta_start + it * grid.theta_step) * deg;
            double st = std::sin(th), ct = std::cos(th);
            for (int ip = 0; ip < grid.phi_count; ++ip) {
                double ph = (grid.phi_start + ip * grid.phi_step) * deg;
                double u = st * std::cos(ph), v = st * std::sin(ph);
                std::complex<double> acc{0.0, 0.0};
                for (int m = 0; m < g.rows; ++m)
                    for (int n = 0; n < g.cols; ++n)
                        acc += coeffs[size_t(m) * g.cols + n] *
                               std::polar(1.0, k0 * (xs[m] * u + ys[n] * v));
                p.field[size_t(it) * grid.phi_count + ip] = (apply_costheta ? ct : 1.0) * acc;
            }
        }
        return p;
    }

    // separable kernel: per direction only rows+cols phase evaluations
#pragma omp parallel for schedule(static)
    for (int it = 0; it < grid.theta_count; ++it) {
        std::vector<std::complex<double>> ex(g.rows), ey(g.cols);
        double th = (grid.theta_start + it * grid.theta_step) * deg;
        double st = std::sin(th), ct = std::cos(th);
        for (int ip = 0; ip < grid.phi_count; ++ip) {
            double ph = (grid.phi_start + ip * grid.phi_step) * deg;
            double u = st * std::cos(ph), v = st * std::sin(ph);
            for (int m = 0; m < g.rows; ++m) ex[m] = std::polar(1.0, k0 * xs[m] * u);
            for (int n = 0; n < g.cols; ++n) ey[n] = std::polar(1.0, k0 * ys[n] * v);
            std::complex<double> acc{0.0, 0.0};
            for (int m = 0; m < g.rows; ++m) {
                std::complex<double> row{0.0, 0.0};
                const std::complex<double>* c = &coeffs[size_t(m) * g.cols];
                for (int n = 0; n < g.cols; ++n) row += c[n] * ey[n];
                acc += ex[m] * row;
            }
            p.field[size_t(it) * grid.phi_count + ip] = (apply_costheta ? ct : 1.0) * acc;
        }
    }
    return p;
}

FarFieldPattern far_field_coeffs(const ArrayGeometry& g, const FrequencySpec& fq,
                                 const std::vector<std::complex<double>>& coeffs,
                                 const GridSpec& grid, Engine engine) {
    return compute_pattern(g, fq, coeffs, grid, engine, true);
}

FarFieldPattern far_field(const ArrayGeometry& g, const FrequencySpec& fq,
                          const CodingMatrix& coding, const MetaAtomResponse& resp,
                          const FeedModel& feed, const GridSpec& grid, Engine engine) {
    return compute_pattern(g, fq, coded_coeffs(g, fq, coding, resp, feed), grid, engine, true);
}

// 3-point parabolic vertex offset on dB values, in units of the grid step
static double parabolic_offset(double y1, double y2, double y3) {
    double den = y1 - 2.0 * y2 + y3;
    if (std::fabs(den) < 1e-12) return 0.0;
    double d = 0.5 * (y1 - y3) / den;
    return std::max(-1.0, std::min(1.0, d));
}

PatternMetrics directivity_gain(const FarFieldPattern& p) {
    const auto& grid = p.grid;
    int nt = grid.theta_count, np = grid.phi_count;
    if (nt < 1 || np < 1 || p.field.empty()) throw std::invalid_argument("empty pattern");

    int it0 = 0, ip0 = 0;
    double peak = 0.0;
    for (int it = 0; it < nt; ++it)
        for (int ip = 0; ip < np; ++ip) {
            double m = std::abs(p.at(it, ip));
            if (m > peak) {
                peak = m;
                it0 = it;
                ip0 = ip;
            }
        }
    if (peak == 0.0) throw std::invalid_argument("pattern is identically zero");

    // the peak phi-cut must resolve the half-power width
    double half = peak * std::pow(10.0, -3.0 / 20.0);
    int run = 1;
    for (int it = it0 + 1; it < nt && std::abs(p.at(it, ip0)) >= half; ++it) ++run;
    for (int it = it0 - 1; it >= 0 && std::abs(p.at(it, ip0)) >= half; --it) ++run;
    if (run < 2) throw std::runtime_error("grid undersamples the main beam");

    double dth = grid.theta_step * deg, dph = grid.phi_step * deg;
    double integral = 0.0;
    for (int it = 0; it < nt; ++it) {
        double w = (it == 0 || it == nt - 1) && nt > 1 ? 0.5 : 1.0;   // trapezoid in theta
        double th = p.theta(it) * deg;
        double row = 0.0;
        for (int ip = 0; ip < np; ++ip) {
            double m = std::abs(p.at(it, ip));
            row += m * m;
        }
        integral += w * row * std::sin(th);
    }
    integral *= dth * dph;

    PatternMetrics met;
    met.directivity_dbi = 10.0 * std::log10(4.0 * M_PI * peak * peak / integral);
    met.peak_itheta = it0;
    met.peak_iphi = ip0;

    auto db_at = [&](int it, int ip) {
        double m = std::abs(p.at(it, ip));
        return 20.0 * std::log10(std::max(m, peak * 1e-15));
    };

    met.peak_theta = p.theta(it0);
    if (it0 > 0 && it0 < nt - 1)
        met.peak_theta += grid.theta_step *
                          parabolic_offset(db_at(it0 - 1, ip0), db_at(it0, ip0), db_at(it0 + 1, ip0));

    met.peak_phi = p.phi(ip0);
    if (np >= 3)
        met.peak_phi += grid.phi_step * parabolic_offset(db_at(it0, (ip0 + np - 1) % np),
                                                         db_at(it0, ip0),
                                                         db_at(it0, (ip0 + 1) % np));
    return met;
}

double absorption_efficiency(const ArrayGeometry& g, const FrequencySpec& fq,
                             const CodingMatrix& coding, const MetaAtomResponse& resp,
                             const FeedModel& feed) {
    if (coding.rows != g.rows || coding.cols != g.cols)
        throw std::invalid_argument("coding size does not match the geometry");
    auto amps = illuminate(g, fq, feed);
    std::complex<double> gamma[2] = {meta_response_at(resp, fq.f_c, 0),
                                     meta_response_at(resp, fq.f_c, 1)};
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < amps.size(); ++i) {
        double w = std::norm(amps[i]);
        num += w * std::norm(gamma[coding.bits[i]]);
        den += w;
    }
    return num / den;
}

double realized_gain_dbi(const ArrayGeometry& g, const FrequencySpec& fq,
                         const CodingMatrix& coding, const MetaAtomResponse& resp,
                         const FeedModel& feed, const PatternMetrics& metrics) {
    return metrics.directivity_dbi + 10.0 * std::log10(spillover_efficiency(g, feed)) +
           10.0 * std::log10(absorption_efficiency(g, fq, coding, resp, feed));
}

// grow a region from the peak along non-increasing magnitudes
static std::vector<char> descent_region(const FarFieldPattern& p, int it0, int ip0) {
    int nt = p.grid.theta_count, np = p.grid.phi_count;
    std::vector<char> in(size_t(nt) * np, 0);
    std::vector<std::pair<int, int>> stack{{it0, ip0}};
    in[size_t(it0) * np + ip0] = 1;
    double tiny = 1e-12 * std::abs(p.at(it0, ip0));
    while (!stack.empty()) {
        auto [it, ip] = stack.back();
        stack.pop_back();
        double cur = std::abs(p.at(it, ip));
        int nbs[4][2] = {{it - 1, ip}, {it + 1, ip}, {it, (ip + np - 1) % np},
                         {it, (ip + 1) % np}};
        for (auto& nb : nbs) {
            if (nb[0] < 0 || nb[0] >= nt) continue;
            char& mark = in[size_t(nb[0]) * np + nb[1]];
            if (mark) continue;
            if (std::abs(p.at(nb[0], nb[1])) <= cur + tiny) {
                mark = 1;
                stack.push_back({nb[0], nb[1]});
            }
        }
    }
    return in;
}

std::optional<double> sidelobe_level(const FarFieldPattern& p, int peak_itheta, int peak_iphi) {
    auto main = descent_region(p, peak_itheta, peak_iphi);
    double peak = std::abs(p.at(peak_itheta, peak_iphi));
    double best = -1.0;
    for (size_t i = 0; i < p.field.size(); ++i)
        if (!main[i]) best = std::max(best, std::abs(p.field[i]));
    if (best < 0.0) return std::nullopt;
    return 20.0 * std::log10(best / peak);
}

ModeSpectrum oam_mode_spectrum(const FarFieldPattern& p, int ring_itheta, int l_max) {
    int np = p.grid.phi_count;
    if (ring_itheta < 0 || ring_itheta >= p.grid.theta_count)
        throw std::invalid_argument("ring row outside the pattern");
    if (l_max < 0 || np < 4 * l_max + 2)
        throw std::invalid_argument("phi sampling too coarse for the requested mode range");

    ModeSpectrum s;
    s.l_max = l_max;
    s.fraction.assign(2 * l_max + 1, 0.0);
    double total = 0.0;
    for (int l = -l_max; l <= l_max; ++l) {
        std::complex<double> a{0.0, 0.0};
        for (int ip = 0; ip < np; ++ip)
            a += p.at(ring_itheta, ip) * std::polar(1.0, -l * p.phi(ip) * deg);
        double pw = std::norm(a / double(np));
        s.fraction[l + l_max] = pw;
        total += pw;
    }
    if (total > 0.0)
        for (auto& f : s.fraction) f /= total;
    return s;
}

int intensity_ring_row(const FarFieldPattern& p) {
    int best = 0;
    double best_val = -1.0;
    for (int it = 0; it < p.grid.theta_count; ++it) {
        double acc = 0.0;
        for (int ip = 0; ip < p.grid.phi_count; ++ip) acc += std::norm(p.at(it, ip));
        if (acc > best_val) {
            best_val = acc;
            best = it;
        }
    }
    return best;
}

std::vector<char> mainlobe_mask(const FarFieldPattern& p, int peak_itheta, int peak_iphi) {
    int nt = p.grid.theta_count, np = p.grid.phi_count;
    std::vector<char> in(size_t(nt) * np, 0);
    double thresh = std::abs(p.at(peak_itheta, peak_iphi)) * std::pow(10.0, -10.0 / 20.0);
    std::vector<std::pair<int, int>> stack{{peak_itheta, peak_iphi}};
    in[size_t(peak_itheta) * np + peak_iphi] = 1;
    while (!stack.empty()) {
        auto [it, ip] = stack.back();
        stack.pop_back();
        int nbs[4][2] = {{it - 1, ip}, {it + 1, ip}, {it, (ip + np - 1) % np},
                         {it, (ip + 1) % np}};
        for (auto& nb : nbs) {
            if (nb[0] < 0 || nb[0] >= nt) continue;
            char& mark = in[size_t(nb[0]) * np + nb[1]];
            if (mark) continue;
            if (std::abs(p.at(nb[0], nb[1])) >= thresh) {
                mark = 1;
                stack.push_back({nb[0], nb[1]});
            }
        }
    }
    return in;
}

double pattern_correlation(const FarFieldPattern& a, const FarFieldPattern& b,
                           const std::vector<char>& mask) {
    if (a.field.size() != b.field.size() || mask.size() != a.field.size())
        throw std::invalid_argument("patterns and mask must share one grid");
    double ab = 0.0, aa = 0.0, bb = 0.0;
    for (size_t i = 0; i < mask.size(); ++i) {
        if (!mask[i]) continue;
        double ma = std::abs(a.field[i]), mb = std::abs(b.field[i]);
        ab += ma * mb;
        aa += ma * ma;
        bb += mb * mb;
    }
    if (aa == 0.0 || bb == 0.0) return 0.0;
    return ab / std::sqrt(aa * bb);
}

static double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }

double radiated_fraction(const ArrayGeometry& g, const FrequencySpec& fq,
                         const CodingMatrix& coding, const MetaAtomResponse& resp,
                         const FeedModel& feed) {
    auto coeffs = coded_coeffs(g, fq, coding, resp, feed);
    auto grid = default_grid();
    auto raw = compute_pattern(g, fq, coeffs, grid, Engine::Parallel, false);

    double k0 = fq.wavenumber();
    double lam = fq.wavelength();
    double half_cell = M_PI * g.pitch / lam;
    double dth = grid.theta_step * deg, dph = grid.phi_step * deg;

    // plane-wave spectrum power of the piecewise-constant cell field,
    // Plancherel-bounded by the power crossing the cells
    double p_rad = 0.0;
    for (int it = 0; it < grid.theta_count; ++it) {
        double th = raw.theta(it) * deg;
        double st = std::sin(th), ct = std::cos(th);
        double w = (it == 0 || it == grid.theta_count - 1) ? 0.5 : 1.0;
        for (int ip = 0; ip < grid.phi_count; ++ip) {
            double ph = raw.phi(ip) * deg;
            double u = st * std::cos(ph), v = st * std::sin(ph);
            double cell = sinc(half_cell * u) * sinc(half_cell * v);
            p_rad += w * std::norm(raw.at(it, ip)) * cell * cell * ct * ct * st;
        }
    }
    p_rad *= dth * dph * k0 * k0 * std::pow(g.pitch, 4.0) / (4.0 * M_PI * M_PI);

    double q = feed.exponent();
    double p_inc = 0.0;
    for (int m = 1; m <= g.rows; ++m)
        for (int n = 1; n <= g.cols; ++n) {
            double L = feed_distance(g, m, n);
            p_inc += std::pow(g.focal / L, 2.0 * q + 1.0) / (L * L);
        }
    p_inc *= g.pitch * g.pitch;

    return p_rad / p_inc;
}

}  // namespace metascope
