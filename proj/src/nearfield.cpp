#include "metascope/nearfield.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace metascope {

static const double deg = M_PI / 180.0;

PlaneSpec default_plane(const ArrayGeometry& g, const FrequencySpec& fq) {
    double lam = fq.wavelength();
    PlaneSpec p;
    p.z = 2.0 * lam;
    p.pitch = 0.45 * lam;
    double span = std::max(g.rows, g.cols) * g.pitch;
    p.half_extent = std::ceil(1.5 * span / 2.0 / p.pitch - 1e-12) * p.pitch;
    return p;
}

NearFieldPlane near_field_coeffs(const ArrayGeometry& g, const FrequencySpec& fq,
                                 const std::vector<std::complex<double>>& coeffs,
                                 const PlaneSpec& plane, Engine engine) {
    validate(g);
    if (coeffs.size() != size_t(g.rows) * g.cols)
        throw std::invalid_argument("coefficient count does not match the geometry");
    if (!(plane.z > 0.0)) throw std::invalid_argument("plane must sit in front of the aperture");
    double lam = fq.wavelength();
    if (!(plane.pitch > 0.0) || plane.pitch > lam / 2.0)
        throw std::invalid_argument("plane pitch must be positive and at most lambda/2");

    NearFieldPlane out;
    out.z = plane.z;
    out.pitch = plane.pitch;
    out.freq_hz = fq.f_c;
    out.count = 2 * int(std::floor(plane.half_extent / plane.pitch + 1e-9)) + 1;
    out.field.resize(size_t(out.count) * out.count);

    double k0 = fq.wavenumber();
    std::vector<double> ex(g.rows), ey(g.cols);
    for (int m = 0; m < g.rows; ++m) ex[m] = (m + 1 - (g.rows + 1) / 2.0) * g.pitch;
    for (int n = 0; n < g.cols; ++n) ey[n] = (n + 1 - (g.cols + 1) / 2.0) * g.pitch;

    auto fill_row = [&](int ix) {
        double x = out.coord(ix);
        for (int iy = 0; iy < out.count; ++iy) {
            double y = out.coord(iy);
            std::complex<double> acc{0.0, 0.0};
            for (int m = 0; m < g.rows; ++m)
                for (int n = 0; n < g.cols; ++n) {
                    double dx = x - ex[m], dy = y - ey[n];
                    double d = std::sqrt(dx * dx + dy * dy + plane.z * plane.z);
                    acc += coeffs[size_t(m) * g.cols + n] * std::polar(1.0 / d, -k0 * d);
                }
            out.field[size_t(ix) * out.count + iy] = acc;
        }
    };

    if (engine == Engine::Serial) {
        for (int ix = 0; ix < out.count; ++ix) fill_row(ix);
    } else {
#pragma omp parallel for schedule(static)
        for (int ix = 0; ix < out.count; ++ix) fill_row(ix);
    }
    return out;
}

NearFieldPlane sample_near_field(const ArrayGeometry& g, const FrequencySpec& fq,
                                 const CodingMatrix& coding, const MetaAtomResponse& resp,
                                 const FeedModel& feed, const PlaneSpec& plane, Engine engine) {
    if (coding.rows != g.rows || coding.cols != g.cols)
        throw std::invalid_argument("coding size does not match the geometry");
    auto amps = illuminate(g, fq, feed);
    std::complex<double> gamma[2] = {meta_response_at(resp, fq.f_c, 0),
                                     meta_response_at(resp, fq.f_c, 1)};
    for (size_t i = 0; i < amps.size(); ++i) amps[i] *= gamma[coding.bits[i]];
    return near_field_coeffs(g, fq, amps, plane, engine);
}

FarFieldPattern nf_to_ff(const NearFieldPlane& plane, const GridSpec& grid) {
    if (plane.count < 1 || plane.field.empty()) throw std::invalid_argument("empty plane");
    int N = std::max(256, plane.count);

    std::vector<std::complex<double>> buf(size_t(N) * N, {0.0, 0.0});
    std::vector<std::complex<double>> spec(size_t(N) * N);
    for (int ix = 0; ix < plane.count; ++ix)
        for (int iy = 0; iy < plane.count; ++iy)
            buf[size_t(ix) * N + iy] = plane.field[size_t(ix) * plane.count + iy];

    // e^{+j k.r} kernel; indices above N/2 alias to negative frequencies
    fftw_plan fp = fftw_plan_dft_2d(N, N, reinterpret_cast<fftw_complex*>(buf.data()),
                                    reinterpret_cast<fftw_complex*>(spec.data()),
                                    FFTW_BACKWARD, FFTW_ESTIMATE);
    fftw_execute(fp);
    fftw_destroy_plan(fp);

    // the DFT saw sample 0 at x0 = coord(0), not at the origin
    double x0 = plane.coord(0);
    double dk = 2.0 * M_PI / (N * plane.pitch);
    for (int a = 0; a < N; ++a) {
        double kxa = dk * (a <= N / 2 ? a : a - N);
        for (int b = 0; b < N; ++b) {
            double kyb = dk * (b <= N / 2 ? b : b - N);
            spec[size_t(a) * N + b] *= std::polar(1.0, kxa * x0 + kyb * x0);
        }
    }

    double k0 = FrequencySpec{plane.freq_hz}.wavenumber();
    FarFieldPattern out;
    out.grid = grid;
    out.freq_hz = plane.freq_hz;
    out.field.resize(size_t(grid.theta_count) * grid.phi_count);

    auto node = [&](int a, int b) -> std::complex<double> {
        return spec[size_t(((a % N) + N) % N) * N + ((b % N) + N) % N];
    };

    for (int it = 0; it < grid.theta_count; ++it) {
        double th = (grid.theta_start + it * grid.theta_step) * deg;
        double st = std::sin(th), ct = std::cos(th);
        for (int ip = 0; ip < grid.phi_count; ++ip) {
            double ph = (grid.phi_start + ip * grid.phi_step) * deg;
            double fx = k0 * st * std::cos(ph) / dk;
            double fy = k0 * st * std::sin(ph) / dk;
            int a0 = int(std::floor(fx)), b0 = int(std::floor(fy));
            double tx = fx - a0, ty = fy - b0;
            std::complex<double> s =
                (1 - tx) * (1 - ty) * node(a0, b0) + tx * (1 - ty) * node(a0 + 1, b0) +
                (1 - tx) * ty * node(a0, b0 + 1) + tx * ty * node(a0 + 1, b0 + 1);
            // undo propagation to the plane, then apply the kz obliquity
            out.field[size_t(it) * grid.phi_count + ip] =
                ct * s * std::polar(1.0, k0 * ct * plane.z);
        }
    }
    return out;
}

static std::complex<double> plane_interp(const NearFieldPlane& p, double x, double y) {
    if (p.count == 1) return p.field[0];
    double fx = x / p.pitch + (p.count - 1) / 2.0;
    double fy = y / p.pitch + (p.count - 1) / 2.0;
    int ix0 = std::clamp(int(std::floor(fx)), 0, p.count - 2);
    int iy0 = std::clamp(int(std::floor(fy)), 0, p.count - 2);
    double tx = fx - ix0, ty = fy - iy0;
    auto at = [&](int ix, int iy) { return p.field[size_t(ix) * p.count + iy]; };
    return (1 - tx) * (1 - ty) * at(ix0, iy0) + tx * (1 - ty) * at(ix0 + 1, iy0) +
           (1 - tx) * ty * at(ix0, iy0 + 1) + tx * ty * at(ix0 + 1, iy0 + 1);
}

double winding_on_circle(const NearFieldPlane& plane, double radius) {
    const int steps = 256;
    double total = 0.0;
    double prev = std::arg(plane_interp(plane, radius, 0.0));
    for (int j = 1; j <= steps; ++j) {
        double ang = 2.0 * M_PI * (j % steps) / steps;
        double cur = std::arg(plane_interp(plane, radius * std::cos(ang), radius * std::sin(ang)));
        total += std::remainder(cur - prev, 2.0 * M_PI);
        prev = cur;
    }
    return total / (2.0 * M_PI);
}

int winding_number(const NearFieldPlane& plane) {
    if (plane.count < 3) throw std::invalid_argument("plane too small to trace a circle");
    double half = (plane.count - 1) / 2 * plane.pitch;

    // the phase is only clean near the intensity ring, so find it first
    auto ring_power = [&](double r) {
        const int steps = 256;
        double acc = 0.0;
        for (int j = 0; j < steps; ++j) {
            double ang = 2.0 * M_PI * j / steps;
            acc += std::norm(plane_interp(plane, r * std::cos(ang), r * std::sin(ang)));
        }
        return acc / steps;
    };
    double best_r = 2.0 * plane.pitch, best_p = -1.0;
    for (double r = 2.0 * plane.pitch; r <= 0.85 * half + 1e-12; r += plane.pitch / 2.0) {
        double pw = ring_power(r);
        if (pw > best_p) {
            best_p = pw;
            best_r = r;
        }
    }

    long votes[3];
    double scales[3] = {0.85, 1.0, 1.15};
    for (int i = 0; i < 3; ++i) {
        double r = std::clamp(scales[i] * best_r, plane.pitch, 0.95 * half);
        votes[i] = std::lround(winding_on_circle(plane, r));
    }
    std::sort(votes, votes + 3);
    return int(votes[1]);
}

}  // namespace metascope
