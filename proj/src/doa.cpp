#include "metascope/doa.hpp"

#include <cmath>
#include <stdexcept>

#include "metascope/rng.hpp"

namespace metascope {

static const double deg = M_PI / 180.0;

// Static (per-class) receive sums: plane-wave phase over the class's elements
// times the return path to the feed. The time dependence factors out per class.
static std::complex<double> class_sum(const ArrayGeometry& g, const FrequencySpec& fq,
                                      const std::vector<int>& idx, const Direction& inc) {
    double k0 = fq.wavenumber();
    double u = std::sin(inc.theta) * std::cos(inc.phi);
    double v = std::sin(inc.theta) * std::sin(inc.phi);
    std::complex<double> acc{0.0, 0.0};
    for (int i : idx) {
        int m = i / g.cols + 1, n = i % g.cols + 1;
        auto p = element_position(g, m, n);
        double L = feed_distance(g, m, n);
        acc += std::polar(1.0 / L, k0 * (p[0] * u + p[1] * v) - k0 * L);
    }
    return acc;
}

std::vector<std::complex<double>> synthesize_received(
    const ArrayGeometry& g, const FrequencySpec& fq, const ModulationPlan& plan,
    const Direction& incident, std::optional<double> snr_db, std::uint64_t seed) {
    validate(g);
    if (plan.samples_per_period < 16)
        throw std::invalid_argument("too few samples per modulation period");
    if (!(incident.theta < M_PI / 2.0))
        throw std::invalid_argument("incidence must come from the front half-space");
    if (snr_db && !std::isfinite(*snr_db)) throw std::invalid_argument("snr must be finite");

    std::complex<double> s1 = class_sum(g, fq, plan.sub1_idx, incident);
    std::complex<double> s2 = class_sum(g, fq, plan.sub2_idx, incident);
    std::complex<double> sp = class_sum(g, fq, plan.parked_idx, incident);

    int S = plan.samples_per_period;
    size_t total = size_t(plan.periods) * S;
    std::vector<std::complex<double>> x(total);
    for (size_t s = 0; s < total; ++s) {
        double frac = (double(s % S) + 0.5) / S;   // slot midpoint
        x[s] = plan.sub1.value(frac) * s1 + plan.sub2.value(frac) * s2 +
               plan.parked.value(frac) * sp;
    }

    if (snr_db) {
        std::complex<double> mean{0.0, 0.0};
        for (auto& v : x) mean += v;
        mean /= double(total);
        double sigma2 = std::norm(mean) * std::pow(10.0, -*snr_db / 10.0);
        double scale = std::sqrt(sigma2 / 2.0);
        SplitMix64 rng(seed);
        for (auto& v : x) {
            auto gp = gauss(rng);
            v += std::complex<double>(scale * gp.a, scale * gp.b);
        }
    }
    return x;
}

HarmonicSet extract_harmonics(const std::vector<std::complex<double>>& signal,
                              const ModulationPlan& plan, int h_max) {
    int S = plan.samples_per_period;
    if (S < 1) throw std::invalid_argument("plan has no sampling rate");
    if (signal.empty() || signal.size() % S != 0)
        throw std::invalid_argument("signal must span a whole number of periods");
    if (h_max < 0) throw std::invalid_argument("h_max must be >= 0");

    HarmonicSet out;
    out.h_max = h_max;
    out.bins.resize(2 * h_max + 1);
    double inv_n = 1.0 / double(signal.size());
    for (int h = -h_max; h <= h_max; ++h) {
        std::complex<double> acc{0.0, 0.0};
        for (size_t s = 0; s < signal.size(); ++s)
            acc += signal[s] * std::polar(1.0, -2.0 * M_PI * h * (double(s % S) + 0.5) / S);
        out.bins[h + h_max] = acc * inv_n;
    }
    return out;
}

std::optional<std::complex<double>> harmonic_ratio(const HarmonicSet& h) {
    double top = 0.0;
    for (auto& b : h.bins) top = std::max(top, std::abs(b));
    if (std::abs(h.at(0)) < 1e-12 * top) return std::nullopt;
    return h.at(1) / h.at(0);
}

DfEstimate estimate_direction(std::complex<double> r1, std::complex<double> r2,
                              const ModulationPlan& plan, const FrequencySpec& fq) {
    double lam = fq.wavelength();
    double D = plan.spacing;
    if (!(D > 0.0) || D > lam)
        throw std::invalid_argument("pair spacing must lie in (0, lambda]");

    std::complex<double> c{-2.0 / M_PI, -2.0 / M_PI};
    std::complex<double> q1 = r1 / c, q2 = r2 / c;

    DfEstimate est;
    est.r1 = r1;
    est.r2 = r2;
    est.u = std::atan(q1.real());
    est.v = std::atan(q2.real());
    est.mismatch = std::max(std::fabs(q1.imag()), std::fabs(q2.imag()));

    double st = lam * std::sqrt(est.u * est.u + est.v * est.v) / (M_PI * D);
    if (st > 1.0 + 1e-12)
        throw std::runtime_error("harmonic ratios exceed the visible region");

    if (std::fabs(est.u) < 1e-15 && std::fabs(est.v) < 1e-15) {
        est.theta = 0.0;
        est.phi = 0.0;
        est.phi_defined = false;
        return est;
    }
    est.theta = std::asin(std::min(st, 1.0));
    est.phi = wrap_2pi(std::atan2(est.v, est.u));
    return est;
}

DfResult df_experiment(const ArrayGeometry& g, const FrequencySpec& fq,
                       const std::vector<double>& preset_deg, int trials,
                       std::optional<double> snr_db, std::uint64_t master_seed) {
    if (trials < 1) throw std::invalid_argument("need at least one trial");
    ModulationPlan plan_x = df_plan(g, ModAxis::X);
    ModulationPlan plan_y = df_plan(g, ModAxis::Y);

    DfResult res;
    res.preset_deg = preset_deg;
    res.rmse_deg.reserve(preset_deg.size());

    for (size_t a = 0; a < preset_deg.size(); ++a) {
        double preset = preset_deg[a];
        Direction inc{std::fabs(preset) * deg, preset >= 0.0 ? 0.0 : M_PI};
        double sq_err = 0.0;
        for (int t = 0; t < trials; ++t) {
            std::uint64_t sx = derive_seed(master_seed, a, t, 0);
            std::uint64_t sy = derive_seed(master_seed, a, t, 1);
            auto hx = extract_harmonics(synthesize_received(g, fq, plan_x, inc, snr_db, sx),
                                        plan_x, 1);
            auto hy = extract_harmonics(synthesize_received(g, fq, plan_y, inc, snr_db, sy),
                                        plan_y, 1);
            std::complex<double> r1 = harmonic_ratio(hx).value_or(std::complex<double>{0, 0});
            std::complex<double> r2 = harmonic_ratio(hy).value_or(std::complex<double>{0, 0});
            DfEstimate est = estimate_direction(r1, r2, plan_x, fq);

            double signed_theta = est.theta / deg * (std::cos(est.phi) >= 0.0 ? 1.0 : -1.0);
            res.rows.push_back({preset, inc.phi / deg, signed_theta, est.phi / deg, t, sx});
            double e = preset - signed_theta;
            sq_err += e * e;
        }
        res.rmse_deg.push_back(std::sqrt(sq_err / trials));
    }
    return res;
}

}  // namespace metascope
