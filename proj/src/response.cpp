#include "metascope/response.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace metascope {

static const double deg = M_PI / 180.0;

void validate(const MetaAtomResponse& r) {
    if (r.entries.empty()) throw std::invalid_argument("response table is empty");
    double prev = -1.0;
    for (auto& e : r.entries) {
        if (e.freq_hz <= prev)
            throw std::invalid_argument("response table frequencies must strictly increase");
        prev = e.freq_hz;
        if (!(e.mag0 > 0.0) || !(e.mag1 > 0.0) || e.mag0 > 1.0 || e.mag1 > 1.0)
            throw std::invalid_argument("reflection magnitudes must be in (0, 1]");
    }
}

std::complex<double> meta_response_at(const MetaAtomResponse& r, double f_hz, int bit) {
    if (bit != 0 && bit != 1) throw std::invalid_argument("bit state must be 0 or 1");
    auto& e = r.entries;
    if (e.empty()) throw std::invalid_argument("response table is empty");
    if (f_hz < e.front().freq_hz || f_hz > e.back().freq_hz)
        throw std::out_of_range("frequency outside the tabulated band");

    auto it = std::lower_bound(e.begin(), e.end(), f_hz,
                               [](const MetaAtomResponse::Entry& en, double f) {
                                   return en.freq_hz < f;
                               });
    size_t hi = size_t(it - e.begin());
    if (hi == 0) hi = 1;
    const auto& a = e[hi - 1];
    const auto& b = e[hi];
    double t = (f_hz - a.freq_hz) / (b.freq_hz - a.freq_hz);

    // endpoints reproduce the table bit for bit; phases interpolate on the
    // unwrapped branch
    double mag = bit ? a.mag1 * (1.0 - t) + b.mag1 * t : a.mag0 * (1.0 - t) + b.mag0 * t;
    double ph = bit ? a.phase1 * (1.0 - t) + b.phase1 * t : a.phase0 * (1.0 - t) + b.phase0 * t;
    return std::polar(mag, ph);
}

MetaAtomResponse builtin_response() {
    MetaAtomResponse r;
    for (int i = 0; i <= 80; ++i) {
        double f = 2.60 + 0.01 * i;   // GHz
        double m0_db = -(0.58 - 0.50 * std::exp(-std::pow((f - 3.0) / 0.13, 2.0)));
        double m1_db = -(0.59 - 0.44 * std::exp(-std::pow((f - 3.0) / 0.15, 2.0)) +
                         0.015 * std::cos(2.0 * M_PI * (f - 3.0) / 0.1));
        double dphi = 180.0 + 40.0 * (f - 2.985);
        double p0 = 90.0 - 300.0 * (f - 2.6);
        r.entries.push_back({f * 1e9, std::pow(10.0, m0_db / 20.0), p0 * deg,
                             std::pow(10.0, m1_db / 20.0), (p0 - dphi) * deg});
    }
    return r;
}

MetaAtomResponse load_response_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open response table: " + path);
    std::string line;
    if (!std::getline(in, line) || line != "freq_hz,mag0_db,phase0_deg,mag1_db,phase1_deg")
        throw std::runtime_error("bad response table header in " + path);

    MetaAtomResponse r;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        double f, m0, p0, m1, p1;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf", &f, &m0, &p0, &m1, &p1) != 5)
            throw std::runtime_error("bad response table row: " + line);
        MetaAtomResponse::Entry e{f, std::pow(10.0, m0 / 20.0), p0 * deg,
                                  std::pow(10.0, m1 / 20.0), p1 * deg};
        if (!r.entries.empty()) {
            // rewrap onto the previous row's branch so interpolation stays continuous
            auto& prev = r.entries.back();
            e.phase0 = prev.phase0 + std::remainder(e.phase0 - prev.phase0, 2.0 * M_PI);
            e.phase1 = prev.phase1 + std::remainder(e.phase1 - prev.phase1, 2.0 * M_PI);
        }
        r.entries.push_back(e);
    }
    validate(r);
    return r;
}

std::string response_to_csv(const MetaAtomResponse& r) {
    std::string out = "freq_hz,mag0_db,phase0_deg,mag1_db,phase1_deg\n";
    char buf[200];
    for (auto& e : r.entries) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", e.freq_hz,
                      20.0 * std::log10(e.mag0), e.phase0 / deg, 20.0 * std::log10(e.mag1),
                      e.phase1 / deg);
        out += buf;
    }
    return out;
}

}  // namespace metascope
