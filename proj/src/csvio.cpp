#include "metascope/csvio.hpp"

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <unistd.h>

namespace metascope {

void atomic_write(const std::string& path, const std::string& text) {
    std::string tmp = path + ".tmp" + std::to_string(getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot create " + tmp);
        out << text;
        if (!out.flush()) throw std::runtime_error("write failed: " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

static void append_fmt(std::string& s, const char* fmt, ...) {
    char buf[256];
    va_list ap;
    va_start(ap, fmt);
    vsnprintf(buf, sizeof buf, fmt, ap);
    va_end(ap);
    s += buf;
}

std::string pattern_to_csv(const FarFieldPattern& p) {
    double peak = 0.0;
    for (auto& e : p.field) peak = std::max(peak, std::abs(e));

    std::string s = "theta_deg,phi_deg,re,im,mag_db\n";
    s.reserve(s.size() + p.field.size() * 60);
    for (int it = 0; it < p.grid.theta_count; ++it)
        for (int ip = 0; ip < p.grid.phi_count; ++ip) {
            auto e = p.at(it, ip);
            double m = std::abs(e);
            double db = (m > 0.0 && peak > 0.0) ? 20.0 * std::log10(m / peak) : -400.0;
            append_fmt(s, "%.10g,%.10g,%.9e,%.9e,%.6f\n", p.theta(it), p.phi(ip), e.real(),
                       e.imag(), db);
        }
    return s;
}

std::string plane_to_csv(const NearFieldPlane& p) {
    std::string s = "x_m,y_m,re,im\n";
    s.reserve(s.size() + p.field.size() * 50);
    for (int iy = 0; iy < p.count; ++iy)
        for (int ix = 0; ix < p.count; ++ix) {
            auto e = p.field[size_t(ix) * p.count + iy];
            append_fmt(s, "%.10g,%.10g,%.9e,%.9e\n", p.coord(ix), p.coord(iy), e.real(),
                       e.imag());
        }
    return s;
}

std::string df_trials_to_csv(const DfResult& r) {
    std::string s = "theta_preset_deg,phi_preset_deg,theta_est_deg,phi_est_deg,trial,seed\n";
    for (auto& row : r.rows)
        append_fmt(s, "%.10g,%.10g,%.10g,%.10g,%d,%llu\n", row.theta_preset_deg,
                   row.phi_preset_deg, row.theta_est_deg, row.phi_est_deg, row.trial,
                   (unsigned long long)row.seed);
    return s;
}

std::string df_rmse_to_csv(const DfResult& r) {
    std::string s = "theta_preset_deg,rmse_deg\n";
    for (size_t i = 0; i < r.preset_deg.size(); ++i)
        append_fmt(s, "%.10g,%.10g\n", r.preset_deg[i], r.rmse_deg[i]);
    return s;
}

}  // namespace metascope
