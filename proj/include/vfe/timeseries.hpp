#ifndef VFE_TIMESERIES_HPP
#define VFE_TIMESERIES_HPP

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "vfe/errors.hpp"

namespace vfe {

// One sampled instant of a run: per-point curve data plus per-block scalars.
// psi is the raw transform at this instant (no gauge factor applied), gauge
// is the accumulated phase integral used to correct it, and nls_residual is
// the certification residual attributed to this block (0 where the centered
// time stencil does not exist, i.e. the first and last stored blocks).
struct TimeSeriesBlock {
    double t = 0.0;
    std::vector<double> s;
    std::vector<double> kappa;
    std::vector<double> tau;
    std::vector<double> psi_re;
    std::vector<double> psi_im;
    double A = 0.0;
    double gauge = 0.0;
    double nls_residual = 0.0;
    double arc_drift = 0.0;
    std::vector<double> constraint_res;
};

struct TimeSeries {
    std::vector<TimeSeriesBlock> blocks;
};

namespace detail {

inline void append_g17(std::string& out, double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    out += buf;
}

} // namespace detail

inline const char* time_series_header() {
    return "t,s,kappa,tau,psi_re,psi_im,A,gauge,nls_residual,arc_drift,constraint_res";
}

inline std::string to_csv(const TimeSeries& ts) {
    std::string out = time_series_header();
    out += '\n';
    for (const TimeSeriesBlock& b : ts.blocks) {
        for (std::size_t i = 0; i < b.s.size(); ++i) {
            detail::append_g17(out, b.t);
            out += ',';
            detail::append_g17(out, b.s[i]);
            out += ',';
            detail::append_g17(out, b.kappa[i]);
            out += ',';
            detail::append_g17(out, b.tau[i]);
            out += ',';
            detail::append_g17(out, b.psi_re[i]);
            out += ',';
            detail::append_g17(out, b.psi_im[i]);
            out += ',';
            detail::append_g17(out, b.A);
            out += ',';
            detail::append_g17(out, b.gauge);
            out += ',';
            detail::append_g17(out, b.nls_residual);
            out += ',';
            detail::append_g17(out, b.arc_drift);
            out += ',';
            detail::append_g17(out, b.constraint_res[i]);
            out += '\n';
        }
    }
    return out;
}

inline TimeSeries from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw UsageError("csv: empty input");
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
    if (line != time_series_header())
        throw UsageError("csv: unexpected header: '" + line + "'");

    TimeSeries ts;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
        if (line.empty()) continue;
        double f[11];
        std::size_t pos = 0;
        for (int k = 0; k < 11; ++k) {
            std::size_t comma = (k == 10) ? line.size() : line.find(',', pos);
            if (comma == std::string::npos)
                throw UsageError("csv line " + std::to_string(lineno) + ": expected 11 fields");
            std::string field = line.substr(pos, comma - pos);
            std::size_t used = 0;
            try {
                f[k] = std::stod(field, &used);
            } catch (const std::exception&) {
                throw UsageError("csv line " + std::to_string(lineno) + ": bad number '" + field + "'");
            }
            if (used != field.size())
                throw UsageError("csv line " + std::to_string(lineno) + ": bad number '" + field + "'");
            pos = comma + 1;
        }
        bool fresh = ts.blocks.empty() ||
                     std::memcmp(&ts.blocks.back().t, &f[0], sizeof(double)) != 0;
        if (fresh) {
            TimeSeriesBlock b;
            b.t = f[0];
            b.A = f[6];
            b.gauge = f[7];
            b.nls_residual = f[8];
            b.arc_drift = f[9];
            ts.blocks.push_back(std::move(b));
        }
        TimeSeriesBlock& b = ts.blocks.back();
        b.s.push_back(f[1]);
        b.kappa.push_back(f[2]);
        b.tau.push_back(f[3]);
        b.psi_re.push_back(f[4]);
        b.psi_im.push_back(f[5]);
        b.constraint_res.push_back(f[10]);
    }
    return ts;
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw UsageError("cannot open output file for writing: " + path);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw UsageError("failed writing output file: " + path);
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace vfe

#endif
