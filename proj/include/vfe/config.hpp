#ifndef VFE_CONFIG_HPP
#define VFE_CONFIG_HPP

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <string>

#include "vfe/errors.hpp"
#include "vfe/generators.hpp"
#include "vfe/space_form.hpp"

namespace vfe {

// Flat key = value configuration with [section] headers and '#' comments.
// Unknown sections or keys are usage errors (typos must not silently pick
// defaults).  The recognized keys are listed in the README and in
// configs/*.cfg.
struct ExperimentConfig {
    // [space]
    ModelKind kind = ModelKind::Euclidean;
    double K0 = 0.0;
    // [initial]
    std::string generator = "circle";
    GeneratorParams params;
    std::size_t N = 256;
    // [time]
    double dt = 1e-4;
    double T_end = 0.01;
    double cfl_c = 0.25;
    // [flow]
    int reproject_every = 0;
    std::size_t base_index = 0;
    double kappa_min = -1.0;
    double tol_drift = 1e-5;
    double tol_manifold = 1e-9;
    // [certify]
    bool certify = false;
    // [output]
    std::string csv_path = "vfe_out.csv";
    std::string summary_path = "vfe_out.txt";
    std::size_t output_every = 0; // 0 = auto (about 50 time blocks)
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return {};
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

inline std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

inline double parse_double(const std::string& v, int line) {
    std::size_t pos = 0;
    double x;
    try {
        x = std::stod(v, &pos);
    } catch (const std::exception&) {
        throw UsageError("config line " + std::to_string(line) + ": not a number: '" + v + "'");
    }
    if (pos != v.size())
        throw UsageError("config line " + std::to_string(line) + ": trailing junk in number: '" + v + "'");
    return x;
}

inline long parse_int(const std::string& v, int line) {
    std::size_t pos = 0;
    long x;
    try {
        x = std::stol(v, &pos);
    } catch (const std::exception&) {
        throw UsageError("config line " + std::to_string(line) + ": not an integer: '" + v + "'");
    }
    if (pos != v.size())
        throw UsageError("config line " + std::to_string(line) + ": trailing junk in integer: '" + v + "'");
    return x;
}

inline bool parse_bool(const std::string& v, int line) {
    std::string s = lower(v);
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    throw UsageError("config line " + std::to_string(line) + ": not a boolean: '" + v + "'");
}

} // namespace detail

inline ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream in(text);
    std::string raw, section;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string s = raw;
        if (auto hash = s.find('#'); hash != std::string::npos) s.erase(hash);
        s = detail::trim(s);
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']')
                throw UsageError("config line " + std::to_string(line) + ": malformed section header");
            section = detail::lower(detail::trim(s.substr(1, s.size() - 2)));
            if (section != "space" && section != "initial" && section != "time" &&
                section != "flow" && section != "certify" && section != "output")
                throw UsageError("config line " + std::to_string(line) + ": unknown section [" +
                                 section + "]");
            continue;
        }
        auto eq = s.find('=');
        if (eq == std::string::npos)
            throw UsageError("config line " + std::to_string(line) + ": expected key = value");
        std::string key = detail::lower(detail::trim(s.substr(0, eq)));
        std::string val = detail::trim(s.substr(eq + 1));
        if (val.empty())
            throw UsageError("config line " + std::to_string(line) + ": empty value for '" + key + "'");

        auto unknown = [&]() -> UsageError {
            return UsageError("config line " + std::to_string(line) + ": unknown key '" + key +
                              "' in section [" + section + "]");
        };
        if (section == "space") {
            if (key == "kind") {
                std::string k = detail::lower(val);
                if (k == "euclidean") cfg.kind = ModelKind::Euclidean;
                else if (k == "spherical") cfg.kind = ModelKind::Spherical;
                else if (k == "hyperbolic") cfg.kind = ModelKind::Hyperbolic;
                else throw UsageError("config line " + std::to_string(line) +
                                      ": kind must be euclidean, spherical or hyperbolic");
            } else if (key == "k0") cfg.K0 = detail::parse_double(val, line);
            else throw unknown();
        } else if (section == "initial") {
            if (key == "generator") cfg.generator = detail::lower(val);
            else if (key == "n") cfg.N = static_cast<std::size_t>(detail::parse_int(val, line));
            else if (key == "radius") cfg.params.radius = detail::parse_double(val, line);
            else if (key == "mode") cfg.params.mode = static_cast<int>(detail::parse_int(val, line));
            else if (key == "amplitude") cfg.params.amplitude = detail::parse_double(val, line);
            else if (key == "p") cfg.params.p = static_cast<int>(detail::parse_int(val, line));
            else if (key == "q") cfg.params.q = static_cast<int>(detail::parse_int(val, line));
            else if (key == "major_radius") cfg.params.major_radius = detail::parse_double(val, line);
            else if (key == "minor_radius") cfg.params.minor_radius = detail::parse_double(val, line);
            else if (key == "theta0") cfg.params.theta0 = detail::parse_double(val, line);
            else throw unknown();
        } else if (section == "time") {
            if (key == "dt") cfg.dt = detail::parse_double(val, line);
            else if (key == "t_end") cfg.T_end = detail::parse_double(val, line);
            else if (key == "cfl_c") cfg.cfl_c = detail::parse_double(val, line);
            else throw unknown();
        } else if (section == "flow") {
            if (key == "reproject_every") cfg.reproject_every = static_cast<int>(detail::parse_int(val, line));
            else if (key == "base_index") cfg.base_index = static_cast<std::size_t>(detail::parse_int(val, line));
            else if (key == "kappa_min") cfg.kappa_min = detail::parse_double(val, line);
            else if (key == "tol_drift") cfg.tol_drift = detail::parse_double(val, line);
            else if (key == "tol_manifold") cfg.tol_manifold = detail::parse_double(val, line);
            else throw unknown();
        } else if (section == "certify") {
            if (key == "enabled") cfg.certify = detail::parse_bool(val, line);
            else throw unknown();
        } else if (section == "output") {
            if (key == "csv") cfg.csv_path = val;
            else if (key == "summary") cfg.summary_path = val;
            else if (key == "every") cfg.output_every = static_cast<std::size_t>(detail::parse_int(val, line));
            else throw unknown();
        } else {
            throw UsageError("config line " + std::to_string(line) +
                             ": key outside any [section]: '" + key + "'");
        }
    }
    return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

inline void validate_config(const ExperimentConfig& cfg) {
    if (cfg.N < 16 || (cfg.N & (cfg.N - 1)) != 0)
        throw UsageError("config: N must be a power of two >= 16, got " + std::to_string(cfg.N));
    if (!(cfg.dt > 0.0)) throw UsageError("config: dt must be positive");
    if (!(cfg.T_end > 0.0)) throw UsageError("config: T_end must be positive");
    if (!(cfg.cfl_c > 0.0)) throw UsageError("config: cfl_c must be positive");
    if (cfg.base_index >= cfg.N) throw UsageError("config: base_index out of range");
    switch (cfg.kind) {
        case ModelKind::Euclidean:
            if (cfg.K0 != 0.0) throw UsageError("config: Euclidean requires K0 = 0");
            break;
        case ModelKind::Spherical:
            if (!(cfg.K0 > 0.0)) throw UsageError("config: Spherical requires K0 > 0");
            break;
        case ModelKind::Hyperbolic:
            if (!(cfg.K0 < 0.0)) throw UsageError("config: Hyperbolic requires K0 < 0");
            break;
    }
}

inline SpaceForm space_form_of(const ExperimentConfig& cfg) {
    return cfg.kind == ModelKind::Euclidean ? SpaceForm::euclidean()
                                            : SpaceForm::with_curvature(cfg.K0);
}

} // namespace vfe

#endif
