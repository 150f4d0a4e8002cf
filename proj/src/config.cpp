#include "hjlab/config.hpp"

#include <charconv>
#include <fstream>

namespace hjlab {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t");
    std::size_t b = s.find_last_not_of(" \t\r");
    if (a == std::string::npos) return "";
    return s.substr(a, b - a + 1);
}

double to_double(const std::string& s, const std::string& key) {
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    ensure_arg(res.ec == std::errc{} && res.ptr == s.data() + s.size(),
               "config: key '" + key + "' needs a number, got '" + s + "'");
    return v;
}

int to_int(const std::string& s, const std::string& key) {
    int v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    ensure_arg(res.ec == std::errc{} && res.ptr == s.data() + s.size(),
               "config: key '" + key + "' needs an integer, got '" + s + "'");
    return v;
}

} // namespace

Scheme parse_scheme(const std::string& s) {
    if (s == "godunov") return Scheme::Godunov;
    if (s == "lax-friedrichs" || s == "lf") return Scheme::LaxFriedrichs;
    if (s == "semi-lagrangian" || s == "sl") return Scheme::SemiLagrangian;
    throw std::invalid_argument("config: unknown scheme '" + s +
                                "' (godunov | lax-friedrichs | semi-lagrangian)");
}

BoundaryPolicy parse_boundary(const std::string& s) {
    if (s == "one-sided-upwind") return BoundaryPolicy::OneSidedUpwind;
    if (s == "frozen-extension") return BoundaryPolicy::FrozenExtension;
    throw std::invalid_argument("config: unknown boundary '" + s +
                                "' (one-sided-upwind | frozen-extension)");
}

void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "id") {
        cfg.id = value;
    } else if (key == "scheme") {
        cfg.scheme = parse_scheme(value);
    } else if (key == "dx") {
        cfg.dx = to_double(value, key);
    } else if (key == "cfl") {
        cfg.cfl = to_double(value, key);
    } else if (key == "T") {
        cfg.horizon = to_double(value, key);
    } else if (key == "x_min") {
        cfg.x_min = to_double(value, key);
    } else if (key == "x_max") {
        cfg.x_max = to_double(value, key);
    } else if (key == "c") {
        cfg.c = to_double(value, key);
    } else if (key == "eps") {
        cfg.eps = to_double(value, key);
    } else if (key == "tol") {
        cfg.tol = to_double(value, key);
    } else if (key == "window") {
        auto comma = value.find(',');
        ensure_arg(comma != std::string::npos, "config: window needs 'lo,hi', got '" + value + "'");
        double lo = to_double(trim(value.substr(0, comma)), key);
        double hi = to_double(trim(value.substr(comma + 1)), key);
        cfg.window = {lo, hi};
    } else if (key == "snapshot_stride") {
        cfg.snapshot_stride = to_int(value, key);
    } else if (key == "boundary") {
        cfg.boundary = parse_boundary(value);
    } else {
        throw std::invalid_argument("config: unknown key '" + key + "'");
    }
}

RunConfig parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    ensure(in.good(), "cannot open config: " + path.string());
    RunConfig cfg;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string s = trim(line);
        if (s.empty() || s[0] == '#') continue;
        auto eq = s.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(path.string() + ": line " + std::to_string(lineno) +
                                        ": expected 'key = value'");
        std::string key = trim(s.substr(0, eq));
        std::string value = trim(s.substr(eq + 1));
        try {
            apply_config_entry(cfg, key, value);
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument(path.string() + ": line " + std::to_string(lineno) + ": " +
                                        e.what());
        }
    }
    return cfg;
}

RunConfig merge_configs(const RunConfig& base, const RunConfig& overrides) {
    RunConfig out = base;
    if (!overrides.id.empty()) out.id = overrides.id;
    if (overrides.scheme) out.scheme = overrides.scheme;
    if (overrides.dx) out.dx = overrides.dx;
    if (overrides.cfl) out.cfl = overrides.cfl;
    if (overrides.horizon) out.horizon = overrides.horizon;
    if (overrides.x_min) out.x_min = overrides.x_min;
    if (overrides.x_max) out.x_max = overrides.x_max;
    if (overrides.c) out.c = overrides.c;
    if (overrides.eps) out.eps = overrides.eps;
    if (overrides.tol) out.tol = overrides.tol;
    if (overrides.window) out.window = overrides.window;
    if (overrides.snapshot_stride) out.snapshot_stride = overrides.snapshot_stride;
    if (overrides.boundary) out.boundary = overrides.boundary;
    return out;
}

void validate_config(const RunConfig& cfg) {
    if (cfg.cfl) ensure_arg(*cfg.cfl > 0 && *cfg.cfl <= 1.0, "config: cfl must lie in (0,1]");
    if (cfg.dx) ensure_arg(*cfg.dx > 0, "config: dx must be positive");
    if (cfg.horizon) ensure_arg(*cfg.horizon > 0, "config: T must be positive");
    if (cfg.x_min && cfg.x_max)
        ensure_arg(*cfg.x_min < *cfg.x_max, "config: x_min must be below x_max");
    if (cfg.window)
        ensure_arg(cfg.window->first < cfg.window->second, "config: window must be 'lo,hi' with lo < hi");
    if (cfg.snapshot_stride) ensure_arg(*cfg.snapshot_stride >= 1, "config: snapshot_stride >= 1");
    if (cfg.eps) ensure_arg(*cfg.eps > 0, "config: eps must be positive");
    if (cfg.tol) ensure_arg(*cfg.tol > 0, "config: tol must be positive");
}

} // namespace hjlab
