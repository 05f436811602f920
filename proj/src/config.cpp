#include "fannowave/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "fannowave/io.hpp"

namespace fannowave {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double to_double(const std::string& v, const std::string& key) {
    try {
        size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (trim(v.substr(pos)).empty()) return x;
    } catch (const std::exception&) {
    }
    throw ConfigError(key + ": expected a number, got '" + v + "'");
}

long long to_ll(const std::string& v, const std::string& key) {
    try {
        size_t pos = 0;
        const long long x = std::stoll(v, &pos);
        if (trim(v.substr(pos)).empty()) return x;
    } catch (const std::exception&) {
    }
    throw ConfigError(key + ": expected an integer, got '" + v + "'");
}

int to_int(const std::string& v, const std::string& key) {
    return static_cast<int>(to_ll(v, key));
}

std::vector<std::string> split(const std::string& v, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream is(v);
    while (std::getline(is, cur, sep)) parts.push_back(trim(cur));
    return parts;
}

std::vector<double> to_list(const std::string& v, const std::string& key) {
    std::vector<double> out;
    if (trim(v).empty()) return out;
    for (const std::string& p : split(v, ',')) out.push_back(to_double(p, key));
    return out;
}

std::vector<Harmonic> to_harmonics(const std::string& v, const std::string& key) {
    std::vector<Harmonic> out;
    if (trim(v).empty()) return out;
    for (const std::string& p : split(v, ',')) {
        const std::vector<std::string> f = split(p, ':');
        if (f.size() != 3)
            throw ConfigError(key + ": expected amp:k:phase triples, got '" + p + "'");
        out.push_back({to_double(f[0], key), to_int(f[1], key), to_double(f[2], key)});
    }
    return out;
}

void finalize(SimConfig& cfg, bool alpha_star_given, std::ostream* warn) {
    if (!(cfg.gamma > 1.0) || !(cfg.gamma < 3.0))
        throw ConfigError("gas.gamma: need 1 < gamma < 3, got " + format_num(cfg.gamma));
    if (cfg.phi_kind != "exp" && cfg.phi_kind != "const")
        throw ConfigError("gas.phi_kind: expected exp or const, got '" + cfg.phi_kind + "'");
    if (cfg.phi_kind == "const" && !(cfg.phi0 > 0.0))
        throw ConfigError("gas.phi0: must be positive, got " + format_num(cfg.phi0));

    if (cfg.damping_kind != "const" && cfg.damping_kind != "poly")
        throw ConfigError("damping.kind: expected const or poly, got '" + cfg.damping_kind + "'");
    if (cfg.damping_coeffs.empty()) throw ConfigError("damping.coeffs: must not be empty");
    if (cfg.damping_kind == "const" && cfg.damping_coeffs.size() != 1)
        throw ConfigError("damping.kind: const damping takes exactly one coefficient");

    if (!(cfg.L > 0.0)) throw ConfigError("duct.L: must be positive");
    if (cfg.n_x < 3) throw ConfigError("duct.n_x: need at least 3 nodes");
    if (!(cfg.P > 0.0)) throw ConfigError("time.P: must be positive");
    if (cfg.n_t < 2) throw ConfigError("time.n_t: need at least 2 nodes");
    if (!(cfg.cfl > 0.0) || !(cfg.cfl <= 1.0)) throw ConfigError("time.cfl: must lie in (0, 1]");

    DampingProfile dp;
    try {
        dp = DampingProfile(cfg.damping_coeffs, cfg.L);
    } catch (const DomainError& e) {
        throw ConfigError(std::string("damping.coeffs: ") + e.what());
    }
    if (!alpha_star_given) {
        cfg.alpha_star = dp.alpha_star();
    } else {
        if (cfg.alpha_star > 0.0) throw ConfigError("damping.alpha_star: must be nonpositive");
        if (cfg.alpha_star > dp.alpha_star() + 1e-12)
            throw ConfigError("damping.alpha_star: declared bound " + format_num(cfg.alpha_star) +
                              " sits above the sampled minimum " + format_num(dp.alpha_star()));
    }

    if (!(cfg.u_minus > 0.0) || !(cfg.u_minus < cfg.c_minus))
        throw ConfigError("inflow.u_minus: need 0 < u_minus < c_minus");

    if (cfg.boundary_reference != "steady" && cfg.boundary_reference != "absolute")
        throw ConfigError("boundary.reference: expected steady or absolute, got '" +
                          cfg.boundary_reference + "'");
    if (!(std::abs(cfg.K1) <= 1.0)) throw ConfigError("boundary.K1: need |K1| <= 1");
    if (!(std::abs(cfg.K3) <= 1.0)) throw ConfigError("boundary.K3: need |K3| <= 1");
    if (!(std::abs(cfg.K1 * cfg.K3) < 1.0))
        throw ConfigError("boundary.K1: need |K1 * K3| < 1, got " + format_num(cfg.K1 * cfg.K3));

    const char* names[3] = {"boundary.G1.harmonics", "boundary.G2.harmonics", "boundary.G3.harmonics"};
    const SignalSpec* sigs[3] = {&cfg.G1, &cfg.G2, &cfg.G3};
    for (int i = 0; i < 3; ++i)
        for (const Harmonic& h : sigs[i]->harmonics)
            if (h.k < 1) throw ConfigError(std::string(names[i]) + ": harmonic index must be >= 1");

    if (!(cfg.tol_iter > 0.0)) throw ConfigError("builder.tol_iter: must be positive");
    if (cfg.max_iter < 1) throw ConfigError("builder.max_iter: need at least 1");
    if (cfg.windows < 1) throw ConfigError("harness.windows: need at least 1");
    if (!(cfg.bump_amplitude >= 0.0)) throw ConfigError("harness.bump_amplitude: must be nonnegative");
    if (!(cfg.bump_lo >= 0.1) || !(cfg.bump_hi <= 0.9) || !(cfg.bump_lo < cfg.bump_hi))
        throw ConfigError("harness.bump_support: need 0.1 <= lo < hi <= 0.9");
    if (cfg.save_stride < 0) throw ConfigError("harness.save_stride: must be nonnegative");

    if (warn) {
        if (std::abs(cfg.K2) > 1.0)
            *warn << "warning: boundary.K2 = " << format_num(cfg.K2)
                  << " exceeds 1 in magnitude; outside the validated regime\n";
        if (std::abs(cfg.K1) == 1.0 || std::abs(cfg.K3) == 1.0)
            *warn << "warning: a feedback gain sits on |K| = 1, the edge of the "
                     "dissipative regime\n";
    }
}

}  // namespace

SimConfig parse_config_text(const std::string& text, std::ostream* warnings) {
    SimConfig cfg;
    bool alpha_star_given = false;
    std::set<std::string> seen;

    std::istringstream is(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(is, raw)) {
        ++lineno;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;
        const std::string ln = "line " + std::to_string(lineno);

        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(ln + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(ln + ": empty key");
        if (!seen.insert(key).second) throw ConfigError(ln + ": duplicate key '" + key + "'");

        if (key == "gas.gamma") cfg.gamma = to_double(val, key);
        else if (key == "gas.phi_kind") cfg.phi_kind = val;
        else if (key == "gas.phi0") cfg.phi0 = to_double(val, key);
        else if (key == "damping.kind") cfg.damping_kind = val;
        else if (key == "damping.coeffs") cfg.damping_coeffs = to_list(val, key);
        else if (key == "damping.alpha_star") { cfg.alpha_star = to_double(val, key); alpha_star_given = true; }
        else if (key == "inflow.u_minus") cfg.u_minus = to_double(val, key);
        else if (key == "inflow.c_minus") cfg.c_minus = to_double(val, key);
        else if (key == "inflow.S_minus") cfg.S_minus = to_double(val, key);
        else if (key == "duct.L") cfg.L = to_double(val, key);
        else if (key == "duct.n_x") cfg.n_x = to_int(val, key);
        else if (key == "time.P") cfg.P = to_double(val, key);
        else if (key == "time.n_t") cfg.n_t = to_int(val, key);
        else if (key == "time.cfl") cfg.cfl = to_double(val, key);
        else if (key == "boundary.reference") cfg.boundary_reference = val;
        else if (key == "boundary.K1") cfg.K1 = to_double(val, key);
        else if (key == "boundary.K2") cfg.K2 = to_double(val, key);
        else if (key == "boundary.K3") cfg.K3 = to_double(val, key);
        else if (key == "boundary.G1.mean") cfg.G1.mean = to_double(val, key);
        else if (key == "boundary.G1.harmonics") cfg.G1.harmonics = to_harmonics(val, key);
        else if (key == "boundary.G2.mean") cfg.G2.mean = to_double(val, key);
        else if (key == "boundary.G2.harmonics") cfg.G2.harmonics = to_harmonics(val, key);
        else if (key == "boundary.G3.mean") cfg.G3.mean = to_double(val, key);
        else if (key == "boundary.G3.harmonics") cfg.G3.harmonics = to_harmonics(val, key);
        else if (key == "builder.tol_iter") cfg.tol_iter = to_double(val, key);
        else if (key == "builder.max_iter") cfg.max_iter = to_int(val, key);
        else if (key == "harness.windows") cfg.windows = to_int(val, key);
        else if (key == "harness.bump_amplitude") cfg.bump_amplitude = to_double(val, key);
        else if (key == "harness.bump_support") {
            const std::vector<double> s = to_list(val, key);
            if (s.size() != 2) throw ConfigError(key + ": expected two comma-separated fractions");
            cfg.bump_lo = s[0];
            cfg.bump_hi = s[1];
        }
        else if (key == "harness.save_stride") cfg.save_stride = to_int(val, key);
        else if (key == "seed") cfg.seed = to_ll(val, key);
        else throw ConfigError(ln + ": unknown key '" + key + "'");
    }

    finalize(cfg, alpha_star_given, warnings);
    return cfg;
}

SimConfig load_config(const std::string& path, std::ostream* warnings) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), warnings);
}

std::vector<std::pair<std::string, std::string>> config_echo(const SimConfig& cfg) {
    auto join_list = [](const std::vector<double>& v) {
        std::string s;
        for (size_t i = 0; i < v.size(); ++i) {
            if (i) s += ",";
            s += format_num(v[i]);
        }
        return s;
    };
    auto join_harm = [](const std::vector<Harmonic>& v) {
        std::string s;
        for (size_t i = 0; i < v.size(); ++i) {
            if (i) s += ",";
            s += format_num(v[i].amplitude) + ":" + std::to_string(v[i].k) + ":" +
                 format_num(v[i].phase);
        }
        return s;
    };

    return {
        {"gas.gamma", format_num(cfg.gamma)},
        {"gas.phi_kind", cfg.phi_kind},
        {"gas.phi0", format_num(cfg.phi0)},
        {"damping.kind", cfg.damping_kind},
        {"damping.coeffs", join_list(cfg.damping_coeffs)},
        {"damping.alpha_star", format_num(cfg.alpha_star)},
        {"inflow.u_minus", format_num(cfg.u_minus)},
        {"inflow.c_minus", format_num(cfg.c_minus)},
        {"inflow.S_minus", format_num(cfg.S_minus)},
        {"duct.L", format_num(cfg.L)},
        {"duct.n_x", std::to_string(cfg.n_x)},
        {"time.P", format_num(cfg.P)},
        {"time.n_t", std::to_string(cfg.n_t)},
        {"time.cfl", format_num(cfg.cfl)},
        {"boundary.reference", cfg.boundary_reference},
        {"boundary.K1", format_num(cfg.K1)},
        {"boundary.K2", format_num(cfg.K2)},
        {"boundary.K3", format_num(cfg.K3)},
        {"boundary.G1.mean", format_num(cfg.G1.mean)},
        {"boundary.G1.harmonics", join_harm(cfg.G1.harmonics)},
        {"boundary.G2.mean", format_num(cfg.G2.mean)},
        {"boundary.G2.harmonics", join_harm(cfg.G2.harmonics)},
        {"boundary.G3.mean", format_num(cfg.G3.mean)},
        {"boundary.G3.harmonics", join_harm(cfg.G3.harmonics)},
        {"builder.tol_iter", format_num(cfg.tol_iter)},
        {"builder.max_iter", std::to_string(cfg.max_iter)},
        {"harness.windows", std::to_string(cfg.windows)},
        {"harness.bump_amplitude", format_num(cfg.bump_amplitude)},
        {"harness.bump_support", format_num(cfg.bump_lo) + "," + format_num(cfg.bump_hi)},
        {"harness.save_stride", std::to_string(cfg.save_stride)},
        {"seed", std::to_string(cfg.seed)},
    };
}

GasModel make_gas(const SimConfig& cfg) {
    return GasModel(cfg.gamma, cfg.phi_kind == "exp" ? PhiKind::Exponential : PhiKind::Constant,
                    cfg.phi0);
}

DampingProfile make_damping(const SimConfig& cfg) { return {cfg.damping_coeffs, cfg.L}; }

InflowState make_inflow(const SimConfig& cfg) { return {cfg.u_minus, cfg.c_minus, cfg.S_minus}; }

BoundarySpec make_boundary(const SimConfig& cfg) {
    BoundarySpec spec;
    spec.P = cfg.P;
    spec.K1 = cfg.K1;
    spec.K2 = cfg.K2;
    spec.K3 = cfg.K3;
    spec.reference = cfg.boundary_reference == "steady" ? BoundaryReference::Steady
                                                        : BoundaryReference::Absolute;
    spec.G1 = cfg.G1;
    spec.G2 = cfg.G2;
    spec.G3 = cfg.G3;
    spec.validate();
    return spec;
}

PeriodicGrid make_grid(const SimConfig& cfg) { return {cfg.P, cfg.n_t, cfg.L, cfg.n_x}; }

BuildOptions make_build_options(const SimConfig& cfg) {
    BuildOptions opts;
    opts.tol_iter = cfg.tol_iter;
    opts.max_iter = cfg.max_iter;
    return opts;
}

SimulateOptions make_sim_options(const SimConfig& cfg) {
    SimulateOptions opts;
    opts.cfl = cfg.cfl;
    opts.save_stride = cfg.save_stride;
    return opts;
}

StabilityOptions make_stability_options(const SimConfig& cfg) {
    StabilityOptions opts;
    opts.windows = cfg.windows;
    opts.bump_amplitude = cfg.bump_amplitude;
    opts.bump_center = 0.5 * (cfg.bump_lo + cfg.bump_hi);
    opts.bump_half_width = 0.5 * (cfg.bump_hi - cfg.bump_lo);
    opts.sim = make_sim_options(cfg);
    return opts;
}

SimConfig refined(const SimConfig& cfg, int factor) {
    if (factor < 1) throw UsageError("refined: factor must be at least 1");
    SimConfig out = cfg;
    out.n_x = factor * (cfg.n_x - 1) + 1;
    out.n_t = factor * cfg.n_t;
    return out;
}

}  // namespace fannowave
