// Flat dotted-key configuration files (key = value, one per line, # comments)
// aggregating every run parameter, with validation that names the offending
// key. A config fully resolves at load time: omitted keys take the documented
// defaults below, so the echo of a loaded config reloads to an equal one.
//
//   gas.gamma = 1.4            adiabatic exponent, 1 < gamma < 3
//   gas.phi_kind = exp         pressure entropy factor: exp | const
//   gas.phi0 = 1               constant phi value (const kind only)
//   damping.kind = const       const | poly
//   damping.coeffs = -0.2      polynomial coefficients, lowest degree first
//   damping.alpha_star = *     declared lower bound; default: sampled min
//   inflow.u_minus = 0.2       0 < u- < c-
//   inflow.c_minus = 1
//   inflow.S_minus = 0
//   duct.L = 1                 duct length, n_x >= 3 nodes
//   duct.n_x = 512
//   time.P = 2                 forcing period, n_t >= 2 time nodes, cfl in (0,1]
//   time.n_t = 256
//   time.cfl = 0.9
//   boundary.reference = steady   steady: G means are offsets from the steady
//                                 anchors; absolute: literal values
//   boundary.K1 = 0            |K1| <= 1, |K3| <= 1, |K1 K3| < 1
//   boundary.K2 = 0
//   boundary.K3 = 0
//   boundary.G1.mean = 0       series: mean + sum of amp:k:phase harmonics
//   boundary.G1.harmonics =    e.g.  0.001:1:0, 0.0005:2:1.57
//   boundary.G2.mean = 1       mean of G2 is the entropy level M0 (steady ref)
//   boundary.G2.harmonics =
//   boundary.G3.mean = 0
//   boundary.G3.harmonics =
//   builder.tol_iter = 1e-10
//   builder.max_iter = 200
//   harness.windows = 6
//   harness.bump_amplitude = 0.01
//   harness.bump_support = 0.3,0.7   fractions of L, inside [0.1, 0.9]
//   harness.save_stride = 0          0 = choose automatically
//   seed = 0

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "fannowave/boundary.hpp"
#include "fannowave/damping.hpp"
#include "fannowave/gas_model.hpp"
#include "fannowave/ibvp_solver.hpp"
#include "fannowave/periodic_builder.hpp"
#include "fannowave/stability.hpp"

namespace fannowave {

struct SimConfig {
    double gamma = 1.4;
    std::string phi_kind = "exp";
    double phi0 = 1.0;

    std::string damping_kind = "const";
    std::vector<double> damping_coeffs = {-0.2};
    double alpha_star = -0.2;

    double u_minus = 0.2;
    double c_minus = 1.0;
    double S_minus = 0.0;

    double L = 1.0;
    int n_x = 512;

    double P = 2.0;
    int n_t = 256;
    double cfl = 0.9;

    std::string boundary_reference = "steady";
    double K1 = 0.0, K2 = 0.0, K3 = 0.0;
    SignalSpec G1{0.0, {}}, G2{1.0, {}}, G3{0.0, {}};

    double tol_iter = 1e-10;
    int max_iter = 200;

    int windows = 6;
    double bump_amplitude = 0.01;
    double bump_lo = 0.3, bump_hi = 0.7;  // support as fractions of L
    int save_stride = 0;

    long long seed = 0;

    bool operator==(const SimConfig&) const = default;
};

// Parses and validates; throws ConfigError naming the line or key. Warnings
// (|K2| > 1, gains on the |K| = 1 edge) go to the given stream when non-null.
SimConfig parse_config_text(const std::string& text, std::ostream* warnings = nullptr);
SimConfig load_config(const std::string& path, std::ostream* warnings = nullptr);

// Fully-resolved key/value pairs in canonical order; writing them back as
// "key = value" lines reloads to an equal config.
std::vector<std::pair<std::string, std::string>> config_echo(const SimConfig& cfg);

GasModel make_gas(const SimConfig& cfg);
DampingProfile make_damping(const SimConfig& cfg);
InflowState make_inflow(const SimConfig& cfg);
BoundarySpec make_boundary(const SimConfig& cfg);
PeriodicGrid make_grid(const SimConfig& cfg);
BuildOptions make_build_options(const SimConfig& cfg);
SimulateOptions make_sim_options(const SimConfig& cfg);
StabilityOptions make_stability_options(const SimConfig& cfg);

// Scales n_x and n_t jointly by an integer factor, keeping the node spacing
// an exact divisor: n_x -> factor (n_x - 1) + 1, n_t -> factor n_t.
SimConfig refined(const SimConfig& cfg, int factor);

}  // namespace fannowave
