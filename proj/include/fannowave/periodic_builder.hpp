// Constructs the time-periodic perturbation field by fixed-point iteration:
// march the damped 1- and 3-family transport equations in x (multiplied by the
// integrating factors F1, F3 that absorb their self-coupling) and advect the
// entropy family, with all coefficients frozen at the previous iterate and the
// boundary feedback closing the loop.

#pragma once

#include <vector>

#include "fannowave/boundary.hpp"
#include "fannowave/field_grid.hpp"
#include "fannowave/steady_fanno.hpp"

namespace fannowave {

struct IntegratingFactors {
    Eigen::ArrayXd F1, F3;  // on the profile nodes; F1(L) = F3(0) = 1, both >= 1
    double k_steady = 0.0;  // max_i max over nodes of 1/|lambda_i| on the profile
    double m_bound = 0.0;   // exp(-(alpha_*/2) K L (1 + (gamma+1)/2 K c-)), the certified cap on F1, F3
};

// Exponentials of trapezoid-rule integrals of the damping coefficients on the
// profile grid.
IntegratingFactors integrating_factors(const SteadyProfile& profile);

// Two equivalent discretizations of the d/dx Phi2 factor in the family-1/3
// sources: straight central differences in x, or the transport identity
// d/dx Phi2 = -mu2 d/dt Phi2 (valid because Phi2 is advected without source).
enum class EntropyGradient {
    SpaceCentral,
    TimeTransport,
};

struct BuildOptions {
    double tol_iter = 1e-10;
    int max_iter = 200;
    double guard_fraction = 0.1;  // subsonic guard margin as a fraction of min(u, c-u)
    EntropyGradient entropy_gradient = EntropyGradient::SpaceCentral;
};

struct BuildReport {
    bool converged = false;
    int iterations = 0;
    std::vector<double> sup_diffs;  // d_l = sup |Phi^(l) - Phi^(l-1)|, l = 1, 2, ...
    std::vector<double> ratios;     // d_{l+1} / d_l
    double final_residual = 0.0;
    double guard_margin = 0.0;
    double k_steady = 0.0;
    double m_bound = 0.0;
    double f1_max = 0.0;
    double f3_max = 0.0;
    double wall_seconds = 0.0;  // informational only; excluded from serialized reports
};

// One sweep of the scheme: given the previous iterate, march family 1 from
// x = L down to 0, then family 2 and family 3 from 0 up to L, each along its
// frozen characteristics with midpoint source quadrature. Throws
// InstabilityError if prev leaves the subsonic guard.
PeriodicField iterate_once(const PeriodicField& prev, const SteadyProfile& profile,
                           const BoundarySignals& bc, const IntegratingFactors& fac,
                           double guard_margin,
                           EntropyGradient egrad = EntropyGradient::SpaceCentral);

// Iterates from (0, M0, 0) until the sup difference drops below tol_iter.
// On failure throws ConvergenceError; the report (if given) is filled either way.
PeriodicField build_periodic(const SteadyProfile& profile, const BoundarySignals& bc,
                             const PeriodicGrid& grid, const BuildOptions& opts = {},
                             BuildReport* report = nullptr);

}  // namespace fannowave
