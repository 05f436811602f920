// Steady subsonic duct flow with friction-type damping: the background state
// every other module perturbs around. Integrates
//     u' = alpha(x) u^2 / (u^2 - c^2),   c' = -((gamma-1)/2) (c/u) u'
// from inflow data (u-, c-) at x = 0 with classical RK4 on a uniform grid,
// declaring choking when c - u falls below a sonic margin at any stage.
// Entropy is constant along the duct, S = S-.

#pragma once

#include <Eigen/Dense>

#include "fannowave/damping.hpp"
#include "fannowave/gas_model.hpp"

namespace fannowave {

struct InflowState {
    double u_minus;
    double c_minus;
    double S_minus;

    void validate() const {
        if (!(u_minus > 0.0) || !(u_minus < c_minus))
            throw DomainError("inflow: need 0 < u- < c- (strictly subsonic inflow)");
    }
};

// Solved background on a uniform x grid, plus the diagonal-variable and
// characteristic-speed views of it that the marching schemes consume.
// All members interpolate piecewise-linearly between nodes.
struct SteadyProfile {
    GasModel gas;
    DampingProfile damping;
    double L = 1.0;
    double S = 0.0;  // constant entropy, equals inflow S-

    Eigen::ArrayXd x;
    Eigen::ArrayXd u, c;
    Eigen::ArrayXd r1, r3;              // steady diagonal variables; r2 == S identically
    Eigen::ArrayXd lam1, lam2, lam3;    // u - c, u, u + c in the linear r-form

    int n() const { return static_cast<int>(x.size()); }
    double dx() const { return L / (n() - 1); }

    // Linear interpolation with a domain check; xq outside [0, L] (beyond a few
    // ulps of roundoff slack) is a domain error.
    double interp(const Eigen::ArrayXd& q, double xq) const;

    double u_at(double xq) const { return interp(u, xq); }
    double c_at(double xq) const { return interp(c, xq); }
    double r1_at(double xq) const { return interp(r1, xq); }
    double r3_at(double xq) const { return interp(r3, xq); }
};

struct FannoOptions {
    double choking_margin = 1e-6;  // relative to c-: choke when c - u < margin * c-
};

SteadyProfile solve_fanno(const GasModel& gas, const DampingProfile& damping, const InflowState& inflow,
                          double L, int n_x, const FannoOptions& opts = {});

struct DuctLengthOptions {
    int n_x = 4096;            // nodes per probe solve
    double bracket_tol = 1e-8;
    double horizon = 1e6;      // lengths beyond this count as "never chokes"
    FannoOptions fanno = {};
};

// Largest duct length admitting a subsonic solve, located by bisection on the
// success of solve_fanno. Returns +infinity when the horizon length solves
// (e.g. zero damping never chokes).
double max_duct_length(const GasModel& gas, const DampingProfile& damping, const InflowState& inflow,
                       const DuctLengthOptions& opts = {});

// Width of the certified subsonic neighborhood around the profile:
// fraction * min over nodes of min(u, c - u).
double subsonic_guard_margin(const SteadyProfile& profile, double fraction = 0.1);

}  // namespace fannowave
