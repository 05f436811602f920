// Nonlinear time-domain integration of the perturbation system by
// characteristic upwinding (CIR): each node traces its family back one step
// through the current slice, interpolates linearly, and adds dt times the
// damping/entropy source evaluated at the foot. Family 2 carries no source.
// Feedback rows close the loop at the new time level: Phi2 and Phi3 at x = 0
// from the freshly updated Phi1(t,0), Phi1 at x = L from the fresh Phi3(t,L).

#pragma once

#include "fannowave/boundary.hpp"
#include "fannowave/field_grid.hpp"
#include "fannowave/steady_fanno.hpp"

namespace fannowave {

enum class InitTag {
    PeriodicSlice,
    PeriodicSliceBump,
    Explicit,
};

struct InitialData {
    Eigen::ArrayXd f1, f2, f3;
    InitTag tag = InitTag::Explicit;

    void validate(int n_x) const;
};

// Slice of a periodic field at time t, sampled at the profile nodes.
InitialData slice_initial(const PeriodicField& field, double t, const SteadyProfile& profile);

// Adds amplitude * cos^2(pi (x - center) / (2 half_width)) on
// [center - half_width, center + half_width] to all three components. The
// bump vanishes with its first derivative at the support edges, and the
// support must sit inside [0.1 L, 0.9 L] so the boundary rows keep their
// corner compatibility.
void add_bump(InitialData& init, const SteadyProfile& profile, double amplitude, double center,
              double half_width);

struct CflCertificate {
    double dt = 0.0;
    double dx = 0.0;
    double cfl_target = 0.9;
    double speed_budget = 0.0;        // headroom-padded max steady speed that fixed dt
    double max_speed_observed = 0.0;  // running max of the full-state |lambda_i| over the run
    double cfl_observed = 0.0;        // dt * max_speed_observed / dx
    long long steps = 0;
};

struct SimulateOptions {
    double cfl = 0.9;
    double speed_headroom = 0.1;  // budget = (1 + headroom) * max steady |lambda_i|
    double guard_fraction = 0.1;
    // Record every save_stride-th slice (first and last always). Zero picks a
    // stride giving at least ~64 slices per min(T0, P).
    int save_stride = 1;
};

struct SimResult {
    WindowField traj;
    CflCertificate cert;
};

// Wave speeds of the full state on a slice. Throws InstabilityError when the
// subsonic guard is violated, naming the node; returns the max speed.
double certify_slice(const Eigen::ArrayXd& f1, const Eigen::ArrayXd& f3, const SteadyProfile& profile,
                     double guard_margin, double t_label);

// One CIR step from slices at t to slices at t + dt. Re-certifies the guard
// and the CFL number against cfl_cap before moving; returns the max wave
// speed seen. Exposed for the single-step tests; simulate() is the driver.
double step_slice(Eigen::ArrayXd& g1, Eigen::ArrayXd& g2, Eigen::ArrayXd& g3,
                  const Eigen::ArrayXd& f1, const Eigen::ArrayXd& f2, const Eigen::ArrayXd& f3,
                  double t, double dt, const SteadyProfile& profile, const BoundarySignals& bc,
                  double guard_margin, double cfl_cap);

SimResult simulate(const InitialData& init, const SteadyProfile& profile, const BoundarySignals& bc,
                   double t0, double t_final, const SimulateOptions& opts = {});

// Domain traversal time of the slowest family:
// L / (min over nodes of min(|lambda1|, lambda2, lambda3) - margin).
double t_zero_horizon(const SteadyProfile& profile, double margin = 0.0);

}  // namespace fannowave
