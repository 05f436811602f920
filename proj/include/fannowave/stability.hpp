// Quantitative experiments on top of the builder and the time stepper:
// periodicity residuals, per-window decay distances with log-linear rate
// fits (C0 and discrete-C1), builder-vs-stepper cross-validation, and the
// entropy-conservation probe along traced family-2 characteristics.

#pragma once

#include <limits>
#include <vector>

#include "fannowave/characteristics.hpp"
#include "fannowave/ibvp_solver.hpp"
#include "fannowave/periodic_builder.hpp"

namespace fannowave {

// Sup over t in the last recorded period of the sup-x distance between the
// trajectory at t and at t + P. Needs a recorded span of at least 2 P.
double period_residual(const WindowField& traj, double P);

struct WindowDistance {
    int N = 0;
    double d = 0.0;
};

// d_N = max over saved slices with t - t_start in [N T0, (N+1) T0) of the
// sup-x distance to the periodic field at the same t (mod P). Only complete
// windows are reported.
std::vector<WindowDistance> window_distances(const WindowField& traj, const PeriodicField& periodic,
                                             double T0);

// Same windows measured on discrete derivatives: forward time quotients
// between consecutive saved slices and central x-derivatives of each slice,
// both compared against the matching quotients of the periodic field.
std::vector<WindowDistance> c1_window_distances(const WindowField& traj, const PeriodicField& periodic,
                                                double T0);

struct DecayFit {
    double xi_hat = std::numeric_limits<double>::quiet_NaN();  // exp(slope) of the log-linear fit
    double log_rmse = 0.0;       // RMS residual of log d_N about the fit line
    double fit_residual = 0.0;   // log_rmse / |log xi_hat|, the relative fit quality
    int n_used = 0;              // windows above the floor that entered the fit
    bool degenerate = false;     // fewer than 3 usable windows
};

// Least squares on log d_N over windows with d_N > 3 * floor.
DecayFit fit_decay(const std::vector<WindowDistance>& windows, double floor_value);

struct StabilityOptions {
    int windows = 6;               // horizon = windows * T0
    double bump_amplitude = 0.01;
    double bump_center = 0.5;      // fractions of L
    double bump_half_width = 0.2;
    SimulateOptions sim{.save_stride = 0};
};

struct StabilityReport {
    double T0 = 0.0;
    double xi_bound = 0.0;  // 1 - (1 - max(|K1|,|K3|)) / M, the admissible-rate threshold
    double floor_c0 = 0.0, floor_c1 = 0.0;
    std::vector<WindowDistance> windows_c0, windows_c1;
    DecayFit fit_c0, fit_c1;
    CflCertificate cert;
};

// Two runs from the t = 0 slice of the periodic field: an unperturbed replay
// whose window distances estimate the discretization floor, and a
// bump-perturbed run whose distances are fitted for the decay rate.
StabilityReport stability_experiment(const SteadyProfile& profile, const BoundarySignals& bc,
                                     const PeriodicField& periodic, const StabilityOptions& opts = {});

struct CrossValidation {
    double distance = 0.0;  // sup over saved slices in the last period vs the builder field
    double floor = 0.0;     // same measure over the first window [0, T0)
    bool pass = false;      // distance <= max(5 * floor, 1e-12)
    double T0 = 0.0;
    double t_final = 0.0;   // 10 T0 rounded up to a whole number of periods
    CflCertificate cert;
};

// Replays the periodic orbit through the time stepper for ten traversal
// times and compares the tail against the builder output. Passing a
// boundary-signal set with a different period than the field's grid acts as
// a negative control: the legs then disagree at the forcing amplitude.
CrossValidation cross_validate(const SteadyProfile& profile, const PeriodicField& periodic,
                               const BoundarySignals& bc_sim, const SimulateOptions& opts = {});

struct EntropyDrift {
    double max_drift = 0.0;  // max over paths of (max - min) of Phi2 along the path
    int n_paths = 0;
    int n_reached = 0;       // paths that stayed inside the duct to the final time
    double span = 0.0;
};

// Traces n_paths family-2 characteristics through the recorded trajectory,
// started at t = times.front() from x0 evenly spaced in [x_lo, x_hi], and
// measures how far Phi2 drifts along each (exactly conserved in the PDE).
EntropyDrift entropy_drift(const WindowField& traj, const SteadyProfile& profile, int n_paths,
                           double x_lo, double x_hi, const TraceOptions& topts);

}  // namespace fannowave
