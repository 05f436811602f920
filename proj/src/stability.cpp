#include "fannowave/stability.hpp"

#include <algorithm>
#include <cmath>

namespace fannowave {

namespace {

// Sup over nodes and components of |trajectory slice - periodic field at the
// same physical time| (the field wraps t mod P internally).
double slice_distance(const WindowField& traj, int s, const PeriodicField& periodic) {
    const double t = traj.times[s];
    double dmax = 0.0;
    for (int k = 0; k < traj.n_x(); ++k) {
        const double x = traj.x[k];
        dmax = std::max(dmax, std::abs(traj.f1(s, k) - periodic.sample_component(periodic.f1, t, x)));
        dmax = std::max(dmax, std::abs(traj.f2(s, k) - periodic.sample_component(periodic.f2, t, x)));
        dmax = std::max(dmax, std::abs(traj.f3(s, k) - periodic.sample_component(periodic.f3, t, x)));
    }
    return dmax;
}

std::vector<WindowDistance> collect(const std::vector<double>& d) {
    std::vector<WindowDistance> out(d.size());
    for (size_t i = 0; i < d.size(); ++i) out[i] = {static_cast<int>(i), d[i]};
    return out;
}

}  // namespace

double period_residual(const WindowField& traj, double P) {
    if (!(P > 0.0)) throw UsageError("period_residual: P must be positive");
    if (traj.n_saved() < 2) throw UsageError("period_residual: trajectory has fewer than 2 slices");
    const double t_end = traj.times.back();
    const double t_begin = traj.times.front();
    const double slack = 1e-9 * P;
    if (t_end - t_begin < 2.0 * P - slack)
        throw UsageError("period_residual: recorded span shorter than two periods");

    double rmax = 0.0;
    for (int s = 0; s < traj.n_saved(); ++s) {
        const double t = traj.times[s];
        if (t < t_end - 2.0 * P - slack || t > t_end - P + slack) continue;
        const double tp = std::min(t + P, t_end);
        for (int k = 0; k < traj.n_x(); ++k) {
            const double x = traj.x[k];
            rmax = std::max(rmax, std::abs(traj.f1(s, k) - traj.sample_component(traj.f1, tp, x)));
            rmax = std::max(rmax, std::abs(traj.f2(s, k) - traj.sample_component(traj.f2, tp, x)));
            rmax = std::max(rmax, std::abs(traj.f3(s, k) - traj.sample_component(traj.f3, tp, x)));
        }
    }
    return rmax;
}

std::vector<WindowDistance> window_distances(const WindowField& traj, const PeriodicField& periodic,
                                             double T0) {
    if (!(T0 > 0.0)) throw UsageError("window_distances: T0 must be positive");
    const double t_start = traj.times.front();
    const double span = traj.times.back() - t_start;
    const int n_win = static_cast<int>(std::floor(span / T0 + 1e-9));
    if (n_win < 1) return {};

    std::vector<double> d(n_win, 0.0);
    for (int s = 0; s < traj.n_saved(); ++s) {
        const int N = static_cast<int>(std::floor((traj.times[s] - t_start) / T0));
        if (N < 0 || N >= n_win) continue;
        d[N] = std::max(d[N], slice_distance(traj, s, periodic));
    }
    return collect(d);
}

std::vector<WindowDistance> c1_window_distances(const WindowField& traj, const PeriodicField& periodic,
                                                double T0) {
    if (!(T0 > 0.0)) throw UsageError("c1_window_distances: T0 must be positive");
    if (traj.n_saved() < 2) throw UsageError("c1_window_distances: need at least 2 saved slices");
    const double t_start = traj.times.front();
    const double span = traj.times.back() - t_start;
    const int n_win = static_cast<int>(std::floor(span / T0 + 1e-9));
    if (n_win < 1) return {};

    const double hx = periodic.grid.dx();
    const Eigen::ArrayXXd pdx1 = dx_central(periodic.f1, hx);
    const Eigen::ArrayXXd pdx2 = dx_central(periodic.f2, hx);
    const Eigen::ArrayXXd pdx3 = dx_central(periodic.f3, hx);
    const double htraj = traj.x[1] - traj.x[0];

    std::vector<double> d(n_win, 0.0);
    for (int s = 0; s + 1 < traj.n_saved(); ++s) {
        const int N = static_cast<int>(std::floor((traj.times[s] - t_start) / T0));
        if (N < 0 || N >= n_win) continue;
        const double ta = traj.times[s];
        const double tb = traj.times[s + 1];
        const double inv = 1.0 / (tb - ta);

        double dm = d[N];
        const Eigen::ArrayXd sx1 = dx_central(Eigen::ArrayXd(traj.f1.row(s).transpose()), htraj);
        const Eigen::ArrayXd sx2 = dx_central(Eigen::ArrayXd(traj.f2.row(s).transpose()), htraj);
        const Eigen::ArrayXd sx3 = dx_central(Eigen::ArrayXd(traj.f3.row(s).transpose()), htraj);
        for (int k = 0; k < traj.n_x(); ++k) {
            const double x = traj.x[k];
            const double qt1 = (traj.f1(s + 1, k) - traj.f1(s, k)) * inv;
            const double qt2 = (traj.f2(s + 1, k) - traj.f2(s, k)) * inv;
            const double qt3 = (traj.f3(s + 1, k) - traj.f3(s, k)) * inv;
            const double pt1 = (periodic.sample_component(periodic.f1, tb, x) -
                                periodic.sample_component(periodic.f1, ta, x)) * inv;
            const double pt2 = (periodic.sample_component(periodic.f2, tb, x) -
                                periodic.sample_component(periodic.f2, ta, x)) * inv;
            const double pt3 = (periodic.sample_component(periodic.f3, tb, x) -
                                periodic.sample_component(periodic.f3, ta, x)) * inv;
            dm = std::max({dm, std::abs(qt1 - pt1), std::abs(qt2 - pt2), std::abs(qt3 - pt3)});

            dm = std::max(dm, std::abs(sx1[k] - periodic.sample_component(pdx1, ta, x)));
            dm = std::max(dm, std::abs(sx2[k] - periodic.sample_component(pdx2, ta, x)));
            dm = std::max(dm, std::abs(sx3[k] - periodic.sample_component(pdx3, ta, x)));
        }
        d[N] = dm;
    }
    return collect(d);
}

DecayFit fit_decay(const std::vector<WindowDistance>& windows, double floor_value) {
    std::vector<double> xs, ys;
    for (const WindowDistance& w : windows) {
        if (w.d > 3.0 * floor_value && w.d > 0.0) {
            xs.push_back(w.N);
            ys.push_back(std::log(w.d));
        }
    }
    DecayFit fit;
    fit.n_used = static_cast<int>(xs.size());
    if (fit.n_used < 3) {
        fit.degenerate = true;
        return fit;
    }
    const double n = fit.n_used;
    double xm = 0, ym = 0;
    for (int i = 0; i < fit.n_used; ++i) {
        xm += xs[i];
        ym += ys[i];
    }
    xm /= n;
    ym /= n;
    double sxx = 0, sxy = 0;
    for (int i = 0; i < fit.n_used; ++i) {
        sxx += (xs[i] - xm) * (xs[i] - xm);
        sxy += (xs[i] - xm) * (ys[i] - ym);
    }
    const double b = sxy / sxx;
    const double a = ym - b * xm;
    double ssr = 0;
    for (int i = 0; i < fit.n_used; ++i) {
        const double r = ys[i] - a - b * xs[i];
        ssr += r * r;
    }
    fit.xi_hat = std::exp(b);
    fit.log_rmse = std::sqrt(ssr / n);
    fit.fit_residual = b == 0.0 ? std::numeric_limits<double>::infinity() : fit.log_rmse / std::abs(b);
    return fit;
}

StabilityReport stability_experiment(const SteadyProfile& profile, const BoundarySignals& bc,
                                     const PeriodicField& periodic, const StabilityOptions& opts) {
    if (opts.windows < 1) throw UsageError("stability: need at least one window");
    StabilityReport rep;
    rep.T0 = t_zero_horizon(profile);

    const IntegratingFactors fac = integrating_factors(profile);
    const double K = std::max(std::abs(bc.K1), std::abs(bc.K3));
    rep.xi_bound = 1.0 - (1.0 - K) / fac.m_bound;

    const double t_final = opts.windows * rep.T0;
    const InitialData base = slice_initial(periodic, 0.0, profile);

    const SimResult replay = simulate(base, profile, bc, 0.0, t_final, opts.sim);
    for (const WindowDistance& w : window_distances(replay.traj, periodic, rep.T0))
        rep.floor_c0 = std::max(rep.floor_c0, w.d);
    for (const WindowDistance& w : c1_window_distances(replay.traj, periodic, rep.T0))
        rep.floor_c1 = std::max(rep.floor_c1, w.d);

    InitialData bumped = base;
    add_bump(bumped, profile, opts.bump_amplitude, opts.bump_center * profile.L,
             opts.bump_half_width * profile.L);
    const SimResult run = simulate(bumped, profile, bc, 0.0, t_final, opts.sim);
    rep.cert = run.cert;
    rep.windows_c0 = window_distances(run.traj, periodic, rep.T0);
    rep.windows_c1 = c1_window_distances(run.traj, periodic, rep.T0);
    rep.fit_c0 = fit_decay(rep.windows_c0, rep.floor_c0);
    rep.fit_c1 = fit_decay(rep.windows_c1, rep.floor_c1);
    return rep;
}

CrossValidation cross_validate(const SteadyProfile& profile, const PeriodicField& periodic,
                               const BoundarySignals& bc_sim, const SimulateOptions& opts) {
    CrossValidation cv;
    cv.T0 = t_zero_horizon(profile);
    const double P = periodic.grid.P;
    cv.t_final = P * std::ceil(10.0 * cv.T0 / P - 1e-9);

    const InitialData init = slice_initial(periodic, 0.0, profile);
    const SimResult res = simulate(init, profile, bc_sim, 0.0, cv.t_final, opts);
    cv.cert = res.cert;

    const double slack = 1e-9 * P;
    for (int s = 0; s < res.traj.n_saved(); ++s) {
        const double t = res.traj.times[s];
        const double d = slice_distance(res.traj, s, periodic);
        if (t < cv.T0) cv.floor = std::max(cv.floor, d);
        if (t >= cv.t_final - P - slack) cv.distance = std::max(cv.distance, d);
    }
    cv.pass = cv.distance <= std::max(5.0 * cv.floor, 1e-12);
    return cv;
}

EntropyDrift entropy_drift(const WindowField& traj, const SteadyProfile& profile, int n_paths,
                           double x_lo, double x_hi, const TraceOptions& topts) {
    if (n_paths < 1) throw UsageError("entropy_drift: need at least one path");
    if (!(x_lo >= 0.0) || !(x_hi <= profile.L) || !(x_lo <= x_hi))
        throw UsageError("entropy_drift: start interval must sit inside [0, L]");
    if (traj.n_saved() < 2) throw UsageError("entropy_drift: trajectory has fewer than 2 slices");

    const SlopeFn lam2_full = [&](double t, double x) {
        const double r1 = traj.sample_component(traj.f1, t, x) + profile.interp(profile.r1, x);
        const double r3 = traj.sample_component(traj.f3, t, x) + profile.interp(profile.r3, x);
        return lambda2(r1, r3);
    };

    EntropyDrift out;
    out.n_paths = n_paths;
    const double t0 = traj.times.front();
    const double t1 = traj.times.back();
    out.span = t1 - t0;
    for (int i = 0; i < n_paths; ++i) {
        const double x0 =
            n_paths == 1 ? 0.5 * (x_lo + x_hi) : x_lo + (x_hi - x_lo) * i / (n_paths - 1);
        const CharPath path = trace_in_t(lam2_full, 2, t0, x0, t1, profile.L, topts);
        if (path.end == PathEnd::ReachedTarget) ++out.n_reached;
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (size_t j = 0; j < path.t.size(); ++j) {
            const double v = traj.sample_component(traj.f2, path.t[j], path.x[j]);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        out.max_drift = std::max(out.max_drift, hi - lo);
    }
    return out;
}

}  // namespace fannowave
