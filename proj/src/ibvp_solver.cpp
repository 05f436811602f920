#include "fannowave/ibvp_solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fannowave {

namespace {

inline double lin(const Eigen::ArrayXd& a, const AxisHit& h) {
    return a[h.i0] + h.w * (a[h.i1] - a[h.i0]);
}

// Node speeds of the full state in the linear r-form.
void slice_speeds(const Eigen::ArrayXd& f1, const Eigen::ArrayXd& f3, const SteadyProfile& profile,
                  Eigen::ArrayXd& l1, Eigen::ArrayXd& l2, Eigen::ArrayXd& l3) {
    const double g = profile.gas.gamma;
    const Eigen::ArrayXd r1 = f1 + profile.r1;
    const Eigen::ArrayXd r3 = f3 + profile.r3;
    l1 = lambda1(g, r1, r3);
    l2 = lambda2(r1, r3);
    l3 = lambda3(g, r1, r3);
}

double check_speeds(const Eigen::ArrayXd& l1, const Eigen::ArrayXd& l2, const Eigen::ArrayXd& l3,
                    double margin, double t_label) {
    for (int k = 0; k < l1.size(); ++k) {
        if (!(l1[k] <= -margin) || !(l2[k] >= margin))
            throw InstabilityError("time stepper: state left the subsonic guard at t = " +
                                   std::to_string(t_label) + ", x_index " + std::to_string(k) +
                                   ": lambda1 = " + std::to_string(l1[k]) +
                                   ", lambda2 = " + std::to_string(l2[k]) +
                                   ", margin = " + std::to_string(margin));
    }
    return std::max({l1.abs().maxCoeff(), l2.abs().maxCoeff(), l3.abs().maxCoeff()});
}

}  // namespace

void InitialData::validate(int n_x) const {
    if (f1.size() != n_x || f2.size() != n_x || f3.size() != n_x)
        throw UsageError("initial data: slices sized " + std::to_string(f1.size()) +
                         " but the profile has " + std::to_string(n_x) + " nodes");
    if (!f1.allFinite() || !f2.allFinite() || !f3.allFinite())
        throw DomainError("initial data: non-finite entries");
}

InitialData slice_initial(const PeriodicField& field, double t, const SteadyProfile& profile) {
    const int n = profile.n();
    InitialData init;
    init.f1.resize(n);
    init.f2.resize(n);
    init.f3.resize(n);
    for (int k = 0; k < n; ++k) {
        const Sample3 s = field.sample(t, profile.x[k]);
        init.f1[k] = s.f1;
        init.f2[k] = s.f2;
        init.f3[k] = s.f3;
    }
    init.tag = InitTag::PeriodicSlice;
    return init;
}

void add_bump(InitialData& init, const SteadyProfile& profile, double amplitude, double center,
              double half_width) {
    const double L = profile.L;
    if (!(half_width > 0.0)) throw DomainError("bump: half width must be positive");
    const double slack = 1e-12 * L;
    if (center - half_width < 0.1 * L - slack || center + half_width > 0.9 * L + slack)
        throw DomainError("bump: support [" + std::to_string(center - half_width) + ", " +
                          std::to_string(center + half_width) + "] must sit inside [0.1 L, 0.9 L]");
    init.validate(profile.n());

    for (int k = 0; k < profile.n(); ++k) {
        const double d = profile.x[k] - center;
        if (std::abs(d) >= half_width) continue;
        const double c = std::cos(M_PI * d / (2.0 * half_width));
        const double b = amplitude * c * c;
        init.f1[k] += b;
        init.f2[k] += b;
        init.f3[k] += b;
    }
    init.tag = (init.tag == InitTag::PeriodicSlice || init.tag == InitTag::PeriodicSliceBump)
                   ? InitTag::PeriodicSliceBump
                   : InitTag::Explicit;
}

double certify_slice(const Eigen::ArrayXd& f1, const Eigen::ArrayXd& f3, const SteadyProfile& profile,
                     double guard_margin, double t_label) {
    if (f1.size() != profile.n() || f3.size() != profile.n())
        throw UsageError("certify_slice: slice size differs from the profile");
    Eigen::ArrayXd l1, l2, l3;
    slice_speeds(f1, f3, profile, l1, l2, l3);
    return check_speeds(l1, l2, l3, guard_margin, t_label);
}

double step_slice(Eigen::ArrayXd& g1, Eigen::ArrayXd& g2, Eigen::ArrayXd& g3,
                  const Eigen::ArrayXd& f1, const Eigen::ArrayXd& f2, const Eigen::ArrayXd& f3,
                  double t, double dt, const SteadyProfile& profile, const BoundarySignals& bc,
                  double guard_margin, double cfl_cap) {
    const int n = profile.n();
    if (f1.size() != n || f2.size() != n || f3.size() != n)
        throw UsageError("step: slice size differs from the profile");
    if (!(dt > 0.0)) throw UsageError("step: dt must be positive");

    const double g = profile.gas.gamma;
    const double L = profile.L;
    const double dx = profile.dx();
    const double S = profile.S;
    const double cphi = (g - 1.0) / (16.0 * g);

    Eigen::ArrayXd l1, l2, l3;
    slice_speeds(f1, f3, profile, l1, l2, l3);
    const double max_speed = check_speeds(l1, l2, l3, guard_margin, t);
    if (dt * max_speed / dx > cfl_cap * (1.0 + 1e-12))
        throw UsageError("step: CFL violation, dt * max|lambda| / dx = " +
                         std::to_string(dt * max_speed / dx) + " exceeds the cap " +
                         std::to_string(cfl_cap));

    const Eigen::ArrayXd dphi2 = dx_central(f2, dx);

    g1.resize(n);
    g2.resize(n);
    g3.resize(n);

    auto foot = [&](const Eigen::ArrayXd& lam, int k) {
        const double xk = profile.x[k];
        const double xh = std::clamp(xk - 0.5 * dt * lam[k], 0.0, L);
        const double sh = lin(lam, locate_clamped(xh / dx, n));
        return std::clamp(xk - dt * sh, 0.0, L);
    };

    // family 1 leaves the duct at x = 0, so every node but the last is an
    // interior CIR update
    for (int k = 0; k + 1 < n; ++k) {
        const double xf = foot(l1, k);
        const AxisHit hx = locate_clamped(xf / dx, n);
        const double p1 = lin(f1, hx);
        const double p2 = lin(f2, hx);
        const double p3 = lin(f3, hx);
        const double d2 = lin(dphi2, hx);
        const double r1t = lin(profile.r1, hx);
        const double r3t = lin(profile.r3, hx);
        const double alpha = profile.damping(xf);
        const double w1 = (r1t + r3t) / (4.0 * lambda1(g, r1t, r3t));
        const double spread = p3 + r3t - p1 - r1t;
        const double src = 0.5 * alpha * ((1.0 - (g + 1.0) * w1) * p1 + (1.0 - (3.0 - g) * w1) * p3) +
                           cphi * profile.gas.dlog_phi(p2 + S) * spread * spread * d2;
        g1[k] = p1 + dt * src;
    }

    // family 2: pure advection, no source
    for (int k = 1; k < n; ++k) {
        const double xf = foot(l2, k);
        g2[k] = lin(f2, locate_clamped(xf / dx, n));
    }

    // family 3
    for (int k = 1; k < n; ++k) {
        const double xf = foot(l3, k);
        const AxisHit hx = locate_clamped(xf / dx, n);
        const double p1 = lin(f1, hx);
        const double p2 = lin(f2, hx);
        const double p3 = lin(f3, hx);
        const double d2 = lin(dphi2, hx);
        const double r1t = lin(profile.r1, hx);
        const double r3t = lin(profile.r3, hx);
        const double alpha = profile.damping(xf);
        const double w3 = (r1t + r3t) / (4.0 * lambda3(g, r1t, r3t));
        const double spread = p3 + r3t - p1 - r1t;
        const double src = 0.5 * alpha * ((1.0 - (3.0 - g) * w3) * p1 + (1.0 - (g + 1.0) * w3) * p3) +
                           cphi * profile.gas.dlog_phi(p2 + S) * spread * spread * d2;
        g3[k] = p3 + dt * src;
    }

    // feedback rows at the new time level, fed by the fresh outgoing values
    const double tn = t + dt;
    g1[n - 1] = bc.h1(tn) + bc.K1 * g3[n - 1];
    g2[0] = bc.h2(tn) + bc.K2 * g1[0];
    g3[0] = bc.h3(tn) + bc.K3 * g1[0];

    return max_speed;
}

SimResult simulate(const InitialData& init, const SteadyProfile& profile, const BoundarySignals& bc,
                   double t0, double t_final, const SimulateOptions& opts) {
    const int n = profile.n();
    init.validate(n);
    if (!(t_final > t0)) throw UsageError("simulate: t_final must exceed t0");
    if (!(opts.cfl > 0.0) || !(opts.cfl <= 1.0)) throw UsageError("simulate: cfl must lie in (0, 1]");

    const double dx = profile.dx();
    const double margin = subsonic_guard_margin(profile, opts.guard_fraction);
    const double steady_max =
        std::max({profile.lam1.abs().maxCoeff(), profile.lam2.maxCoeff(), profile.lam3.maxCoeff()});
    const double budget = (1.0 + opts.speed_headroom) * steady_max;

    const double span = t_final - t0;
    const double dt_raw = opts.cfl * dx / budget;
    const long long steps = std::max(1LL, static_cast<long long>(std::ceil(span / dt_raw - 1e-12)));
    const double dt = span / static_cast<double>(steps);

    long long stride = opts.save_stride;
    if (stride <= 0) {
        const double window = std::min(t_zero_horizon(profile), bc.P);
        stride = std::max(1LL, static_cast<long long>(std::floor(window / (64.0 * dt))));
    }

    const long long n_saves = steps / stride + 1 + ((steps % stride) ? 1 : 0);

    SimResult res;
    res.cert.dt = dt;
    res.cert.dx = dx;
    res.cert.cfl_target = opts.cfl;
    res.cert.speed_budget = budget;
    res.cert.steps = steps;

    WindowField& traj = res.traj;
    traj.L = profile.L;
    traj.x = profile.x;
    traj.times.reserve(static_cast<size_t>(n_saves));
    traj.f1.resize(n_saves, n);
    traj.f2.resize(n_saves, n);
    traj.f3.resize(n_saves, n);

    Eigen::ArrayXd c1 = init.f1, c2 = init.f2, c3 = init.f3;
    Eigen::ArrayXd n1(n), n2(n), n3(n);

    auto record = [&](double t) {
        const long long r = traj.n_saved();
        traj.f1.row(r) = c1.transpose();
        traj.f2.row(r) = c2.transpose();
        traj.f3.row(r) = c3.transpose();
        traj.times.push_back(t);
    };

    record(t0);
    double max_obs = 0.0;
    for (long long s = 1; s <= steps; ++s) {
        const double t_prev = t0 + (s - 1) * dt;
        const double sp = step_slice(n1, n2, n3, c1, c2, c3, t_prev, dt, profile, bc, margin, opts.cfl);
        max_obs = std::max(max_obs, sp);
        c1.swap(n1);
        c2.swap(n2);
        c3.swap(n3);
        if (s % stride == 0 || s == steps) record(s == steps ? t_final : t0 + s * dt);
    }
    max_obs = std::max(max_obs, certify_slice(c1, c3, profile, margin, t_final));

    res.cert.max_speed_observed = max_obs;
    res.cert.cfl_observed = dt * max_obs / dx;
    return res;
}

double t_zero_horizon(const SteadyProfile& profile, double margin) {
    const double v = std::min({profile.lam1.abs().minCoeff(), profile.lam2.minCoeff(),
                               profile.lam3.minCoeff()}) -
                     margin;
    if (!(v > 0.0)) throw DomainError("t_zero_horizon: margin swallows the slowest wave speed");
    return profile.L / v;
}

}  // namespace fannowave
