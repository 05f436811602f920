#include "fannowave/periodic_builder.hpp"

#include <chrono>
#include <cmath>
#include <string>

namespace fannowave {

namespace {

// Everything the marches need, sampled once per build onto the working grid:
// steady coefficients at the grid nodes and at the cell midpoints where the
// source quadrature lives. Products that appear together are precombined.
struct MarchCoeffs {
    double gamma;
    double S;        // steady entropy
    double dt, dx;
    int n_t, n_x;
    double inv_dt;

    Eigen::ArrayXd r1t, r3t;        // steady diagonal variables at grid nodes
    Eigen::ArrayXd F1g, F3g;        // integrating factors at grid nodes

    // midpoint arrays, index k lives between nodes k and k+1
    Eigen::ArrayXd r1m, r3m;
    Eigen::ArrayXd mu1m, mu3m;      // 1/lambda_i of the steady state
    Eigen::ArrayXd a1m, a3m;        // (alpha/2)(1 - q_i) F_i
    Eigen::ArrayXd b1m, b3m;        // alpha (gamma-1) w_i F_i  (w_i the steady ratio in the 4th term)
    Eigen::ArrayXd F1m, F3m;

    const GasModel* gas;
};

MarchCoeffs make_coeffs(const PeriodicGrid& grid, const SteadyProfile& profile,
                        const IntegratingFactors& fac) {
    if (profile.L != grid.L) throw UsageError("builder: grid and profile disagree on duct length");
    if (fac.F1.size() != profile.n()) throw UsageError("builder: integrating factors sized for a different profile");

    MarchCoeffs mc;
    mc.gamma = profile.gas.gamma;
    mc.S = profile.S;
    mc.dt = grid.dt();
    mc.dx = grid.dx();
    mc.inv_dt = 1.0 / mc.dt;
    mc.n_t = grid.n_t;
    mc.n_x = grid.n_x;
    mc.gas = &profile.gas;

    const double g = mc.gamma;
    const int nx = grid.n_x;
    mc.r1t.resize(nx);
    mc.r3t.resize(nx);
    mc.F1g.resize(nx);
    mc.F3g.resize(nx);
    for (int k = 0; k < nx; ++k) {
        const double x = grid.x_node(k);
        mc.r1t[k] = profile.interp(profile.r1, x);
        mc.r3t[k] = profile.interp(profile.r3, x);
        mc.F1g[k] = profile.interp(fac.F1, x);
        mc.F3g[k] = profile.interp(fac.F3, x);
    }

    mc.r1m.resize(nx - 1);
    mc.r3m.resize(nx - 1);
    mc.mu1m.resize(nx - 1);
    mc.mu3m.resize(nx - 1);
    mc.a1m.resize(nx - 1);
    mc.a3m.resize(nx - 1);
    mc.b1m.resize(nx - 1);
    mc.b3m.resize(nx - 1);
    mc.F1m.resize(nx - 1);
    mc.F3m.resize(nx - 1);
    for (int k = 0; k + 1 < nx; ++k) {
        const double xm = (grid.x_node(k) + grid.x_node(k + 1)) / 2.0;
        const double r1 = profile.interp(profile.r1, xm);
        const double r3 = profile.interp(profile.r3, xm);
        const double l1 = lambda1(g, r1, r3);
        const double l3 = lambda3(g, r1, r3);
        const double alpha = profile.damping(xm);
        const double q1 = (g + 1) * (r1 + r3) / (4.0 * l1);
        const double q3 = (g + 1) * (r1 + r3) / (4.0 * l3);
        const double w1 = (r1 + r3) / (4.0 * l1);
        const double w3 = (r1 + r3) / (4.0 * l3);
        mc.r1m[k] = r1;
        mc.r3m[k] = r3;
        mc.mu1m[k] = 1.0 / l1;
        mc.mu3m[k] = 1.0 / l3;
        mc.F1m[k] = profile.interp(fac.F1, xm);
        mc.F3m[k] = profile.interp(fac.F3, xm);
        mc.a1m[k] = 0.5 * alpha * (1.0 - q1) * mc.F1m[k];
        mc.a3m[k] = 0.5 * alpha * (1.0 - q3) * mc.F3m[k];
        mc.b1m[k] = alpha * (g - 1.0) * w1 * mc.F1m[k];
        mc.b3m[k] = alpha * (g - 1.0) * w3 * mc.F3m[k];
    }
    return mc;
}

// Periodic linear interpolation down one x-column of a (n_t x n_x) array.
inline double interp_col(const Eigen::ArrayXXd& a, int col, double t, const MarchCoeffs& mc) {
    const AxisHit h = locate_periodic(t * mc.inv_dt, mc.n_t);
    const double v0 = a(h.i0, col);
    return v0 + h.w * (a(h.i1, col) - v0);
}

// Bilinear (periodic in t, clamped cell in x) sample of one component.
struct Hit2 {
    AxisHit ht, hx;
};

inline Hit2 make_hit(double t, double x, const MarchCoeffs& mc) {
    return {locate_periodic(t * mc.inv_dt, mc.n_t), locate_clamped(x / mc.dx, mc.n_x)};
}

inline double bil(const Eigen::ArrayXXd& a, const Hit2& h) {
    const double lo = a(h.ht.i0, h.hx.i0) + h.ht.w * (a(h.ht.i1, h.hx.i0) - a(h.ht.i0, h.hx.i0));
    const double hi = a(h.ht.i0, h.hx.i1) + h.ht.w * (a(h.ht.i1, h.hx.i1) - a(h.ht.i0, h.hx.i1));
    return lo + h.hx.w * (hi - lo);
}

// Steady diagonal variables at an off-node x, from the grid-sampled arrays.
inline void steady_at(double x, const MarchCoeffs& mc, double& r1t, double& r3t) {
    const AxisHit h = locate_clamped(x / mc.dx, mc.n_x);
    r1t = mc.r1t[h.i0] + h.w * (mc.r1t[h.i1] - mc.r1t[h.i0]);
    r3t = mc.r3t[h.i0] + h.w * (mc.r3t[h.i1] - mc.r3t[h.i0]);
}

void check_guard(const PeriodicField& prev, const MarchCoeffs& mc, double margin) {
    const double g = mc.gamma;
    for (int k = 0; k < mc.n_x; ++k) {
        for (int j = 0; j < mc.n_t; ++j) {
            const double r1 = prev.f1(j, k) + mc.r1t[k];
            const double r3 = prev.f3(j, k) + mc.r3t[k];
            const double l1 = lambda1(g, r1, r3);
            const double l2 = lambda2(r1, r3);
            if (!(l1 <= -margin) || !(l2 >= margin))
                throw InstabilityError(
                    "builder: state left the subsonic guard at node (t_index " + std::to_string(j) +
                    ", x_index " + std::to_string(k) + "): lambda1 = " + std::to_string(l1) +
                    ", lambda2 = " + std::to_string(l2) + ", margin = " + std::to_string(margin));
        }
    }
}

}  // namespace

IntegratingFactors integrating_factors(const SteadyProfile& profile) {
    const int n = profile.n();
    const double g = profile.gas.gamma;
    const double h = profile.dx();

    Eigen::ArrayXd alpha(n);
    for (int k = 0; k < n; ++k) alpha[k] = profile.damping(profile.x[k]);

    const Eigen::ArrayXd sum13 = profile.r1 + profile.r3;
    const Eigen::ArrayXd q1 = (g + 1) * sum13 / (4.0 * profile.lam1);
    const Eigen::ArrayXd q3 = (g + 1) * sum13 / (4.0 * profile.lam3);
    const Eigen::ArrayXd g1 = 0.5 * alpha * (1.0 - q1) / profile.lam1;  // integrand of the F1 exponent
    const Eigen::ArrayXd g3 = 0.5 * alpha * (1.0 - q3) / profile.lam3;

    IntegratingFactors fac;
    fac.F1.resize(n);
    fac.F3.resize(n);
    // F1(x) = exp(int_x^L g1), suffix trapezoid; F3(x) = exp(-int_0^x g3), prefix trapezoid
    double acc = 0.0;
    fac.F1[n - 1] = 1.0;
    for (int k = n - 2; k >= 0; --k) {
        acc += 0.5 * (g1[k] + g1[k + 1]) * h;
        fac.F1[k] = std::exp(acc);
    }
    acc = 0.0;
    fac.F3[0] = 1.0;
    for (int k = 1; k < n; ++k) {
        acc += 0.5 * (g3[k - 1] + g3[k]) * h;
        fac.F3[k] = std::exp(-acc);
    }

    const double k_st = std::max({(1.0 / profile.lam1.abs()).maxCoeff(), (1.0 / profile.lam2).maxCoeff(),
                                  (1.0 / profile.lam3).maxCoeff()});
    fac.k_steady = k_st;
    const double alpha_star = profile.damping.alpha_star();
    fac.m_bound = std::exp(-0.5 * alpha_star * k_st * profile.L * (1.0 + 0.5 * (g + 1) * k_st * profile.c[0]));
    return fac;
}

PeriodicField iterate_once(const PeriodicField& prev, const SteadyProfile& profile,
                           const BoundarySignals& bc, const IntegratingFactors& fac,
                           double guard_margin, EntropyGradient egrad) {
    const PeriodicGrid& grid = prev.grid;
    grid.validate();
    if (bc.P != grid.P) throw UsageError("builder: boundary period differs from grid period");
    const MarchCoeffs mc = make_coeffs(grid, profile, fac);
    check_guard(prev, mc, guard_margin);

    const double g = mc.gamma;
    const double dx = mc.dx;
    const double half = 0.5 * dx;
    const int n_t = mc.n_t;
    const int n_x = mc.n_x;
    const double cphi_base = (g - 1.0) / (16.0 * g);

    Eigen::ArrayXXd dphi2;
    if (egrad == EntropyGradient::SpaceCentral) {
        dphi2 = dx_central(prev.f2, dx);
    } else {
        // transport identity: d/dx Phi2 = -d/dt Phi2 / lambda2, central and
        // periodic in t
        dphi2.resize(n_t, n_x);
        for (int k = 0; k < n_x; ++k) {
            for (int j = 0; j < n_t; ++j) {
                const int jm = (j + n_t - 1) % n_t;
                const int jp = (j + 1) % n_t;
                const double l2 = lambda2(prev.f1(j, k) + mc.r1t[k], prev.f3(j, k) + mc.r3t[k]);
                dphi2(j, k) = -(prev.f2(jp, k) - prev.f2(jm, k)) * (0.5 * mc.inv_dt) / l2;
            }
        }
    }

    auto mu_full = [&](int family, double t, double x) {
        double r1t, r3t;
        steady_at(x, mc, r1t, r3t);
        const Hit2 h = make_hit(t, x, mc);
        const double r1 = bil(prev.f1, h) + r1t;
        const double r3 = bil(prev.f3, h) + r3t;
        const double l = family == 1   ? lambda1(g, r1, r3)
                         : family == 2 ? lambda2(r1, r3)
                                       : lambda3(g, r1, r3);
        return 1.0 / l;
    };

    PeriodicField next(grid);

    // family 1: W = F1 * Phi1, marched from x = L down to x = 0
    Eigen::ArrayXXd W(n_t, n_x);
    for (int j = 0; j < n_t; ++j)
        W(j, n_x - 1) = bc.h1(grid.t_node(j)) + bc.K1 * prev.f3(j, n_x - 1);
    for (int k = n_x - 2; k >= 0; --k) {
        const double xk = grid.x_node(k);
        const double xm = xk + half;
        for (int j = 0; j < n_t; ++j) {
            const double t0 = grid.t_node(j);
            const double m1 = mu_full(1, t0, xk);
            const double th = t0 + half * m1;
            const double m2 = mu_full(1, th, xm);
            const double tf = t0 + dx * m2;

            const Hit2 h = make_hit(th, xm, mc);
            const double p1 = bil(prev.f1, h);
            const double p2 = bil(prev.f2, h);
            const double p3 = bil(prev.f3, h);
            const double d2 = bil(dphi2, h);
            const double l1f = lambda1(g, p1 + mc.r1m[k], p3 + mc.r3m[k]);
            const double mu1f = 1.0 / l1f;
            const double spread = p3 + mc.r3m[k] - p1 - mc.r1m[k];
            const double rhs = mc.a1m[k] * (mu1f - mc.mu1m[k]) * (p1 + p3) +
                               cphi_base * mc.gas->dlog_phi(p2 + mc.S) * spread * spread * mc.F1m[k] * mu1f * d2 +
                               mc.a1m[k] * mc.mu1m[k] * p3 + mc.b1m[k] * mu1f * p3;
            W(j, k) = interp_col(W, k + 1, tf, mc) - dx * rhs;
        }
    }
    for (int k = 0; k < n_x; ++k) next.f1.col(k) = W.col(k) / mc.F1g[k];

    // family 2: plain advection from x = 0 up, boundary row uses the fresh Phi1
    for (int j = 0; j < n_t; ++j)
        next.f2(j, 0) = bc.h2(grid.t_node(j)) + bc.K2 * next.f1(j, 0);
    for (int k = 0; k + 1 < n_x; ++k) {
        const double xk1 = grid.x_node(k + 1);
        const double xm = grid.x_node(k) + half;
        for (int j = 0; j < n_t; ++j) {
            const double t0 = grid.t_node(j);
            const double m1 = mu_full(2, t0, xk1);
            const double th = t0 - half * m1;
            const double m2 = mu_full(2, th, xm);
            const double tf = t0 - dx * m2;
            next.f2(j, k + 1) = interp_col(next.f2, k, tf, mc);
        }
    }

    // family 3: V = F3 * Phi3, marched from x = 0 up; boundary couples to the
    // PREVIOUS iterate's Phi1 at x = 0
    Eigen::ArrayXXd V(n_t, n_x);
    for (int j = 0; j < n_t; ++j)
        V(j, 0) = bc.h3(grid.t_node(j)) + bc.K3 * prev.f1(j, 0);
    for (int k = 0; k + 1 < n_x; ++k) {
        const double xk1 = grid.x_node(k + 1);
        const double xm = grid.x_node(k) + half;
        for (int j = 0; j < n_t; ++j) {
            const double t0 = grid.t_node(j);
            const double m1 = mu_full(3, t0, xk1);
            const double th = t0 - half * m1;
            const double m2 = mu_full(3, th, xm);
            const double tf = t0 - dx * m2;

            const Hit2 h = make_hit(th, xm, mc);
            const double p1 = bil(prev.f1, h);
            const double p2 = bil(prev.f2, h);
            const double p3 = bil(prev.f3, h);
            const double d2 = bil(dphi2, h);
            const double l3f = lambda3(g, p1 + mc.r1m[k], p3 + mc.r3m[k]);
            const double mu3f = 1.0 / l3f;
            const double spread = p3 + mc.r3m[k] - p1 - mc.r1m[k];
            const double rhs = mc.a3m[k] * (mu3f - mc.mu3m[k]) * (p1 + p3) +
                               cphi_base * mc.gas->dlog_phi(p2 + mc.S) * spread * spread * mc.F3m[k] * mu3f * d2 +
                               mc.a3m[k] * mc.mu3m[k] * p1 + mc.b3m[k] * mu3f * p1;
            V(j, k + 1) = interp_col(V, k, tf, mc) + dx * rhs;
        }
    }
    for (int k = 0; k < n_x; ++k) next.f3.col(k) = V.col(k) / mc.F3g[k];

    return next;
}

PeriodicField build_periodic(const SteadyProfile& profile, const BoundarySignals& bc,
                             const PeriodicGrid& grid, const BuildOptions& opts, BuildReport* report) {
    grid.validate();
    if (!(opts.tol_iter > 0.0)) throw UsageError("builder: tol_iter must be positive");
    if (opts.max_iter < 1) throw UsageError("builder: max_iter must be at least 1");

    const auto t_start = std::chrono::steady_clock::now();
    const IntegratingFactors fac = integrating_factors(profile);
    const double margin = subsonic_guard_margin(profile, opts.guard_fraction);

    BuildReport local;
    BuildReport& rep = report ? *report : local;
    rep = BuildReport{};
    rep.guard_margin = margin;
    rep.k_steady = fac.k_steady;
    rep.m_bound = fac.m_bound;
    rep.f1_max = fac.F1.maxCoeff();
    rep.f3_max = fac.F3.maxCoeff();

    PeriodicField cur = PeriodicField::constant(grid, 0.0, bc.m0(), 0.0);
    for (int l = 1; l <= opts.max_iter; ++l) {
        PeriodicField nxt = iterate_once(cur, profile, bc, fac, margin, opts.entropy_gradient);
        const double d = sup_distance(nxt, cur);
        if (!rep.sup_diffs.empty()) {
            const double prev_d = rep.sup_diffs.back();
            rep.ratios.push_back(prev_d > 0.0 ? d / prev_d : 0.0);
        }
        rep.sup_diffs.push_back(d);
        rep.iterations = l;
        rep.final_residual = d;
        cur = std::move(nxt);
        if (d <= opts.tol_iter) {
            rep.converged = true;
            break;
        }
    }
    rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    if (!rep.converged)
        throw ConvergenceError("builder: fixed-point iteration did not reach tol " +
                               std::to_string(opts.tol_iter) + " within " + std::to_string(opts.max_iter) +
                               " sweeps; last residual " + std::to_string(rep.final_residual));
    return cur;
}

}  // namespace fannowave
