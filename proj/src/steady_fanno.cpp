#include "fannowave/steady_fanno.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace fannowave {

namespace {

struct Derivs {
    double du, dc;
};

// Right-hand side of the reduced steady system. Throws ChokingError the moment
// a stage state touches the sonic margin, so a blown-up stage can never be
// silently integrated through.
Derivs fanno_rhs(const GasModel& gas, const DampingProfile& damping, double x, double u, double c,
                 double sonic_floor) {
    if (!(c - u >= sonic_floor))
        throw ChokingError("fanno: duct chokes near x = " + std::to_string(x) +
                               " (c - u fell below the sonic margin)",
                           x);
    if (!(u > 0.0)) throw DomainError("fanno: velocity left (0, c) near x = " + std::to_string(x));
    const double du = damping(x) * u * u / (u * u - c * c);
    const double dc = -0.5 * (gas.gamma - 1.0) * (c / u) * du;
    return {du, dc};
}

}  // namespace

double SteadyProfile::interp(const Eigen::ArrayXd& q, double xq) const {
    const int nn = n();
    const double h = dx();
    const double slack = 4.0 * std::numeric_limits<double>::epsilon() * (L > 1.0 ? L : 1.0);
    if (!(xq >= -slack) || !(xq <= L + slack))
        throw DomainError("steady profile: x = " + std::to_string(xq) + " outside [0, " + std::to_string(L) + "]");
    double s = xq / h;
    if (s < 0.0) s = 0.0;
    int k = static_cast<int>(s);
    if (k > nn - 2) k = nn - 2;
    const double w = s - k;
    return q[k] + w * (q[k + 1] - q[k]);
}

SteadyProfile solve_fanno(const GasModel& gas, const DampingProfile& damping, const InflowState& inflow,
                          double L, int n_x, const FannoOptions& opts) {
    inflow.validate();
    if (!(L > 0.0)) throw DomainError("fanno: duct length must be positive");
    if (n_x < 2) throw UsageError("fanno: need at least 2 grid nodes");
    if (!(opts.choking_margin > 0.0)) throw UsageError("fanno: choking margin must be positive");

    SteadyProfile p;
    p.gas = gas;
    p.damping = damping;
    p.L = L;
    p.S = inflow.S_minus;
    p.x = Eigen::ArrayXd::LinSpaced(n_x, 0.0, L);
    p.u.resize(n_x);
    p.c.resize(n_x);

    const double floor = opts.choking_margin * inflow.c_minus;
    const double h = L / (n_x - 1);
    double u = inflow.u_minus;
    double c = inflow.c_minus;
    p.u[0] = u;
    p.c[0] = c;
    for (int k = 0; k + 1 < n_x; ++k) {
        const double x0 = p.x[k];
        const Derivs k1 = fanno_rhs(gas, damping, x0, u, c, floor);
        const Derivs k2 = fanno_rhs(gas, damping, x0 + 0.5 * h, u + 0.5 * h * k1.du, c + 0.5 * h * k1.dc, floor);
        const Derivs k3 = fanno_rhs(gas, damping, x0 + 0.5 * h, u + 0.5 * h * k2.du, c + 0.5 * h * k2.dc, floor);
        const Derivs k4 = fanno_rhs(gas, damping, x0 + h, u + h * k3.du, c + h * k3.dc, floor);
        u += (h / 6.0) * (k1.du + 2.0 * k2.du + 2.0 * k3.du + k4.du);
        c += (h / 6.0) * (k1.dc + 2.0 * k2.dc + 2.0 * k3.dc + k4.dc);
        if (!(c - u >= floor))
            throw ChokingError("fanno: duct chokes near x = " + std::to_string(p.x[k + 1]) +
                                   " (c - u fell below the sonic margin)",
                               p.x[k + 1]);
        p.u[k + 1] = u;
        p.c[k + 1] = c;
    }

    const double spread = 2.0 / (gas.gamma - 1.0);
    p.r1 = p.u - spread * p.c;
    p.r3 = p.u + spread * p.c;
    p.lam1 = lambda1(gas.gamma, p.r1, p.r3);
    p.lam2 = lambda2(p.r1, p.r3);
    p.lam3 = lambda3(gas.gamma, p.r1, p.r3);
    return p;
}

double max_duct_length(const GasModel& gas, const DampingProfile& damping, const InflowState& inflow,
                       const DuctLengthOptions& opts) {
    inflow.validate();
    if (!(opts.bracket_tol > 0.0)) throw UsageError("max_duct_length: bracket tolerance must be positive");

    auto solves = [&](double L) {
        try {
            DampingProfile scaled(damping.coeffs(), L);  // re-certify alpha <= 0 on the probe length
            solve_fanno(gas, scaled, inflow, L, opts.n_x, opts.fanno);
            return true;
        } catch (const ChokingError&) {
            return false;
        }
    };

    if (solves(opts.horizon)) return std::numeric_limits<double>::infinity();

    double lo = 0.0;  // zero length trivially solves
    double hi = 1.0 < opts.horizon ? 1.0 : opts.horizon;
    while (solves(hi)) {
        lo = hi;
        hi *= 2.0;
        if (hi >= opts.horizon) {
            hi = opts.horizon;
            break;  // horizon already known to fail
        }
    }
    while (hi - lo > opts.bracket_tol) {
        const double mid = 0.5 * (lo + hi);
        (solves(mid) ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double subsonic_guard_margin(const SteadyProfile& profile, double fraction) {
    const double m = std::min(profile.u.minCoeff(), (profile.c - profile.u).minCoeff());
    return fraction * m;
}

}  // namespace fannowave
