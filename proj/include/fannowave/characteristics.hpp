// Characteristic tracing with explicit midpoint (RK2) steps. Two flavors:
// march in x solving dt/dx = mu(t, x) (the builder's frozen-coefficient
// curves), and march in t solving dx/dt = lambda(t, x) with clipping at the
// duct ends (paths through simulated fields).

#pragma once

#include <functional>
#include <vector>

#include "fannowave/errors.hpp"

namespace fannowave {

enum class PathEnd { ReachedTarget, LeftDomain };

struct CharPath {
    int family = 0;                // 1, 2, or 3
    std::vector<double> t, x;      // ordered samples, t[i] paired with x[i]
    PathEnd end = PathEnd::ReachedTarget;

    double t_back() const { return t.back(); }
    double x_back() const { return x.back(); }
};

using SlopeFn = std::function<double(double t, double x)>;

struct TraceOptions {
    double step = 0.0;            // substep magnitude in the march variable; must be > 0
    double slope_bound = 1e12;    // |slope| above this raises InstabilityError
};

// dt/dx = mu(t, x) from (t0, x0) to x_target; works in either x direction.
CharPath trace_in_x(const SlopeFn& mu, int family, double t0, double x0, double x_target,
                    const TraceOptions& opts);

// dx/dt = lambda(t, x) from (t0, x0) toward t_target (either direction). The
// path is clipped at x = 0 and x = L (exit point located by linear
// interpolation inside the offending substep) and tagged LeftDomain.
CharPath trace_in_t(const SlopeFn& lambda, int family, double t0, double x0, double t_target,
                    double L, const TraceOptions& opts);

}  // namespace fannowave
