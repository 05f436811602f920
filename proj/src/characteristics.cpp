#include "fannowave/characteristics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fannowave {

namespace {

void check_slope(double s, double bound, double t, double x) {
    if (!(std::abs(s) <= bound))
        throw InstabilityError("characteristic slope |" + std::to_string(s) + "| exceeds bound " +
                               std::to_string(bound) + " at (t, x) = (" + std::to_string(t) + ", " +
                               std::to_string(x) + ")");
}

void check_options(const TraceOptions& opts) {
    if (!(opts.step > 0.0)) throw UsageError("trace: step must be positive");
    if (!(opts.slope_bound > 0.0)) throw UsageError("trace: slope bound must be positive");
}

}  // namespace

CharPath trace_in_x(const SlopeFn& mu, int family, double t0, double x0, double x_target,
                    const TraceOptions& opts) {
    check_options(opts);
    CharPath path;
    path.family = family;
    path.t.push_back(t0);
    path.x.push_back(x0);
    const double span = x_target - x0;
    if (span == 0.0) return path;

    const int n = std::max(1, static_cast<int>(std::ceil(std::abs(span) / opts.step - 1e-12)));
    const double h = span / n;
    double t = t0, x = x0;
    for (int k = 0; k < n; ++k) {
        const double k1 = mu(t, x);
        check_slope(k1, opts.slope_bound, t, x);
        const double xm = x + 0.5 * h;
        const double k2 = mu(t + 0.5 * h * k1, xm);
        check_slope(k2, opts.slope_bound, t + 0.5 * h * k1, xm);
        t += h * k2;
        x = (k + 1 == n) ? x_target : x0 + (k + 1) * h;
        path.t.push_back(t);
        path.x.push_back(x);
    }
    return path;
}

CharPath trace_in_t(const SlopeFn& lambda, int family, double t0, double x0, double t_target,
                    double L, const TraceOptions& opts) {
    check_options(opts);
    if (!(x0 >= 0.0) || !(x0 <= L)) throw DomainError("trace_in_t: start point outside the duct");

    CharPath path;
    path.family = family;
    path.t.push_back(t0);
    path.x.push_back(x0);
    const double span = t_target - t0;  // either sign: forward or backward traces
    if (span == 0.0) return path;

    auto clamped = [&](double x) { return std::clamp(x, 0.0, L); };
    const int n = std::max(1, static_cast<int>(std::ceil(std::abs(span) / opts.step - 1e-12)));
    const double h = span / n;
    double t = t0, x = x0;
    for (int k = 0; k < n; ++k) {
        const double k1 = lambda(t, x);
        check_slope(k1, opts.slope_bound, t, x);
        const double tm = t + 0.5 * h;
        const double k2 = lambda(tm, clamped(x + 0.5 * h * k1));
        check_slope(k2, opts.slope_bound, tm, x);
        const double x_next = x + h * k2;
        const double t_next = (k + 1 == n) ? t_target : t0 + (k + 1) * h;
        if (x_next < 0.0 || x_next > L) {
            const double edge = x_next < 0.0 ? 0.0 : L;
            const double theta = (edge - x) / (x_next - x);  // |x_next - x| > 0 here
            path.t.push_back(t + theta * (t_next - t));
            path.x.push_back(edge);
            path.end = PathEnd::LeftDomain;
            return path;
        }
        t = t_next;
        x = x_next;
        path.t.push_back(t);
        path.x.push_back(x);
    }
    path.end = PathEnd::ReachedTarget;
    return path;
}

}  // namespace fannowave
