#include "fannowave/field_grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace fannowave {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Snap interpolation weights that are within rounding noise of a node. The
// noise scale grows with |s| because s is computed as t/dt or x/dx.
double snap_weight(double w, double s) {
    const double tol = 8.0 * kEps * std::max(1.0, std::abs(s));
    if (w < tol) return 0.0;
    if (w > 1.0 - tol) return 1.0;
    return w;
}

// Endpoint-exact at w = 0 and w = 1, so snapped node hits reproduce stored
// values bit for bit.
double lerp(double ya, double yb, double w) {
    if (w == 0.0) return ya;
    if (w == 1.0) return yb;
    return ya + w * (yb - ya);
}

}  // namespace

AxisHit locate_clamped(double s, int n) {
    if (s < 0.0) s = 0.0;
    int k = static_cast<int>(s);
    if (k > n - 2) k = n - 2;
    double w = snap_weight(s - k, s);
    if (w == 1.0) {
        ++k;
        w = 0.0;
        if (k > n - 2) k = n - 2, w = 1.0;  // exact right edge: use last cell with weight 1
    }
    return {k, k + 1, w};
}

AxisHit locate_periodic(double s, int n) {
    double m = std::fmod(s, static_cast<double>(n));
    if (m < 0.0) m += n;
    if (m >= n) m = 0.0;  // fmod landed exactly on n after the correction
    int j = static_cast<int>(m);
    if (j > n - 1) j = n - 1;
    double w = snap_weight(m - j, s);
    if (w == 1.0) {
        j = (j + 1) % n;
        w = 0.0;
    }
    return {j, (j + 1) % n, w};
}

PeriodicField PeriodicField::constant(const PeriodicGrid& g, double a, double b, double c) {
    PeriodicField f(g);
    f.f1.setConstant(a);
    f.f2.setConstant(b);
    f.f3.setConstant(c);
    return f;
}

AxisHit PeriodicField::hit_x(double x) const {
    const double slack = 4.0 * kEps * std::max(1.0, grid.L);
    if (!(x >= -slack) || !(x <= grid.L + slack))
        throw DomainError("field sample: x = " + std::to_string(x) + " outside [0, " +
                          std::to_string(grid.L) + "]");
    return locate_clamped(x / grid.dx(), grid.n_x);
}

double PeriodicField::sample_component(const Eigen::ArrayXXd& comp, double t, double x) const {
    const AxisHit ht = hit_t(t);
    const AxisHit hx = hit_x(x);
    const double a = lerp(comp(ht.i0, hx.i0), comp(ht.i1, hx.i0), ht.w);
    const double b = lerp(comp(ht.i0, hx.i1), comp(ht.i1, hx.i1), ht.w);
    return lerp(a, b, hx.w);
}

Sample3 PeriodicField::sample(double t, double x) const {
    const AxisHit ht = hit_t(t);
    const AxisHit hx = hit_x(x);
    auto bil = [&](const Eigen::ArrayXXd& comp) {
        const double a = lerp(comp(ht.i0, hx.i0), comp(ht.i1, hx.i0), ht.w);
        const double b = lerp(comp(ht.i0, hx.i1), comp(ht.i1, hx.i1), ht.w);
        return lerp(a, b, hx.w);
    };
    return {bil(f1), bil(f2), bil(f3)};
}

double sup_distance(const PeriodicField& a, const PeriodicField& b) {
    const auto d = sup_distance_by_component(a, b);
    return std::max({d[0], d[1], d[2]});
}

std::array<double, 3> sup_distance_by_component(const PeriodicField& a, const PeriodicField& b) {
    if (!(a.grid == b.grid)) throw UsageError("sup_distance: fields live on different grids");
    return {(a.f1 - b.f1).abs().maxCoeff(), (a.f2 - b.f2).abs().maxCoeff(),
            (a.f3 - b.f3).abs().maxCoeff()};
}

Eigen::ArrayXXd dx_central(const Eigen::ArrayXXd& f, double h) {
    const auto n = f.cols();
    if (n < 3) throw UsageError("dx_central: need at least 3 columns");
    if (!(h > 0.0)) throw UsageError("dx_central: spacing must be positive");
    Eigen::ArrayXXd d(f.rows(), n);
    d.middleCols(1, n - 2) = (f.rightCols(n - 2) - f.leftCols(n - 2)) / (2.0 * h);
    d.col(0) = (4.0 * f.col(1) - 3.0 * f.col(0) - f.col(2)) / (2.0 * h);
    d.col(n - 1) = (3.0 * f.col(n - 1) - 4.0 * f.col(n - 2) + f.col(n - 3)) / (2.0 * h);
    return d;
}

Eigen::ArrayXd dx_central(const Eigen::ArrayXd& f, double h) {
    const auto n = f.size();
    if (n < 3) throw UsageError("dx_central: need at least 3 nodes");
    if (!(h > 0.0)) throw UsageError("dx_central: spacing must be positive");
    Eigen::ArrayXd d(n);
    d.segment(1, n - 2) = (f.tail(n - 2) - f.head(n - 2)) / (2.0 * h);
    d[0] = (4.0 * f[1] - 3.0 * f[0] - f[2]) / (2.0 * h);
    d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
    return d;
}

AxisHit WindowField::hit_time(double t) const {
    if (times.size() < 2) throw UsageError("window field: need at least 2 saved slices");
    const double span = times.back() - times.front();
    const double slack = 8.0 * kEps * std::max(1.0, std::abs(times.back()));
    if (!(t >= times.front() - slack) || !(t <= times.back() + slack))
        throw DomainError("window field: t = " + std::to_string(t) + " outside [" +
                          std::to_string(times.front()) + ", " + std::to_string(times.back()) + "]");
    auto it = std::upper_bound(times.begin(), times.end(), t);
    int m = static_cast<int>(it - times.begin()) - 1;
    if (m < 0) m = 0;
    if (m > n_saved() - 2) m = n_saved() - 2;
    const double gap = times[m + 1] - times[m];
    double w = (t - times[m]) / gap;
    w = std::clamp(w, 0.0, 1.0);
    // snap in units of the local index coordinate
    const double tol = 8.0 * kEps * std::max(1.0, std::abs(t) / std::max(gap, span / n_saved()));
    if (w < tol) w = 0.0;
    if (w > 1.0 - tol) w = 1.0;
    if (w == 1.0 && m < n_saved() - 2) {
        ++m;
        w = 0.0;
    }
    return {m, m + 1, w};
}

AxisHit WindowField::hit_x(double xq) const {
    const double slack = 4.0 * kEps * std::max(1.0, L);
    if (!(xq >= -slack) || !(xq <= L + slack))
        throw DomainError("window field: x = " + std::to_string(xq) + " outside [0, " + std::to_string(L) + "]");
    const double h = L / (n_x() - 1);
    return locate_clamped(xq / h, n_x());
}

double WindowField::sample_component(const Eigen::ArrayXXd& comp, double t, double xq) const {
    const AxisHit ht = hit_time(t);
    const AxisHit hx = hit_x(xq);
    const double a = lerp(comp(ht.i0, hx.i0), comp(ht.i1, hx.i0), ht.w);
    const double b = lerp(comp(ht.i0, hx.i1), comp(ht.i1, hx.i1), ht.w);
    return lerp(a, b, hx.w);
}

Sample3 WindowField::sample(double t, double xq) const {
    return {sample_component(f1, t, xq), sample_component(f2, t, xq), sample_component(f3, t, xq)};
}

}  // namespace fannowave
