// Periodic-in-time fields on the duct, trajectory windows, and the small grid
// algebra everything else leans on: bilinear sampling (periodic in t, clamped
// cells in x), second-order x-derivatives, and sup-norm distances.
//
// Storage convention: a field component is an Eigen::ArrayXXd with n_t rows
// (time, wrapping) and n_x columns (space), so a fixed-x column is contiguous.

#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "fannowave/errors.hpp"

namespace fannowave {

struct PeriodicGrid {
    double P = 1.0;  // time period, nodes t_j = j P / n_t, j = 0 .. n_t-1 (t = P wraps to 0)
    int n_t = 64;
    double L = 1.0;  // duct length, nodes x_k = k L / (n_x - 1)
    int n_x = 65;

    void validate() const {
        if (!(P > 0.0) || !(L > 0.0)) throw DomainError("grid: P and L must be positive");
        if (n_t < 2 || n_x < 3) throw UsageError("grid: need n_t >= 2 and n_x >= 3");
    }

    double dt() const { return P / n_t; }
    double dx() const { return L / (n_x - 1); }
    double t_node(int j) const { return P * j / n_t; }
    double x_node(int k) const { return L * k / (n_x - 1); }
    bool operator==(const PeriodicGrid& o) const {
        return P == o.P && n_t == o.n_t && L == o.L && n_x == o.n_x;
    }
};

// Cell index + interpolation weight along one axis, in index units. Weights
// within a few ulps of a node snap onto it so node queries reproduce stored
// values exactly.
struct AxisHit {
    int i0, i1;
    double w;
};

AxisHit locate_clamped(double s, int n);   // s in [0, n-1], domain-checked by caller
AxisHit locate_periodic(double s, int n);  // any s, wraps mod n

struct Sample3 {
    double f1, f2, f3;
};

struct PeriodicField {
    PeriodicGrid grid;
    Eigen::ArrayXXd f1, f2, f3;  // n_t x n_x each

    PeriodicField() = default;
    explicit PeriodicField(const PeriodicGrid& g)
        : grid(g),
          f1(Eigen::ArrayXXd::Zero(g.n_t, g.n_x)),
          f2(Eigen::ArrayXXd::Zero(g.n_t, g.n_x)),
          f3(Eigen::ArrayXXd::Zero(g.n_t, g.n_x)) {
        grid.validate();
    }

    static PeriodicField constant(const PeriodicGrid& g, double a, double b, double c);

    // Bilinear sample: periodic wrap in t, clamped cell in x, x outside [0, L]
    // (beyond roundoff slack) is a domain error.
    Sample3 sample(double t, double x) const;
    double sample_component(const Eigen::ArrayXXd& comp, double t, double x) const;

    AxisHit hit_t(double t) const { return locate_periodic(t / grid.dt(), grid.n_t); }
    AxisHit hit_x(double x) const;
};

// Max over components and nodes of |a - b|; grids must match.
double sup_distance(const PeriodicField& a, const PeriodicField& b);
std::array<double, 3> sup_distance_by_component(const PeriodicField& a, const PeriodicField& b);

// d/dx along columns: second-order central inside, second-order one-sided at
// the two boundary columns. Needs at least 3 columns.
Eigen::ArrayXXd dx_central(const Eigen::ArrayXXd& f, double h);
Eigen::ArrayXd dx_central(const Eigen::ArrayXd& f, double h);

// Trajectory storage: slices of the three components at saved times over one
// spatial grid. Time interpolation is linear and NOT periodic; queries outside
// [front, back] of times are domain errors.
struct WindowField {
    double L = 1.0;
    Eigen::ArrayXd x;           // n_x nodes, uniform
    std::vector<double> times;  // strictly increasing saved times
    Eigen::ArrayXXd f1, f2, f3; // n_saved rows x n_x columns

    int n_saved() const { return static_cast<int>(times.size()); }
    int n_x() const { return static_cast<int>(x.size()); }

    Sample3 sample(double t, double xq) const;
    double sample_component(const Eigen::ArrayXXd& comp, double t, double xq) const;

    // Row pair + weight for a time query (binary search + snap).
    AxisHit hit_time(double t) const;
    AxisHit hit_x(double xq) const;

    Sample3 at_node(int slice, int k) const { return {f1(slice, k), f2(slice, k), f3(slice, k)}; }
};

}  // namespace fannowave
