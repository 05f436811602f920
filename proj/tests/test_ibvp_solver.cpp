#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fannowave/ibvp_solver.hpp"
#include "fannowave/periodic_builder.hpp"

using namespace fannowave;

namespace {

SteadyProfile desk_profile(int n_x = 129, double alpha = -0.2) {
    GasModel gas(1.4);
    return solve_fanno(gas, DampingProfile::constant(alpha, 1.0), {0.2, 1.0, 0.0}, 1.0, n_x);
}

BoundarySignals quiet_boundary(const SteadyProfile& prof, double K = 0.0) {
    BoundarySpec spec;
    spec.P = 2.0;
    spec.K1 = K;
    spec.K3 = K;
    spec.G2.mean = 1.0;
    return resolve_boundary(spec, prof);
}

InitialData bumped(const SteadyProfile& prof, double amplitude) {
    InitialData init;
    const int n = prof.n();
    init.f1 = Eigen::ArrayXd::Zero(n);
    init.f2 = Eigen::ArrayXd::Constant(n, 1.0);
    init.f3 = Eigen::ArrayXd::Zero(n);
    add_bump(init, prof, amplitude, 0.5, 0.2);
    return init;
}

}  // namespace

TEST_CASE("constant state with matching boundary data is preserved") {
    const SteadyProfile prof = desk_profile();
    const BoundarySignals bc = quiet_boundary(prof, 0.9);
    InitialData init;
    init.f1 = Eigen::ArrayXd::Zero(prof.n());
    init.f2 = Eigen::ArrayXd::Constant(prof.n(), 1.0);
    init.f3 = Eigen::ArrayXd::Zero(prof.n());

    SimulateOptions opts;
    const SimResult res = simulate(init, prof, bc, 0.0, 0.7, opts);
    const long long steps = res.cert.steps;
    CHECK(steps >= 100);
    const double slack = 1e-13 * static_cast<double>(steps);
    CHECK(res.traj.f1.abs().maxCoeff() <= slack);
    CHECK((res.traj.f2 - 1.0).abs().maxCoeff() <= slack);
    CHECK(res.traj.f3.abs().maxCoeff() <= slack);
}

TEST_CASE("step size converges at first order") {
    // nested grids: 129, 257, 513 share nodes, so endpoint slices compare
    // directly at the coarse nodes against the finest run
    const double t_end = 0.5;
    auto run = [&](int n_x) {
        const SteadyProfile prof = desk_profile(n_x);
        const BoundarySignals bc = quiet_boundary(prof);
        SimulateOptions opts;
        opts.save_stride = 1000000;  // endpoints only
        return simulate(bumped(prof, 0.01), prof, bc, 0.0, t_end, opts);
    };
    const SimResult a = run(129);
    const SimResult b = run(257);
    const SimResult c = run(513);

    auto err_vs_fine = [&](const SimResult& coarse, int stride) {
        double e = 0.0;
        const int last = coarse.traj.n_saved() - 1;
        const int fine_last = c.traj.n_saved() - 1;
        for (int k = 0; k < coarse.traj.n_x(); ++k) {
            const Sample3 u = coarse.traj.at_node(last, k);
            const Sample3 v = c.traj.at_node(fine_last, k * stride);
            e = std::max({e, std::abs(u.f1 - v.f1), std::abs(u.f2 - v.f2), std::abs(u.f3 - v.f3)});
        }
        return e;
    };
    const double e1 = err_vs_fine(a, 4);
    const double e2 = err_vs_fine(b, 2);
    CHECK(e1 > 0.0);
    const double ratio = e1 / e2;
    CHECK(ratio > 1.6);  // first order: ratio -> 3 against the 4x reference
    CHECK(ratio < 4.5);
}

TEST_CASE("slowest-family horizon") {
    const SteadyProfile prof = desk_profile(513);
    // entropy speed u is the slowest family here and dips to u- = 0.2 at x = 0
    CHECK(t_zero_horizon(prof) == doctest::Approx(5.0).epsilon(1e-12));

    GasModel gas(1.4);
    const SteadyProfile flat =
        solve_fanno(gas, DampingProfile::constant(0.0, 1.0), {0.2, 1.0, 0.0}, 1.0, 129);
    CHECK(t_zero_horizon(flat) == doctest::Approx(5.0).epsilon(1e-12));

    const SteadyProfile faster =
        solve_fanno(gas, DampingProfile::constant(-0.2, 1.0), {0.4, 1.0, 0.0}, 1.0, 129);
    CHECK(t_zero_horizon(faster) < 5.0);

    CHECK_THROWS_AS(t_zero_horizon(prof, 0.5), DomainError);
}

TEST_CASE("initial data validation") {
    const SteadyProfile prof = desk_profile();
    InitialData init;
    init.f1 = Eigen::ArrayXd::Zero(64);  // wrong length
    init.f2 = Eigen::ArrayXd::Zero(prof.n());
    init.f3 = Eigen::ArrayXd::Zero(prof.n());
    CHECK_THROWS_AS(init.validate(prof.n()), UsageError);

    init.f1 = Eigen::ArrayXd::Zero(prof.n());
    init.f1[3] = std::nan("");
    CHECK_THROWS_AS(init.validate(prof.n()), DomainError);
    init.f1[3] = 0.0;
    CHECK_NOTHROW(init.validate(prof.n()));
}

TEST_CASE("bump placement and tagging") {
    const SteadyProfile prof = desk_profile();
    InitialData init;
    init.f1 = Eigen::ArrayXd::Zero(prof.n());
    init.f2 = Eigen::ArrayXd::Constant(prof.n(), 1.0);
    init.f3 = Eigen::ArrayXd::Zero(prof.n());
    init.tag = InitTag::PeriodicSlice;

    CHECK_THROWS_AS(add_bump(init, prof, 0.01, 0.05, 0.2), DomainError);   // support hits x = 0
    CHECK_THROWS_AS(add_bump(init, prof, 0.01, 0.95, 0.2), DomainError);   // support hits x = L
    CHECK_THROWS_AS(add_bump(init, prof, 0.01, 0.5, -0.1), DomainError);

    add_bump(init, prof, 0.01, 0.5, 0.2);
    CHECK(init.tag == InitTag::PeriodicSliceBump);

    // support is [0.3, 0.7]: zero outside, peak value at the center node
    for (int k = 0; k < prof.n(); ++k) {
        const double x = prof.x[k];
        if (x < 0.3 || x > 0.7) {
            CHECK(init.f1[k] == 0.0);
            CHECK(init.f3[k] == 0.0);
        }
    }
    const int mid = (prof.n() - 1) / 2;
    CHECK(init.f1[mid] == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(init.f2[mid] == doctest::Approx(1.01).epsilon(1e-12));

    InitialData expl;
    expl.f1 = Eigen::ArrayXd::Zero(prof.n());
    expl.f2 = Eigen::ArrayXd::Zero(prof.n());
    expl.f3 = Eigen::ArrayXd::Zero(prof.n());
    add_bump(expl, prof, 0.01, 0.5, 0.2);
    CHECK(expl.tag == InitTag::Explicit);  // explicit data stays explicit
}

TEST_CASE("single step rejects oversized dt and guard violations") {
    const SteadyProfile prof = desk_profile();
    const BoundarySignals bc = quiet_boundary(prof);
    const int n = prof.n();
    Eigen::ArrayXd f1 = Eigen::ArrayXd::Zero(n), f2 = Eigen::ArrayXd::Constant(n, 1.0),
                   f3 = Eigen::ArrayXd::Zero(n);
    Eigen::ArrayXd g1(n), g2(n), g3(n);
    const double margin = subsonic_guard_margin(prof);
    const double dx = prof.dx();

    // max speed on the desk profile is lambda3 ~ 1.2, so dt = dx is way over budget
    CHECK_THROWS_AS(step_slice(g1, g2, g3, f1, f2, f3, 0.0, dx, prof, bc, margin, 0.9), UsageError);
    CHECK_NOTHROW(step_slice(g1, g2, g3, f1, f2, f3, 0.0, 0.5 * dx, prof, bc, margin, 0.9));

    // a state pushed past sonic fails certification
    Eigen::ArrayXd bad1 = Eigen::ArrayXd::Constant(n, 2.0);
    CHECK_THROWS_AS(certify_slice(bad1, f3, prof, margin, 0.0), InstabilityError);
    CHECK(certify_slice(f1, f3, prof, margin, 0.0) > 1.0);
}

TEST_CASE("trajectory bookkeeping") {
    const SteadyProfile prof = desk_profile();
    const BoundarySignals bc = quiet_boundary(prof);
    SimulateOptions opts;
    opts.save_stride = 7;
    const double t0 = 0.25, t_final = 0.9;
    const SimResult res = simulate(bumped(prof, 0.005), prof, bc, t0, t_final, opts);

    CHECK(res.traj.times.front() == t0);
    CHECK(res.traj.times.back() == t_final);
    for (size_t i = 1; i + 1 < res.traj.times.size(); ++i) {
        CHECK(res.traj.times[i] > res.traj.times[i - 1]);
        if (i >= 2)
            CHECK(res.traj.times[i] - res.traj.times[i - 1] ==
                  doctest::Approx(7 * res.cert.dt).epsilon(1e-12));
    }
    CHECK(res.cert.cfl_observed <= opts.cfl * (1.0 + 1e-12));
    CHECK(res.cert.cfl_observed > 0.0);
    CHECK(res.cert.dx == prof.dx());
    CHECK(res.cert.steps * res.cert.dt == doctest::Approx(t_final - t0).epsilon(1e-12));

    // auto stride aims for ~64 slices per min(T0, P)
    SimulateOptions auto_opts;
    auto_opts.save_stride = 0;
    const SimResult res2 = simulate(bumped(prof, 0.005), prof, bc, 0.0, 0.5, auto_opts);
    CHECK(res2.traj.n_saved() >= 10);
    CHECK(res2.traj.n_saved() < static_cast<int>(res2.cert.steps) + 1);
}

TEST_CASE("periodic slice initial data reproduces field nodes") {
    const SteadyProfile prof = desk_profile(129);
    BoundarySpec spec;
    spec.P = 2.0;
    spec.K1 = 0.5;
    spec.K3 = 0.5;
    spec.G1.harmonics.push_back({1e-3, 1, 0.0});
    spec.G2.mean = 1.0;
    const BoundarySignals bc = resolve_boundary(spec, prof);
    const PeriodicField field = build_periodic(prof, bc, {2.0, 64, 1.0, 129});

    const InitialData init = slice_initial(field, 0.75, prof);
    CHECK(init.tag == InitTag::PeriodicSlice);
    CHECK(init.f1.size() == prof.n());
    // t = 0.75 is 24 dt on the 64-node time grid, x nodes coincide: exact copy
    for (int k = 0; k < prof.n(); ++k) {
        CHECK(init.f1[k] == field.f1(24, k));
        CHECK(init.f2[k] == field.f2(24, k));
        CHECK(init.f3[k] == field.f3(24, k));
    }
}
