#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fannowave/stability.hpp"

using namespace fannowave;

namespace {

SteadyProfile desk_profile(int n_x = 65, double alpha = -0.2) {
    GasModel gas(1.4);
    return solve_fanno(gas, DampingProfile::constant(alpha, 1.0), {0.2, 1.0, 0.0}, 1.0, n_x);
}

BoundarySignals quiet_boundary(const SteadyProfile& prof, double P = 2.0) {
    BoundarySpec spec;
    spec.P = P;
    spec.K1 = 0.5;
    spec.K3 = 0.5;
    spec.G2.mean = 1.0;
    return resolve_boundary(spec, prof);
}

WindowField synthetic_traj(int n_saved, int n_x, double dt) {
    WindowField traj;
    traj.L = 1.0;
    traj.x = Eigen::ArrayXd::LinSpaced(n_x, 0.0, 1.0);
    traj.f1 = Eigen::ArrayXXd::Zero(n_saved, n_x);
    traj.f2 = Eigen::ArrayXXd::Zero(n_saved, n_x);
    traj.f3 = Eigen::ArrayXXd::Zero(n_saved, n_x);
    for (int s = 0; s < n_saved; ++s) traj.times.push_back(s * dt);
    return traj;
}

}  // namespace

TEST_CASE("period residual vanishes on an exactly periodic record") {
    const double P = 2.0;
    WindowField traj = synthetic_traj(81, 11, 0.05);  // span 4.0 = 2 P
    for (int s = 0; s < traj.n_saved(); ++s)
        for (int k = 0; k < traj.n_x(); ++k) {
            const double v = std::sin(2.0 * M_PI * traj.times[s] / P) * (1.0 + traj.x[k]);
            traj.f1(s, k) = v;
            traj.f2(s, k) = 1.0;
            traj.f3(s, k) = -v;
        }
    CHECK(period_residual(traj, P) <= 1e-14);
}

TEST_CASE("period residual sees a decaying transient") {
    const double P = 1.0;
    WindowField traj = synthetic_traj(121, 5, 0.05);  // span 6.0
    for (int s = 0; s < traj.n_saved(); ++s) {
        const double t = traj.times[s];
        traj.f1.row(s) = std::exp(-t);
        traj.f2.row(s) = 0.0;
        traj.f3.row(s) = 0.0;
    }
    // sup over the last period of e^-t (1 - e^-P), hit at t = span - 2P
    const double expect = std::exp(-4.0) * (1.0 - std::exp(-1.0));
    CHECK(period_residual(traj, P) == doctest::Approx(expect).epsilon(1e-10));
    CHECK_THROWS_AS(period_residual(traj, 4.0), UsageError);  // needs span >= 2 P
}

TEST_CASE("window distances against a matching constant field") {
    const PeriodicGrid grid{2.0, 16, 1.0, 11};
    const PeriodicField periodic = PeriodicField::constant(grid, 0.0, 1.0, 0.0);

    WindowField traj = synthetic_traj(101, 11, 0.1);  // span 10, T0 = 2.5 -> 4 windows
    traj.f2 = 1.0;
    for (int s = 0; s < traj.n_saved(); ++s) {
        const int w = static_cast<int>(traj.times[s] / 2.5);
        if (traj.times[s] >= 10.0) break;
        traj.f1.row(s) = 1e-2 * std::pow(0.5, w);
    }
    const auto win = window_distances(traj, periodic, 2.5);
    REQUIRE(win.size() == 4);
    for (int N = 0; N < 4; ++N) {
        CHECK(win[N].N == N);
        CHECK(win[N].d == doctest::Approx(1e-2 * std::pow(0.5, N)).epsilon(1e-12));
    }

    const DecayFit fit = fit_decay(win, 1e-12);
    CHECK_FALSE(fit.degenerate);
    CHECK(fit.n_used == 4);
    CHECK(fit.xi_hat == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(fit.log_rmse <= 1e-10);
    CHECK(fit.fit_residual <= 1e-9);
}

TEST_CASE("decay fit degenerates at the floor") {
    std::vector<WindowDistance> win;
    for (int N = 0; N < 6; ++N) win.push_back({N, 2e-10});
    const DecayFit fit = fit_decay(win, 1e-10);  // everything below 3 * floor
    CHECK(fit.degenerate);
    CHECK(fit.n_used == 0);
    CHECK(std::isnan(fit.xi_hat));
}

TEST_CASE("replaying the trivial periodic orbit is exact") {
    const SteadyProfile prof = desk_profile(65);
    const BoundarySignals bc = quiet_boundary(prof);
    const PeriodicGrid grid{2.0, 32, 1.0, 65};
    const PeriodicField periodic = build_periodic(prof, bc, grid);

    const CrossValidation cv = cross_validate(prof, periodic, bc);
    CHECK(cv.pass);
    CHECK(cv.distance <= 1e-12);
    CHECK(cv.T0 == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(cv.t_final >= 10.0 * cv.T0);
    CHECK(std::fmod(cv.t_final, bc.P) <= 1e-9);
}

TEST_CASE("mismatched forcing period shows up in the distance") {
    const SteadyProfile prof = desk_profile(65);
    BoundarySpec spec;
    spec.P = 2.0;
    spec.K1 = 0.5;
    spec.K3 = 0.5;
    spec.G2.mean = 1.0;
    spec.G1.harmonics.push_back({1e-3, 1, 0.0});
    const BoundarySignals bc = resolve_boundary(spec, prof);
    const PeriodicGrid grid{2.0, 32, 1.0, 65};
    const PeriodicField periodic = build_periodic(prof, bc, grid);

    spec.P = 1.9;  // drive the replay off the orbit's period
    const BoundarySignals bc_wrong = resolve_boundary(spec, prof);
    const CrossValidation cv = cross_validate(prof, periodic, bc_wrong);
    // phase drift between the legs saturates at the forcing scale, orders of
    // magnitude above the matched-replay discretization floor
    CHECK(cv.distance > 1e-4);
}

TEST_CASE("entropy stays constant along traced characteristics of a steady run") {
    const SteadyProfile prof = desk_profile(65);
    const BoundarySignals bc = quiet_boundary(prof);
    InitialData init;
    init.f1 = Eigen::ArrayXd::Zero(prof.n());
    init.f2 = Eigen::ArrayXd::Constant(prof.n(), 1.0);
    init.f3 = Eigen::ArrayXd::Zero(prof.n());
    const SimResult res = simulate(init, prof, bc, 0.0, 1.0, {.save_stride = 1});

    TraceOptions topts;
    topts.step = res.cert.dt;
    const EntropyDrift drift = entropy_drift(res.traj, prof, 25, 0.05, 0.5, topts);
    CHECK(drift.n_paths == 25);
    CHECK(drift.n_reached == 25);  // speeds ~0.2: nothing exits within t = 1 from x <= 0.5
    CHECK(drift.max_drift <= 1e-12);
    CHECK(drift.span == doctest::Approx(1.0));
}

TEST_CASE("stability experiment on the trivial orbit decays to the floor") {
    const SteadyProfile prof = desk_profile(65);
    const BoundarySignals bc = quiet_boundary(prof);
    const PeriodicGrid grid{2.0, 32, 1.0, 65};
    const PeriodicField periodic = build_periodic(prof, bc, grid);

    StabilityOptions opts;
    opts.windows = 4;
    opts.bump_amplitude = 0.01;
    const StabilityReport rep = stability_experiment(prof, bc, periodic, opts);

    CHECK(rep.T0 == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(rep.xi_bound > 0.0);
    CHECK(rep.xi_bound < 1.0);
    REQUIRE(rep.windows_c0.size() == 4);
    CHECK(rep.windows_c0[0].d == doctest::Approx(0.01).epsilon(0.3));  // bump amplitude
    // perturbation must shrink substantially over 4 traversal windows
    CHECK(rep.windows_c0[3].d < 0.2 * rep.windows_c0[0].d);
    for (size_t i = 1; i < rep.windows_c0.size(); ++i)
        CHECK(rep.windows_c0[i].d <= std::max(1.1 * rep.windows_c0[i - 1].d, 3.0 * rep.floor_c0));
    CHECK(rep.windows_c1.size() == 4);
    CHECK(rep.floor_c0 >= 0.0);
    CHECK(rep.cert.steps > 0);
}
