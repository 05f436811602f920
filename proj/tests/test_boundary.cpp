#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fannowave/boundary.hpp"
#include "fannowave/damping.hpp"

using namespace fannowave;

namespace {
SteadyProfile desk_profile() {
    GasModel gas(1.4);
    return solve_fanno(gas, DampingProfile::constant(-0.2, 1.0), {0.2, 1.0, 0.0}, 1.0, 257);
}
}  // namespace

TEST_CASE("signal evaluation sums mean and harmonics") {
    SignalSpec s{0.5, {{0.1, 1, 0.0}, {0.05, 3, M_PI / 2}}};
    const double P = 2.0;
    for (double t : {0.0, 0.3, 1.9}) {
        const double expect = 0.5 + 0.1 * std::sin(2 * M_PI * t / P) +
                              0.05 * std::sin(2 * M_PI * 3 * t / P + M_PI / 2);
        CHECK(s.eval(t, P) == doctest::Approx(expect).epsilon(1e-15));
    }
    CHECK(s.eval(0.3, P) == doctest::Approx(s.eval(0.3 + P, P)).epsilon(1e-12));
    CHECK(s.oscillation() == doctest::Approx(0.15));
}

TEST_CASE("gain constraints") {
    BoundarySpec spec;
    spec.K1 = 1.2;
    CHECK_THROWS_AS(spec.validate(), DomainError);
    spec.K1 = 1.0;
    spec.K3 = 1.0;
    CHECK_THROWS_AS(spec.validate(), DomainError);  // |K1 K3| = 1
    spec.K3 = 0.5;
    CHECK_NOTHROW(spec.validate());
    CHECK(spec.edge_gains());
    spec.K1 = 0.9;
    CHECK_FALSE(spec.edge_gains());
    spec.P = -1.0;
    CHECK_THROWS_AS(spec.validate(), DomainError);
}

TEST_CASE("harmonic index must be positive") {
    BoundarySpec spec;
    spec.G1.harmonics = {{0.1, 0, 0.0}};
    CHECK_THROWS_AS(spec.validate(), DomainError);
    spec.G1.harmonics = {{0.1, -2, 0.0}};
    CHECK_THROWS_AS(spec.validate(), DomainError);
}

TEST_CASE("steady reference passes signals through as offsets") {
    const SteadyProfile prof = desk_profile();
    BoundarySpec spec;
    spec.P = 2.0;
    spec.K1 = 0.4;
    spec.G1 = {0.01, {{0.001, 1, 0.2}}};
    spec.G2 = {1.0, {}};
    spec.G3 = {0.0, {{0.002, 2, 0.0}}};
    const BoundarySignals bc = resolve_boundary(spec, prof);
    CHECK(bc.P == 2.0);
    CHECK(bc.K1 == 0.4);
    CHECK(bc.H1.mean == 0.01);
    CHECK(bc.H2.mean == 1.0);
    CHECK(bc.H3.mean == 0.0);
    CHECK(bc.m0() == 1.0);
    CHECK(bc.H1.harmonics == spec.G1.harmonics);
    CHECK(bc.h3(0.25) == doctest::Approx(0.002 * std::sin(M_PI / 2)).epsilon(1e-12));
}

TEST_CASE("absolute reference subtracts the steady anchors") {
    const SteadyProfile prof = desk_profile();
    BoundarySpec spec;
    spec.P = 2.0;
    spec.reference = BoundaryReference::Absolute;
    spec.G1 = {0.0, {}};
    spec.G2 = {1.0, {}};
    spec.G3 = {0.0, {}};
    const BoundarySignals bc = resolve_boundary(spec, prof);
    CHECK(bc.H1.mean == doctest::Approx(-prof.r1_at(1.0)).epsilon(1e-14));
    CHECK(bc.H2.mean == doctest::Approx(1.0 - prof.S).epsilon(1e-14));
    CHECK(bc.H3.mean == doctest::Approx(-prof.r3_at(0.0)).epsilon(1e-14));
}

TEST_CASE("epsilon measures the largest signal scale") {
    BoundarySignals bc;
    bc.H1 = {0.001, {{0.002, 1, 0.0}}};
    bc.H2 = {1.0, {{0.0001, 1, 0.0}}};  // the entropy mean M0 does not count
    bc.H3 = {0.0, {}};
    CHECK(bc.epsilon() == doctest::Approx(0.003));
}
