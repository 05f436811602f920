// Periodic boundary forcing and feedback gains. The configured signals G_i are
// harmonic series; resolving them against a steady profile yields the
// perturbation-level signals
//     H1(t) = G1(t) - r1~(L),  H2(t) = G2(t) - S,  H3(t) = G3(t) - r3~(0),
// which is what the builder and the time stepper consume. With the (default)
// steady reference the configured means are already offsets from those anchor
// values, so H_i is the configured series verbatim; mean(H2) is the entropy
// level M0.

#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "fannowave/errors.hpp"
#include "fannowave/steady_fanno.hpp"

namespace fannowave {

struct Harmonic {
    double amplitude = 0.0;
    int k = 1;        // integer multiple of the base frequency 2*pi/P
    double phase = 0.0;

    bool operator==(const Harmonic&) const = default;
};

struct SignalSpec {
    double mean = 0.0;
    std::vector<Harmonic> harmonics;

    double eval(double t, double P) const {
        double v = mean;
        for (const Harmonic& h : harmonics) v += h.amplitude * std::sin(2.0 * M_PI * h.k * t / P + h.phase);
        return v;
    }
    double oscillation() const {
        double a = 0.0;
        for (const Harmonic& h : harmonics) a += std::abs(h.amplitude);
        return a;
    }

    bool operator==(const SignalSpec&) const = default;
};

enum class BoundaryReference {
    Steady,    // configured means are offsets from the steady-compatible values
    Absolute,  // configured series are the literal G_i
};

struct BoundarySpec {
    double P = 1.0;
    double K1 = 0.0, K2 = 0.0, K3 = 0.0;
    BoundaryReference reference = BoundaryReference::Steady;
    SignalSpec G1, G2, G3;

    // Enforces |K1| <= 1, |K3| <= 1, |K1 K3| < 1. Gains sitting exactly on
    // |K| = 1 are admitted but reported so callers can warn: the validated
    // operating regime keeps them strictly inside.
    void validate() const {
        if (!(P > 0.0)) throw DomainError("boundary: period P must be positive");
        if (!(std::abs(K1) <= 1.0)) throw DomainError("boundary: need |K1| <= 1, got " + std::to_string(K1));
        if (!(std::abs(K3) <= 1.0)) throw DomainError("boundary: need |K3| <= 1, got " + std::to_string(K3));
        if (!(std::abs(K1 * K3) < 1.0))
            throw DomainError("boundary: need |K1*K3| < 1, got " + std::to_string(K1 * K3));
        for (const SignalSpec* g : {&G1, &G2, &G3})
            for (const Harmonic& h : g->harmonics)
                if (h.k < 1) throw DomainError("boundary: harmonic index must be a positive integer");
    }
    bool edge_gains() const { return std::abs(K1) == 1.0 || std::abs(K3) == 1.0; }
};

// Boundary data after subtracting the steady anchors: ready-to-evaluate H_i.
struct BoundarySignals {
    double P = 1.0;
    double K1 = 0.0, K2 = 0.0, K3 = 0.0;
    SignalSpec H1, H2, H3;

    double h1(double t) const { return H1.eval(t, P); }
    double h2(double t) const { return H2.eval(t, P); }
    double h3(double t) const { return H3.eval(t, P); }
    double m0() const { return H2.mean; }

    // Largest oscillation amplitude across signals: the epsilon scale of a run.
    double epsilon() const {
        return std::max({H1.oscillation() + std::abs(H1.mean), H3.oscillation() + std::abs(H3.mean),
                         H2.oscillation()});
    }
};

BoundarySignals resolve_boundary(const BoundarySpec& spec, const SteadyProfile& profile);

}  // namespace fannowave
