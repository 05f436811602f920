// Ideal-gas-like model with entropy-dependent pressure p = rho^gamma * phi(S)
// and the change of variables between primitive states (rho, u, S) and the
// diagonal variables (r1, r2, r3) = (u - 2c/(gamma-1), S, u + 2c/(gamma-1)).
// Everything here is pointwise algebra; scalar type is a template parameter so
// the same formulas serve doubles and Eigen array expressions.

#pragma once

#include <cmath>
#include <string>

#include "fannowave/errors.hpp"

namespace fannowave {

enum class PhiKind { Exponential, Constant };

// Entropy factor of the pressure law. Exponential: phi(S) = e^S.
// Constant: phi(S) = phi0 > 0 (isentropic-like pressure, entropy still advected).
struct GasModel {
    double gamma = 1.4;
    PhiKind phi_kind = PhiKind::Exponential;
    double phi0 = 1.0;  // used only by Constant

    GasModel() = default;
    GasModel(double gamma_, PhiKind kind = PhiKind::Exponential, double phi0_ = 1.0)
        : gamma(gamma_), phi_kind(kind), phi0(phi0_) {
        if (!(gamma > 1.0) || !(gamma < 3.0))
            throw DomainError("gas model: gamma must lie in (1,3), got " + std::to_string(gamma));
        if (phi_kind == PhiKind::Constant && !(phi0 > 0.0))
            throw DomainError("gas model: constant phi must be positive, got " + std::to_string(phi0));
    }

    template <class T>
    T phi(T S) const {
        return phi_kind == PhiKind::Exponential ? std::exp(S) : T(phi0);
    }

    template <class T>
    T dphi(T S) const {
        return phi_kind == PhiKind::Exponential ? std::exp(S) : T(0);
    }

    // d(log phi)/dS, the only way phi enters the perturbation sources
    template <class T>
    T dlog_phi(T S) const {
        return phi_kind == PhiKind::Exponential ? T(1) : T(0);
    }
};

template <class T>
struct Primitive {
    T rho, u, S;
};

template <class T>
struct Riemann {
    T r1, r2, r3;
};

template <class T>
struct Eigenvalues {
    T l1, l2, l3;
};

// c = sqrt(gamma) * rho^((gamma-1)/2) * sqrt(phi(S))
template <class T>
T sound_speed(const GasModel& gas, T rho, T S) {
    if (!(rho > T(0))) throw DomainError("sound_speed: rho must be positive");
    return std::sqrt(gas.gamma) * std::pow(rho, (gas.gamma - 1) / 2) * std::sqrt(gas.phi(S));
}

template <class T>
Riemann<T> to_riemann(const GasModel& gas, const Primitive<T>& w) {
    const T c = sound_speed(gas, w.rho, w.S);
    const T spread = 2 * c / (gas.gamma - 1);
    return {w.u - spread, w.S, w.u + spread};
}

template <class T>
Primitive<T> from_riemann(const GasModel& gas, const Riemann<T>& r) {
    if (!(r.r3 > r.r1)) throw DomainError("from_riemann: r3 must exceed r1 (sound speed > 0)");
    const T c = (gas.gamma - 1) * (r.r3 - r.r1) / 4;
    const T rho = std::pow(c * c / (gas.gamma * gas.phi(r.r2)), 1 / (gas.gamma - 1));
    return {rho, (r.r1 + r.r3) / 2, r.r2};
}

// Characteristic speeds as linear combinations of r1, r3. These equal
// (u - c, u, u + c); the linear form is what the marching schemes use.
// Works elementwise on Eigen array expressions as well as scalars.
template <class A, class B>
auto lambda1(double gamma, const A& r1, const B& r3) {
    return ((gamma + 1) * r1 + (3 - gamma) * r3) / 4;
}

template <class A, class B>
auto lambda2(const A& r1, const B& r3) {
    return (r1 + r3) / 2;
}

template <class A, class B>
auto lambda3(double gamma, const A& r1, const B& r3) {
    return ((3 - gamma) * r1 + (gamma + 1) * r3) / 4;
}

template <class T>
Eigenvalues<T> eigenvalues(const GasModel& gas, const Riemann<T>& r) {
    return {lambda1(gas.gamma, r.r1, r.r3), lambda2(r.r1, r.r3), lambda3(gas.gamma, r.r1, r.r3)};
}

// Strict subsonic ordering l1 < 0 < l2 < l3, with optional margin.
template <class T>
bool is_subsonic(const Eigenvalues<T>& l, T margin = T(0)) {
    return l.l1 <= -margin && l.l2 >= margin && l.l2 > T(0) && l.l1 < T(0) && l.l3 > l.l2;
}

}  // namespace fannowave
