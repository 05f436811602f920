#include "fannowave/boundary.hpp"

namespace fannowave {

BoundarySignals resolve_boundary(const BoundarySpec& spec, const SteadyProfile& profile) {
    spec.validate();
    BoundarySignals s;
    s.P = spec.P;
    s.K1 = spec.K1;
    s.K2 = spec.K2;
    s.K3 = spec.K3;
    s.H1 = spec.G1;
    s.H2 = spec.G2;
    s.H3 = spec.G3;
    if (spec.reference == BoundaryReference::Absolute) {
        // H_i = G_i minus the steady value at the boundary the signal drives
        s.H1.mean -= profile.r1[profile.n() - 1];
        s.H2.mean -= profile.S;
        s.H3.mean -= profile.r3[0];
    }
    return s;
}

}  // namespace fannowave
