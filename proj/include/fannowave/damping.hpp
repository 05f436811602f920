// Damping coefficient alpha(x) <= 0 on the duct [0, L]. Constant profiles are
// the common case; polynomial profiles (Horner coefficients, lowest degree
// first) cover the variable-damping runs. Nonpositivity is certified by dense
// sampling at construction, which is exact for constants and degree <= 1 and a
// documented approximation above that.

#pragma once

#include <string>
#include <vector>

#include "fannowave/errors.hpp"

namespace fannowave {

class DampingProfile {
  public:
    DampingProfile() : coeffs_{0.0}, length_(1.0), alpha_star_(0.0) {}

    DampingProfile(std::vector<double> coeffs, double length) : coeffs_(std::move(coeffs)), length_(length) {
        if (coeffs_.empty()) throw DomainError("damping: empty coefficient list");
        if (!(length_ > 0)) throw DomainError("damping: duct length must be positive");
        constexpr int kSamples = 2048;
        double lo = 0.0;
        for (int k = 0; k <= kSamples; ++k) {
            const double a = eval(length_ * k / kSamples);
            if (a > 0.0)
                throw DomainError("damping: alpha(x) must be nonpositive on [0,L]; alpha(" +
                                  std::to_string(length_ * k / kSamples) + ") = " + std::to_string(a));
            if (a < lo) lo = a;
        }
        alpha_star_ = lo;
    }

    static DampingProfile constant(double value, double length) { return {{value}, length}; }

    double operator()(double x) const { return eval(x); }

    // Certified lower bound alpha_* = min alpha over [0,L] (exact for degree <= 1).
    double alpha_star() const { return alpha_star_; }
    double length() const { return length_; }
    bool is_zero() const {
        for (double c : coeffs_)
            if (c != 0.0) return false;
        return true;
    }
    const std::vector<double>& coeffs() const { return coeffs_; }

  private:
    double eval(double x) const {
        double a = 0.0;
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) a = a * x + *it;
        return a;
    }

    std::vector<double> coeffs_;
    double length_;
    double alpha_star_;
};

}  // namespace fannowave
