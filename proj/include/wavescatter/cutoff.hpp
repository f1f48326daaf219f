#pragma once

// The smooth cutoff profile shared by the spatial and frequency windows:
//
//   psi(x) = 0            for x <= 1/2
//            g(2x - 1)    for 1/2 < x < 1,   g(s) = e^{-1/s} / (e^{-1/s} + e^{-1/(1-s)})
//            1            for x >= 1
//
// together with the conventions  F(x/a > 1) = psi(x/a)  and
// F(x/a <= 1) = 1 - psi(x/a).

#include <cmath>
#include <memory>
#include <stdexcept>

namespace wsct {

class CutoffProfile {
public:
    // psi evaluated with exact plateaus.
    double value(double lambda) const {
        if (lambda <= 0.5) return 0.0;
        if (lambda >= 1.0) return 1.0;
        double s = 2.0 * lambda - 1.0;
        double a = std::exp(-1.0 / s);
        double b = std::exp(-1.0 / (1.0 - s));
        return a / (a + b);
    }

    // d psi / d lambda. Written via logistic factors so the exponentials
    // never overflow: g'(s) = (1/s^2 + 1/(1-s)^2) * sig(u) sig(-u) with
    // u = 1/(1-s) - 1/s.
    double derivative(double lambda) const {
        if (lambda <= 0.5 || lambda >= 1.0) return 0.0;
        double s = 2.0 * lambda - 1.0;
        double u = 1.0 / (1.0 - s) - 1.0 / s;
        double e = std::exp(-std::abs(u));
        double logistic_pair = e / ((1.0 + e) * (1.0 + e));
        double g_prime = (1.0 / (s * s) + 1.0 / ((1.0 - s) * (1.0 - s))) * logistic_pair;
        return 2.0 * g_prime;
    }

    // F(x/a > 1) = psi(x/a).
    double high_pass(double x, double a) const { return value(x / a); }
    // F(x/a <= 1) = 1 - psi(x/a).
    double low_pass(double x, double a) const { return 1.0 - value(x / a); }
};

enum class CutoffKind { F_c, F_1 };

// F_c and F_1 share the profile by default but are distinct objects; the
// plateau conditions are all the construction pins down.
inline CutoffProfile make_cutoff(CutoffKind) { return CutoffProfile{}; }

} // namespace wsct
