#pragma once

// Pointwise multiplier operators and the norms/inner products of the energy
// space  H = Hdot^1 x L^2,  |u|_H = sqrt(| |p|u |^2 + |udot|^2).

#include <cmath>
#include <functional>
#include <sstream>

#include "wavescatter/fft.hpp"

namespace wsct {

// k |-> complex, evaluated on the frequency lattice. The argument carries the
// wavenumber components (first n entries) and the precomputed magnitude.
struct KPoint {
    std::array<double, 4> k;
    double mag;
};
using FourierSymbol = std::function<cplx(const KPoint&)>;

// x |-> real on the centered box.
using SpatialSymbol = std::function<double(const std::array<double, 4>&)>;

inline std::vector<cplx> tabulate_fourier_symbol(const GridSpec& g, const FourierSymbol& m) {
    auto fg = FrequencyGrid::shared(g);
    std::vector<cplx> table(g.size());
    for (std::size_t i = 0; i < table.size(); ++i) {
        KPoint kp{fg->vector_at(i), fg->magnitudes()[i]};
        cplx v = m(kp);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            std::ostringstream oss;
            oss << "fourier multiplier is non-finite at k = (";
            for (int a = 0; a < g.dim(); ++a) oss << (a ? ", " : "") << kp.k[static_cast<std::size_t>(a)];
            oss << "), |k| = " << kp.mag;
            throw std::invalid_argument(oss.str());
        }
        table[i] = v;
    }
    return table;
}

inline std::vector<double> tabulate_spatial_symbol(const GridSpec& g, const SpatialSymbol& s) {
    std::vector<double> table(g.size());
    for (std::size_t i = 0; i < table.size(); ++i) {
        double v = s(coordinates_at(g, i));
        if (!std::isfinite(v)) {
            auto x = coordinates_at(g, i);
            std::ostringstream oss;
            oss << "spatial multiplier is non-finite at x = (";
            for (int a = 0; a < g.dim(); ++a) oss << (a ? ", " : "") << x[static_cast<std::size_t>(a)];
            oss << ")";
            throw std::invalid_argument(oss.str());
        }
        table[i] = v;
    }
    return table;
}

// Multiply spectral values by a precomputed table; restores the input repr.
inline Field apply_fourier_table(const Field& f, const std::vector<cplx>& table) {
    Repr orig = f.repr();
    Field s = to_repr(f, Repr::spectral);
    for (std::size_t i = 0; i < s.size(); ++i) s.values()[i] *= table[i];
    return to_repr(s, orig);
}

inline Field apply_spatial_table(const Field& f, const std::vector<double>& table) {
    Repr orig = f.repr();
    Field p = to_repr(f, Repr::physical);
    for (std::size_t i = 0; i < p.size(); ++i) p.values()[i] *= table[i];
    return to_repr(p, orig);
}

inline Field apply_fourier_multiplier(const Field& f, const FourierSymbol& m) {
    return apply_fourier_table(f, tabulate_fourier_symbol(f.grid(), m));
}

inline Field apply_spatial_multiplier(const Field& f, const SpatialSymbol& s) {
    return apply_spatial_table(f, tabulate_spatial_symbol(f.grid(), s));
}

// |p| and its inverse. The k = 0 coefficient of |p|^{-1}-type symbols maps to
// zero: every use is either sandwiched as |p|^{-1}(.)|p| or handled separately.
inline Field apply_p_magnitude(const Field& f) {
    return apply_fourier_multiplier(f, [](const KPoint& k) { return cplx{k.mag, 0.0}; });
}
inline Field apply_p_inverse(const Field& f) {
    return apply_fourier_multiplier(f, [](const KPoint& k) {
        return k.mag == 0.0 ? cplx{0.0, 0.0} : cplx{1.0 / k.mag, 0.0};
    });
}

// d/dx_axis as the multiplier i*k_axis.
inline Field apply_derivative(const Field& f, int axis) {
    return apply_fourier_multiplier(f, [axis](const KPoint& k) {
        return cplx{0.0, k.k[static_cast<std::size_t>(axis)]};
    });
}

// <x>^sigma with the raw centered coordinate (no periodic wrapping).
inline Field apply_x_weight(const Field& f, double sigma) {
    return apply_spatial_multiplier(f, [sigma](const std::array<double, 4>& x) {
        double r2 = 0.0;
        for (double c : x) r2 += c * c;
        return std::pow(1.0 + r2, 0.5 * sigma);
    });
}

// L^2 norm with the representation's natural quadrature weight.
inline double l2_norm(const Field& f) {
    double s = 0.0;
    for (const auto& v : f.values()) s += std::norm(v);
    double w = f.repr() == Repr::physical ? f.grid().physical_weight() : f.grid().spectral_weight();
    return std::sqrt(w * s);
}

inline cplx l2_inner(const Field& a, const Field& b) {
    require_same_grid(a, b, "l2_inner");
    if (a.repr() != b.repr()) return l2_inner(a, to_repr(b, a.repr()));
    cplx s{0.0, 0.0};
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a.values()[i]) * b.values()[i];
    double w = a.repr() == Repr::physical ? a.grid().physical_weight() : a.grid().spectral_weight();
    return w * s;
}

// | |k| uhat |_{L^2}, computed spectrally.
inline double hdot1_seminorm(const Field& u) {
    Field s = to_repr(u, Repr::spectral);
    auto fg = FrequencyGrid::shared(u.grid());
    double acc = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i)
        acc += fg->magnitudes()[i] * fg->magnitudes()[i] * std::norm(s.values()[i]);
    return std::sqrt(u.grid().spectral_weight() * acc);
}

inline double h_norm(const StateVector& s) {
    double a = hdot1_seminorm(s.u);
    double b = l2_norm(s.udot);
    return std::sqrt(a * a + b * b);
}

inline cplx h_inner(const StateVector& a, const StateVector& b) {
    if (a.grid() != b.grid()) throw std::invalid_argument("h_inner: grid mismatch");
    Field au = to_repr(a.u, Repr::spectral);
    Field bu = to_repr(b.u, Repr::spectral);
    auto fg = FrequencyGrid::shared(a.grid());
    cplx acc{0.0, 0.0};
    for (std::size_t i = 0; i < au.size(); ++i)
        acc += fg->magnitudes()[i] * fg->magnitudes()[i] * std::conj(au.values()[i]) * bu.values()[i];
    return a.grid().spectral_weight() * acc + l2_inner(a.udot, b.udot);
}

inline double weighted_norm(const Field& f, double sigma) {
    return l2_norm(apply_x_weight(f, sigma));
}

// 2/3-rule truncation: zero every mode whose signed index exceeds M/3 on any
// axis. Used on polynomial interaction outputs to stop quadratic/cubic
// aliasing; the zero mode is always preserved.
inline Field dealias_two_thirds(const Field& f) {
    const GridSpec& g = f.grid();
    const int m = g.points_per_axis();
    const int keep = m / 3;
    Repr orig = f.repr();
    Field s = to_repr(f, Repr::spectral);
    IndexWalker w(g);
    std::size_t flat = 0;
    do {
        for (int a = 0; a < g.dim(); ++a) {
            int j = w.indices()[static_cast<std::size_t>(a)];
            int sj = (j < m / 2) ? j : j - m;
            if (sj > keep || sj < -keep) {
                s.values()[flat] = cplx{0.0, 0.0};
                break;
            }
        }
        ++flat;
    } while (w.advance());
    return to_repr(s, orig);
}

} // namespace wsct
