#pragma once

// Seeded field generators used by tests and the experiment pipelines.
// All generators are deterministic functions of (grid, seed, parameters).

#include <random>

#include "wavescatter/ops.hpp"

namespace wsct {

// iid complex normal samples at every grid point (physical representation).
inline Field random_field(const GridSpec& g, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist(0.0, 1.0);
    Field f(g, Repr::physical);
    for (auto& v : f.values()) {
        double re = dist(rng);
        double im = dist(rng);
        v = cplx{re, im};
    }
    return f;
}

// Random spectrum supported on |k| <= kcut, returned in physical space.
// With real_valued the spectrum keeps Hermitian symmetry so the samples are
// real up to roundoff.
inline Field random_band_limited(const GridSpec& g, std::uint64_t seed, double kcut,
                                 bool real_valued = false) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist(0.0, 1.0);
    auto fg = FrequencyGrid::shared(g);
    Field s(g, Repr::spectral);
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (fg->magnitudes()[i] > kcut) continue;
        double re = dist(rng);
        double im = dist(rng);
        s.values()[i] = cplx{re, im};
    }
    if (real_valued) {
        // f real <=> fhat(-k) = conj(fhat(k)); enforce by averaging.
        const int m = g.points_per_axis();
        Field sym(g, Repr::spectral);
        IndexWalker w(g);
        std::size_t flat = 0;
        do {
            std::size_t mirror = 0;
            for (int a = 0; a < g.dim(); ++a) {
                int j = w.indices()[static_cast<std::size_t>(a)];
                int jm = (m - j) % m;
                mirror = mirror * static_cast<std::size_t>(m) + static_cast<std::size_t>(jm);
            }
            sym.values()[flat] = 0.5 * (s.values()[flat] + std::conj(s.values()[mirror]));
            ++flat;
        } while (w.advance());
        s = std::move(sym);
    }
    return fft_inverse(s);
}

// A e^{-|x|^2 / (2 w^2)}, centered at the origin.
inline Field gaussian_bump(const GridSpec& g, double amplitude, double width) {
    Field f(g, Repr::physical);
    for (std::size_t i = 0; i < f.size(); ++i) {
        double r = radius_at(g, i);
        f.values()[i] = cplx{amplitude * std::exp(-r * r / (2.0 * width * width)), 0.0};
    }
    return f;
}

// Gaussian beam: bump at center x0 along axis 0 modulated by e^{i k0 x_1}.
inline Field gaussian_beam(const GridSpec& g, double amplitude, double width, double center,
                           double k0) {
    Field f(g, Repr::physical);
    for (std::size_t i = 0; i < f.size(); ++i) {
        auto x = coordinates_at(g, i);
        double r2 = 0.0;
        for (int a = 0; a < g.dim(); ++a) {
            double d = x[static_cast<std::size_t>(a)] - (a == 0 ? center : 0.0);
            r2 += d * d;
        }
        double env = amplitude * std::exp(-r2 / (2.0 * width * width));
        f.values()[i] = env * std::exp(cplx{0.0, k0 * x[0]});
    }
    return f;
}

inline StateVector random_state(const GridSpec& g, std::uint64_t seed, double kcut,
                                bool real_valued = false) {
    return StateVector(random_band_limited(g, seed, kcut, real_valued),
                       random_band_limited(g, seed + 1, kcut, real_valued));
}

} // namespace wsct
