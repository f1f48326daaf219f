#pragma once

// Discrete Fourier transform matched to the continuum convention
//
//   fhat(k) = (2pi)^(-n/2) \int e^{-i k.x} f(x) dx,
//   f(x)    = (2pi)^(-n/2) \int e^{+i k.x} fhat(k) dk.
//
// With centered coordinates x_m = -L + m h and FFT-ordered wavenumbers the
// phase e^{-i k_j x_m} factors into the plain DFT kernel times (-1)^j per
// axis, so the forward transform is  fhat_j = h^n (2pi)^{-n/2} (-1)^{|j|} DFT[f]_j
// and the inverse applies the conjugate phases with weight (pi/L)^n (2pi)^{-n/2}.
// The round trip is exact and Parseval holds with the quadrature weights
// h^n (physical) and (pi/L)^n (spectral).
//
// FFTW plans are cached per grid signature; plan creation is serialized and
// execution uses the new-array interface, which is safe for concurrent use.

#include <fftw3.h>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "wavescatter/field.hpp"

namespace wsct {

namespace detail {

class FftPlans {
public:
    explicit FftPlans(const GridSpec& g) {
        int dims[4];
        for (int a = 0; a < g.dim(); ++a) dims[a] = g.points_per_axis();
        std::vector<cplx> scratch(g.size());
        auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
        forward_ = fftw_plan_dft(g.dim(), dims, buf, buf, FFTW_FORWARD,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
        backward_ = fftw_plan_dft(g.dim(), dims, buf, buf, FFTW_BACKWARD,
                                  FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (forward_ == nullptr || backward_ == nullptr)
            throw std::runtime_error("FftPlans: planner failed");
    }
    ~FftPlans() {
        fftw_destroy_plan(forward_);
        fftw_destroy_plan(backward_);
    }
    FftPlans(const FftPlans&) = delete;
    FftPlans& operator=(const FftPlans&) = delete;

    void run_forward(cplx* data) const {
        fftw_execute_dft(forward_, reinterpret_cast<fftw_complex*>(data),
                         reinterpret_cast<fftw_complex*>(data));
    }
    void run_backward(cplx* data) const {
        fftw_execute_dft(backward_, reinterpret_cast<fftw_complex*>(data),
                         reinterpret_cast<fftw_complex*>(data));
    }

    static std::shared_ptr<const FftPlans> shared(const GridSpec& g) {
        struct Key {
            int n, m;
            bool operator<(const Key& o) const { return n != o.n ? n < o.n : m < o.m; }
        };
        static std::mutex mu;
        static std::map<Key, std::shared_ptr<const FftPlans>> cache;
        std::lock_guard<std::mutex> lock(mu);
        Key key{g.dim(), g.points_per_axis()};
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
        auto p = std::make_shared<const FftPlans>(g);
        cache.emplace(key, p);
        return p;
    }

private:
    fftw_plan forward_{};
    fftw_plan backward_{};
};

// Parity (-1)^(j1+...+jn) of the flat index.
inline double index_parity(const GridSpec& g, std::size_t flat) {
    const auto m = static_cast<std::size_t>(g.points_per_axis());
    std::size_t s = 0;
    for (int a = 0; a < g.dim(); ++a) {
        s += flat % m;
        flat /= m;
    }
    return (s & 1u) ? -1.0 : 1.0;
}

} // namespace detail

inline Field fft_forward(const Field& f) {
    if (f.repr() != Repr::physical)
        throw std::invalid_argument("fft_forward: field is not in physical representation");
    const GridSpec& g = f.grid();
    Field out(g, Repr::spectral, f.values());
    detail::FftPlans::shared(g)->run_forward(out.values().data());
    const double scale = std::pow(g.spacing(), g.dim()) * std::pow(2.0 * M_PI, -0.5 * g.dim());
    for (std::size_t i = 0; i < out.size(); ++i)
        out.values()[i] *= scale * detail::index_parity(g, i);
    return out;
}

inline Field fft_inverse(const Field& f) {
    if (f.repr() != Repr::spectral)
        throw std::invalid_argument("fft_inverse: field is not in spectral representation");
    const GridSpec& g = f.grid();
    Field out(g, Repr::physical, f.values());
    for (std::size_t i = 0; i < out.size(); ++i)
        out.values()[i] *= detail::index_parity(g, i);
    detail::FftPlans::shared(g)->run_backward(out.values().data());
    const double scale = g.spectral_weight() * std::pow(2.0 * M_PI, -0.5 * g.dim());
    for (auto& v : out.values()) v *= scale;
    return out;
}

inline Field to_repr(const Field& f, Repr r) {
    if (f.repr() == r) return f;
    return r == Repr::spectral ? fft_forward(f) : fft_inverse(f);
}

} // namespace wsct
