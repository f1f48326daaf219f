#pragma once

// The free wave group as spectral multipliers. Per mode,
//
//   U0(t):  uhat    ->  cos(t|k|) uhat + sin(t|k|)/|k| udothat
//           udothat -> -|k| sin(t|k|) uhat + cos(t|k|) udothat
//
// with the k = 0 limit sin(t|k|)/|k| -> t. The 2x2 mode matrix has unit
// determinant, so the energy norm is conserved exactly mode by mode.

#include "wavescatter/ops.hpp"

namespace wsct {

class FreePropagator {
public:
    FreePropagator(const GridSpec& g, double t) : grid_(g), time_(t) {
        auto fg = FrequencyGrid::shared(g);
        const auto& kmag = fg->magnitudes();
        cosine_.resize(kmag.size());
        sine_over_k_.resize(kmag.size());
        minus_k_sine_.resize(kmag.size());
        for (std::size_t i = 0; i < kmag.size(); ++i) {
            double k = kmag[i];
            double c = std::cos(t * k);
            double s = std::sin(t * k);
            cosine_[i] = c;
            sine_over_k_[i] = k == 0.0 ? t : s / k;
            minus_k_sine_[i] = -k * s;
        }
    }

    const GridSpec& grid() const { return grid_; }
    double time() const { return time_; }

    // Applies the mode matrix; returns a physical-representation state.
    StateVector apply(const StateVector& s) const {
        if (s.grid() != grid_) throw std::invalid_argument("FreePropagator: grid mismatch");
        Field uhat = to_repr(s.u, Repr::spectral);
        Field vhat = to_repr(s.udot, Repr::spectral);
        Field nu(grid_, Repr::spectral), nv(grid_, Repr::spectral);
        for (std::size_t i = 0; i < uhat.size(); ++i) {
            cplx a = uhat.values()[i];
            cplx b = vhat.values()[i];
            nu.values()[i] = cosine_[i] * a + sine_over_k_[i] * b;
            nv.values()[i] = minus_k_sine_[i] * a + cosine_[i] * b;
        }
        return StateVector(fft_inverse(nu), fft_inverse(nv));
    }

    // max |det - 1| of the mode matrices; a symplecticity diagnostic.
    double determinant_defect() const {
        double worst = 0.0;
        for (std::size_t i = 0; i < cosine_.size(); ++i) {
            double det = cosine_[i] * cosine_[i] - sine_over_k_[i] * minus_k_sine_[i];
            worst = std::max(worst, std::abs(det - 1.0));
        }
        return worst;
    }

private:
    GridSpec grid_;
    double time_;
    std::vector<double> cosine_;
    std::vector<double> sine_over_k_;
    std::vector<double> minus_k_sine_;
};

inline StateVector free_evolve(const StateVector& s, double t) {
    return FreePropagator(s.grid(), t).apply(s);
}

// e^{sign * i t |p|}, the scalar half-wave flow.
inline Field half_wave(const Field& f, double t, int sign) {
    return apply_fourier_multiplier(f, [t, sign](const KPoint& k) {
        return std::exp(cplx{0.0, static_cast<double>(sign) * t * k.mag});
    });
}

} // namespace wsct
