#pragma once

// Propagation observables B_1..B_4 and the dispersive-decay verifiers.
//
// Each observable is the energy pairing of a scalar filter product K_j(t)
// with the rewound state v(t) = U0(0,t) u(t):
//
//   <B_j : v>_t = ( |p| v_1, K_j(t) |p| v_1 ) + ( v_2, K_j(t) v_2 ),
//
//   K_1 = F_1(|p|,t) F_alpha^loc           (= F1pt . F_c . F1pt)
//   K_2 = F_alpha^loc F_c                  (= F_c . F1pt . F_c)
//   K_3 = F_1(|p|<=t^a) F_alpha^nl         (= F1low . F_c . F1low)
//   K_4 = F_alpha^nl F_c                   (= F_c . F1low . F_c)
//
// written as operator compositions; all four are exactly self-adjoint, so the
// expectations are real up to arithmetic. Boundedness and the saturation of
// positive-variation sums are the testable consequences of the propagation
// estimates; the flux terms themselves are not reconstructed.

#include "wavescatter/propagator.hpp"
#include "wavescatter/scattering.hpp"

namespace wsct {

struct ObservableSpec {
    int index;    // 1..4
    double alpha; // filter exponent
    double sigma; // admissibility bookkeeping only

    ObservableSpec(int j, double a, double s = 2.0) : index(j), alpha(a), sigma(s) {
        if (j < 1 || j > 4) throw std::invalid_argument("ObservableSpec: index in 1..4");
    }

    bool local_mode() const { return index <= 2; }

    // The scalar product K_j(t); both diagonal entries of B_j use it, the
    // first one through the |p|^{-1} (.) |p| sandwich.
    PhaseSpaceFilter filter_at(double t) const {
        CutoffProfile prof;
        double ta = std::pow(t, alpha);
        FilterFactor fc{FactorKind::spatial, "F_c(|x|/t^a <= 1)",
                        [prof, ta](double r) { return prof.low_pass(r, ta); }};
        FilterFactor fk = local_mode()
                              ? make_frequency_window(t, alpha, prof)
                              : FilterFactor{FactorKind::fourier, "F_1(|k| <= t^a)",
                                             [prof, ta](double k) { return prof.low_pass(k, ta); }};
        std::vector<FilterFactor> factors;
        if (index == 1 || index == 3) {
            factors = {fk, fc, fk};
        } else {
            factors = {fc, fk, fc};
        }
        return PhaseSpaceFilter(std::move(factors), true);
    }
};

struct ExpectationValue {
    double value = 0.0;     // real part of the pairing
    double imaginary = 0.0; // asymmetry, logged rather than hidden
};

inline ExpectationValue expectation(const ObservableSpec& spec, const StateVector& v, double t) {
    if (!(t >= 1.0)) throw std::invalid_argument("expectation: filters are defined for t >= 1");
    PhaseSpaceFilter K = spec.filter_at(t);
    Field pv = apply_p_magnitude(v.u);
    cplx first = l2_inner(pv, apply_filter(K, pv));
    cplx second = l2_inner(v.udot, apply_filter(K, v.udot));
    return {first.real() + second.real(), first.imag() + second.imag()};
}

struct ExpectationSeries {
    std::vector<double> times;
    std::vector<double> values;
    std::vector<double> imaginary;
    double sup_value = 0.0;
    double bound = 0.0;           // h_norm(u(0))^2 (1 + 1e-6)
    bool bounded = true;
    double pv_early = 0.0;        // positive variation over [1, T/2]
    double pv_late = 0.0;         // positive variation over (T/2, T]
    double saturation_ratio = 0.0;
};

inline ExpectationSeries monitor_propagation(const Trajectory& traj, const ObservableSpec& spec) {
    if (traj.blew_up()) throw std::runtime_error("monitor_propagation: trajectory blew up");
    ExpectationSeries out;
    double e0 = h_norm(traj.checkpoints().front().state);
    out.bound = e0 * e0 * (1.0 + 1e-6);
    double T = traj.final_time();
    double prev = 0.0;
    bool have_prev = false;
    for (const auto& cp : traj.checkpoints()) {
        if (cp.t < 1.0) continue;
        StateVector v = free_evolve(cp.state, -cp.t);
        ExpectationValue e = expectation(spec, v, cp.t);
        out.times.push_back(cp.t);
        out.values.push_back(e.value);
        out.imaginary.push_back(e.imaginary);
        out.sup_value = std::max(out.sup_value, std::abs(e.value));
        if (have_prev) {
            double inc = std::max(0.0, e.value - prev);
            if (cp.t > 0.5 * T) {
                out.pv_late += inc;
            } else {
                out.pv_early += inc;
            }
        }
        prev = e.value;
        have_prev = true;
    }
    out.bounded = out.sup_value <= out.bound;
    out.saturation_ratio = out.pv_early > 0.0 ? out.pv_late / out.pv_early
                                              : (out.pv_late > 0.0 ? 1e300 : 0.0);
    return out;
}

struct DecaySeries {
    std::vector<double> times;
    std::vector<double> values;
    RateFit fit;
};

// Local-mode dispersive decay of the filtered free wave:
//   d(t) = sqrt( |<x>^{-s} F1(|p|,t) |p| u0(t+shift)|^2
//              + |<x>^{-s} F1(|p|,t) udot0(t+shift)|^2 ),
// target slope -sigma.
inline DecaySeries dispersive_decay_local(double sigma, double alpha,
                                          const std::vector<double>& times, const StateVector& s0,
                                          double shift = 0.0) {
    if (times.size() < 4)
        throw std::invalid_argument("dispersive_decay_local: need at least 4 samples");
    DecaySeries out;
    for (double t : times) {
        StateVector evolved = free_evolve(s0, t + shift);
        PhaseSpaceFilter band({make_frequency_window(t, alpha)});
        Field a = apply_x_weight(apply_filter(band, apply_p_magnitude(evolved.u)), -sigma);
        Field b = apply_x_weight(apply_filter(band, evolved.udot), -sigma);
        double na = l2_norm(a), nb = l2_norm(b);
        out.times.push_back(t);
        out.values.push_back(std::sqrt(na * na + nb * nb));
    }
    out.fit = fit_rate(out.times, out.values);
    return out;
}

// Non-local-mode decay from integrable velocity data (u(0) = 0):
//   d(t) = sqrt( |F_a(x,p,t) |p| u0(t)|^2 + |F_a(x,p,t) udot0(t)|^2 ),
// log-corrected fit, target slope -((n-1)/2 - (n+1/2) alpha).
inline DecaySeries dispersive_decay_nonlocal(double alpha, const std::vector<double>& times,
                                             const StateVector& s0) {
    if (times.size() < 4)
        throw std::invalid_argument("dispersive_decay_nonlocal: need at least 4 samples");
    if (max_abs(s0.u) != 0.0)
        throw std::invalid_argument("dispersive_decay_nonlocal: requires u(0) = 0");
    DecaySeries out;
    for (double t : times) {
        StateVector evolved = free_evolve(s0, t);
        PhaseSpaceFilter filter = make_F_alpha(t, alpha, FilterMode::nonlocal);
        Field a = apply_filter(filter, apply_p_magnitude(evolved.u));
        Field b = apply_filter(filter, evolved.udot);
        double na = l2_norm(a), nb = l2_norm(b);
        out.times.push_back(t);
        out.values.push_back(std::sqrt(na * na + nb * nb));
    }
    out.fit = fit_rate(out.times, out.values, true);
    return out;
}

// | <x>^{-2} e^{i t|p|} F_1(|p| <= t^b) d_i <x>^{-2} |  over the time list;
// target slope -(2 - b). The box grows with t so the weights suppress
// periodic images.
inline DecaySeries derivative_decay_check(double beta, int axis, const std::vector<double>& times,
                                          int dim = 3, int points_per_axis = 64) {
    if (!(beta > 0.0 && beta < 1.0))
        throw std::invalid_argument("derivative_decay_check: beta in (0,1)");
    if (times.size() < 4)
        throw std::invalid_argument("derivative_decay_check: need at least 4 samples");
    CutoffProfile prof;
    DecaySeries out;
    for (double t : times) {
        double tb = std::pow(t, beta);
        GridSpec g(dim, points_per_axis, std::max(12.0, 1.6 * t));
        if (g.max_wavenumber() < 1.4 * tb)
            throw std::invalid_argument(
                "derivative_decay_check: M too small for the frequency window at t = " +
                std::to_string(t));
        LinearOp weight = spatial_op(g, [dim](const std::array<double, 4>& x) {
            double r2 = 0.0;
            for (int a = 0; a < dim; ++a) r2 += x[static_cast<std::size_t>(a)] * x[static_cast<std::size_t>(a)];
            return 1.0 / (1.0 + r2);
        });
        LinearOp wave = fourier_op(g, [t, tb, axis, &prof](const KPoint& k) {
            cplx phase = std::exp(cplx{0.0, t * k.mag});
            double window = prof.low_pass(k.mag, tb);
            return phase * window * cplx{0.0, k.k[static_cast<std::size_t>(axis)]};
        });
        out.times.push_back(t);
        out.values.push_back(
            operator_norm_estimate(compose(weight, compose(wave, weight)), g, 2, 30));
    }
    out.fit = fit_rate(out.times, out.values);
    return out;
}

} // namespace wsct
