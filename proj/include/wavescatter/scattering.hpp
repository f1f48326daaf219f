#pragma once

// The free-channel wave operator and the free + localized decomposition,
// computed from a stored trajectory.
//
// Sign conventions follow  box u = N(x,t,u) u  with box = -d_tt + Laplacian,
// for which Duhamel reads
//
//   u(t)    = U0(t,0) u(0) - int_0^t U0(t,s) NN(s) u(s) ds,
//   U0(0,t) u(t) = u(0) - int_0^t U0(0,s) NN(s) u(s) ds,
//
// giving the component forms
//
//   |p| u_Omega(t) = |p| u(0) + (1/2i)(u^+(t) - u^-(t)),
//   udot_Omega(t)  = udot(0) - (1/2)(u^+(t) + u^-(t)),
//   u^{pm}(t) = int_0^t e^{pm i s|p|} N(u(s)) u(s) ds,
//
// and the localized part
//
//   u_lc(t) = ( |p|^{-1} (1/2i)(u_r2^-(t) - u_r2^+(t)),
//               -(1/2)   (u_r2^+(t) + u_r2^-(t)) ).

#include "wavescatter/evolve.hpp"
#include "wavescatter/filters.hpp"
#include "wavescatter/linop.hpp"
#include "wavescatter/partition.hpp"

namespace wsct {

namespace detail {

// Trapezoid weight of checkpoint i over the node range [first, last].
inline double trap_weight(const std::vector<Checkpoint>& cps, std::size_t first, std::size_t last,
                          std::size_t i) {
    if (first == last) return 0.0;
    if (i == first) return 0.5 * (cps[first + 1].t - cps[first].t);
    if (i == last) return 0.5 * (cps[last].t - cps[last - 1].t);
    return 0.5 * (cps[i + 1].t - cps[i - 1].t);
}

inline std::size_t checkpoint_index_at(const Trajectory& traj, double t) {
    const auto& cps = traj.checkpoints();
    for (std::size_t i = 0; i < cps.size(); ++i)
        if (std::abs(cps[i].t - t) <= 1e-9 * std::max(1.0, std::abs(t))) return i;
    throw std::invalid_argument("scattering: t = " + std::to_string(t) +
                                " is not a checkpoint time");
}

} // namespace detail

// U0(0,s) applied to (0, g)  for spectral g: the Cook/Duhamel integrand body.
inline StateVector rewound_interaction(const Field& ghat_spectral, double s) {
    const GridSpec& g = ghat_spectral.grid();
    auto fg = FrequencyGrid::shared(g);
    Field a(g, Repr::spectral), b(g, Repr::spectral);
    for (std::size_t i = 0; i < a.size(); ++i) {
        double k = fg->magnitudes()[i];
        double sin_over_k = k == 0.0 ? s : std::sin(s * k) / k;
        a.values()[i] = -sin_over_k * ghat_spectral.values()[i];
        b.values()[i] = std::cos(s * k) * ghat_spectral.values()[i];
    }
    return StateVector(fft_inverse(a), fft_inverse(b));
}

struct WaveOperatorReport {
    double alpha = 0.0;
    FilterMode mode = FilterMode::local;
    std::vector<double> times;          // iterate times t_m >= 1
    std::vector<double> cauchy_steps;   // |u_Om(t_m) - u_Om(t_{m-1})|_H
    std::vector<double> cook_integrand; // |F_al(s) U0(0,s) NN(s)u(s)|_H at s = t_m
    std::vector<double> filter_defect;  // |(1 - F_al(t)) U0(0,t)u(t)|_H
    double tail_late = 0.0;             // total variation over (T/2, T]
    double tail_mid = 0.0;              // total variation over (T/4, T/2]
    std::optional<std::string> warning; // admissibility note
    StateVector final_state;

    WaveOperatorReport(StateVector s) : final_state(std::move(s)) {}
};

// The Cook iterates  u_{Omega,alpha}(t_m) = F_alpha(t_m) U0(0,t_m) u(t_m)
// over the trajectory's checkpoints, with Cauchy and integrand series.
inline WaveOperatorReport wave_operator(const Trajectory& traj, double alpha, FilterMode mode,
                                        double sigma_hint = 2.0) {
    if (traj.blew_up())
        throw std::runtime_error("wave_operator: trajectory blew up at t = " +
                                 std::to_string(traj.blowup_time()) +
                                 " (max-norm " + std::to_string(traj.blowup_max_norm()) + ")");
    const auto& cps = traj.checkpoints();
    if (cps.empty()) throw std::invalid_argument("wave_operator: empty trajectory");

    WaveOperatorReport report(cps.front().state);
    report.alpha = alpha;
    report.mode = mode;
    report.warning = alpha_admissibility_warning(mode, alpha, sigma_hint, traj.grid().dim());

    std::optional<StateVector> previous;
    double T = traj.final_time();
    for (const auto& cp : cps) {
        if (cp.t < 1.0) continue;
        PhaseSpaceFilter filter = make_F_alpha(cp.t, alpha, mode);
        StateVector v = free_evolve(cp.state, -cp.t);
        StateVector iterate = apply_matrix_filter(filter, v);

        report.times.push_back(cp.t);
        report.filter_defect.push_back(h_norm(v - iterate));
        report.cook_integrand.push_back(
            h_norm(apply_matrix_filter(filter, rewound_interaction(cp.interaction_output, cp.t))));
        if (previous) {
            double step = h_norm(iterate - *previous);
            report.cauchy_steps.push_back(step);
            if (cp.t > 0.5 * T) {
                report.tail_late += step;
            } else if (cp.t > 0.25 * T) {
                report.tail_mid += step;
            }
        } else {
            report.cauchy_steps.push_back(0.0);
        }
        previous = iterate;
        report.final_state = std::move(iterate);
    }
    if (report.times.empty())
        throw std::invalid_argument("wave_operator: no checkpoints at t >= 1");
    return report;
}

// The unfiltered Duhamel path  U0(0,T) u(T) = u(0) - int_0^T U0(0,s) NN u ds
// evaluated by quadrature over stored interaction outputs.
inline StateVector omega_duhamel(const Trajectory& traj, double T) {
    const auto& cps = traj.checkpoints();
    std::size_t last = detail::checkpoint_index_at(traj, T);
    const GridSpec& g = traj.grid();
    auto fg = FrequencyGrid::shared(g);
    Field acc_u(g, Repr::spectral), acc_v(g, Repr::spectral);
    for (std::size_t i = 0; i <= last; ++i) {
        double w = detail::trap_weight(cps, 0, last, i);
        double s = cps[i].t;
        const auto& ghat = cps[i].interaction_output;
        for (std::size_t idx = 0; idx < ghat.size(); ++idx) {
            double k = fg->magnitudes()[idx];
            double sin_over_k = k == 0.0 ? s : std::sin(s * k) / k;
            acc_u.values()[idx] += w * sin_over_k * ghat.values()[idx];
            acc_v.values()[idx] -= w * std::cos(s * k) * ghat.values()[idx];
        }
    }
    const StateVector& s0 = cps.front().state;
    return StateVector(s0.u + fft_inverse(acc_u), s0.udot + fft_inverse(acc_v));
}

// |u_{Om,a}(t) - u_{Om,a'}(t)|_H / |u(0)|_H from one trajectory.
inline double alpha_independence(const Trajectory& traj, double alpha, double alpha_prime,
                                 FilterMode mode, double t) {
    const Checkpoint& cp = traj.checkpoints()[detail::checkpoint_index_at(traj, t)];
    StateVector v = free_evolve(cp.state, -cp.t);
    StateVector a = apply_matrix_filter(make_F_alpha(t, alpha, mode), v);
    StateVector b = apply_matrix_filter(make_F_alpha(t, alpha_prime, mode), v);
    return h_norm(a - b) / h_norm(traj.checkpoints().front().state);
}

// u^{pm}(T) = int_0^T e^{pm i s|k|} ghat(s) ds, trapezoid over checkpoints.
// Returned in spectral representation.
inline Field u_pm(const Trajectory& traj, int sign, double T) {
    if (sign != 1 && sign != -1) throw std::invalid_argument("u_pm: sign must be +1 or -1");
    const auto& cps = traj.checkpoints();
    std::size_t last = detail::checkpoint_index_at(traj, T);
    const GridSpec& g = traj.grid();
    auto fg = FrequencyGrid::shared(g);
    Field acc(g, Repr::spectral);
    for (std::size_t i = 0; i <= last; ++i) {
        double w = detail::trap_weight(cps, 0, last, i);
        double s = cps[i].t;
        const auto& ghat = cps[i].interaction_output;
        for (std::size_t idx = 0; idx < ghat.size(); ++idx) {
            cplx phase = std::exp(cplx{0.0, static_cast<double>(sign) * s * fg->magnitudes()[idx]});
            acc.values()[idx] += w * phase * ghat.values()[idx];
        }
    }
    return acc;
}

// u_r2^{pm}(t) = P^{pm} e^{pm i t |p|} u^{mp}(t): the truncated incoming /
// outgoing integrals over [0, t]. Spectral representation.
inline Field u_r2(const Trajectory& traj, const DirectionPartition& partition, int sign, double t) {
    Field tail = u_pm(traj, -sign, t); // u^{mp}(t)
    Field propagated = half_wave(tail, t, sign);
    PropagationSign ps = sign == 1 ? PropagationSign::outgoing : PropagationSign::incoming;
    return apply_P(partition, ps, propagated);
}

struct TailIntegral {
    Field value;                   // spectral representation
    double last_window_norm = 0.0; // |contribution of the last dyadic window|
};

// u_r1^{pm}(t) = int_t^T P^{pm} e^{mp i (t-s)|p|} N(u(s))u(s) ds.
inline TailIntegral u_r1(const Trajectory& traj, const DirectionPartition& partition, int sign,
                         double t, double T) {
    if (!(t < T)) {
        if (t == T) return TailIntegral{Field(traj.grid(), Repr::spectral), 0.0};
        throw std::invalid_argument("u_r1: requires t <= T");
    }
    const auto& cps = traj.checkpoints();
    std::size_t first = detail::checkpoint_index_at(traj, t);
    std::size_t last = detail::checkpoint_index_at(traj, T);
    const GridSpec& g = traj.grid();
    auto fg = FrequencyGrid::shared(g);

    auto accumulate = [&](std::size_t from, std::size_t to) {
        Field acc(g, Repr::spectral);
        for (std::size_t i = from; i <= to; ++i) {
            double w = detail::trap_weight(cps, from, to, i);
            double lag = t - cps[i].t;
            const auto& ghat = cps[i].interaction_output;
            for (std::size_t idx = 0; idx < ghat.size(); ++idx) {
                cplx phase =
                    std::exp(cplx{0.0, static_cast<double>(-sign) * lag * fg->magnitudes()[idx]});
                acc.values()[idx] += w * phase * ghat.values()[idx];
            }
        }
        return acc;
    };

    PropagationSign ps = sign == 1 ? PropagationSign::outgoing : PropagationSign::incoming;
    TailIntegral out{apply_P(partition, ps, accumulate(first, last)), 0.0};
    // Last dyadic window [T/2, T] as a truncation-error proxy.
    std::size_t half = first;
    while (half < last && cps[half].t < 0.5 * T) ++half;
    if (half < last)
        out.last_window_norm = l2_norm(apply_P(partition, ps, accumulate(half, last)));
    return out;
}

// u_lc(t) assembled from the truncated u_r2 integrals (zero-mode rule on
// |p|^{-1}).
inline StateVector build_u_lc(const Trajectory& traj, const DirectionPartition& partition,
                              double t) {
    Field plus = u_r2(traj, partition, +1, t);
    Field minus = u_r2(traj, partition, -1, t);
    Field first(traj.grid(), Repr::spectral);
    for (std::size_t i = 0; i < first.size(); ++i)
        first.values()[i] = cplx{0.0, -0.5} * (minus.values()[i] - plus.values()[i]);
    first = apply_p_inverse(first);
    Field second(traj.grid(), Repr::spectral);
    for (std::size_t i = 0; i < second.size(); ++i)
        second.values()[i] = -0.5 * (plus.values()[i] + minus.values()[i]);
    return StateVector(fft_inverse(first), fft_inverse(second));
}

// | u(t) - U0(t,0) Omega - u_lc(t) |_H.
inline double decomposition_residual(const Trajectory& traj, const DirectionPartition& partition,
                                     double t, const StateVector& omega) {
    const Checkpoint& cp = traj.checkpoints()[detail::checkpoint_index_at(traj, t)];
    StateVector freePart = free_evolve(omega, t);
    StateVector lc = build_u_lc(traj, partition, t);
    return h_norm(StateVector(cp.state.u - freePart.u - lc.u,
                              cp.state.udot - freePart.udot - lc.udot));
}

// The cross terms |P^- e^{-it|p|} u^+| + |P^+ e^{+it|p|} u^-| that dominate
// the decomposition residual at the horizon.
inline double residual_bound_terms(const Trajectory& traj, const DirectionPartition& partition,
                                   double t) {
    Field plus = u_pm(traj, +1, t);
    Field minus = u_pm(traj, -1, t);
    Field a = apply_P(partition, PropagationSign::incoming, half_wave(plus, t, -1));
    Field b = apply_P(partition, PropagationSign::outgoing, half_wave(minus, t, +1));
    return l2_norm(a) + l2_norm(b);
}

struct InOutDecayResult {
    std::vector<double> shifted_times; // chi_radius + s
    std::vector<double> ratios;        // series relative to |f|
    RateFit fit;
};

// | chi(|x| >= R) P^{pm} e^{pm i s|p|} <x>^{-sigma} f | / |f| over s_list,
// fitted against (R + s).
inline InOutDecayResult incoming_outgoing_decay(const DirectionPartition& partition,
                                                double chi_radius, double sigma,
                                                const std::vector<double>& s_list, int sign,
                                                const Field& f) {
    if (s_list.size() < 4)
        throw std::invalid_argument("incoming_outgoing_decay: need at least 4 samples");
    const GridSpec& g = f.grid();
    Field weighted = apply_x_weight(f, -sigma);
    double nf = l2_norm(f);
    PropagationSign ps = sign == 1 ? PropagationSign::outgoing : PropagationSign::incoming;
    InOutDecayResult out;
    for (double s : s_list) {
        Field projected = apply_P(partition, ps, half_wave(weighted, s, sign));
        Field cut = apply_spatial_multiplier(projected, [&](const std::array<double, 4>& x) {
            double r2 = 0.0;
            for (int a = 0; a < g.dim(); ++a) r2 += x[static_cast<std::size_t>(a)] * x[static_cast<std::size_t>(a)];
            return std::sqrt(r2) >= chi_radius ? 1.0 : 0.0;
        });
        out.shifted_times.push_back(chi_radius + s);
        out.ratios.push_back(l2_norm(cut) / nf);
    }
    out.fit = fit_rate(out.shifted_times, out.ratios);
    return out;
}

// Weighted variant  | <x>^eps P^{pm} e^{pm i s|p|} <x>^{-sigma} f | / |f|,
// fitted against (1 + s) with the log_2 correction.
inline InOutDecayResult weighted_in_out_decay(const DirectionPartition& partition, double eps,
                                              double sigma, const std::vector<double>& s_list,
                                              int sign, const Field& f) {
    if (s_list.size() < 4)
        throw std::invalid_argument("weighted_in_out_decay: need at least 4 samples");
    Field weighted = apply_x_weight(f, -sigma);
    double nf = l2_norm(f);
    PropagationSign ps = sign == 1 ? PropagationSign::outgoing : PropagationSign::incoming;
    InOutDecayResult out;
    for (double s : s_list) {
        Field projected = apply_P(partition, ps, half_wave(weighted, s, sign));
        out.shifted_times.push_back(1.0 + s);
        out.ratios.push_back(l2_norm(apply_x_weight(projected, eps)) / nf);
    }
    out.fit = fit_rate(out.shifted_times, out.ratios, true);
    return out;
}

} // namespace wsct
