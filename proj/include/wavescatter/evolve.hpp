#pragma once

// Strang split-step integration of  box u = N(x,t,u) u  and the trajectory
// record consumed by the scattering pipelines.
//
// One step of size dt from time t:
//   kick   udot -= dt/2 * N(x, t+dt/2, u) u
//   drift  free evolution by dt
//   kick   udot -= dt/2 * N(x, t+dt/2, u) u   (u at the new position)
//
// The interaction is sampled at the interval midpoint so the scheme stays
// second order for time-dependent interactions.

#include <algorithm>

#include "wavescatter/interaction.hpp"
#include "wavescatter/propagator.hpp"

namespace wsct {

inline StateVector step(const StateVector& s, const Interaction& interaction, double t, double dt,
                        const FreePropagator* cached_drift = nullptr) {
    if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
    double tm = t + 0.5 * dt;

    Field g1 = evaluate_interaction(interaction, s.u, tm);
    Field udot_kicked = s.udot;
    axpy(udot_kicked, cplx{-0.5 * dt, 0.0}, g1);

    StateVector drifted = cached_drift != nullptr && cached_drift->time() == dt
                              ? cached_drift->apply(StateVector(s.u, udot_kicked))
                              : free_evolve(StateVector(s.u, udot_kicked), dt);

    Field g2 = evaluate_interaction(interaction, drifted.u, tm);
    axpy(drifted.udot, cplx{-0.5 * dt, 0.0}, g2);

    double m = std::max(max_abs(drifted.u), max_abs(drifted.udot));
    if (!std::isfinite(m) || m > kBlowupMaxNorm) throw BlowupError(t + dt, m);
    return drifted;
}

// Smallest radius containing the requested fraction of the energy density
// |grad u|^2 + |udot|^2.
inline double effective_support_radius(const StateVector& s, double fraction = 1.0 - 1e-8) {
    const GridSpec& g = s.grid();
    std::vector<double> density(g.size(), 0.0);
    Field uhat = to_repr(s.u, Repr::spectral);
    for (int a = 0; a < g.dim(); ++a) {
        Field da = uhat;
        auto fg = FrequencyGrid::shared(g);
        for (std::size_t i = 0; i < da.size(); ++i)
            da.values()[i] *= cplx{0.0, fg->vector_at(i)[static_cast<std::size_t>(a)]};
        Field dphys = fft_inverse(da);
        for (std::size_t i = 0; i < density.size(); ++i) density[i] += std::norm(dphys.values()[i]);
    }
    Field udot = to_repr(s.udot, Repr::physical);
    for (std::size_t i = 0; i < density.size(); ++i) density[i] += std::norm(udot.values()[i]);

    std::vector<std::pair<double, double>> by_radius(g.size());
    double total = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        by_radius[i] = {radius_at(g, i), density[i]};
        total += density[i];
    }
    if (total == 0.0) return 0.0;
    std::sort(by_radius.begin(), by_radius.end());
    double acc = 0.0;
    for (const auto& [r, d] : by_radius) {
        acc += d;
        if (acc >= fraction * total) return r;
    }
    return by_radius.back().first;
}

// Fraction of the energy density in the outer shell max_a |x_a| >= 0.9 L.
inline double boundary_mass_fraction(const StateVector& s) {
    const GridSpec& g = s.grid();
    Field uhat = to_repr(s.u, Repr::spectral);
    std::vector<double> density(g.size(), 0.0);
    auto fg = FrequencyGrid::shared(g);
    for (int a = 0; a < g.dim(); ++a) {
        Field da = uhat;
        for (std::size_t i = 0; i < da.size(); ++i)
            da.values()[i] *= cplx{0.0, fg->vector_at(i)[static_cast<std::size_t>(a)]};
        Field dphys = fft_inverse(da);
        for (std::size_t i = 0; i < density.size(); ++i) density[i] += std::norm(dphys.values()[i]);
    }
    Field udot = to_repr(s.udot, Repr::physical);
    for (std::size_t i = 0; i < density.size(); ++i) density[i] += std::norm(udot.values()[i]);

    double total = 0.0, outer = 0.0;
    const double edge = 0.9 * g.half_length();
    for (std::size_t i = 0; i < g.size(); ++i) {
        total += density[i];
        auto x = coordinates_at(g, i);
        double linf = 0.0;
        for (int a = 0; a < g.dim(); ++a) linf = std::max(linf, std::abs(x[static_cast<std::size_t>(a)]));
        if (linf >= edge) outer += density[i];
    }
    return total == 0.0 ? 0.0 : outer / total;
}

struct Checkpoint {
    double t;
    StateVector state;        // physical representation
    Field interaction_output; // spectral representation of N(x,t,u)u
};

struct RunDiagnostics {
    std::vector<double> times;
    std::vector<double> h_norms;
    std::vector<double> boundary_fractions;
    std::vector<double> weighted_interaction_norms; // |<x>^sigma N u|
    std::vector<double> l1_interaction_norms;       // |N u|_{L^1}
    double sigma = 2.0;
    double initial_radius = 0.0;
    double energy_sup = 0.0;
    bool no_wrap_ok = true;
    std::string warning;
};

class Trajectory {
public:
    Trajectory(GridSpec g, Interaction interaction, double dt)
        : grid_(std::move(g)), interaction_(std::move(interaction)), dt_(dt) {}

    const GridSpec& grid() const { return grid_; }
    const Interaction& interaction() const { return interaction_; }
    double dt() const { return dt_; }

    void add_checkpoint(Checkpoint c) {
        if (!checkpoints_.empty() && c.t <= checkpoints_.back().t)
            throw std::invalid_argument("Trajectory: checkpoint times must increase");
        if (c.state.grid() != grid_ || c.interaction_output.grid() != grid_)
            throw std::invalid_argument("Trajectory: checkpoint off the run grid");
        checkpoints_.push_back(std::move(c));
    }

    const std::vector<Checkpoint>& checkpoints() const { return checkpoints_; }
    double final_time() const { return checkpoints_.empty() ? 0.0 : checkpoints_.back().t; }

    const Checkpoint& at_time(double t) const {
        for (const auto& c : checkpoints_)
            if (std::abs(c.t - t) <= 1e-9 * std::max(1.0, std::abs(t))) return c;
        throw std::invalid_argument("Trajectory: t = " + std::to_string(t) +
                                    " is not a checkpoint time");
    }

    RunDiagnostics& diagnostics() { return diagnostics_; }
    const RunDiagnostics& diagnostics() const { return diagnostics_; }

    void mark_blowup(double t, double max_norm) {
        blowup_ = true;
        blowup_time_ = t;
        blowup_max_norm_ = max_norm;
    }
    bool blew_up() const { return blowup_; }
    double blowup_time() const { return blowup_time_; }
    double blowup_max_norm() const { return blowup_max_norm_; }

private:
    GridSpec grid_;
    Interaction interaction_;
    double dt_;
    std::vector<Checkpoint> checkpoints_;
    RunDiagnostics diagnostics_;
    bool blowup_ = false;
    double blowup_time_ = 0.0;
    double blowup_max_norm_ = 0.0;
};

struct EvolveOptions {
    double diagnostics_sigma = 2.0; // weight for the local assumption checker
    double no_wrap_margin = 2.0;
};

// Integrates to time T, checkpointing every checkpoint_every steps (the
// initial and final states are always checkpoints). On blow-up the partial
// trajectory is returned with its blow-up flag set.
inline Trajectory evolve(const StateVector& s0, const Interaction& interaction, double T, double dt,
                         int checkpoint_every, const EvolveOptions& options = {}) {
    if (!(T > 0.0) || !(dt > 0.0)) throw std::invalid_argument("evolve: T and dt must be positive");
    if (checkpoint_every < 1) throw std::invalid_argument("evolve: checkpoint_every must be >= 1");
    const GridSpec& g = s0.grid();
    const long nsteps = std::lround(T / dt);
    if (nsteps < 1 || std::abs(nsteps * dt - T) > 1e-9 * T)
        throw std::invalid_argument("evolve: T must be an integer multiple of dt");

    Trajectory traj(g, interaction, dt);
    auto& diag = traj.diagnostics();
    diag.sigma = options.diagnostics_sigma;
    diag.initial_radius = effective_support_radius(s0);
    double required = diag.initial_radius + T + options.no_wrap_margin;
    if (g.half_length() < required) {
        diag.no_wrap_ok = false;
        diag.warning = "no-wrap constraint violated: L = " + std::to_string(g.half_length()) +
                       " < R0 + T + margin = " + std::to_string(required);
    }

    auto record = [&](double t, const StateVector& s) {
        Field g_out = evaluate_interaction(interaction, s.u, t);
        diag.times.push_back(t);
        double hn = h_norm(s);
        diag.h_norms.push_back(hn);
        diag.energy_sup = std::max(diag.energy_sup, hn);
        diag.boundary_fractions.push_back(boundary_mass_fraction(s));
        diag.weighted_interaction_norms.push_back(weighted_norm(g_out, options.diagnostics_sigma));
        diag.l1_interaction_norms.push_back(g.physical_weight() *
                                            [&] {
                                                double a = 0.0;
                                                for (const auto& v : g_out.values()) a += std::abs(v);
                                                return a;
                                            }());
        traj.add_checkpoint(Checkpoint{t, s, fft_forward(g_out)});
    };

    FreePropagator drift(g, dt);
    StateVector s = s0;
    record(0.0, s);
    for (long m = 0; m < nsteps; ++m) {
        double t = static_cast<double>(m) * dt;
        try {
            s = step(s, interaction, t, dt, &drift);
        } catch (const BlowupError& e) {
            traj.mark_blowup(e.time, e.max_norm_value);
            return traj;
        }
        if ((m + 1) % checkpoint_every == 0 || m + 1 == nsteps)
            record(static_cast<double>(m + 1) * dt, s);
    }
    return traj;
}

// | u(t) - U0(t,0) u(0) + int_0^t U0(t,s) N(s) u(s) ds |_H  with the integral
// by composite trapezoid over the stored checkpoints.
inline double duhamel_residual(const Trajectory& traj, double t) {
    const auto& cps = traj.checkpoints();
    if (cps.empty()) throw std::invalid_argument("duhamel_residual: empty trajectory");
    const Checkpoint& target = traj.at_time(t);
    const GridSpec& g = traj.grid();
    auto fg = FrequencyGrid::shared(g);

    std::size_t last = 0;
    while (last + 1 < cps.size() && cps[last + 1].t <= t + 1e-12) ++last;

    Field acc_u(g, Repr::spectral), acc_v(g, Repr::spectral);
    for (std::size_t i = 0; i <= last; ++i) {
        double w;
        if (last == 0) {
            w = 0.0;
        } else if (i == 0) {
            w = 0.5 * (cps[1].t - cps[0].t);
        } else if (i == last) {
            w = 0.5 * (cps[last].t - cps[last - 1].t);
        } else {
            w = 0.5 * (cps[i + 1].t - cps[i - 1].t);
        }
        double s = cps[i].t;
        const auto& ghat = cps[i].interaction_output;
        for (std::size_t idx = 0; idx < ghat.size(); ++idx) {
            double k = fg->magnitudes()[idx];
            double lag = t - s;
            double sin_over_k = k == 0.0 ? lag : std::sin(lag * k) / k;
            acc_u.values()[idx] += w * sin_over_k * ghat.values()[idx];
            acc_v.values()[idx] += w * std::cos(lag * k) * ghat.values()[idx];
        }
    }

    StateVector freept = free_evolve(cps.front().state, t);
    StateVector residual(target.state.u - freept.u + fft_inverse(acc_u),
                         target.state.udot - freept.udot + fft_inverse(acc_v));
    return h_norm(residual);
}

} // namespace wsct
