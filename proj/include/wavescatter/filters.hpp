#pragma once

// Phase-space filters: ordered products of spatial windows g(x) and Fourier
// windows m(k), with an optional |p|^{-1} (.) |p| sandwich on the first state
// component. Realizes the time-parameterized filters
//
//   local     F_c(|x|/t^a <= 1) F_1(t^{a/2}|p| >= 1) F_1(|p| <= t^{a/2})
//   nonlocal  F_c(|x|/t^a <= 1) F_1(|p| <= t^a)
//   metric    F_1(|x| <= t^a)   F_1(|p| <= t^a)
//
// written leftmost-applied-last, and the weight operator
// X^sigma = diag(|p|^{-1} <x>^sigma |p|, <x>^sigma).

#include <mutex>
#include <optional>

#include "wavescatter/cutoff.hpp"
#include "wavescatter/ops.hpp"

namespace wsct {

enum class FactorKind { spatial, fourier };

struct FilterFactor {
    FactorKind kind;
    std::string label;                    // symbolic form for run manifests
    std::function<double(double)> radial; // evaluated on |x| or |k|
};

class PhaseSpaceFilter {
public:
    PhaseSpaceFilter() = default;
    PhaseSpaceFilter(std::vector<FilterFactor> factors, bool sandwich = false)
        : factors_(std::move(factors)), sandwich_(sandwich) {}

    const std::vector<FilterFactor>& factors() const { return factors_; }
    bool sandwich() const { return sandwich_; }
    PhaseSpaceFilter with_sandwich(bool on) const {
        PhaseSpaceFilter f = *this;
        f.sandwich_ = on;
        return f;
    }

    bool pure_fourier() const {
        for (const auto& f : factors_)
            if (f.kind != FactorKind::fourier) return false;
        return true;
    }

    std::vector<std::string> describe() const {
        std::vector<std::string> out;
        out.reserve(factors_.size());
        for (const auto& f : factors_) out.push_back(f.label);
        return out;
    }

    // Composition in operator order: (*this) after `right`.
    PhaseSpaceFilter compose(const PhaseSpaceFilter& right) const {
        std::vector<FilterFactor> all = factors_;
        for (const auto& f : right.factors_) all.push_back(f);
        return PhaseSpaceFilter(std::move(all), sandwich_);
    }

private:
    std::vector<FilterFactor> factors_;
    bool sandwich_ = false;
};

namespace detail {

inline std::vector<double> tabulate_factor(const FilterFactor& f, const GridSpec& g) {
    std::vector<double> table(g.size());
    if (f.kind == FactorKind::spatial) {
        for (std::size_t i = 0; i < table.size(); ++i) table[i] = f.radial(radius_at(g, i));
    } else {
        auto fg = FrequencyGrid::shared(g);
        for (std::size_t i = 0; i < table.size(); ++i) table[i] = f.radial(fg->magnitudes()[i]);
    }
    for (double v : table) {
        if (!std::isfinite(v) || v < -1e-12 || v > 1.0 + 1e-12)
            throw std::invalid_argument("filter factor '" + f.label +
                                        "' leaves [0,1] on the grid");
    }
    return table;
}

} // namespace detail

// Factors applied right to left (rightmost first), alternating representation
// as needed; the input representation is restored on output.
inline Field apply_filter(const PhaseSpaceFilter& filter, const Field& f) {
    Repr orig = f.repr();
    Field cur = f;
    for (auto it = filter.factors().rbegin(); it != filter.factors().rend(); ++it) {
        auto table = detail::tabulate_factor(*it, f.grid());
        cur = to_repr(cur, it->kind == FactorKind::spatial ? Repr::physical : Repr::spectral);
        for (std::size_t i = 0; i < cur.size(); ++i) cur.values()[i] *= table[i];
    }
    return to_repr(cur, orig);
}

// |p|^{-1} F |p| with the zero-mode rule (k = 0 maps to 0 at the |p|^{-1}).
inline Field apply_sandwiched(const PhaseSpaceFilter& filter, const Field& f) {
    return apply_p_inverse(apply_filter(filter, apply_p_magnitude(f)));
}

// The matrix form diag(|p|^{-1} F |p|, F) acting on the state pair.
inline StateVector apply_matrix_filter(const PhaseSpaceFilter& filter, const StateVector& s) {
    return StateVector(apply_sandwiched(filter, s.u), apply_filter(filter, s.udot));
}

enum class FilterMode { local, nonlocal, metric };

inline const char* filter_mode_name(FilterMode m) {
    switch (m) {
        case FilterMode::local: return "local";
        case FilterMode::nonlocal: return "nonlocal";
        default: return "metric";
    }
}

inline PhaseSpaceFilter make_F_alpha(double t, double alpha, FilterMode mode,
                                     const CutoffProfile& spatial_profile = {},
                                     const CutoffProfile& frequency_profile = {}) {
    if (!(t > 0.0)) throw std::invalid_argument("make_F_alpha: t must be positive");
    double ta = std::pow(t, alpha);
    std::vector<FilterFactor> factors;
    auto num = [](double v) { return std::to_string(v); };
    if (mode == FilterMode::local) {
        double ta2 = std::pow(t, 0.5 * alpha);
        factors.push_back({FactorKind::spatial, "F_c(|x|/" + num(ta) + " <= 1)",
                           [spatial_profile, ta](double r) { return spatial_profile.low_pass(r, ta); }});
        factors.push_back({FactorKind::fourier, "F_1(" + num(ta2) + "|k| >= 1)",
                           [frequency_profile, ta2](double k) {
                               return frequency_profile.value(ta2 * k);
                           }});
        factors.push_back({FactorKind::fourier, "F_1(|k| <= " + num(ta2) + ")",
                           [frequency_profile, ta2](double k) {
                               return frequency_profile.low_pass(k, ta2);
                           }});
    } else {
        if (mode == FilterMode::metric) {
            factors.push_back({FactorKind::spatial, "F_1(|x| <= " + num(ta) + ")",
                               [spatial_profile, ta](double r) {
                                   return spatial_profile.low_pass(r, ta);
                               }});
        } else {
            factors.push_back({FactorKind::spatial, "F_c(|x|/" + num(ta) + " <= 1)",
                               [spatial_profile, ta](double r) {
                                   return spatial_profile.low_pass(r, ta);
                               }});
        }
        factors.push_back({FactorKind::fourier, "F_1(|k| <= " + num(ta) + ")",
                           [frequency_profile, ta](double k) {
                               return frequency_profile.low_pass(k, ta);
                           }});
    }
    return PhaseSpaceFilter(std::move(factors));
}

// The combined frequency window F_1(|p|, t) = F_1(t^{a/2}|p| >= 1) F_1(|p| <= t^{a/2}).
inline FilterFactor make_frequency_window(double t, double alpha,
                                          const CutoffProfile& profile = {}) {
    double ta2 = std::pow(t, 0.5 * alpha);
    return {FactorKind::fourier, "F_1(|k|," + std::to_string(t) + ")",
            [profile, ta2](double k) { return profile.value(ta2 * k) * profile.low_pass(k, ta2); }};
}

// Admissible alpha ranges per mode; violations are exploration warnings, not
// errors.
inline std::optional<std::string> alpha_admissibility_warning(FilterMode mode, double alpha,
                                                              double sigma, int n) {
    double hi = 0.0;
    switch (mode) {
        case FilterMode::local: hi = sigma > 1.0 ? 1.0 - 1.0 / sigma : 0.0; break;
        case FilterMode::nonlocal:
            hi = static_cast<double>(n - 3) / static_cast<double>(2 * n + 1);
            break;
        case FilterMode::metric: hi = 1.0 / 3.0; break;
    }
    if (alpha > 0.0 && alpha < hi) return std::nullopt;
    return "alpha = " + std::to_string(alpha) + " outside the admissible range (0, " +
           std::to_string(hi) + ") for " + filter_mode_name(mode) + " mode";
}

// X^sigma = diag(|p|^{-1} <x>^sigma |p|, <x>^sigma) with the zero-mode rule.
inline StateVector apply_X_sigma(const StateVector& s, double sigma) {
    if (sigma < 0.0) throw std::invalid_argument("apply_X_sigma: sigma must be >= 0");
    return StateVector(apply_p_inverse(apply_x_weight(apply_p_magnitude(s.u), sigma)),
                       apply_x_weight(s.udot, sigma));
}

} // namespace wsct
