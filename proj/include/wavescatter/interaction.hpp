#pragma once

// The interaction catalogue: evaluators for the right-hand side N(x,t,u)u of
// the wave equation  box u = N(x,t,u) u  (box = -d_tt + Laplacian).
//
// Polynomial kinds (cubic, saturated power) are dealiased with the 2/3 rule;
// potential and derivative kinds are not. Time-independent samplers are
// tabulated once per grid.

#include <functional>
#include <mutex>
#include <optional>
#include <variant>

#include "wavescatter/ops.hpp"

namespace wsct {

// Raised when a solution leaves the trusted regime (non-finite samples or a
// max-norm beyond the configured threshold).
class BlowupError : public std::runtime_error {
public:
    BlowupError(double t, double max_norm)
        : std::runtime_error("blow-up detected at t = " + std::to_string(t) +
                             ", max-norm = " + std::to_string(max_norm)),
          time(t), max_norm_value(max_norm) {}
    double time;
    double max_norm_value;
};

inline constexpr double kBlowupMaxNorm = 1e8;

// Bounded amplitude profile b(.). The sinusoid variant is 1 + sin(s)/2.
enum class BProfile { one, sinusoid };

inline double b_profile_value(BProfile p, double s) {
    return p == BProfile::one ? 1.0 : 1.0 + 0.5 * std::sin(s);
}

using PotentialSampler = std::function<double(const std::array<double, 4>& x, double t)>;
// h^{ij}(x, t); indices in [0, n).
using MetricSampler = std::function<double(int i, int j, const std::array<double, 4>& x, double t)>;

namespace detail {

struct SampledTables {
    std::mutex mu;
    bool filled = false;
    GridSpec grid{1, 4, 1.0};
    std::vector<std::vector<double>> tables;
};

} // namespace detail

struct ZeroTerm {};

struct SaturatedPowerTerm {
    double r;
    double q;
    BProfile b = BProfile::one;
};

struct CubicTerm {
    BProfile b = BProfile::one;
};

struct PotentialTerm {
    PotentialSampler sampler;
    bool time_independent = true;
    std::shared_ptr<detail::SampledTables> cache = std::make_shared<detail::SampledTables>();
};

struct DerivativeTerm {
    MetricSampler sampler;
    bool time_independent = true;
    std::shared_ptr<detail::SampledTables> cache = std::make_shared<detail::SampledTables>();
};

using InteractionTerm =
    std::variant<ZeroTerm, SaturatedPowerTerm, CubicTerm, PotentialTerm, DerivativeTerm>;

class Interaction {
public:
    Interaction() : terms_{ZeroTerm{}} {}
    explicit Interaction(InteractionTerm term) : terms_{std::move(term)} { validate(); }
    explicit Interaction(std::vector<InteractionTerm> terms) : terms_(std::move(terms)) {
        if (terms_.empty()) terms_.push_back(ZeroTerm{});
        validate();
    }

    static Interaction zero() { return Interaction(); }
    static Interaction saturated_power(double r, double q, BProfile b = BProfile::one) {
        return Interaction(SaturatedPowerTerm{r, q, b});
    }
    static Interaction cubic(BProfile b = BProfile::one) { return Interaction(CubicTerm{b}); }
    static Interaction potential(PotentialSampler v, bool time_independent = true) {
        return Interaction(PotentialTerm{std::move(v), time_independent});
    }
    static Interaction derivative(MetricSampler h, bool time_independent = true) {
        return Interaction(DerivativeTerm{std::move(h), time_independent});
    }

    Interaction plus(const Interaction& other) const {
        std::vector<InteractionTerm> all = terms_;
        for (const auto& t : other.terms_) all.push_back(t);
        return Interaction(std::move(all));
    }

    const std::vector<InteractionTerm>& terms() const { return terms_; }

    bool is_zero() const {
        for (const auto& t : terms_)
            if (!std::holds_alternative<ZeroTerm>(t)) return false;
        return true;
    }

    bool has_derivative_term() const {
        for (const auto& t : terms_)
            if (std::holds_alternative<DerivativeTerm>(t)) return true;
        return false;
    }

    // sup over the grid of <x>^2 |h^{ij}|, the admissibility bound for the
    // derivative kind. Empty when no derivative term is present.
    std::optional<double> metric_weighted_sup(const GridSpec& g, double t) const {
        std::optional<double> sup;
        for (const auto& term : terms_) {
            if (const auto* d = std::get_if<DerivativeTerm>(&term)) {
                double worst = 0.0;
                for (std::size_t flat = 0; flat < g.size(); ++flat) {
                    auto x = coordinates_at(g, flat);
                    double r2 = 0.0;
                    for (int a = 0; a < g.dim(); ++a)
                        r2 += x[static_cast<std::size_t>(a)] * x[static_cast<std::size_t>(a)];
                    for (int i = 0; i < g.dim(); ++i)
                        for (int j = 0; j < g.dim(); ++j) {
                            double h = d->sampler(i, j, x, t);
                            if (!std::isfinite(h))
                                throw std::invalid_argument(
                                    "derivative interaction: non-finite h^{ij} sample");
                            worst = std::max(worst, (1.0 + r2) * std::abs(h));
                        }
                }
                sup = sup ? std::max(*sup, worst) : worst;
            }
        }
        return sup;
    }

private:
    void validate() const {
        for (const auto& t : terms_) {
            if (const auto* sp = std::get_if<SaturatedPowerTerm>(&t)) {
                if (!(sp->r > 3.0 && sp->r <= sp->q - 1.0))
                    throw std::invalid_argument(
                        "saturated_power interaction requires 3 < r <= q - 1");
            }
        }
    }

    std::vector<InteractionTerm> terms_;
};

namespace detail {

inline void check_finite_output(const Field& out, const Field& u, double t) {
    for (const auto& v : out.values()) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw BlowupError(t, max_abs(u));
    }
}

inline std::vector<double> sample_potential(const PotentialTerm& p, const GridSpec& g, double t) {
    std::vector<double> table(g.size());
    for (std::size_t i = 0; i < table.size(); ++i) {
        double v = p.sampler(coordinates_at(g, i), t);
        if (!std::isfinite(v)) throw std::invalid_argument("potential: non-finite sample");
        table[i] = v;
    }
    return table;
}

inline std::vector<std::vector<double>> sample_metric(const DerivativeTerm& d, const GridSpec& g,
                                                      double t) {
    const int n = g.dim();
    std::vector<std::vector<double>> tables(static_cast<std::size_t>(n * n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            auto& table = tables[static_cast<std::size_t>(i * n + j)];
            table.resize(g.size());
            for (std::size_t idx = 0; idx < g.size(); ++idx) {
                double h = d.sampler(i, j, coordinates_at(g, idx), t);
                if (!std::isfinite(h))
                    throw std::invalid_argument("derivative interaction: non-finite h^{ij} sample");
                table[idx] = h;
            }
        }
    return tables;
}

inline Field eval_term(const InteractionTerm& term, const Field& u, double t) {
    const GridSpec& g = u.grid();
    if (std::holds_alternative<ZeroTerm>(term)) return Field(g, Repr::physical);

    if (const auto* sp = std::get_if<SaturatedPowerTerm>(&term)) {
        // Dealias the polynomial numerator b |u|^r u; the saturating
        // denominator is a bounded factor and is applied pointwise.
        Field num(g, Repr::physical);
        for (std::size_t i = 0; i < u.size(); ++i) {
            cplx v = u.values()[i];
            double a = std::abs(v);
            num.values()[i] = b_profile_value(sp->b, a) * std::pow(a, sp->r) * v;
        }
        num = dealias_two_thirds(num);
        for (std::size_t i = 0; i < u.size(); ++i) {
            double a = std::abs(u.values()[i]);
            num.values()[i] /= std::pow(1.0 + a * a, 0.5 * sp->q);
        }
        return num;
    }
    if (const auto* c = std::get_if<CubicTerm>(&term)) {
        Field out(g, Repr::physical);
        for (std::size_t i = 0; i < u.size(); ++i) {
            cplx v = u.values()[i];
            out.values()[i] = b_profile_value(c->b, std::abs(v)) * v * v * v;
        }
        return dealias_two_thirds(out);
    }
    if (const auto* p = std::get_if<PotentialTerm>(&term)) {
        Field out = u;
        if (p->time_independent) {
            std::lock_guard<std::mutex> lock(p->cache->mu);
            if (!p->cache->filled || p->cache->grid != g) {
                p->cache->tables = {sample_potential(*p, g, t)};
                p->cache->grid = g;
                p->cache->filled = true;
            }
            const auto& table = p->cache->tables[0];
            for (std::size_t i = 0; i < out.size(); ++i) out.values()[i] *= table[i];
        } else {
            auto table = sample_potential(*p, g, t);
            for (std::size_t i = 0; i < out.size(); ++i) out.values()[i] *= table[i];
        }
        return out;
    }

    const auto& d = std::get<DerivativeTerm>(term);
    // d_i ( h^{ij} d_j u ), spectral derivatives with physical products.
    const int n = g.dim();
    std::vector<std::vector<double>> fresh;
    const std::vector<std::vector<double>>* tables = nullptr;
    std::unique_lock<std::mutex> lock;
    if (d.time_independent) {
        lock = std::unique_lock<std::mutex>(d.cache->mu);
        if (!d.cache->filled || d.cache->grid != g) {
            d.cache->tables = sample_metric(d, g, t);
            d.cache->grid = g;
            d.cache->filled = true;
        }
        tables = &d.cache->tables;
    } else {
        fresh = sample_metric(d, g, t);
        tables = &fresh;
    }

    Field uhat = fft_forward(u);
    auto fg = FrequencyGrid::shared(g);
    std::vector<Field> du;
    du.reserve(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        Field dj = uhat;
        for (std::size_t idx = 0; idx < dj.size(); ++idx)
            dj.values()[idx] *= cplx{0.0, fg->vector_at(idx)[static_cast<std::size_t>(j)]};
        du.push_back(fft_inverse(dj));
    }
    Field acc_hat(g, Repr::spectral);
    for (int i = 0; i < n; ++i) {
        Field flux(g, Repr::physical);
        for (int j = 0; j < n; ++j) {
            const auto& h = (*tables)[static_cast<std::size_t>(i * n + j)];
            const auto& dj = du[static_cast<std::size_t>(j)].values();
            for (std::size_t idx = 0; idx < flux.size(); ++idx)
                flux.values()[idx] += h[idx] * dj[idx];
        }
        Field flux_hat = fft_forward(flux);
        for (std::size_t idx = 0; idx < flux_hat.size(); ++idx)
            acc_hat.values()[idx] +=
                cplx{0.0, fg->vector_at(idx)[static_cast<std::size_t>(i)]} * flux_hat.values()[idx];
    }
    return fft_inverse(acc_hat);
}

} // namespace detail

// N(x,t,u)u for the physical-representation field u.
inline Field evaluate_interaction(const Interaction& interaction, const Field& u, double t) {
    if (u.repr() != Repr::physical)
        throw std::invalid_argument("evaluate_interaction: u must be physical");
    Field out(u.grid(), Repr::physical);
    bool first = true;
    for (const auto& term : interaction.terms()) {
        if (std::holds_alternative<ZeroTerm>(term)) continue;
        Field piece = detail::eval_term(term, u, t);
        if (first) {
            out = std::move(piece);
            first = false;
        } else {
            out = out + piece;
        }
    }
    detail::check_finite_output(out, u, t);
    return out;
}

} // namespace wsct
