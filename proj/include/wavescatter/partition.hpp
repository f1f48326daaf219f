#pragma once

// Directional partitions of unity on S^{n-1} and the forward/backward
// projections
//
//   P+ = sum_b  F^{h_b}(xhat) Ftilde^{h_b}(khat),    P- = 1 - P+,
//
// with the spatial factor applied last. Raw caps are
// F^h(xi) = 1 - psi(|xi - h| / 2c) (plateau inside chord c, support 2c) and
// Ftilde^h(xi) = 1 - psi(|xi - h| / 8c); the F caps are normalized by their
// pointwise sum, which requires the direction set to cover the sphere at
// chord radius < 2c while staying pairwise >= 2c apart. The shipped sets per
// dimension (antipodal pair, 12-gon, subdivided icosahedron, 600-cell
// vertices) satisfy both for c <= 0.2 and are re-verified at construction.

#include <random>

#include "wavescatter/cutoff.hpp"
#include "wavescatter/ops.hpp"

namespace wsct {

using Direction = std::array<double, 4>;

namespace detail {

inline double dir_dist(const Direction& a, const Direction& b, int n) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
        double d = a[static_cast<std::size_t>(i)] - b[static_cast<std::size_t>(i)];
        s += d * d;
    }
    return std::sqrt(s);
}

inline Direction normalized(Direction v, int n) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += v[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(i)];
    double inv = 1.0 / std::sqrt(s);
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] *= inv;
    return v;
}

inline std::vector<Direction> circle_directions(int count) {
    std::vector<Direction> out;
    for (int i = 0; i < count; ++i) {
        double phi = 2.0 * M_PI * static_cast<double>(i) / static_cast<double>(count);
        out.push_back({std::cos(phi), std::sin(phi), 0.0, 0.0});
    }
    return out;
}

// Icosahedron vertices plus its face centers: 32 directions with pairwise
// chord 0.6409 (>= 3c for c = 0.2, so normalized plateaus stay exact) and
// covering chord 0.393, at which the raw cap is ~2e-12 -- tiny but positive,
// so the normalized partition remains exact everywhere on the sphere.
inline std::vector<Direction> icosa_dodeca_directions() {
    const double phi = 0.5 * (1.0 + std::sqrt(5.0));
    std::vector<Direction> verts;
    for (double s1 : {-1.0, 1.0})
        for (double s2 : {-phi, phi}) {
            verts.push_back(normalized({0.0, s1, s2, 0.0}, 3));
            verts.push_back(normalized({s1, s2, 0.0, 0.0}, 3));
            verts.push_back(normalized({s2, 0.0, s1, 0.0}, 3));
        }
    std::vector<Direction> out = verts;
    const double edge_gap = 1.2; // icosahedron edge chord is ~1.0515
    for (std::size_t i = 0; i < verts.size(); ++i)
        for (std::size_t j = i + 1; j < verts.size(); ++j)
            for (std::size_t k = j + 1; k < verts.size(); ++k) {
                if (dir_dist(verts[i], verts[j], 3) < edge_gap &&
                    dir_dist(verts[j], verts[k], 3) < edge_gap &&
                    dir_dist(verts[i], verts[k], 3) < edge_gap) {
                    Direction center{};
                    for (int a = 0; a < 3; ++a)
                        center[static_cast<std::size_t>(a)] = verts[i][static_cast<std::size_t>(a)] +
                                                              verts[j][static_cast<std::size_t>(a)] +
                                                              verts[k][static_cast<std::size_t>(a)];
                    out.push_back(normalized(center, 3));
                }
            }
    return out;
}

// The 120 vertices of the 600-cell: pairwise chord ~0.618, covering ~0.38.
inline std::vector<Direction> cell600_directions() {
    std::vector<Direction> out;
    for (int a = 0; a < 4; ++a)
        for (double s : {-1.0, 1.0}) {
            Direction d{};
            d[static_cast<std::size_t>(a)] = s;
            out.push_back(d);
        }
    for (double s0 : {-0.5, 0.5})
        for (double s1 : {-0.5, 0.5})
            for (double s2 : {-0.5, 0.5})
                for (double s3 : {-0.5, 0.5}) out.push_back({s0, s1, s2, s3});
    // Even permutations of (phi, 1, 1/phi, 0)/2 with all sign choices.
    const double phi = 0.5 * (1.0 + std::sqrt(5.0));
    const std::array<std::array<int, 4>, 12> even_perms{{{0, 1, 2, 3},
                                                         {0, 2, 3, 1},
                                                         {0, 3, 1, 2},
                                                         {1, 0, 3, 2},
                                                         {1, 2, 0, 3},
                                                         {1, 3, 2, 0},
                                                         {2, 0, 1, 3},
                                                         {2, 1, 3, 0},
                                                         {2, 3, 0, 1},
                                                         {3, 0, 2, 1},
                                                         {3, 1, 0, 2},
                                                         {3, 2, 1, 0}}};
    const std::array<double, 4> base{0.5 * phi, 0.5, 0.5 / phi, 0.0};
    for (const auto& perm : even_perms)
        for (double s0 : {-1.0, 1.0})
            for (double s1 : {-1.0, 1.0})
                for (double s2 : {-1.0, 1.0}) {
                    const std::array<double, 3> signs{s0, s1, s2};
                    Direction d{};
                    int sign_slot = 0;
                    for (int a = 0; a < 4; ++a) {
                        double v = base[static_cast<std::size_t>(perm[static_cast<std::size_t>(a)])];
                        if (v != 0.0) v *= signs[static_cast<std::size_t>(sign_slot++)];
                        d[static_cast<std::size_t>(a)] = v;
                    }
                    out.push_back(d);
                }
    return out;
}

inline std::vector<Direction> default_directions(int n) {
    switch (n) {
        case 1: return {{1.0, 0.0, 0.0, 0.0}, {-1.0, 0.0, 0.0, 0.0}};
        case 2: return circle_directions(10);
        case 3: return icosa_dodeca_directions();
        default: return cell600_directions();
    }
}

} // namespace detail

class DirectionPartition {
public:
    DirectionPartition(int n, double c, std::vector<Direction> directions = {},
                       CutoffProfile profile = {})
        : n_(n), c_(c), profile_(profile),
          directions_(directions.empty() ? detail::default_directions(n) : std::move(directions)) {
        if (n < 1 || n > 4) throw std::invalid_argument("DirectionPartition: n in [1,4]");
        if (!(c > 0.0 && c < 0.25))
            throw std::invalid_argument("DirectionPartition: cap width must be in (0, 1/4)");
        verify_geometry();
    }

    int dim() const { return n_; }
    double cap_width() const { return c_; }
    const std::vector<Direction>& directions() const { return directions_; }

    // Raw cap of direction b at a unit vector.
    double raw_cap(std::size_t b, const Direction& xi) const {
        return profile_.low_pass(detail::dir_dist(xi, directions_[b], n_), 2.0 * c_);
    }
    // Enlarged cap (not normalized; plateau 4c, support 8c).
    double enlarged_cap(std::size_t b, const Direction& xi) const {
        return profile_.low_pass(detail::dir_dist(xi, directions_[b], n_), 8.0 * c_);
    }
    double raw_sum(const Direction& xi) const {
        double s = 0.0;
        for (std::size_t b = 0; b < directions_.size(); ++b) s += raw_cap(b, xi);
        return s;
    }
    // Normalized partition member F^{h_b}(xi).
    double cap(std::size_t b, const Direction& xi) const {
        double raw = raw_cap(b, xi);
        return raw == 0.0 ? 0.0 : raw / raw_sum(xi);
    }

    // Uniform unit vector from the given engine.
    Direction random_direction(std::mt19937_64& rng) const {
        std::normal_distribution<double> dist(0.0, 1.0);
        Direction v{};
        double s = 0.0;
        do {
            for (int a = 0; a < n_; ++a) {
                v[static_cast<std::size_t>(a)] = dist(rng);
            }
            s = 0.0;
            for (int a = 0; a < n_; ++a)
                s += v[static_cast<std::size_t>(a)] * v[static_cast<std::size_t>(a)];
        } while (s < 1e-12);
        return detail::normalized(v, n_);
    }

    // Worst |sum - 1| over uniformly sampled unit vectors.
    double partition_defect(std::size_t samples, std::uint64_t seed) const {
        std::mt19937_64 rng(seed);
        double worst = 0.0;
        for (std::size_t i = 0; i < samples; ++i) {
            Direction xi = random_direction(rng);
            double s = 0.0;
            for (std::size_t b = 0; b < directions_.size(); ++b) s += cap(b, xi);
            worst = std::max(worst, std::abs(s - 1.0));
        }
        return worst;
    }

    struct ConeCheck {
        std::size_t samples = 0;
        std::size_t failures = 0;
        double worst_margin = 1e300; // min of lhs - constant*rhs over samples
    };

    // Sampled verification of the outgoing-cone inequality
    // |x + q| >= (1/10)(|x| + |q|) on supp F^h x supp Ftilde^h.
    ConeCheck check_aligned_cone(std::size_t samples, std::uint64_t seed) const {
        return cone_check(samples, seed, true);
    }
    // Sampled verification of |x - q| >= 1e-6 (|x| + |q|) on
    // supp F^h x supp (1 - Ftilde^h).
    ConeCheck check_transversal_cone(std::size_t samples, std::uint64_t seed) const {
        return cone_check(samples, seed, false);
    }

private:
    void verify_geometry() const {
        // The plateau of the normalized cap extends to chord c only if no
        // other direction's support reaches it: pairwise distance >= 3c.
        for (std::size_t i = 0; i < directions_.size(); ++i)
            for (std::size_t j = i + 1; j < directions_.size(); ++j) {
                double d = detail::dir_dist(directions_[i], directions_[j], n_);
                if (d < 3.0 * c_)
                    throw std::invalid_argument(
                        "DirectionPartition: directions closer than 3c (distance " +
                        std::to_string(d) + ")");
            }
        // Cover: the raw sum must be positive on a dense sample.
        std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
        double worst = 1e300;
        Direction worst_xi{};
        std::size_t samples = n_ == 1 ? 64 : (n_ == 4 ? 40000 : 20000);
        for (std::size_t i = 0; i < samples; ++i) {
            Direction xi = random_direction(rng);
            double s = raw_sum(xi);
            if (s < worst) {
                worst = s;
                worst_xi = xi;
            }
        }
        if (worst < 1e-13) {
            std::string msg = "DirectionPartition: sphere not covered; raw sum " +
                              std::to_string(worst) + " at (";
            for (int a = 0; a < n_; ++a)
                msg += (a ? ", " : "") + std::to_string(worst_xi[static_cast<std::size_t>(a)]);
            throw std::invalid_argument(msg + ")");
        }
        // Transversal cone inequality; failure reports the worst sample.
        ConeCheck cc = cone_check(2000, 0xabcdefULL, false);
        if (cc.failures > 0)
            throw std::invalid_argument(
                "DirectionPartition: sampled transversal cone inequality failed with margin " +
                std::to_string(cc.worst_margin));
    }

    ConeCheck cone_check(std::size_t samples, std::uint64_t seed, bool aligned) const {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        std::uniform_int_distribution<std::size_t> pick(0, directions_.size() - 1);
        ConeCheck out;
        const double constant = aligned ? 0.1 : 1e-6;
        while (out.samples < samples) {
            std::size_t b = pick(rng);
            Direction xhat = sample_near(rng, directions_[b], 0.0, 2.0 * c_);
            Direction qhat = aligned ? sample_near(rng, directions_[b], 0.0, 8.0 * c_)
                                     : sample_near(rng, directions_[b], 4.0 * c_, 2.0);
            double wx = raw_cap(b, xhat);
            double wq = aligned ? enlarged_cap(b, qhat) : 1.0 - enlarged_cap(b, qhat);
            if (wx <= 0.0 || wq <= 0.0) continue; // outside the joint support
            double rx = 0.1 + 10.0 * unif(rng);
            double rq = 0.1 + 10.0 * unif(rng);
            double lhs = 0.0;
            for (int a = 0; a < n_; ++a) {
                double xa = rx * xhat[static_cast<std::size_t>(a)];
                double qa = rq * qhat[static_cast<std::size_t>(a)];
                double comb = aligned ? xa + qa : xa - qa;
                lhs += comb * comb;
            }
            lhs = std::sqrt(lhs);
            double margin = lhs - constant * (rx + rq);
            out.worst_margin = std::min(out.worst_margin, margin);
            if (margin < 0.0) ++out.failures;
            ++out.samples;
        }
        return out;
    }

    // Unit vector at chord distance in [lo, hi] from center (uniform in angle).
    Direction sample_near(std::mt19937_64& rng, const Direction& center, double lo,
                          double hi) const {
        if (n_ == 1) {
            // S^0 has two points; chord distance is 0 or 2.
            std::uniform_int_distribution<int> flip(0, 1);
            Direction other = center;
            other[0] = -other[0];
            bool want_far = lo > 0.0;
            if (lo <= 0.0 && hi >= 2.0) return flip(rng) ? center : other;
            return want_far ? other : center;
        }
        hi = std::min(hi, 2.0);
        double theta_lo = 2.0 * std::asin(std::min(1.0, 0.5 * lo));
        double theta_hi = 2.0 * std::asin(std::min(1.0, 0.5 * hi));
        std::uniform_real_distribution<double> unif(theta_lo, theta_hi);
        std::normal_distribution<double> dist(0.0, 1.0);
        Direction tangent{};
        double norm = 0.0;
        do {
            double dot = 0.0;
            for (int a = 0; a < n_; ++a) {
                tangent[static_cast<std::size_t>(a)] = dist(rng);
            }
            for (int a = 0; a < n_; ++a)
                dot += tangent[static_cast<std::size_t>(a)] * center[static_cast<std::size_t>(a)];
            norm = 0.0;
            for (int a = 0; a < n_; ++a) {
                tangent[static_cast<std::size_t>(a)] -= dot * center[static_cast<std::size_t>(a)];
                norm += tangent[static_cast<std::size_t>(a)] * tangent[static_cast<std::size_t>(a)];
            }
        } while (norm < 1e-12);
        double inv = 1.0 / std::sqrt(norm);
        double theta = unif(rng);
        Direction out{};
        for (int a = 0; a < n_; ++a)
            out[static_cast<std::size_t>(a)] = std::cos(theta) * center[static_cast<std::size_t>(a)] +
                                               std::sin(theta) * inv * tangent[static_cast<std::size_t>(a)];
        return out;
    }

    int n_;
    double c_;
    CutoffProfile profile_;
    std::vector<Direction> directions_;
};

enum class PropagationSign { outgoing, incoming }; // P+ and P-

namespace detail {

struct PartitionTables {
    std::mutex mu;
    bool filled = false;
    GridSpec grid{1, 4, 1.0};
    std::vector<std::vector<double>> spatial;
    std::vector<std::vector<double>> fourier;
};

inline std::shared_ptr<PartitionTables> partition_table_cache(const DirectionPartition& p,
                                                              const GridSpec& g) {
    // Keyed per (partition identity, grid); partitions are immutable.
    static std::mutex mu;
    static std::map<std::pair<const DirectionPartition*, GridSpec>,
                    std::shared_ptr<PartitionTables>>
        cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(&p, g);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    auto t = std::make_shared<PartitionTables>();
    cache.emplace(key, t);
    return t;
}

inline void fill_partition_tables(PartitionTables& t, const DirectionPartition& p,
                                  const GridSpec& g) {
    const std::size_t nb = p.directions().size();
    t.spatial.assign(nb, std::vector<double>(g.size(), 0.0));
    t.fourier.assign(nb, std::vector<double>(g.size(), 0.0));
    auto fg = FrequencyGrid::shared(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        auto x = coordinates_at(g, i);
        double rx = 0.0;
        for (int a = 0; a < g.dim(); ++a)
            rx += x[static_cast<std::size_t>(a)] * x[static_cast<std::size_t>(a)];
        rx = std::sqrt(rx);
        if (rx > 0.0) {
            Direction xhat{};
            for (int a = 0; a < g.dim(); ++a)
                xhat[static_cast<std::size_t>(a)] = x[static_cast<std::size_t>(a)] / rx;
            for (std::size_t b = 0; b < nb; ++b) t.spatial[b][i] = p.cap(b, xhat);
        }
        auto k = fg->vector_at(i);
        double rk = fg->magnitudes()[i];
        if (rk > 0.0) {
            Direction khat{};
            for (int a = 0; a < g.dim(); ++a)
                khat[static_cast<std::size_t>(a)] = k[static_cast<std::size_t>(a)] / rk;
            for (std::size_t b = 0; b < nb; ++b) t.fourier[b][i] = p.enlarged_cap(b, khat);
        }
        // k = 0 and x = 0: the "+0" convention sets every cap to 0 there.
    }
    t.grid = g;
    t.filled = true;
}

} // namespace detail

// P+ f = sum_b F^{h_b}(xhat) Ftilde^{h_b}(khat) f  (spatial factor last);
// P- f = f - P+ f, exactly.
inline Field apply_P(const DirectionPartition& p, PropagationSign sign, const Field& f) {
    const GridSpec& g = f.grid();
    auto tables = detail::partition_table_cache(p, g);
    {
        std::lock_guard<std::mutex> lock(tables->mu);
        if (!tables->filled || tables->grid != g) detail::fill_partition_tables(*tables, p, g);
    }
    Field fhat = to_repr(f, Repr::spectral);
    Field acc(g, Repr::physical);
    for (std::size_t b = 0; b < p.directions().size(); ++b) {
        Field piece = fhat;
        const auto& fk = tables->fourier[b];
        bool any = false;
        for (std::size_t i = 0; i < piece.size(); ++i) {
            piece.values()[i] *= fk[i];
            any = any || fk[i] != 0.0;
        }
        if (!any) continue;
        Field phys = fft_inverse(piece);
        const auto& sx = tables->spatial[b];
        for (std::size_t i = 0; i < acc.size(); ++i) acc.values()[i] += sx[i] * phys.values()[i];
    }
    Field plus = to_repr(acc, f.repr());
    if (sign == PropagationSign::outgoing) return plus;
    return f - plus;
}

inline DirectionPartition make_direction_partition(int n, double c = 0.2) {
    return DirectionPartition(n, c);
}

} // namespace wsct
