#pragma once

// Periodic grids on the centered box [-L, L)^n and their frequency lattices.
//
// Physical samples live at x_a(i) = -L + i*h, h = 2L/M, axis-major row order
// (x1 slowest). Spectral samples use the FFT storage order per axis:
// index j maps to the signed wavenumber k(j) = (pi/L) * (j < M/2 ? j : j - M).

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

namespace wsct {

class GridSpec {
public:
    GridSpec(int n, int m, double half_length)
        : n_(n), m_(m), half_length_(half_length) {
        if (n < 1 || n > 4) throw std::invalid_argument("GridSpec: dimension must be in [1,4]");
        if (m < 4 || m % 2 != 0) throw std::invalid_argument("GridSpec: M must be even and >= 4");
        if (!(half_length > 0.0)) throw std::invalid_argument("GridSpec: L must be positive");
        std::size_t total = 1;
        for (int a = 0; a < n; ++a) {
            if (total > memory_budget_points() / static_cast<std::size_t>(m))
                throw std::invalid_argument("GridSpec: M^n exceeds the configured memory budget");
            total *= static_cast<std::size_t>(m);
        }
        size_ = total;
        spacing_ = 2.0 * half_length / static_cast<double>(m);
    }

    int dim() const { return n_; }
    int points_per_axis() const { return m_; }
    double half_length() const { return half_length_; }
    double spacing() const { return spacing_; }
    std::size_t size() const { return size_; }

    // Quadrature weights matching the continuum L^2 norms.
    double physical_weight() const { return std::pow(spacing_, n_); }
    double spectral_weight() const { return std::pow(M_PI / half_length_, n_); }

    double coordinate(int index_along_axis) const {
        return -half_length_ + spacing_ * static_cast<double>(index_along_axis);
    }
    double wavenumber(int index_along_axis) const {
        int j = index_along_axis;
        int s = (j < m_ / 2) ? j : j - m_;
        return (M_PI / half_length_) * static_cast<double>(s);
    }
    // Nyquist magnitude (pi/L)*(M/2).
    double max_wavenumber() const { return (M_PI / half_length_) * (m_ / 2); }

    bool operator==(const GridSpec& o) const {
        return n_ == o.n_ && m_ == o.m_ && half_length_ == o.half_length_;
    }
    bool operator!=(const GridSpec& o) const { return !(*this == o); }
    bool operator<(const GridSpec& o) const {
        if (n_ != o.n_) return n_ < o.n_;
        if (m_ != o.m_) return m_ < o.m_;
        return half_length_ < o.half_length_;
    }

    static std::size_t& memory_budget_points() {
        static std::size_t budget = std::size_t(1) << 24;
        return budget;
    }

private:
    int n_;
    int m_;
    double half_length_;
    double spacing_;
    std::size_t size_;
};

// Multi-index walker over the row-major lattice.
class IndexWalker {
public:
    explicit IndexWalker(const GridSpec& g) : n_(g.dim()), m_(g.points_per_axis()) {
        idx_.fill(0);
    }
    const std::array<int, 4>& indices() const { return idx_; }
    bool advance() {
        for (int a = n_ - 1; a >= 0; --a) {
            if (++idx_[a] < m_) return true;
            idx_[a] = 0;
        }
        return false;
    }

private:
    int n_;
    int m_;
    std::array<int, 4> idx_;
};

// Precomputed wavenumber tables: per-axis k values, |k| and |k|^2 arrays.
class FrequencyGrid {
public:
    explicit FrequencyGrid(const GridSpec& g) : grid_(g) {
        const int n = g.dim();
        const int m = g.points_per_axis();
        axis_k_.resize(static_cast<std::size_t>(m));
        for (int j = 0; j < m; ++j) axis_k_[static_cast<std::size_t>(j)] = g.wavenumber(j);
        kmag_.resize(g.size());
        IndexWalker w(g);
        std::size_t flat = 0;
        do {
            double s = 0.0;
            for (int a = 0; a < n; ++a) {
                double k = axis_k_[static_cast<std::size_t>(w.indices()[a])];
                s += k * k;
            }
            kmag_[flat++] = std::sqrt(s);
        } while (w.advance());
        // |k| = 0 exactly and only at the zero mode (index 0 in FFT order).
        kmag_[0] = 0.0;
    }

    const GridSpec& grid() const { return grid_; }
    const std::vector<double>& magnitudes() const { return kmag_; }
    double axis_value(int j) const { return axis_k_[static_cast<std::size_t>(j)]; }

    // Components of k at a flat index (row-major decode).
    std::array<double, 4> vector_at(std::size_t flat) const {
        std::array<double, 4> k{};
        const int n = grid_.dim();
        const int m = grid_.points_per_axis();
        for (int a = n - 1; a >= 0; --a) {
            k[static_cast<std::size_t>(a)] = axis_k_[flat % static_cast<std::size_t>(m)];
            flat /= static_cast<std::size_t>(m);
        }
        return k;
    }

    static std::shared_ptr<const FrequencyGrid> shared(const GridSpec& g) {
        static std::mutex mu;
        static std::map<GridSpec, std::shared_ptr<const FrequencyGrid>> cache;
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(g);
        if (it != cache.end()) return it->second;
        auto fg = std::make_shared<const FrequencyGrid>(g);
        cache.emplace(g, fg);
        return fg;
    }

private:
    GridSpec grid_;
    std::vector<double> axis_k_;
    std::vector<double> kmag_;
};

// Physical coordinates at a flat index.
inline std::array<double, 4> coordinates_at(const GridSpec& g, std::size_t flat) {
    std::array<double, 4> x{};
    const int n = g.dim();
    const int m = g.points_per_axis();
    for (int a = n - 1; a >= 0; --a) {
        x[static_cast<std::size_t>(a)] = g.coordinate(static_cast<int>(flat % static_cast<std::size_t>(m)));
        flat /= static_cast<std::size_t>(m);
    }
    return x;
}

inline double radius_at(const GridSpec& g, std::size_t flat) {
    auto x = coordinates_at(g, flat);
    double s = 0.0;
    for (int a = 0; a < g.dim(); ++a) s += x[static_cast<std::size_t>(a)] * x[static_cast<std::size_t>(a)];
    return std::sqrt(s);
}

} // namespace wsct
