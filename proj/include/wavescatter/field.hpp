#pragma once

// A sampled complex function on a periodic grid, tagged by representation.
// Fields are value types; every operation returns a new field.

#include <complex>
#include <stdexcept>
#include <utility>
#include <vector>

#include "wavescatter/grid.hpp"

namespace wsct {

using cplx = std::complex<double>;

enum class Repr { physical, spectral };

class Field {
public:
    Field(GridSpec g, Repr r)
        : grid_(std::move(g)), repr_(r), values_(grid_.size(), cplx{0.0, 0.0}) {}
    Field(GridSpec g, Repr r, std::vector<cplx> v)
        : grid_(std::move(g)), repr_(r), values_(std::move(v)) {
        if (values_.size() != grid_.size())
            throw std::invalid_argument("Field: value count does not match grid");
    }

    const GridSpec& grid() const { return grid_; }
    Repr repr() const { return repr_; }
    const std::vector<cplx>& values() const { return values_; }
    std::vector<cplx>& values() { return values_; }
    std::size_t size() const { return values_.size(); }

    void set_repr(Repr r) { repr_ = r; }

private:
    GridSpec grid_;
    Repr repr_;
    std::vector<cplx> values_;
};

inline void require_same_grid(const Field& a, const Field& b, const char* what) {
    if (a.grid() != b.grid()) throw std::invalid_argument(std::string(what) + ": grid mismatch");
}

inline Field operator+(const Field& a, const Field& b) {
    require_same_grid(a, b, "Field::operator+");
    if (a.repr() != b.repr()) throw std::invalid_argument("Field::operator+: representation mismatch");
    Field out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out.values()[i] += b.values()[i];
    return out;
}

inline Field operator-(const Field& a, const Field& b) {
    require_same_grid(a, b, "Field::operator-");
    if (a.repr() != b.repr()) throw std::invalid_argument("Field::operator-: representation mismatch");
    Field out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out.values()[i] -= b.values()[i];
    return out;
}

inline Field operator*(cplx c, const Field& a) {
    Field out = a;
    for (auto& v : out.values()) v *= c;
    return out;
}

inline void axpy(Field& y, cplx a, const Field& x) {
    require_same_grid(y, x, "axpy");
    if (y.repr() != x.repr()) throw std::invalid_argument("axpy: representation mismatch");
    for (std::size_t i = 0; i < y.size(); ++i) y.values()[i] += a * x.values()[i];
}

inline double max_abs(const Field& f) {
    double m = 0.0;
    for (const auto& v : f.values()) {
        double a = std::abs(v);
        if (a > m) m = a;
    }
    return m;
}

inline double max_abs_imag(const Field& f) {
    double m = 0.0;
    for (const auto& v : f.values()) {
        double a = std::abs(v.imag());
        if (a > m) m = a;
    }
    return m;
}

// The pair (u, udot) living in the energy space. Physical representation is
// canonical for stored states; operations accept either.
struct StateVector {
    Field u;
    Field udot;

    StateVector(Field u_, Field udot_) : u(std::move(u_)), udot(std::move(udot_)) {
        if (u.grid() != udot.grid())
            throw std::invalid_argument("StateVector: components must share one grid");
    }

    const GridSpec& grid() const { return u.grid(); }
};

inline StateVector operator+(const StateVector& a, const StateVector& b) {
    return StateVector(a.u + b.u, a.udot + b.udot);
}
inline StateVector operator-(const StateVector& a, const StateVector& b) {
    return StateVector(a.u - b.u, a.udot - b.udot);
}
inline StateVector operator*(cplx c, const StateVector& s) {
    return StateVector(c * s.u, c * s.udot);
}

} // namespace wsct
