#include <catch2/catch_amalgamated.hpp>

#include "wavescatter/ops.hpp"
#include "wavescatter/rng.hpp"
#include "wavescatter/snapshot.hpp"

#include <cstdio>

using namespace wsct;

namespace {

// Brute-force DFT with the continuum normalization, independent of the FFT
// path. O(M^2) per axis, so only for small 1-D grids.
Field naive_forward_1d(const Field& f) {
    const GridSpec& g = f.grid();
    REQUIRE(g.dim() == 1);
    const int m = g.points_per_axis();
    Field out(g, Repr::spectral);
    const double scale = g.spacing() * std::pow(2.0 * M_PI, -0.5);
    for (int j = 0; j < m; ++j) {
        double k = g.wavenumber(j);
        cplx acc{0.0, 0.0};
        for (int i = 0; i < m; ++i) {
            double x = g.coordinate(i);
            acc += f.values()[static_cast<std::size_t>(i)] * std::exp(cplx{0.0, -k * x});
        }
        out.values()[static_cast<std::size_t>(j)] = scale * acc;
    }
    return out;
}

double max_diff(const Field& a, const Field& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
    return m;
}

} // namespace

TEST_CASE("forward transform matches the brute-force DFT", "[spectral]") {
    GridSpec g(1, 64, 10.0);
    Field f = random_field(g, 11);
    Field viaFft = fft_forward(f);
    Field viaSum = naive_forward_1d(f);
    REQUIRE(max_diff(viaFft, viaSum) < 1e-12 * max_abs(viaSum));
}

TEST_CASE("zero field transforms to zero", "[spectral]") {
    GridSpec g(2, 16, 5.0);
    Field z(g, Repr::physical);
    REQUIRE(max_abs(fft_forward(z)) == 0.0);
}

TEST_CASE("plane wave concentrates on a single mode", "[spectral]") {
    GridSpec g(2, 16, 4.0);
    const int j0 = 3, j1 = 14; // second one maps to a negative wavenumber
    double k0 = g.wavenumber(j0), k1 = g.wavenumber(j1);
    Field f(g, Repr::physical);
    for (std::size_t i = 0; i < f.size(); ++i) {
        auto x = coordinates_at(g, i);
        f.values()[i] = std::exp(cplx{0.0, k0 * x[0] + k1 * x[1]});
    }
    Field s = fft_forward(f);
    const double expected =
        std::pow(g.spacing(), 2) * std::pow(2.0 * M_PI, -1.0) * std::pow(16.0, 2);
    std::size_t flat = static_cast<std::size_t>(j0) * 16 + static_cast<std::size_t>(j1);
    REQUIRE(std::abs(s.values()[flat] - cplx{expected, 0.0}) < 1e-12 * expected);
    s.values()[flat] = 0.0;
    REQUIRE(max_abs(s) < 1e-12 * expected);
}

TEST_CASE("Gaussian transform matches the closed form", "[spectral]") {
    // With the (2pi)^{-1/2} convention, exp(-x^2/2) is its own transform.
    GridSpec g(1, 256, 20.0);
    Field f(g, Repr::physical);
    for (std::size_t i = 0; i < f.size(); ++i) {
        double x = g.coordinate(static_cast<int>(i));
        f.values()[i] = std::exp(-0.5 * x * x);
    }
    Field s = fft_forward(f);
    double worst = 0.0;
    for (std::size_t j = 0; j < s.size(); ++j) {
        double k = g.wavenumber(static_cast<int>(j));
        worst = std::max(worst, std::abs(s.values()[j] - cplx{std::exp(-0.5 * k * k), 0.0}));
    }
    REQUIRE(worst < 1e-8);
}

TEST_CASE("round trip is exact to 1e-12", "[spectral]") {
    GridSpec g(3, 32, 6.0);
    Field f = random_field(g, 17);
    Field back = fft_inverse(fft_forward(f));
    REQUIRE(max_diff(f, back) < 1e-12 * max_abs(f));
}

TEST_CASE("single-mode spectral impulse inverts to a plane wave", "[spectral]") {
    GridSpec g(1, 32, 3.0);
    Field s(g, Repr::spectral);
    const int j0 = 5;
    s.values()[j0] = 1.0;
    Field f = fft_inverse(s);
    double k0 = g.wavenumber(j0);
    const double amp = g.spectral_weight() * std::pow(2.0 * M_PI, -0.5);
    double worst = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        double x = g.coordinate(static_cast<int>(i));
        worst = std::max(worst, std::abs(f.values()[i] - amp * std::exp(cplx{0.0, k0 * x})));
    }
    REQUIRE(worst < 1e-13);
}

TEST_CASE("Parseval equality across representations", "[spectral]") {
    for (int n : {1, 2, 3}) {
        int m = n == 3 ? 16 : 32;
        GridSpec g(n, m, 5.0);
        Field f = random_field(g, 100 + static_cast<std::uint64_t>(n));
        double phys = l2_norm(f);
        double spec = l2_norm(fft_forward(f));
        REQUIRE(std::abs(phys - spec) < 1e-12 * phys);
    }
}

TEST_CASE("fourier multiplier identity and algebra", "[spectral]") {
    GridSpec g(2, 24, 5.0);
    Field f = random_field(g, 23);
    Field id = apply_fourier_multiplier(f, [](const KPoint&) { return cplx{1.0, 0.0}; });
    REQUIRE(max_diff(f, id) < 1e-14 * max_abs(f));

    Field twice = apply_p_magnitude(apply_p_magnitude(f));
    Field once = apply_fourier_multiplier(f, [](const KPoint& k) { return cplx{k.mag * k.mag, 0.0}; });
    REQUIRE(max_diff(twice, once) < 1e-12 * max_abs(once));
}

TEST_CASE("p-inverse then p-magnitude recovers zero-mean fields", "[spectral]") {
    GridSpec g(2, 24, 5.0);
    Field f = random_field(g, 29);
    // Remove the mean so the zero-mode rule is invisible.
    Field s = fft_forward(f);
    s.values()[0] = 0.0;
    f = fft_inverse(s);
    Field recovered = apply_p_magnitude(apply_p_inverse(f));
    REQUIRE(max_diff(f, recovered) < 1e-12 * max_abs(f));
}

TEST_CASE("non-finite multiplier values are rejected with a diagnostic", "[spectral]") {
    GridSpec g(1, 16, 2.0);
    Field f = random_field(g, 31);
    REQUIRE_THROWS_WITH(
        apply_fourier_multiplier(f, [](const KPoint& k) {
            return k.mag == 0.0 ? cplx{1.0 / 0.0, 0.0} : cplx{1.0, 0.0};
        }),
        Catch::Matchers::ContainsSubstring("non-finite at k"));
    REQUIRE_THROWS_AS(apply_spatial_multiplier(
                          f, [](const std::array<double, 4>& x) { return x[0] == 0.0 ? NAN : 1.0; }),
                      std::invalid_argument);
}

TEST_CASE("spatial multiplier identity and sharp indicator idempotence", "[spectral]") {
    GridSpec g(2, 24, 6.0);
    Field f = random_field(g, 37);
    Field id = apply_spatial_multiplier(f, [](const std::array<double, 4>&) { return 1.0; });
    REQUIRE(max_diff(f, id) < 1e-14 * max_abs(f));

    auto indicator = [&g](const std::array<double, 4>& x) {
        double r2 = x[0] * x[0] + x[1] * x[1];
        return r2 <= 0.25 * g.half_length() * g.half_length() ? 1.0 : 0.0;
    };
    Field once = apply_spatial_multiplier(f, indicator);
    Field twice = apply_spatial_multiplier(once, indicator);
    REQUIRE(max_diff(once, twice) < 1e-13 * max_abs(once));
}

TEST_CASE("weight multiplier norm matches a scalar quadrature loop", "[spectral]") {
    GridSpec g(1, 256, 20.0);
    Field f = random_band_limited(g, 41, 2.0);
    Field weighted = apply_spatial_multiplier(
        f, [](const std::array<double, 4>& x) { return 1.0 + x[0] * x[0]; });
    double viaOp = l2_norm(weighted);
    double direct = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        double x = g.coordinate(static_cast<int>(i));
        double w = (1.0 + x * x);
        direct += w * w * std::norm(f.values()[i]);
    }
    direct = std::sqrt(g.physical_weight() * direct);
    REQUIRE(std::abs(viaOp - direct) < 1e-10 * direct);
}

TEST_CASE("h_norm closed forms and inner-product consistency", "[spectral]") {
    GridSpec g(3, 16, 4.0);
    SECTION("zero state") {
        StateVector z(Field(g, Repr::physical), Field(g, Repr::physical));
        REQUIRE(h_norm(z) == 0.0);
    }
    SECTION("plane wave") {
        const int j0 = 2;
        double k0 = g.wavenumber(j0);
        Field u(g, Repr::physical);
        for (std::size_t i = 0; i < u.size(); ++i) {
            auto x = coordinates_at(g, i);
            u.values()[i] = std::exp(cplx{0.0, k0 * x[0]});
        }
        StateVector s(u, Field(g, Repr::physical));
        double volume = std::pow(2.0 * g.half_length(), 3);
        REQUIRE(h_norm(s) == Catch::Approx(std::abs(k0) * std::sqrt(volume)).epsilon(1e-12));
    }
    SECTION("norm agrees with inner product on random states") {
        StateVector s = random_state(g, 43, 3.0);
        double viaNorm = h_norm(s) * h_norm(s);
        cplx viaInner = h_inner(s, s);
        REQUIRE(std::abs(viaInner.imag()) < 1e-12 * viaNorm);
        REQUIRE(std::abs(viaInner.real() - viaNorm) < 1e-12 * viaNorm);
    }
}

TEST_CASE("h_inner is sesquilinear and conjugate symmetric", "[spectral]") {
    GridSpec g(2, 16, 4.0);
    StateVector a = random_state(g, 47, 3.0);
    StateVector b = random_state(g, 53, 3.0);
    cplx ab = h_inner(a, b);
    cplx ba = h_inner(b, a);
    REQUIRE(std::abs(ab - std::conj(ba)) < 1e-12 * std::abs(ab));

    SECTION("orthogonal single modes") {
        Field u1(g, Repr::spectral), u2(g, Repr::spectral);
        u1.values()[3] = 1.0;
        u2.values()[7] = 1.0;
        StateVector s1(fft_inverse(u1), Field(g, Repr::physical));
        StateVector s2(fft_inverse(u2), Field(g, Repr::physical));
        REQUIRE(std::abs(h_inner(s1, s2)) < 1e-14);
    }
    SECTION("grid mismatch is an error") {
        GridSpec g2(2, 24, 4.0);
        StateVector c = random_state(g2, 59, 3.0);
        REQUIRE_THROWS_AS(h_inner(a, c), std::invalid_argument);
    }
}

TEST_CASE("weighted norm examples", "[spectral]") {
    GridSpec g(1, 256, 20.0);
    SECTION("zero field") {
        REQUIRE(weighted_norm(Field(g, Repr::physical), 2.0) == 0.0);
    }
    SECTION("sigma = 0 is the plain L2 norm") {
        Field f = random_field(g, 61);
        REQUIRE(weighted_norm(f, 0.0) == Catch::Approx(l2_norm(f)).epsilon(1e-13));
    }
    SECTION("Gaussian against the analytic integral") {
        // int (1+x^2)^2 e^{-x^2} dx = sqrt(pi) * (1 + 1 + 3/4)
        Field f(g, Repr::physical);
        for (std::size_t i = 0; i < f.size(); ++i) {
            double x = g.coordinate(static_cast<int>(i));
            f.values()[i] = std::exp(-0.5 * x * x);
        }
        double expected = std::sqrt(std::sqrt(M_PI) * 2.75);
        REQUIRE(std::abs(weighted_norm(f, 2.0) - expected) < 1e-8);
    }
}

TEST_CASE("multipliers are linear and mutually commuting in Fourier", "[spectral]") {
    GridSpec g(2, 16, 4.0);
    Field f = random_field(g, 67);
    Field h = random_field(g, 71);
    auto m1 = [](const KPoint& k) { return std::exp(cplx{0.0, 0.3 * k.mag}); };
    auto m2 = [](const KPoint& k) { return cplx{1.0 / (1.0 + k.mag * k.mag), 0.0}; };

    Field lhs = apply_fourier_multiplier(f + h, m1);
    Field rhs = apply_fourier_multiplier(f, m1) + apply_fourier_multiplier(h, m1);
    REQUIRE(max_diff(lhs, rhs) < 1e-12 * max_abs(lhs));

    Field ab = apply_fourier_multiplier(apply_fourier_multiplier(f, m1), m2);
    Field ba = apply_fourier_multiplier(apply_fourier_multiplier(f, m2), m1);
    REQUIRE(max_diff(ab, ba) < 1e-12 * max_abs(ab));

    Field sLin = apply_spatial_multiplier(
        f + h, [](const std::array<double, 4>& x) { return std::cos(x[0]); });
    Field sSum =
        apply_spatial_multiplier(f, [](const std::array<double, 4>& x) { return std::cos(x[0]); }) +
        apply_spatial_multiplier(h, [](const std::array<double, 4>& x) { return std::cos(x[0]); });
    REQUIRE(max_diff(sLin, sSum) < 1e-12 * (max_abs(sLin) + 1.0));
}

TEST_CASE("h_norm is invariant under representation round trips", "[spectral]") {
    GridSpec g(3, 16, 4.0);
    StateVector s = random_state(g, 73, 3.0);
    double before = h_norm(s);
    StateVector round(fft_inverse(fft_forward(s.u)), fft_inverse(fft_forward(s.udot)));
    REQUIRE(h_norm(round) == Catch::Approx(before).epsilon(1e-12));
    // Norm evaluated directly on spectral components must also agree.
    StateVector spec(fft_forward(s.u), fft_forward(s.udot));
    REQUIRE(h_norm(spec) == Catch::Approx(before).epsilon(1e-12));
}

TEST_CASE("dealiasing keeps the zero mode and the low band", "[spectral]") {
    GridSpec g(1, 24, 4.0);
    Field f(g, Repr::physical);
    for (auto& v : f.values()) v = 2.5;
    Field cut = dealias_two_thirds(f);
    REQUIRE(max_diff(f, cut) < 1e-14);

    Field s(g, Repr::spectral);
    for (std::size_t j = 0; j < s.size(); ++j) s.values()[j] = 1.0;
    Field trimmed = dealias_two_thirds(s);
    for (int j = 0; j < 24; ++j) {
        int sj = j < 12 ? j : j - 24;
        bool kept = std::abs(trimmed.values()[static_cast<std::size_t>(j)]) > 0.5;
        REQUIRE(kept == (std::abs(sj) <= 8));
    }
}

TEST_CASE("grid invariants are enforced", "[spectral]") {
    REQUIRE_THROWS_AS(GridSpec(0, 16, 1.0), std::invalid_argument);
    REQUIRE_THROWS_AS(GridSpec(5, 16, 1.0), std::invalid_argument);
    REQUIRE_THROWS_AS(GridSpec(1, 15, 1.0), std::invalid_argument);
    REQUIRE_THROWS_AS(GridSpec(1, 2, 1.0), std::invalid_argument);
    REQUIRE_THROWS_AS(GridSpec(1, 16, 0.0), std::invalid_argument);
    REQUIRE_THROWS_AS(GridSpec(4, 4096, 1.0), std::invalid_argument); // over budget
    GridSpec g(2, 48, 6.0);
    REQUIRE(g.spacing() * g.points_per_axis() == 2.0 * g.half_length());
    auto fg = FrequencyGrid::shared(g);
    std::size_t zeros = 0;
    for (double k : fg->magnitudes())
        if (k == 0.0) ++zeros;
    REQUIRE(zeros == 1);
}

TEST_CASE("snapshot round trip preserves bytes and metadata", "[spectral][io]") {
    GridSpec g(2, 16, 3.5);
    Field f = random_field(g, 79);
    std::string path = "snapshot_test.wsct";
    write_snapshot(f, path);
    Field back = read_snapshot(path);
    REQUIRE(back.grid() == g);
    REQUIRE(back.repr() == Repr::physical);
    REQUIRE(max_diff(f, back) == 0.0);

    Field s = fft_forward(f);
    write_snapshot(s, path);
    REQUIRE(read_snapshot(path).repr() == Repr::spectral);
    std::remove(path.c_str());
}
