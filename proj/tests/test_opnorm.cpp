#include <catch2/catch_amalgamated.hpp>

#include "wavescatter/linop.hpp"

using namespace wsct;

TEST_CASE("operator norm estimates on known operators", "[opnorm]") {
    GridSpec g(1, 256, 20.0);
    SECTION("identity") {
        LinearOp id{[](const Field& f) { return f; }, [](const Field& f) { return f; }};
        REQUIRE(operator_norm_estimate(id, g, 2, 10) == Catch::Approx(1.0).margin(1e-6));
    }
    SECTION("sharp Fourier projection") {
        LinearOp proj = fourier_op(g, [](const KPoint& k) { return cplx{k.mag <= 3.0 ? 1.0 : 0.0, 0.0}; });
        REQUIRE(operator_norm_estimate(proj, g, 2, 15) == Catch::Approx(1.0).margin(1e-6));
    }
    SECTION("spatial multiplication attains sup |g|") {
        LinearOp mult = spatial_op(g, [](const std::array<double, 4>& x) {
            return 0.7 * std::exp(-x[0] * x[0] / 18.0);
        });
        REQUIRE(operator_norm_estimate(mult, g, 3, 40) == Catch::Approx(0.7).epsilon(0.01));
    }
}

TEST_CASE("adjoints pair correctly", "[opnorm]") {
    GridSpec g(1, 128, 10.0);
    Field f = random_field(g, 23);
    Field h = random_field(g, 29);
    LinearOp A = compose(fourier_op(g, [](const KPoint& k) { return std::exp(cplx{0.0, 0.7 * k.mag}); }),
                         spatial_op(g, [](const std::array<double, 4>& x) { return std::cos(x[0]); }));
    cplx lhs = l2_inner(A.forward(f), h);
    cplx rhs = l2_inner(f, A.adjoint(h));
    REQUIRE(std::abs(lhs - rhs) < 1e-12 * std::abs(lhs));
}

TEST_CASE("pure Fourier multipliers commute to roundoff", "[opnorm]") {
    GridSpec g(1, 256, 20.0);
    LinearOp a = fourier_op(g, [](const KPoint& k) { return cplx{1.0 / (1.0 + k.mag), 0.0}; });
    LinearOp b = fourier_op(g, [](const KPoint& k) { return std::exp(cplx{0.0, k.mag}); });
    REQUIRE(operator_norm_estimate(commutator(a, b), g, 2, 10) < 1e-12);
}

TEST_CASE("commutator decay probe input validation", "[opnorm]") {
    REQUIRE_THROWS_AS(commutator_decay_probe(0.25, 0.25, 0, {4, 8, 16, 32}), std::invalid_argument);
    REQUIRE_THROWS_AS(commutator_decay_probe(0.5, 0.25, 0, {4, 8, 16}), std::invalid_argument);
    REQUIRE_THROWS_AS(commutator_decay_probe(0.5, 0.25, 2, {4, 8, 16, 32}), std::invalid_argument);
}

TEST_CASE("commutator decay matches the window-separation rate", "[opnorm]") {
    for (int l : {0, 1}) {
        auto res = commutator_decay_probe(0.5, 0.25, l, default_commutator_times(), 1024);
        INFO("l = " << l << " slope = " << res.fit.slope);
        REQUIRE(res.fit.slope <= -0.25 + 0.08);
        REQUIRE(res.fit.slope >= -0.25 - 0.08);
        REQUIRE(res.fit.r_squared > 0.98);
    }
}
