#include <catch2/catch_amalgamated.hpp>

#include "wavescatter/partition.hpp"
#include "wavescatter/rng.hpp"

using namespace wsct;

TEST_CASE("partition of unity on the sphere", "[partition]") {
    for (int n : {1, 2, 3}) {
        DirectionPartition p = make_direction_partition(n, 0.2);
        REQUIRE(p.partition_defect(10000, 42) < 1e-10);
    }
    DirectionPartition p4 = make_direction_partition(4, 0.2);
    REQUIRE(p4.partition_defect(2000, 42) < 1e-10);
}

TEST_CASE("caps are exactly one at their own direction", "[partition]") {
    for (int n : {2, 3, 4}) {
        DirectionPartition p = make_direction_partition(n, 0.2);
        for (std::size_t b = 0; b < p.directions().size(); ++b) {
            REQUIRE(p.cap(b, p.directions()[b]) == 1.0);
        }
    }
}

TEST_CASE("support conditions of the raw and enlarged caps", "[partition]") {
    DirectionPartition p = make_direction_partition(3, 0.2);
    std::mt19937_64 rng(7);
    const double c = 0.2;
    for (int trial = 0; trial < 2000; ++trial) {
        Direction xi = p.random_direction(rng);
        for (std::size_t b = 0; b < p.directions().size(); ++b) {
            double d = 0.0;
            for (int a = 0; a < 3; ++a) {
                double diff = xi[static_cast<std::size_t>(a)] - p.directions()[b][static_cast<std::size_t>(a)];
                d += diff * diff;
            }
            d = std::sqrt(d);
            if (d < c) REQUIRE(p.cap(b, xi) == 1.0);       // plateau (normalization keeps it)
            if (d > 2.0 * c) REQUIRE(p.raw_cap(b, xi) == 0.0);
            if (d < 4.0 * c) REQUIRE(p.enlarged_cap(b, xi) == 1.0);
            if (d > 8.0 * c) REQUIRE(p.enlarged_cap(b, xi) == 0.0);
        }
    }
}

TEST_CASE("cone inequalities hold on samples", "[partition]") {
    DirectionPartition p = make_direction_partition(3, 0.2);
    auto aligned = p.check_aligned_cone(20000, 11);
    REQUIRE(aligned.failures == 0);
    auto transversal = p.check_transversal_cone(20000, 13);
    REQUIRE(transversal.failures == 0);
}

TEST_CASE("construction rejects bad parameters", "[partition]") {
    REQUIRE_THROWS_AS(make_direction_partition(3, 0.3), std::invalid_argument);
    REQUIRE_THROWS_AS(make_direction_partition(3, 0.0), std::invalid_argument);
    // Directions closer than 2c break the plateau-at-center property.
    std::vector<Direction> tooClose = {{1.0, 0.0, 0.0, 0.0}, {0.866, 0.5, 0.0, 0.0}};
    REQUIRE_THROWS_AS(DirectionPartition(3, 0.2, tooClose), std::invalid_argument);
    // A sparse set leaves holes on the sphere.
    std::vector<Direction> sparse = {{1.0, 0.0, 0.0, 0.0}, {-1.0, 0.0, 0.0, 0.0}};
    REQUIRE_THROWS_AS(DirectionPartition(3, 0.2, sparse), std::invalid_argument);
}

TEST_CASE("P+ and P- sum to the identity exactly", "[partition]") {
    GridSpec g(2, 24, 8.0);
    DirectionPartition p = make_direction_partition(2, 0.2);
    Field f = random_field(g, 17);
    Field plus = apply_P(p, PropagationSign::outgoing, f);
    Field minus = apply_P(p, PropagationSign::incoming, f);
    // P- is defined as 1 - P+, so the reconstruction differs from f only by
    // the rounding of a single add/subtract pair.
    REQUIRE(max_abs(plus + minus - f) < 1e-15 * max_abs(f));
}

TEST_CASE("constant fields are untouched by P+ via the zero-mode rule", "[partition]") {
    GridSpec g(2, 16, 5.0);
    DirectionPartition p = make_direction_partition(2, 0.2);
    Field c(g, Repr::physical);
    for (auto& v : c.values()) v = 1.7;
    Field plus = apply_P(p, PropagationSign::outgoing, c);
    // khat = 0 kills every enlarged cap, so P+ annihilates the constant...
    REQUIRE(max_abs(plus) < 1e-13);
    // ...and P- keeps it in full.
    Field minus = apply_P(p, PropagationSign::incoming, c);
    REQUIRE(max_abs(minus - c) < 1e-13);
}

TEST_CASE("outgoing beams pass P+ and incoming beams are rejected", "[partition]") {
    GridSpec g(3, 96, 40.0);
    DirectionPartition p = make_direction_partition(3, 0.2);
    SECTION("outgoing: position and velocity both along +e1") {
        Field beam = gaussian_beam(g, 1.0, 2.0, 32.0, 2.6);
        Field minus = apply_P(p, PropagationSign::incoming, beam);
        REQUIRE(l2_norm(minus) <= 0.05 * l2_norm(beam));
    }
    SECTION("incoming: position along +e1, velocity along -e1") {
        Field beam = gaussian_beam(g, 1.0, 2.0, 32.0, -2.6);
        Field plus = apply_P(p, PropagationSign::outgoing, beam);
        REQUIRE(l2_norm(plus) <= 0.05 * l2_norm(beam));
    }
}
