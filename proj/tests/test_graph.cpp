#include "qwire/errors.hpp"
#include "qwire/graph.hpp"
#include "qwire/units.hpp"

#include <catch_amalgamated.hpp>
#include <cmath>
#include <limits>
#include <random>

using namespace qwire;

TEST_CASE("figure-2 geometry is accepted", "[graph]") {
    const StarGraph g({{1, -1000}, {5, -1000}, {1, -1000}});
    CHECK(g.arm_count() == 3);
    CHECK(validate(g) == g);
    CHECK(g.sample_length() == 7.0);
}

TEST_CASE("graph validation rejects bad input", "[graph]") {
    CHECK_THROWS_AS(StarGraph({{0, -1000}}), InvalidGraph);
    CHECK_THROWS_AS(StarGraph({{-1, 0}, {1, 0}}), InvalidGraph);
    CHECK_THROWS_AS(StarGraph({{1, std::numeric_limits<double>::infinity()}, {1, 0}}),
                    InvalidGraph);
    CHECK_THROWS_AS(StarGraph({{1, 0}, {std::nan(""), 0}}), InvalidGraph);
    CHECK_NOTHROW(StarGraph({{0, 0}, {0, 0}}));
}

TEST_CASE("potential shifts touch only what they should", "[graph]") {
    const StarGraph g({{1, -3}, {2, -5}}, 0.0);
    const auto s = g.with_sample_shift(0.5);
    CHECK(s.arm(0).potential == -2.5);
    CHECK(s.arm(1).potential == -4.5);
    CHECK(s.lead_potential() == 0.0);
    const auto u = g.with_sample_potential(-7);
    CHECK(u.arm(1).potential == -7.0);
    const auto glob = g.with_global_shift(-1);
    CHECK(glob.arm(0).potential == -4.0);
    CHECK(glob.lead_potential() == -1.0);
}

TEST_CASE("channel labels and range checks", "[graph]") {
    const StarGraph g({{1, 0}, {1, 0}, {1, 0}});
    CHECK(Channel{0, 2}.label() == "t31");
    CHECK(Channel{0, 0}.label() == "r11");
    CHECK_THROWS_AS(Channel({0, 3}).check(g), InvalidGraph);
}

TEST_CASE("unit round trip k(E) -> E(k)", "[units]") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> logE(-6.0, 6.0);
    for (int i = 0; i < 1000; ++i) {
        const double e = std::pow(10.0, logE(rng));
        CHECK(std::abs(energy_of_wavevector(wavevector_of_energy(e)) - e) <= 1e-14 * e);
    }
}

TEST_CASE("segment wavevector branch", "[units]") {
    const Complex prop = segment_wavevector(5.0, -4.0);
    CHECK(prop.imag() == 0.0);
    CHECK(prop.real() == Catch::Approx(3.0));
    const Complex decay = segment_wavevector(1.0, 10.0);
    CHECK(decay.real() == Catch::Approx(0.0).margin(1e-15));
    CHECK(decay.imag() == Catch::Approx(3.0));
}
