#include "oracles.hpp"

#include "qwire/errors.hpp"
#include "qwire/solver.hpp"

#include <catch_amalgamated.hpp>
#include <random>

using namespace qwire;

namespace {

const StarGraph kFig2({{1, -1000}, {5, -1000}, {1, -1000}});

double max_abs_diff(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("segment transfer special cases", "[solver][transfer]") {
    const auto id = segment_transfer(0.0, Complex(3.7, 0.2));
    CHECK(max_abs_diff(id.matrix(), Eigen::Matrix2cd::Identity()) < 1e-15);

    const double l = 2.0;
    const auto half = segment_transfer(l, Complex(pi / l, 0.0));
    CHECK(max_abs_diff(half.matrix(), -Eigen::Matrix2cd::Identity()) < 1e-12);

    const auto flat = segment_transfer(1.5, Complex(0.0, 0.0));
    Eigen::Matrix2cd expected;
    expected << 1.0, 1.5, 0.0, 1.0;
    CHECK(max_abs_diff(flat.matrix(), expected) < 1e-15);
}

TEST_CASE("segment transfer matches RK4 integration of psi'' = -q^2 psi", "[solver][transfer]") {
    const auto m = segment_transfer(1.0, Complex(3.0, 0.0));
    const auto ref = oracle::rk4_propagator(1.0, Complex(3.0, 0.0), 20000);
    CHECK(max_abs_diff(m.matrix(), ref) < 1e-10);
    CHECK(std::abs(m.determinant() - 1.0) < 1e-12);

    const Complex evanescent(0.0, 2.5);
    CHECK(max_abs_diff(segment_transfer(1.3, evanescent).matrix(),
                       oracle::rk4_propagator(1.3, evanescent, 20000)) < 1e-9);
}

TEST_CASE("det M = 1 over random samples, including near q = 0", "[solver][transfer][property]") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> len(0.0, 5.0);
    std::uniform_real_distribution<double> logq(-9.0, 1.5);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 10000; ++i) {
        const double mag = std::pow(10.0, logq(rng));
        // mostly propagating or evanescent, occasionally generic complex
        Complex q = unit(rng) < 0.5 ? Complex(mag, 0.0) : Complex(0.0, mag);
        if (unit(rng) < 0.1) q = std::polar(mag, 2 * pi * unit(rng));
        const auto m = segment_transfer(len(rng), q);
        const double scale = std::max(1.0, m.matrix().cwiseAbs().maxCoeff());
        REQUIRE(std::abs(m.determinant() - 1.0) < 1e-12 * scale * scale);
    }
}

TEST_CASE("Neumann junction with no potential", "[solver]") {
    const StarGraph zero({{0, 0}, {0, 0}, {0, 0}});
    const auto s = s_matrix(zero, 2.3);
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
            const double expected = 2.0 / 3.0 - (i == j ? 1.0 : 0.0);
            CHECK(std::abs(s(i, j) - expected) < 1e-12);
        }
    }

    const StarGraph lengths({{1.0, 0}, {2.5, 0}, {0.7, 0}});
    const double k = 1.9;
    const auto sol = solve_star(lengths, k * k, 0);
    CHECK(std::abs(sol.amplitudes[0] - (-1.0 / 3.0) * std::exp(2.0 * I * k * 1.0)) < 1e-12);
    CHECK(std::abs(sol.amplitudes[1] - (2.0 / 3.0) * std::exp(I * k * 3.5)) < 1e-12);
    CHECK(std::abs(sol.amplitudes[2] - (2.0 / 3.0) * std::exp(I * k * 1.7)) < 1e-12);
}

TEST_CASE("transfer-matrix assembly matches the dense matching oracle", "[solver][oracle]") {
    for (double kl : {2.7, 0.3, 4.0, 11.1}) {
        const double e = kl * kl;
        for (std::size_t inc = 0; inc < 3; ++inc) {
            const auto ours = solve_star(kFig2, e, inc);
            const auto ref = oracle::dense_matching_solve(kFig2, e, inc);
            for (std::size_t j = 0; j < 3; ++j) {
                CHECK(std::abs(ours.amplitudes[j] - ref.amplitudes[j]) < 1e-10);
            }
        }
    }
    // zero-length and evanescent arms
    const StarGraph mixed({{0.0, 0.0}, {1.2, 9.0}, {0.4, -2.0}, {2.0, 1.0}});
    for (double e : {0.5, 3.0, 12.0}) {
        const auto ours = solve_star(mixed, e, 1);
        const auto ref = oracle::dense_matching_solve(mixed, e, 1);
        for (std::size_t j = 0; j < 4; ++j) {
            CHECK(std::abs(ours.amplitudes[j] - ref.amplitudes[j]) < 1e-10);
        }
    }
}

TEST_CASE("unitarity and reciprocity over a dense sweep", "[solver][property]") {
    for (int i = 1; i <= 4000; ++i) {
        const double kl = 20.0 * i / 4000.0;
        const auto s = s_matrix(kFig2, kl * kl);
        REQUIRE(s.unitarity_defect() < 1e-10);
        REQUIRE(s.symmetry_defect() < 1e-10);
    }
    const auto s4 = s_matrix(kFig2, 16.0);
    CHECK(std::abs(s4(0, 2) - s4(2, 0)) < 1e-10);
}

TEST_CASE("solver stays finite with deeply evanescent arms", "[solver]") {
    const StarGraph barrier({{5.0, 1e6}, {5.0, 1e6}, {1.0, 0.0}});
    const auto sol = solve_star(barrier, 4.0, 0);
    for (const auto& a : sol.amplitudes) CHECK(std::isfinite(std::abs(a)));
    CHECK(std::abs(sol.outgoing_flux() - 1.0) < 1e-10);
    CHECK(std::abs(sol.amplitudes[1]) < 1e-300);

    const StarGraph moderate({{1.0, 50.0}, {0.5, 30.0}, {2.0, -3.0}});
    const auto s = s_matrix(moderate, 10.0);
    CHECK(s.unitarity_defect() < 1e-10);
}

TEST_CASE("zero-length arms reduce to bare leads", "[solver][property]") {
    const StarGraph zero_arms({{0.0, -1000}, {5.0, -1000}, {0.0, -1000}});
    const StarGraph bare({{0.0, 0.0}, {5.0, -1000}, {0.0, 0.0}});
    for (int i = 1; i <= 200; ++i) {
        const double kl = 0.1 * i;
        const auto a = solve_star(zero_arms, kl * kl, 0);
        const auto b = solve_star(bare, kl * kl, 0);
        for (std::size_t j = 0; j < 3; ++j) {
            REQUIRE(std::abs(a.amplitudes[j] - b.amplitudes[j]) < 1e-12);
        }
    }
}

TEST_CASE("two-arm graph is a 1D square well", "[solver][oracle]") {
    for (double v : {-1000.0, -3.0, 2.0}) {
        const StarGraph well({{0.8, v}, {1.7, v}});
        for (double k : {0.2, 1.1, 2.7, 6.3}) {
            const Complex t = solve_star(well, k * k, 0).amplitudes[1];
            CHECK(std::abs(t - oracle::square_well_transmission(k, v, 2.5)) < 1e-8);
        }
    }
}

TEST_CASE("internal density integral", "[solver][density]") {
    SegmentState empty{0.0, Complex(3.0, 0.0), 1.0, 0.0};
    ScatteringSolution sol;
    sol.segments = {empty};
    CHECK(internal_density_integral(sol)[0] == 0.0);

    // pure plane wave A = 1, B = 0: psi(0) = 1, psi'(0) = iq
    const double q = 2.2;
    const double l = 3.4;
    sol.segments = {SegmentState{l, Complex(q, 0.0), 1.0, I * q}};
    CHECK(internal_density_integral(sol)[0] == Catch::Approx(l).epsilon(1e-13));

    // short segment takes the series branch
    sol.segments = {SegmentState{0.01, Complex(q, 0.0), 1.0, I * q}};
    CHECK(internal_density_integral(sol)[0] == Catch::Approx(0.01).epsilon(1e-13));
}

TEST_CASE("internal density matches quadrature of the dense-oracle wavefunction",
          "[solver][density][oracle]") {
    const double kl = 2.7;
    for (std::size_t inc = 0; inc < 3; ++inc) {
        const auto ours = internal_density_integral(solve_star(kFig2, kl * kl, inc));
        const auto ref = oracle::dense_matching_solve(kFig2, kl * kl, inc);
        for (std::size_t j = 0; j < 3; ++j) {
            const Complex q = ref.q[j];
            auto f = [&](double x) {
                return std::norm(ref.a[j] * std::exp(I * q * x) + ref.b[j] * std::exp(-I * q * x));
            };
            const double expected = oracle::adaptive_integral(f, 0.0, kFig2.arm(j).length);
            CHECK(std::abs(ours[j] - expected) <= 1e-8 * std::max(1.0, expected));
        }
    }
    // evanescent and small-q segments
    const StarGraph mixed({{3.0, 4.5}, {2.0, 3.99999}, {0.6, 0.0}});
    const auto ours = internal_density_integral(solve_star(mixed, 4.0, 2));
    const auto ref = oracle::dense_matching_solve(mixed, 4.0, 2);
    for (std::size_t j = 0; j < 3; ++j) {
        if (std::abs(ref.q[j]) == 0.0) continue;
        auto f = [&](double x) {
            return std::norm(ref.a[j] * std::exp(I * ref.q[j] * x) +
                             ref.b[j] * std::exp(-I * ref.q[j] * x));
        };
        const double expected = oracle::adaptive_integral(f, 0.0, mixed.arm(j).length);
        CHECK(std::abs(ours[j] - expected) <= 1e-7 * std::max(1.0, expected));
    }
}

TEST_CASE("energies at or below the lead potential are rejected", "[solver]") {
    CHECK_THROWS_AS(solve_star(kFig2, 0.0, 0), DomainError);
    CHECK_THROWS_AS(solve_star(kFig2, -1.0, 0), DomainError);
}
