#include "qwire/argand.hpp"
#include "qwire/errors.hpp"
#include "qwire/solver.hpp"

#include <catch_amalgamated.hpp>

using namespace qwire;

namespace {

const StarGraph kFree({{1, 0}, {3, 0}, {1, 0}});
const StarGraph kFig2({{1, -1000}, {5, -1000}, {1, -1000}});
const StarGraph kFig9({{0, -1000}, {5, -1000}, {0, -1000}});
const Channel k31{0, 2};

std::vector<Complex> circle(Complex centre, double radius, int turns, int n) {
    std::vector<Complex> z;
    for (int i = 0; i <= n; ++i) z.push_back(centre + std::polar(radius, 2 * pi * turns * i / n));
    z.back() = z.front();
    return z;
}

std::vector<double> indices(std::size_t n) {
    std::vector<double> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = double(i);
    return p;
}

}  // namespace

TEST_CASE("winding of synthetic circuits", "[argand][winding]") {
    CHECK(winding_number(circle(0.0, 1.0, 1, 64)) == 1);
    CHECK(winding_number(circle(0.0, 1.0, -1, 64)) == -1);
    CHECK(winding_number(circle(0.0, 0.5, 2, 128)) == 2);

    const std::vector<Complex> square{{2.5, -0.5}, {3.5, -0.5}, {3.5, 0.5}, {2.5, 0.5}, {2.5, -0.5}};
    CHECK(winding_number(square) == 0);

    const auto a = circle(0.0, 1.0, 1, 64);
    const auto b = circle(0.0, 2.0, -1, 64);
    const auto c = circle(0.0, 0.3, 1, 64);
    for (const auto& [x, y] : {std::pair{a, b}, std::pair{a, c}, std::pair{b, c}}) {
        std::vector<Complex> joined = x;
        joined.push_back(y.front());
        joined.insert(joined.end(), y.begin() + 1, y.end());
        joined.push_back(x.front());
        CHECK(winding_number(joined) == winding_number(x) + winding_number(y));
    }
}

TEST_CASE("winding rejects singular or open contours", "[argand][winding]") {
    const std::vector<Complex> through{{1, 0}, {0, 0}, {0, 1}, {1, 0}};
    CHECK_THROWS_AS(winding_number(through), SingularContour);
    const std::vector<Complex> open{{1, 0}, {0, 1}, {-1, 0}};
    CHECK_THROWS_AS(winding_number(open), DomainError);
}

TEST_CASE("subloops of synthetic curves", "[argand][subloops]") {
    const auto once = circle(0.0, 1.0, 1, 200);
    CHECK(find_subloops(once, indices(once.size())).empty());

    // bowtie: a clockwise lobe, then a counterclockwise lobe, both closed by transversal crossings
    const std::vector<Complex> corners{{-0.5, -0.5}, {1, 1}, {1, -1}, {-1, 1}, {-1, -1}, {-0.2, 0.6}};
    std::vector<Complex> eight;
    for (std::size_t c = 1; c < corners.size(); ++c) {
        const Complex step = (corners[c] - corners[c - 1]) / 10.0;
        for (int i = 0; i < 10; ++i) eight.push_back(3.0 + corners[c - 1] + step * double(i));
    }
    eight.push_back(3.0 + corners.back());
    const auto loops = find_subloops(eight, indices(eight.size()));
    REQUIRE(loops.size() == 2);
    CHECK(loops[0].orientation == Orientation::Clockwise);
    CHECK(loops[1].orientation == Orientation::Counterclockwise);
    CHECK(std::abs(loops[0].cycle.front() - Complex(3.0, 0.0)) < 1e-12);
    for (const auto& l : loops) {
        CHECK(l.winding == 0);
        CHECK(std::abs(loop_phase_integral(l).residual) < 1e-6);
        CHECK_FALSE(l.smooth);
    }

    const auto twice = circle(0.0, 1.0, 2, 400);
    std::vector<Complex> spiral;
    for (std::size_t i = 0; i < twice.size(); ++i) {
        spiral.push_back(twice[i] * (1.0 + 0.2 * double(i) / double(twice.size())));
    }
    CHECK(find_subloops(spiral, indices(spiral.size())).empty());
}

TEST_CASE("free graph traces a circle of radius 2/3", "[argand][trace]") {
    const auto traj = trace(kFree, k31, {SweepKind::Wavevector, 0.0, 2 * pi + 0.1});
    for (const auto& p : traj.points) REQUIRE(std::abs(std::abs(p.value) - 2.0 / 3.0) < 1e-12);
    const auto x = real_axis_crossings(traj);
    REQUIRE(x.size() == 4);
    for (std::size_t n = 0; n < x.size(); ++n) {
        CHECK(std::abs(x[n] - (n + 1) * pi / 2) < 1e-6);
    }
    // counterclockwise: phase grows along the sweep
    CHECK(std::arg(traj.points[1].value / traj.points[0].value) > 0.0);
    CHECK(traj.gaps.empty());
}

TEST_CASE("trajectory starts at the origin only for energy sweeps", "[argand][trace]") {
    const auto energy = trace(kFig2, k31, {SweepKind::Wavevector, 0.0, 5.0});
    CHECK(std::abs(energy.points.front().value) < 1e-6);
    const auto potential = trace(kFig2, k31, {SweepKind::SamplePotential, 0.0, -25.0, 2.7});
    CHECK(std::abs(potential.points.front().value) > 0.1);
    CHECK(energy.max_magnitude() <= 1.0 + 1e-9);
    CHECK(potential.max_magnitude() <= 1.0 + 1e-9);
    for (std::size_t i = 1; i < energy.points.size(); ++i) {
        const Complex a = energy.points[i - 1].value;
        const Complex b = energy.points[i].value;
        const bool near = std::abs(a) < 1e-6 && std::abs(b) < 1e-6;
        REQUIRE((near || std::abs(std::arg(b / a)) < pi / 8));
    }
}

TEST_CASE("real axis crossings of the zero-length wire", "[argand][crossings]") {
    const auto traj = trace(kFig9, k31, {SweepKind::Wavevector, 0.0, 12.5});
    const auto x = real_axis_crossings(traj);
    REQUIRE(x.size() >= 3);
    CHECK(std::abs(x[0] - 2.61) < 0.05);
    CHECK(std::abs(x[1] - 5.18) < 0.05);
    CHECK(std::abs(x[2] - 6.86) < 0.05);

    const auto pot = trace(kFig9, k31, {SweepKind::SamplePotential, -1000.0, -1050.0, 8.22});
    CHECK(std::abs(pot.points.front().value - channel_amplitude(kFig9, 8.22 * 8.22, k31)) < 1e-8);
}

TEST_CASE("subloops are simple and stable under refinement", "[argand][subloops]") {
    const Sweep sweep{SweepKind::Wavevector, 0.0, 20.0};
    const auto coarse = trace(kFig2, k31, sweep);
    TraceOptions fine;
    fine.max_angle = pi / 16;
    const auto refined = trace(kFig2, k31, sweep, fine);
    const auto a = find_subloops(coarse);
    const auto b = find_subloops(refined);
    CHECK(a.size() == b.size());
    for (const auto& l : a) {
        CHECK(std::abs(l.winding) <= 1);
        const auto phase = loop_phase_integral(l);
        CHECK(std::abs(phase.residual) < 1e-6);
        CHECK(phase.winding == l.winding);
    }
    bool negative_part = false;
    for (const auto& l : a) {
        if (l.winding == 0 && loop_phase_integral(l).negative < 0.0) negative_part = true;
    }
    CHECK(negative_part);
}
