#pragma once

#include "qwire/graph.hpp"
#include "qwire/times.hpp"
#include "qwire/units.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace qwire {

struct TrajectoryPoint {
    double parameter = 0.0;
    Complex value;
};

struct TraceOptions {
    int initial_points = 1024;
    /// Largest angle two joined vertices may subtend at the origin.
    double max_angle = pi / 8.0;
    /// Vertices closer than this to the origin are joined without an angle test.
    double origin_radius = 1e-6;
    double max_chord = 0.05;
    /// Largest distance of the interval midpoint from the chord midpoint.
    double max_deviation = 1e-5;
    double min_relative_step = 1e-13;
    std::size_t max_samples = 4'000'000;
};

/// Argand diagram of one channel along a sweep. A gap index g means vertices
/// g and g + 1 were not joined (unresolved passage near the origin).
struct Trajectory {
    ChannelResponse response;
    Sweep sweep;
    std::vector<TrajectoryPoint> points;
    std::vector<std::size_t> gaps;

    /// Connected pieces between gaps.
    std::vector<std::span<const TrajectoryPoint>> pieces() const;
    double max_magnitude() const;
};

Trajectory trace(const StarGraph& graph, const Channel& channel, const Sweep& sweep,
                 const TraceOptions& options = {});

/// Burgers circuit about the origin of a closed polyline (first == last).
/// Throws SingularContour if a vertex lies within 1e-12 of the origin.
int winding_number(std::span<const Complex> cycle);

enum class Orientation { Clockwise, Counterclockwise };

const char* to_string(Orientation orientation);

struct Subloop {
    /// Closed cycle starting and ending at the self-intersection point.
    std::vector<Complex> cycle;
    double from = 0.0;  ///< parameter where the curve first passes the intersection
    double to = 0.0;    ///< parameter where it returns
    Orientation orientation = Orientation::Counterclockwise;
    double signed_area = 0.0;
    int winding = 0;
    /// Angle between the departing and returning tangents at the intersection.
    double closure_angle = 0.0;
    bool smooth = false;
};

struct SubloopOptions {
    double tolerance = 1e-9;
    double smooth_angle = 5.0 * pi / 180.0;
};

/// Chronological loop erasure: walking the polyline, every segment that
/// crosses the erased path so far closes a simple cycle, which is reported
/// and removed. Each reported cycle is simple, so |winding| <= 1.
std::vector<Subloop> find_subloops(std::span<const Complex> polyline,
                                   std::span<const double> parameters,
                                   const SubloopOptions& options = {});
std::vector<Subloop> find_subloops(const Trajectory& trajectory,
                                   const SubloopOptions& options = {});

struct LoopPhase {
    double total = 0.0;     ///< sum of phase increments around the cycle
    double positive = 0.0;  ///< sum of the positive increments
    double negative = 0.0;  ///< sum of the negative increments
    int winding = 0;
    double residual = 0.0;  ///< total - 2 pi winding
};

LoopPhase loop_phase_integral(const Subloop& loop);

/// Parameters where Im t changes sign, refined by bisection to `tolerance`.
std::vector<double> real_axis_crossings(const Trajectory& trajectory, double tolerance = 1e-6);

}  // namespace qwire
