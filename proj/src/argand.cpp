#include "qwire/argand.hpp"

#include "adaptive.hpp"
#include "qwire/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fmt/format.h>
#include <optional>
#include <unordered_map>

namespace qwire {

std::vector<std::span<const TrajectoryPoint>> Trajectory::pieces() const {
    std::vector<std::span<const TrajectoryPoint>> out;
    std::size_t start = 0;
    for (std::size_t g : gaps) {
        out.emplace_back(points.data() + start, g + 1 - start);
        start = g + 1;
    }
    if (start < points.size()) out.emplace_back(points.data() + start, points.size() - start);
    return out;
}

double Trajectory::max_magnitude() const {
    double m = 0.0;
    for (const auto& p : points) m = std::max(m, std::abs(p.value));
    return m;
}

Trajectory trace(const StarGraph& graph, const Channel& channel, const Sweep& sweep,
                 const TraceOptions& options) {
    ChannelResponse response(graph, channel, sweep.kind, sweep.fixed_wavevector);
    double from = sweep.from;
    double to = sweep.to;
    if (!(from != to) || !std::isfinite(from) || !std::isfinite(to)) {
        throw DomainError("sweep range is empty");
    }
    if (sweep.kind == SweepKind::Wavevector) {
        if (from < 0.0 || to < 0.0) throw DomainError("wavevector sweeps need k >= 0");
        const double tiny = 1e-9 * std::max(std::abs(from), std::abs(to));
        if (from == 0.0) from = tiny;
        if (to == 0.0) to = tiny;
    }
    const double r0 = options.origin_radius;
    auto joined = [&](Complex a, Complex b) {
        if (std::abs(a) < r0 && std::abs(b) < r0) return true;
        if (std::abs(a) == 0.0 || std::abs(b) == 0.0) return false;
        return std::abs(std::arg(b / a)) < options.max_angle;
    };
    auto accept = [&](double, Complex z0, double, Complex zm, double, Complex z1) {
        if (!joined(z0, zm) || !joined(zm, z1)) return false;
        if (std::abs(zm - z0) > options.max_chord || std::abs(z1 - zm) > options.max_chord) {
            return false;
        }
        return std::abs(zm - 0.5 * (z0 + z1)) <= options.max_deviation;
    };
    auto stuck = [](double, Complex, double, Complex) { return true; };
    auto curve = detail::refine_curve(response, from, to, options.initial_points, accept, stuck,
                                      options.min_relative_step * std::abs(to - from),
                                      options.max_samples);
    Trajectory out{response, sweep, {}, std::move(curve.gaps)};
    out.points.reserve(curve.params.size());
    for (std::size_t i = 0; i < curve.params.size(); ++i) {
        out.points.push_back({curve.params[i], curve.values[i]});
    }
    return out;
}

int winding_number(std::span<const Complex> cycle) {
    if (cycle.size() < 3) throw DomainError("a closed cycle needs at least 3 vertices");
    if (std::abs(cycle.front() - cycle.back()) > 1e-9) throw DomainError("cycle is not closed");
    for (const Complex& z : cycle) {
        if (std::abs(z) < 1e-12) {
            throw SingularContour(
                fmt::format("cycle passes within 1e-12 of the origin at ({}, {})", z.real(),
                            z.imag()));
        }
    }
    double total = 0.0;
    for (std::size_t i = 1; i < cycle.size(); ++i) total += std::arg(cycle[i] / cycle[i - 1]);
    const double turns = total / (2.0 * pi);
    const double rounded = std::round(turns);
    if (std::abs(turns - rounded) >= 0.01) {
        throw DomainError(fmt::format("winding sum {} is not an integer", turns));
    }
    return static_cast<int>(rounded);
}

const char* to_string(Orientation orientation) {
    return orientation == Orientation::Clockwise ? "clockwise" : "counterclockwise";
}

namespace {

double cross(Complex a, Complex b) { return a.real() * b.imag() - a.imag() * b.real(); }

struct Hit {
    double s;  ///< position along the new segment
    double u;  ///< position along the old segment
};

std::optional<Hit> intersect(Complex a, Complex b, Complex c, Complex d, double tol) {
    const Complex r = b - a;
    const Complex s = d - c;
    const double den = cross(r, s);
    const double lr = std::abs(r);
    const double ls = std::abs(s);
    if (lr == 0.0 || ls == 0.0 || std::abs(den) <= 1e-15 * lr * ls) return std::nullopt;
    const Complex ac = c - a;
    const double t = cross(ac, s) / den;
    const double u = cross(ac, r) / den;
    const double et = tol / lr;
    const double eu = tol / ls;
    if (t < -et || t > 1.0 + et || u < -eu || u > 1.0 + eu) return std::nullopt;
    return Hit{std::clamp(t, 0.0, 1.0), std::clamp(u, 0.0, 1.0)};
}

double signed_area(const std::vector<Complex>& cycle) {
    double area = 0.0;
    for (std::size_t i = 1; i < cycle.size(); ++i) area += cross(cycle[i - 1], cycle[i]);
    return 0.5 * area;
}

double angle_between(Complex a, Complex b) { return std::abs(std::arg(b / a)); }

// Uniform grid of cells holding segment indices of the erased path.
class SegmentHash {
public:
    explicit SegmentHash(double cell) : cell_(cell) {}

    template <class Visit>
    void for_cells(Complex a, Complex b, const Visit& visit) const {
        const auto [x0, x1] = std::minmax({a.real(), b.real()});
        const auto [y0, y1] = std::minmax({a.imag(), b.imag()});
        const std::int64_t i0 = index(x0 - pad_), i1 = index(x1 + pad_);
        const std::int64_t j0 = index(y0 - pad_), j1 = index(y1 + pad_);
        for (std::int64_t i = i0; i <= i1; ++i) {
            for (std::int64_t j = j0; j <= j1; ++j) visit(key(i, j));
        }
    }

    void insert(Complex a, Complex b, std::size_t segment, std::uint64_t version) {
        for_cells(a, b, [&](std::uint64_t k) { cells_[k].push_back({segment, version}); });
    }

    template <class Visit>
    void candidates(Complex a, Complex b, const Visit& visit) const {
        for_cells(a, b, [&](std::uint64_t k) {
            auto it = cells_.find(k);
            if (it == cells_.end()) return;
            for (const auto& [segment, version] : it->second) visit(segment, version);
        });
    }

private:
    std::int64_t index(double x) const { return static_cast<std::int64_t>(std::floor(x / cell_)); }
    static std::uint64_t key(std::int64_t i, std::int64_t j) {
        return (static_cast<std::uint64_t>(i) << 32) ^ static_cast<std::uint64_t>(j & 0xffffffff);
    }

    double cell_;
    double pad_ = 1e-9;
    std::unordered_map<std::uint64_t, std::vector<std::pair<std::size_t, std::uint64_t>>> cells_;
};

double cell_size(std::span<const Complex> polyline) {
    std::vector<double> lengths;
    lengths.reserve(polyline.size());
    for (std::size_t i = 1; i < polyline.size(); ++i) {
        lengths.push_back(std::abs(polyline[i] - polyline[i - 1]));
    }
    const double longest = *std::max_element(lengths.begin(), lengths.end());
    std::nth_element(lengths.begin(), lengths.begin() + lengths.size() / 2, lengths.end());
    return std::max({lengths[lengths.size() / 2] * 2.0, longest / 64.0, 1e-12});
}

struct PathNode {
    Complex z;
    double p;
};

Subloop make_subloop(std::vector<Complex> cycle, double from, double to, Complex departing,
                     Complex returning, const SubloopOptions& options) {
    Subloop loop;
    loop.signed_area = signed_area(cycle);
    loop.orientation = loop.signed_area < 0.0 ? Orientation::Clockwise : Orientation::Counterclockwise;
    try {
        loop.winding = winding_number(cycle);
    } catch (const SingularContour&) {
        loop.winding = 0;
    }
    loop.closure_angle =
        (std::abs(departing) > 0.0 && std::abs(returning) > 0.0) ? angle_between(returning, departing)
                                                                 : pi;
    loop.smooth = loop.closure_angle < options.smooth_angle;
    loop.cycle = std::move(cycle);
    loop.from = from;
    loop.to = to;
    return loop;
}

}  // namespace

std::vector<Subloop> find_subloops(std::span<const Complex> polyline,
                                   std::span<const double> parameters,
                                   const SubloopOptions& options) {
    if (polyline.size() != parameters.size()) {
        throw DomainError("polyline and parameters differ in length");
    }
    std::vector<Subloop> loops;
    if (polyline.size() < 4) return loops;

    SegmentHash hash(cell_size(polyline));
    std::vector<PathNode> path{{polyline[0], parameters[0]}};
    std::vector<std::uint64_t> version;  // version of segment i = path[i] -> path[i + 1]
    std::uint64_t next_version = 0;

    for (std::size_t v = 1; v < polyline.size(); ++v) {
        const PathNode target{polyline[v], parameters[v]};
        for (;;) {
            const PathNode a = path.back();
            if (std::abs(target.z - a.z) == 0.0) break;
            const std::size_t segments = path.size() - 1;
            std::optional<Hit> best;
            std::size_t best_segment = 0;
            hash.candidates(a.z, target.z, [&](std::size_t j, std::uint64_t ver) {
                if (j + 1 >= segments || version[j] != ver) return;
                auto hit = intersect(a.z, target.z, path[j].z, path[j + 1].z, options.tolerance);
                if (!hit || hit->s * std::abs(target.z - a.z) <= options.tolerance) return;
                if (j == 0 && hit->u * std::abs(path[1].z - path[0].z) <= options.tolerance) return;
                if (!best || hit->s < best->s || (hit->s == best->s && j > best_segment)) {
                    best = hit;
                    best_segment = j;
                }
            });
            if (!best) {
                path.push_back(target);
                version.push_back(next_version);
                hash.insert(a.z, target.z, segments, next_version++);
                break;
            }
            const std::size_t j = best_segment;
            const Complex x = a.z + best->s * (target.z - a.z);
            const double px = a.p + best->s * (target.p - a.p);
            const double pj = path[j].p + best->u * (path[j + 1].p - path[j].p);
            std::vector<Complex> cycle{x};
            for (std::size_t i = j + 1; i < path.size(); ++i) cycle.push_back(path[i].z);
            cycle.push_back(x);
            loops.push_back(make_subloop(std::move(cycle), pj, px, path[j + 1].z - path[j].z,
                                         target.z - a.z, options));
            path.resize(j + 1);
            version.resize(j);
            path.push_back({x, px});
            version.push_back(next_version);
            hash.insert(path[j].z, x, j, next_version++);
        }
    }
    return loops;
}

std::vector<Subloop> find_subloops(const Trajectory& trajectory, const SubloopOptions& options) {
    std::vector<Subloop> out;
    for (const auto& piece : trajectory.pieces()) {
        std::vector<Complex> z;
        std::vector<double> p;
        z.reserve(piece.size());
        p.reserve(piece.size());
        for (const auto& pt : piece) {
            z.push_back(pt.value);
            p.push_back(pt.parameter);
        }
        auto loops = find_subloops(z, p, options);
        std::move(loops.begin(), loops.end(), std::back_inserter(out));
    }
    return out;
}

LoopPhase loop_phase_integral(const Subloop& loop) {
    LoopPhase out;
    for (std::size_t i = 1; i < loop.cycle.size(); ++i) {
        const Complex a = loop.cycle[i - 1];
        const Complex b = loop.cycle[i];
        if (std::abs(a) == 0.0 || std::abs(b) == 0.0) {
            throw SingularContour("loop passes through the origin");
        }
        const double d = std::arg(b / a);
        out.total += d;
        (d >= 0.0 ? out.positive : out.negative) += d;
    }
    out.winding = static_cast<int>(std::round(out.total / (2.0 * pi)));
    out.residual = out.total - 2.0 * pi * out.winding;
    return out;
}

std::vector<double> real_axis_crossings(const Trajectory& trajectory, double tolerance) {
    std::vector<double> out;
    const auto& f = trajectory.response;
    auto side = [](Complex z) { return z.imag() >= 0.0; };
    for (const auto& piece : trajectory.pieces()) {
        for (std::size_t i = 1; i < piece.size(); ++i) {
            double p0 = piece[i - 1].parameter;
            double p1 = piece[i].parameter;
            const bool s0 = side(piece[i - 1].value);
            if (s0 == side(piece[i].value)) continue;
            while (std::abs(p1 - p0) > tolerance) {
                const double pm = 0.5 * (p0 + p1);
                (side(f(pm)) == s0 ? p0 : p1) = pm;
            }
            out.push_back(0.5 * (p0 + p1));
        }
    }
    return out;
}

}  // namespace qwire
