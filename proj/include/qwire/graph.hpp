#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace qwire {

/// One wire of the star: a constant-potential segment of the given length,
/// followed by a semi-infinite lead.
struct Arm {
    double length = 0.0;
    double potential = 0.0;

    bool operator==(const Arm&) const = default;
};

/// N >= 2 arms meeting at a single node. Leads share one constant potential,
/// zero unless a global shift has been applied.
class StarGraph {
public:
    /// Throws InvalidGraph on fewer than 2 arms, negative or non-finite
    /// lengths, or non-finite potentials.
    explicit StarGraph(std::vector<Arm> arms, double lead_potential = 0.0);

    const std::vector<Arm>& arms() const { return arms_; }
    const Arm& arm(std::size_t i) const { return arms_.at(i); }
    std::size_t arm_count() const { return arms_.size(); }
    double lead_potential() const { return lead_potential_; }

    /// Total length of the finite segments (the sample region).
    double sample_length() const;

    /// Every arm potential shifted by dv; leads untouched.
    StarGraph with_sample_shift(double dv) const;
    /// Every arm potential set to v; leads untouched.
    StarGraph with_sample_potential(double v) const;
    /// Arms and leads shifted together by dv.
    StarGraph with_global_shift(double dv) const;

    std::string describe() const;

    bool operator==(const StarGraph&) const = default;

private:
    std::vector<Arm> arms_;
    double lead_potential_;
};

/// Returns the graph if it satisfies every invariant, throws InvalidGraph
/// otherwise. Graphs built through the constructor are already checked.
StarGraph validate(const StarGraph& graph);

/// Scattering channel: amplitude for a wave incident in lead `incident`
/// and leaving through lead `outgoing` (0-based). {0, 0} is r11, {0, 2} is t31.
struct Channel {
    std::size_t incident = 0;
    std::size_t outgoing = 0;

    void check(const StarGraph& graph) const;
    std::string label() const;

    bool operator==(const Channel&) const = default;
};

}  // namespace qwire
