#include "qwire/graph.hpp"

#include "qwire/errors.hpp"

#include <cmath>
#include <fmt/format.h>
#include <numeric>

namespace qwire {

StarGraph::StarGraph(std::vector<Arm> arms, double lead_potential)
    : arms_(std::move(arms)), lead_potential_(lead_potential) {
    if (arms_.size() < 2) {
        throw InvalidGraph(fmt::format("star graph needs at least 2 arms, got {}", arms_.size()));
    }
    for (std::size_t i = 0; i < arms_.size(); ++i) {
        const Arm& a = arms_[i];
        if (!std::isfinite(a.length) || a.length < 0.0) {
            throw InvalidGraph(fmt::format("arm {}: length must be finite and >= 0, got {}", i + 1,
                                           a.length));
        }
        if (!std::isfinite(a.potential)) {
            throw InvalidGraph(fmt::format("arm {}: potential is not finite", i + 1));
        }
    }
    if (!std::isfinite(lead_potential_)) {
        throw InvalidGraph("lead potential is not finite");
    }
}

double StarGraph::sample_length() const {
    return std::accumulate(arms_.begin(), arms_.end(), 0.0,
                           [](double acc, const Arm& a) { return acc + a.length; });
}

StarGraph StarGraph::with_sample_shift(double dv) const {
    auto arms = arms_;
    for (auto& a : arms) a.potential += dv;
    return StarGraph(std::move(arms), lead_potential_);
}

StarGraph StarGraph::with_sample_potential(double v) const {
    auto arms = arms_;
    for (auto& a : arms) a.potential = v;
    return StarGraph(std::move(arms), lead_potential_);
}

StarGraph StarGraph::with_global_shift(double dv) const {
    auto arms = arms_;
    for (auto& a : arms) a.potential += dv;
    return StarGraph(std::move(arms), lead_potential_ + dv);
}

std::string StarGraph::describe() const {
    std::string out = "arms";
    for (const auto& a : arms_) out += fmt::format(" ({:g}, {:g})", a.length, a.potential);
    if (lead_potential_ != 0.0) out += fmt::format(" leads {:g}", lead_potential_);
    return out;
}

StarGraph validate(const StarGraph& graph) {
    return StarGraph(graph.arms(), graph.lead_potential());
}

void Channel::check(const StarGraph& graph) const {
    if (incident >= graph.arm_count() || outgoing >= graph.arm_count()) {
        throw InvalidGraph(fmt::format("channel {} out of range for a {}-arm graph", label(),
                                       graph.arm_count()));
    }
}

std::string Channel::label() const {
    return fmt::format("{}{}{}", incident == outgoing ? 'r' : 't', outgoing + 1, incident + 1);
}

}  // namespace qwire
