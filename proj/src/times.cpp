#include "qwire/times.hpp"

#include "adaptive.hpp"
#include "parallel.hpp"
#include "qwire/errors.hpp"
#include "qwire/solver.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

namespace qwire {

const char* to_string(SweepKind kind) {
    switch (kind) {
        case SweepKind::Wavevector: return "wavevector";
        case SweepKind::SamplePotential: return "sample-potential";
        case SweepKind::GlobalPotential: return "global-potential";
    }
    return "?";
}

ChannelResponse::ChannelResponse(StarGraph graph, Channel channel, SweepKind kind,
                                 double fixed_wavevector)
    : graph_(std::move(graph)), channel_(channel), kind_(kind), fixed_(fixed_wavevector) {
    channel_.check(graph_);
    if (kind_ != SweepKind::Wavevector && !(fixed_wavevector > 0.0)) {
        throw DomainError("potential sweeps need a positive fixed wavevector");
    }
}

StarGraph ChannelResponse::graph_at(double parameter) const {
    switch (kind_) {
        case SweepKind::Wavevector: return graph_;
        case SweepKind::SamplePotential: return graph_.with_sample_potential(parameter);
        case SweepKind::GlobalPotential: return graph_.with_global_shift(parameter);
    }
    return graph_;
}

double ChannelResponse::energy_at(double parameter) const {
    const double k = kind_ == SweepKind::Wavevector ? parameter : fixed_;
    return k * k + graph_.lead_potential();
}

Complex ChannelResponse::operator()(double parameter) const {
    if (kind_ == SweepKind::Wavevector) {
        return channel_amplitude(graph_, energy_at(parameter), channel_);
    }
    return channel_amplitude(graph_at(parameter), energy_at(parameter), channel_);
}

namespace {

double phase_step(Complex from, Complex to) { return std::arg(to / from); }

std::size_t nearest_sample(const std::vector<PhaseSample>& s, double parameter) {
    const bool increasing = s.back().parameter >= s.front().parameter;
    auto it = increasing
                  ? std::lower_bound(s.begin(), s.end(), parameter,
                                     [](const PhaseSample& a, double p) { return a.parameter < p; })
                  : std::lower_bound(s.begin(), s.end(), parameter,
                                     [](const PhaseSample& a, double p) { return a.parameter > p; });
    std::size_t i = static_cast<std::size_t>(it - s.begin());
    if (i >= s.size()) return s.size() - 1;
    if (i > 0 && std::abs(s[i - 1].parameter - parameter) < std::abs(s[i].parameter - parameter)) {
        return i - 1;
    }
    return i;
}

}  // namespace

double PhaseTrack::phase_at(double parameter) const {
    if (samples.empty()) throw DomainError("empty phase track");
    const auto& s = samples[nearest_sample(samples, parameter)];
    if (s.parameter == parameter) return s.phase;
    return s.phase + phase_step(s.amplitude, response(parameter));
}

double PhaseTrack::max_phase_step() const {
    double worst = 0.0;
    for (std::size_t i = 1; i < samples.size(); ++i) {
        worst = std::max(worst, std::abs(samples[i].phase - samples[i - 1].phase));
    }
    return worst;
}

PhaseTrack track_phase(const StarGraph& graph, const Channel& channel, const Sweep& sweep,
                       const TrackOptions& options) {
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
    const double step = std::min(options.max_phase_step, pi / 2.0 * 0.999);
    auto eval = [&](double p) {
        const Complex z = response(p);
        if (std::abs(z) < options.min_magnitude) throw PhaseUndefined(p, std::abs(z));
        return z;
    };
    auto accept = [step](double, Complex z0, double, Complex zm, double, Complex z1) {
        const double d0 = phase_step(z0, zm);
        const double d1 = phase_step(zm, z1);
        const double whole = phase_step(z0, z1);
        return std::abs(d0) < step && std::abs(d1) < step && std::abs(d0 + d1 - whole) < 1e-9;
    };
    auto stuck = [](double p0, Complex, double p1, Complex) -> bool {
        throw ResolutionError("phase tracking could not resolve a phase jump", p0, p1);
    };
    const auto curve =
        detail::refine_curve(eval, from, to, options.initial_points, accept, stuck,
                             options.min_relative_step * std::abs(to - from), options.max_samples);

    PhaseTrack track{response, {}};
    track.samples.reserve(curve.params.size());
    double theta = std::arg(curve.values.front());
    for (std::size_t i = 0; i < curve.params.size(); ++i) {
        if (i > 0) theta += phase_step(curve.values[i - 1], curve.values[i]);
        track.samples.push_back({curve.params[i], curve.values[i], theta});
    }
    return track;
}

namespace {

// Richardson combination of central differences at steps h and h/2.
template <class D>
auto richardson(const D& central, double h) {
    return (4.0 * central(0.5 * h) - central(h)) / 3.0;
}

double energy_step(const StarGraph& graph, double energy) {
    return 1e-4 * std::max(energy - graph.lead_potential(), 1e-8);
}

}  // namespace

double wigner_delay(const PhaseTrack& track, double energy) {
    const auto& response = track.response;
    if (response.kind() != SweepKind::Wavevector) {
        throw DomainError("Wigner delay needs an energy (wavevector) track");
    }
    const double k = std::sqrt(energy - response.graph().lead_potential());
    const double lo = std::min(track.samples.front().parameter, track.samples.back().parameter);
    const double hi = std::max(track.samples.front().parameter, track.samples.back().parameter);
    if (!(k >= lo && k <= hi)) {
        throw DomainError(fmt::format("energy {} lies outside the phase track", energy));
    }
    const double u = response.graph().lead_potential();
    auto theta_at_energy = [&](double e) { return track.phase_at(std::sqrt(e - u)); };
    auto central = [&](double h) {
        return (theta_at_energy(energy + h) - theta_at_energy(energy - h)) / (2.0 * h);
    };
    return richardson(central, energy_step(response.graph(), energy));
}

double wigner_delay_log_derivative(const StarGraph& graph, const Channel& channel, double energy) {
    channel.check(graph);
    const Complex t = channel_amplitude(graph, energy, channel);
    if (std::abs(t) < 1e-12) throw PhaseUndefined(energy, std::abs(t));
    auto central = [&](double h) {
        return (channel_amplitude(graph, energy + h, channel) -
                channel_amplitude(graph, energy - h, channel)) /
               (2.0 * h);
    };
    const Complex dt = richardson(central, 3.0 * energy_step(graph, energy));
    return (dt / t).imag();
}

double default_potential_step(const StarGraph& graph) {
    double vmax = 0.0;
    for (const auto& a : graph.arms()) vmax = std::max(vmax, std::abs(a.potential));
    return 1e-4 * std::max(1.0, vmax);
}

double larmor_time(const StarGraph& graph, const Channel& channel, double energy, double dv) {
    channel.check(graph);
    if (dv <= 0.0) dv = default_potential_step(graph);
    const Complex t0 = channel_amplitude(graph, energy, channel);
    if (std::abs(t0) < 1e-12) throw PhaseUndefined(energy, std::abs(t0));
    auto shifted = [&](double d) {
        return channel_amplitude(graph.with_sample_shift(d), energy, channel);
    };
    for (int attempt = 0; attempt < 60; ++attempt, dv *= 0.5) {
        const Complex up = shifted(dv);
        const Complex down = shifted(-dv);
        if (std::abs(phase_step(t0, up)) < pi / 4 && std::abs(phase_step(t0, down)) < pi / 4) {
            break;
        }
    }
    auto central = [&](double h) {
        return (phase_step(t0, shifted(h)) - phase_step(t0, shifted(-h))) / (2.0 * h);
    };
    return -richardson(central, dv);
}

double dos_from_smatrix_central(const StarGraph& graph, double energy, double dv) {
    const SMatrix s0 = s_matrix(graph, energy);
    const SMatrix up = s_matrix(graph.with_sample_shift(dv), energy);
    const SMatrix down = s_matrix(graph.with_sample_shift(-dv), energy);
    const Eigen::MatrixXcd ds = (up.entries - down.entries) / (2.0 * dv);
    const double sum = (s0.entries.conjugate().cwiseProduct(ds)).imag().sum();
    return -sum / (2.0 * pi);
}

double dos_from_smatrix(const StarGraph& graph, double energy, double dv) {
    if (dv <= 0.0) dv = default_potential_step(graph);
    return richardson([&](double h) { return dos_from_smatrix_central(graph, energy, h); }, dv);
}

double dos_from_wavefunction(const StarGraph& graph, double energy) {
    const double k = std::sqrt(energy - graph.lead_potential());
    double total = 0.0;
    for (std::size_t in = 0; in < graph.arm_count(); ++in) {
        for (double d : internal_density_integral(solve_star(graph, energy, in))) total += d;
    }
    return total / (2.0 * pi * lead_velocity(k));
}

bool delays_agree(double wdt, double lpt, const DelayOptions& options) {
    return std::abs(wdt - lpt) <=
           std::max(options.agreement_relative * std::abs(wdt), options.agreement_absolute);
}

DelaySpectrum delay_spectrum(const StarGraph& graph, const Channel& channel, double k_from,
                             double k_to, const DelayOptions& options) {
    channel.check(graph);
    if (!(k_to > k_from) || k_from <= 0.0) {
        throw DomainError("delay spectrum needs 0 < k_from < k_to");
    }
    if (options.points < 2) throw DomainError("delay spectrum needs at least 2 points");
    const std::size_t n = options.points;
    std::vector<std::optional<DelayRecord>> slots(n);
    detail::parallel_for(n, options.threads, [&](std::size_t i) {
        const double k = k_from + (k_to - k_from) * double(i) / double(n - 1);
        DelayRecord r;
        r.wavevector = k;
        r.energy = k * k + graph.lead_potential();
        try {
            r.amplitude = channel_amplitude(graph, r.energy, channel);
            r.wdt = wigner_delay_log_derivative(graph, channel, r.energy);
            r.lpt = larmor_time(graph, channel, r.energy, options.potential_step);
            if (options.with_dos) {
                r.dos_smatrix = dos_from_smatrix(graph, r.energy, options.potential_step);
                r.dos_wavefunction = dos_from_wavefunction(graph, r.energy);
            }
        } catch (const SolverDegeneracy&) {
            return;
        } catch (const PhaseUndefined&) {
            return;
        }
        r.negative_agreement = r.wdt < 0.0 && r.lpt < 0.0 && delays_agree(r.wdt, r.lpt, options);
        slots[i] = r;
    });

    DelaySpectrum out;
    bool open = false;
    double theta = 0.0;
    Complex previous{};
    for (std::size_t i = 0; i < n; ++i) {
        if (!slots[i]) {
            out.gaps.push_back(k_from + (k_to - k_from) * double(i) / double(n - 1));
            open = false;
            previous = Complex{};
            continue;
        }
        DelayRecord r = *slots[i];
        theta = previous == Complex{} ? std::arg(r.amplitude)
                                      : theta + phase_step(previous, r.amplitude);
        previous = r.amplitude;
        r.phase = theta;
        if (r.negative_agreement) {
            if (!open) out.windows.push_back({r.wavevector, r.wavevector, 0});
            out.windows.back().to = r.wavevector;
            ++out.windows.back().points;
            open = true;
        } else {
            open = false;
        }
        out.records.push_back(r);
    }
    return out;
}

}  // namespace qwire
