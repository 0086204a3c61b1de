#pragma once

#include "qwire/graph.hpp"
#include "qwire/units.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace qwire {

/// What a sweep varies.
///  - Wavevector: lead wavevector k (energy sweep, E = k^2 + lead potential).
///  - SamplePotential: common potential of every arm, leads untouched.
///  - GlobalPotential: shift applied to arms and leads together.
enum class SweepKind { Wavevector, SamplePotential, GlobalPotential };

const char* to_string(SweepKind kind);

struct Sweep {
    SweepKind kind = SweepKind::Wavevector;
    double from = 0.0;
    double to = 1.0;
    double fixed_wavevector = 0.0;  ///< lead k held fixed by potential sweeps
};

/// One S-matrix element as a function of a sweep parameter.
class ChannelResponse {
public:
    ChannelResponse(StarGraph graph, Channel channel, SweepKind kind, double fixed_wavevector = 0.0);

    Complex operator()(double parameter) const;
    /// Graph actually solved at this parameter.
    StarGraph graph_at(double parameter) const;
    double energy_at(double parameter) const;

    const StarGraph& graph() const { return graph_; }
    const Channel& channel() const { return channel_; }
    SweepKind kind() const { return kind_; }
    double fixed_wavevector() const { return fixed_; }

private:
    StarGraph graph_;
    Channel channel_;
    SweepKind kind_;
    double fixed_;
};

struct PhaseSample {
    double parameter = 0.0;
    Complex amplitude;
    double phase = 0.0;  ///< unwrapped, radians
};

/// Continuous phase curve of one channel. Consecutive samples differ in
/// phase by less than the tracking step (always < pi/2).
struct PhaseTrack {
    ChannelResponse response;
    std::vector<PhaseSample> samples;

    /// Unwrapped phase at any parameter inside the track, continued from the
    /// nearest sample.
    double phase_at(double parameter) const;
    double max_phase_step() const;
};

struct TrackOptions {
    int initial_points = 256;
    double max_phase_step = pi / 8.0;
    /// Bisection stops below this fraction of the sweep range.
    double min_relative_step = 1e-13;
    std::size_t max_samples = 4'000'000;
    /// Amplitudes below this magnitude have no usable phase.
    double min_magnitude = 1e-12;
};

/// Adaptive phase tracking over a sweep. Energy sweeps starting at k = 0 are
/// started just above zero.
PhaseTrack track_phase(const StarGraph& graph, const Channel& channel, const Sweep& sweep,
                       const TrackOptions& options = {});

/// Wigner delay hbar d(theta)/dE at energy E from phase differences on the
/// track's branch, Richardson-extrapolated. E must lie inside an energy track.
double wigner_delay(const PhaseTrack& track, double energy);

/// Independent route: Im[(dt/dE) / t] with dt/dE from a Richardson-
/// extrapolated central difference of the complex amplitude.
double wigner_delay_log_derivative(const StarGraph& graph, const Channel& channel, double energy);

/// Default potential step: 1e-4 max(1, max |V_arm|).
double default_potential_step(const StarGraph& graph);

/// Larmor time -hbar d(theta)/d(eV_sample): uniform shift of every arm
/// potential, leads untouched. dv <= 0 selects the default step; the step is
/// halved until phase changes stay below pi/4.
double larmor_time(const StarGraph& graph, const Channel& channel, double energy, double dv = 0.0);

/// -(1/2pi) sum_{ab} Im[s*_{ab} ds_{ab}/d(eV_sample)], Richardson-extrapolated.
double dos_from_smatrix(const StarGraph& graph, double energy, double dv = 0.0);

/// Same quantity from a single central difference (no extrapolation). Used to
/// measure the convergence order in the potential step.
double dos_from_smatrix_central(const StarGraph& graph, double energy, double dv);

/// sum over incident leads of the internal |psi|^2 integral / (2 pi v).
double dos_from_wavefunction(const StarGraph& graph, double energy);

struct DelayRecord {
    double wavevector = 0.0;
    double energy = 0.0;
    Complex amplitude;
    double phase = 0.0;
    double wdt = 0.0;
    double lpt = 0.0;
    double dos_smatrix = 0.0;
    double dos_wavefunction = 0.0;
    bool negative_agreement = false;  ///< wdt < 0, lpt < 0 and the two agree
};

struct DelayWindow {
    double from = 0.0;  ///< first flagged wavevector
    double to = 0.0;    ///< last flagged wavevector
    std::size_t points = 0;
};

struct DelaySpectrum {
    std::vector<DelayRecord> records;
    std::vector<DelayWindow> windows;
    std::vector<double> gaps;  ///< wavevectors skipped at solver degeneracies
};

struct DelayOptions {
    std::size_t points = 2000;
    /// Agreement test |wdt - lpt| <= max(rel * |wdt|, abs).
    double agreement_relative = 1e-2;
    double agreement_absolute = 1e-6;
    double potential_step = 0.0;  ///< <= 0: default_potential_step
    bool with_dos = true;
    unsigned threads = 1;
};

bool delays_agree(double wdt, double lpt, const DelayOptions& options);

/// Uniform grid of `points` wavevectors on [k_from, k_to]; records are
/// ordered by wavevector regardless of thread count.
DelaySpectrum delay_spectrum(const StarGraph& graph, const Channel& channel, double k_from,
                             double k_to, const DelayOptions& options = {});

}  // namespace qwire
