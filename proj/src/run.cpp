#include "qwire/run.hpp"

#include "qwire/argand.hpp"
#include "qwire/errors.hpp"
#include "qwire/solver.hpp"
#include "qwire/times.hpp"
#include "qwire/wavepacket.hpp"

#include "parallel.hpp"

#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <nlohmann/json.hpp>
#include <optional>

namespace qwire {

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

class Writer {
public:
    Writer(const RunConfig& c, fs::path dir, RunReport& report)
        : config_(c), dir_(std::move(dir)), report_(report) {}

    void text(const std::string& suffix, const std::string& body) {
        const fs::path path = dir_ / fmt::format("{}_{}", config_.name, suffix);
        std::ofstream out(path, std::ios::binary);
        out << body;
        if (!out) throw Error(fmt::format("cannot write '{}'", path.string()));
        report_.files.push_back(path);
    }
    void json_file(const std::string& suffix, const json& j) { text(suffix, j.dump(2) + "\n"); }
    void note(std::string line) { report_.summary.push_back(std::move(line)); }

private:
    const RunConfig& config_;
    fs::path dir_;
    RunReport& report_;
};

std::string num(double v) { return fmt::format("{}", v); }

void check_bounded(const Trajectory& t) {
    const double m = t.max_magnitude();
    if (m > 1.0 + 1e-9) throw DomainError(fmt::format("|t| = {} exceeds 1", m));
}

void write_trace(const Trajectory& traj, Writer& w) {
    std::string csv = "parameter,Re_t,Im_t\n";
    for (const auto& p : traj.points) {
        csv += fmt::format("{},{},{}\n", p.parameter, p.value.real(), p.value.imag());
    }
    w.text("trajectory.csv", csv);
    if (!traj.gaps.empty()) {
        std::string gaps = "from,to\n";
        for (auto g : traj.gaps) {
            gaps += fmt::format("{},{}\n", traj.points[g].parameter, traj.points[g + 1].parameter);
        }
        w.text("trajectory_gaps.csv", gaps);
    }
    const auto crossings = real_axis_crossings(traj);
    std::string out = "parameter\n";
    std::string listed;
    for (std::size_t i = 0; i < crossings.size(); ++i) {
        out += num(crossings[i]) + "\n";
        if (i < 6) listed += fmt::format("{}{:.4f}", i ? ", " : "", crossings[i]);
    }
    w.text("crossings.csv", out);
    w.note(fmt::format("trace: {} vertices, {} gaps, max |t| = {:.6f}", traj.points.size(),
                       traj.gaps.size(), traj.max_magnitude()));
    w.note(fmt::format("real-axis crossings: {}{}", listed, crossings.size() > 6 ? ", ..." : ""));
}

json loop_json(const Subloop& l) {
    const auto phase = loop_phase_integral(l);
    return json{{"from", l.from},
                {"to", l.to},
                {"orientation", to_string(l.orientation)},
                {"winding", l.winding},
                {"smooth", l.smooth},
                {"closure_angle_deg", l.closure_angle * 180.0 / pi},
                {"signed_area", l.signed_area},
                {"vertices", l.cycle.size()},
                {"phase_total", phase.total},
                {"phase_positive", phase.positive},
                {"phase_negative", phase.negative},
                {"phase_residual", phase.residual}};
}

void write_winding(const Trajectory& traj, const std::vector<Subloop>& loops, Writer& w) {
    json pieces = json::array();
    for (const auto& piece : traj.pieces()) {
        double total = 0.0;
        for (std::size_t i = 1; i < piece.size(); ++i) {
            const Complex a = piece[i - 1].value;
            const Complex b = piece[i].value;
            if (std::abs(a) > 0.0 && std::abs(b) > 0.0) total += std::arg(b / a);
        }
        pieces.push_back({{"from", piece.front().parameter},
                          {"to", piece.back().parameter},
                          {"net_turns", total / (2.0 * pi)}});
    }
    int counts[3] = {0, 0, 0};
    for (const auto& l : loops) {
        if (std::abs(l.winding) > 1) throw DomainError("subloop winding outside {-1, 0, 1}");
        ++counts[l.winding + 1];
    }
    json j{{"pieces", pieces},
           {"closed_loops", loops.size()},
           {"winding_counts", {{"-1", counts[0]}, {"0", counts[1]}, {"1", counts[2]}}}};
    w.json_file("winding.json", j);
    w.note(fmt::format("closed loops by winding: -1: {}, 0: {}, +1: {}", counts[0], counts[1],
                       counts[2]));
}

void write_subloops(const std::vector<Subloop>& loops, Writer& w) {
    json list = json::array();
    std::size_t zero = 0, smooth = 0;
    for (const auto& l : loops) {
        list.push_back(loop_json(l));
        if (l.winding == 0) ++zero;
        if (l.smooth) ++smooth;
    }
    w.json_file("subloops.json", json{{"count", loops.size()},
                                      {"winding_zero", zero},
                                      {"smooth", smooth},
                                      {"subloops", list}});
    w.note(fmt::format("subloops: {} ({} not enclosing the origin, {} smooth)", loops.size(), zero,
                       smooth));
}

void write_phases(const RunConfig& c, const StarGraph& g, Writer& w) {
    const auto track = track_phase(g, c.channel, c.sweep);
    std::string csv = "parameter,Re_t,Im_t,theta\n";
    for (const auto& s : track.samples) {
        const Complex unit = s.amplitude / std::abs(s.amplitude);
        if (std::abs(std::polar(1.0, s.phase) - unit) > 1e-9) {
            throw DomainError(fmt::format("phase unwrap inconsistent at {}", s.parameter));
        }
        csv += fmt::format("{},{},{},{}\n", s.parameter, s.amplitude.real(), s.amplitude.imag(),
                           s.phase);
    }
    w.text("phases.csv", csv);
    w.note(fmt::format("phases: {} samples, theta {:.6f} -> {:.6f}", track.samples.size(),
                       track.samples.front().phase, track.samples.back().phase));
}

double grid_start(const RunConfig& c) {
    if (c.sweep.from > 0.0) return c.sweep.from;
    return (c.sweep.to - c.sweep.from) / static_cast<double>(c.points);
}

void write_delays(const RunConfig& c, const StarGraph& g, unsigned threads, Writer& w) {
    DelayOptions o;
    o.points = c.points;
    o.agreement_relative = c.agreement;
    o.potential_step = c.potential_step;
    o.threads = threads;
    const auto spectrum = delay_spectrum(g, c.channel, grid_start(c), c.sweep.to, o);
    std::string csv = "kl,Re_t,Im_t,theta,wdt,lpt,dos_s,dos_psi,eq16_flag\n";
    for (const auto& r : spectrum.records) {
        csv += fmt::format("{},{},{},{},{},{},{},{},{}\n", r.wavevector, r.amplitude.real(),
                           r.amplitude.imag(), r.phase, r.wdt, r.lpt, r.dos_smatrix,
                           r.dos_wavefunction, r.negative_agreement ? 1 : 0);
    }
    w.text("delays.csv", csv);
    json windows = json::array();
    std::string listed;
    for (const auto& win : spectrum.windows) {
        windows.push_back({{"from", win.from}, {"to", win.to}, {"points", win.points}});
        listed += fmt::format(" [{:.3f}, {:.3f}]", win.from, win.to);
    }
    w.json_file("windows.json", json{{"agreement_relative", c.agreement},
                                     {"windows", windows},
                                     {"gaps", spectrum.gaps}});
    w.note(fmt::format("negative-delay windows: {}{}", spectrum.windows.size(), listed));
}

void write_dos(const RunConfig& c, const StarGraph& g, unsigned threads, Writer& w) {
    const std::size_t n = c.points;
    const double from = grid_start(c);
    std::vector<std::optional<std::pair<double, double>>> rows(n);
    detail::parallel_for(n, threads, [&](std::size_t i) {
        const double k = from + (c.sweep.to - from) * double(i) / double(n - 1);
        const double e = k * k + g.lead_potential();
        try {
            rows[i] = std::pair{dos_from_smatrix(g, e, c.potential_step), dos_from_wavefunction(g, e)};
        } catch (const SolverDegeneracy&) {
        }
    });
    std::string csv = "kl,dos_s,dos_psi\n";
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!rows[i]) continue;
        const double k = from + (c.sweep.to - from) * double(i) / double(n - 1);
        const auto [s, psi] = *rows[i];
        worst = std::max(worst, std::abs(s - psi) / std::max(std::abs(psi), 1e-300));
        csv += fmt::format("{},{},{}\n", k, s, psi);
    }
    w.text("dos.csv", csv);
    w.note(fmt::format("dos: largest relative difference between formulas {:.3e}", worst));
}

void write_packet(const RunConfig& c, const StarGraph& g, Writer& w) {
    const auto& pc = c.packet;
    const double sigma =
        pc.sigma > 0.0 ? pc.sigma : sigma_for_edge_ratio(pc.k0, pc.edge, std::exp(-2.0));
    const auto packet = build_packet(pc.k0, sigma, pc.detector);
    const auto t = tabulate_response(packet, g, c.channel);
    const auto m = measure_delay(packet, t, pc.detector);
    const double wdt = wigner_delay_log_derivative(g, c.channel, pc.k0 * pc.k0 + g.lead_potential());

    const double tau0 = pc.detector / (2.0 * pc.k0);
    const double span = 10.0 * std::max(m.spread, 1e-3);
    const int n = 1001;
    std::string scattered = "tau,Re_u,Im_u,abs2_u\n";
    std::string free = scattered;
    for (int i = 0; i < n; ++i) {
        const double tau = tau0 - span + 2.0 * span * i / (n - 1);
        const Complex u = propagate(packet, t, pc.detector, tau);
        const Complex f = propagate_free(packet, pc.detector, tau);
        scattered += fmt::format("{},{},{},{}\n", tau, u.real(), u.imag(), std::norm(u));
        free += fmt::format("{},{},{},{}\n", tau, f.real(), f.imag(), std::norm(f));
    }
    w.text("packet.csv", scattered);
    w.text("packet_free.csv", free);
    w.json_file("arrival.json",
                json{{"k0", pc.k0},
                     {"sigma", sigma},
                     {"detector", pc.detector},
                     {"grid_nodes", packet.k.size()},
                     {"tau_free", m.tau_free},
                     {"tau_scattered", m.tau_scattered},
                     {"delay", m.delay},
                     {"wigner_delay", wdt},
                     {"spread", m.spread},
                     {"peaks", m.peaks},
                     {"spectral_shift", m.spectral_shift},
                     {"stationary_phase_breakdown", m.stationary_phase_breakdown},
                     {"transmitted_norm", transmitted_spectral_norm(packet, t)}});
    w.note(fmt::format("packet at k0 = {}: delay {:.6f}, Wigner delay {:.6f}{}", pc.k0, m.delay, wdt,
                       m.stationary_phase_breakdown ? " (stationary phase breaks down)" : ""));
}

}  // namespace

RunReport run(const RunConfig& config, const fs::path& out_dir, unsigned threads) {
    config.validate();
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw Error(fmt::format("cannot create '{}': {}", out_dir.string(), ec.message()));

    RunReport report;
    Writer w(config, out_dir, report);
    const StarGraph g = config.graph();

    std::optional<Trajectory> traj;
    if (config.has(Operation::Trace) || config.has(Operation::Winding) ||
        config.has(Operation::Subloops)) {
        TraceOptions o;
        o.max_angle = config.max_angle;
        traj = trace(g, config.channel, config.sweep, o);
        check_bounded(*traj);
    }
    std::vector<Subloop> loops;
    if (config.has(Operation::Winding) || config.has(Operation::Subloops)) {
        loops = find_subloops(*traj);
    }
    for (Operation op : config.operations) {
        switch (op) {
            case Operation::Trace: write_trace(*traj, w); break;
            case Operation::Winding: write_winding(*traj, loops, w); break;
            case Operation::Subloops: write_subloops(loops, w); break;
            case Operation::Phases: write_phases(config, g, w); break;
            case Operation::Delays: write_delays(config, g, threads, w); break;
            case Operation::Dos: write_dos(config, g, threads, w); break;
            case Operation::Wavepacket: write_packet(config, g, w); break;
        }
    }
    return report;
}

}  // namespace qwire
