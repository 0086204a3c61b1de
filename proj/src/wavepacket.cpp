#include "qwire/wavepacket.hpp"

#include "qwire/errors.hpp"
#include "qwire/quadrature.hpp"
#include "qwire/solver.hpp"

#include <algorithm>
#include <cmath>

namespace qwire {

double sigma_for_edge_ratio(double k0, double k_edge, double ratio) {
    if (!(ratio > 0.0 && ratio < 1.0) || k_edge == k0) {
        throw DomainError("edge ratio must lie in (0, 1) at a point away from k0");
    }
    return std::abs(k_edge - k0) / (2.0 * std::sqrt(-std::log(ratio)));
}

namespace {

double max_gap(const QuadratureRule& rule) {
    double gap = 0.0;
    for (std::size_t i = 1; i < rule.nodes.size(); ++i) {
        gap = std::max(gap, rule.nodes[i] - rule.nodes[i - 1]);
    }
    return gap;
}

}  // namespace

Wavepacket build_packet(double k0, double sigma, double x_max, const PacketGrid& grid) {
    if (!(k0 > 0.0) || !std::isfinite(k0)) throw DomainError("packet centre k0 must be > 0");
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DomainError("packet sigma must be > 0");
    if (!(x_max >= 0.0) || !std::isfinite(x_max)) throw DomainError("x_max must be >= 0");
    if (grid.order < 2 || grid.span <= 0.0 || grid.nodes_per_period <= 0.0) {
        throw DomainError("invalid packet grid");
    }
    const double lo = std::max(k0 - grid.span * sigma, 1e-6 * k0);
    const double hi = k0 + grid.span * sigma;
    const double needed = x_max > 0.0 ? 2.0 * pi / x_max / grid.nodes_per_period : hi - lo;

    QuadratureRule rule;
    if (grid.panels > 0) {
        rule = composite_gauss_legendre(lo, hi, grid.panels, grid.order);
        if (max_gap(rule) > needed) {
            throw ResolutionError("packet grid does not resolve the detector oscillation", lo, hi);
        }
    } else {
        int panels = std::max(
            1, static_cast<int>(std::ceil((hi - lo) / needed / grid.order)));
        for (;;) {
            rule = composite_gauss_legendre(lo, hi, panels, grid.order);
            if (max_gap(rule) <= needed) break;
            panels = panels + std::max(1, panels / 4);
        }
    }

    Wavepacket p{k0, sigma, std::move(rule.nodes), std::move(rule.weights), {}};
    p.a.reserve(p.k.size());
    const double scale = 1.0 / (sigma * std::sqrt(2.0));
    for (double k : p.k) {
        const double d = k - k0;
        p.a.emplace_back(scale * std::exp(-d * d / (4.0 * sigma * sigma)), 0.0);
    }
    const double norm = std::sqrt(spectral_norm(p));
    for (auto& v : p.a) v /= norm;
    return p;
}

double spectral_norm(const Wavepacket& packet) {
    double s = 0.0;
    for (std::size_t i = 0; i < packet.k.size(); ++i) s += packet.weights[i] * std::norm(packet.a[i]);
    return s;
}

std::vector<Complex> tabulate_response(const Wavepacket& packet, const StarGraph& graph,
                                       const Channel& channel) {
    channel.check(graph);
    return tabulate_response(packet, [&](double k) {
        return channel_amplitude(graph, energy_of_wavevector(k) + graph.lead_potential(), channel);
    });
}

std::vector<Complex> tabulate_response(const Wavepacket& packet,
                                       const std::function<Complex(double)>& t) {
    std::vector<Complex> out;
    out.reserve(packet.k.size());
    for (double k : packet.k) out.push_back(t(k));
    return out;
}

namespace {

void check_table(const Wavepacket& packet, const std::vector<Complex>& t) {
    if (t.size() != packet.k.size()) throw DomainError("response table does not match the grid");
}

// c_j = w_j a_j t_j e^{i k_j x} / sqrt(2 pi)
std::vector<Complex> detector_coefficients(const Wavepacket& p, const std::vector<Complex>* t,
                                           double x) {
    std::vector<Complex> c(p.k.size());
    const double norm = 1.0 / std::sqrt(2.0 * pi);
    for (std::size_t i = 0; i < c.size(); ++i) {
        Complex v = p.weights[i] * p.a[i] * std::polar(norm, p.k[i] * x);
        if (t) v *= (*t)[i];
        c[i] = v;
    }
    return c;
}

Complex evolve(const Wavepacket& p, const std::vector<Complex>& c, double tau) {
    Complex u{};
    for (std::size_t i = 0; i < c.size(); ++i) u += c[i] * std::polar(1.0, -p.k[i] * p.k[i] * tau);
    return u;
}

}  // namespace

Complex propagate(const Wavepacket& packet, const std::vector<Complex>& t, double x, double tau) {
    check_table(packet, t);
    return evolve(packet, detector_coefficients(packet, &t, x), tau);
}

Complex propagate_free(const Wavepacket& packet, double x, double tau) {
    return evolve(packet, detector_coefficients(packet, nullptr, x), tau);
}

double transmitted_spectral_norm(const Wavepacket& packet, const std::vector<Complex>& t) {
    check_table(packet, t);
    double s = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        s += packet.weights[i] * std::norm(packet.a[i] * t[i]);
    }
    return s;
}

SpatialMoments spatial_moments(const Wavepacket& packet, const std::vector<Complex>& t, double tau,
                               double x_from, double x_to, int panels) {
    check_table(packet, t);
    if (!(x_to > x_from) || panels < 1) throw DomainError("invalid spatial window");
    const auto rule = composite_gauss_legendre(x_from, x_to, panels, 16);
    std::vector<Complex> d(packet.k.size());
    const double norm = 1.0 / std::sqrt(2.0 * pi);
    for (std::size_t i = 0; i < d.size(); ++i) {
        d[i] = packet.weights[i] * packet.a[i] * t[i] *
               std::polar(norm, -packet.k[i] * packet.k[i] * tau);
    }
    double m0 = 0.0, m1 = 0.0, m2 = 0.0;
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
        const double x = rule.nodes[j];
        Complex u{};
        for (std::size_t i = 0; i < d.size(); ++i) u += d[i] * std::polar(1.0, packet.k[i] * x);
        const double rho = rule.weights[j] * std::norm(u);
        m0 += rho;
        m1 += rho * x;
        m2 += rho * x * x;
    }
    SpatialMoments out;
    out.norm = m0;
    if (m0 > 0.0) {
        out.mean = m1 / m0;
        out.variance = std::max(0.0, m2 / m0 - out.mean * out.mean);
    }
    return out;
}

namespace {

struct Peak {
    double tau;
    double value;
};

double golden_max(const auto& f, double a, double b, double tol) {
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - g * (b - a);
    double d = a + g * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (std::abs(b - a) > tol * std::max(1.0, std::abs(a))) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

struct ScanResult {
    double tau_peak;
    std::vector<double> peaks;
    bool edge;
    double spread;
};

ScanResult scan_arrival(const Wavepacket& p, const std::vector<Complex>& c, double from, double to,
                        const DelayScan& scan) {
    const int n = std::max(scan.points, 5);
    const double h = (to - from) / (n - 1);
    std::vector<double> taus(n), rho(n);
    for (int i = 0; i < n; ++i) {
        taus[i] = from + h * i;
        rho[i] = std::norm(evolve(p, c, taus[i]));
    }
    auto f = [&](double tau) { return std::norm(evolve(p, c, tau)); };
    const auto top = std::max_element(rho.begin(), rho.end());
    const double global = *top;

    ScanResult r{};
    r.edge = top == rho.begin() || top == rho.end() - 1;
    std::vector<Peak> peaks;
    for (int i = 1; i + 1 < n; ++i) {
        if (rho[i] >= rho[i - 1] && rho[i] > rho[i + 1] && rho[i] >= 0.5 * global) {
            const double t = golden_max(f, taus[i - 1], taus[i + 1], scan.tolerance);
            peaks.push_back({t, f(t)});
        }
    }
    if (peaks.empty()) {
        const double t = taus[top - rho.begin()];
        peaks.push_back({t, global});
    }
    const auto best = std::max_element(peaks.begin(), peaks.end(),
                                       [](const Peak& a, const Peak& b) { return a.value < b.value; });
    r.tau_peak = best->tau;
    for (const auto& pk : peaks) r.peaks.push_back(pk.tau);

    double m0 = 0.0, m1 = 0.0, m2 = 0.0;
    for (int i = 0; i < n; ++i) {
        m0 += rho[i];
        m1 += rho[i] * taus[i];
        m2 += rho[i] * taus[i] * taus[i];
    }
    if (m0 > 0.0) {
        const double mean = m1 / m0;
        r.spread = std::sqrt(std::max(0.0, m2 / m0 - mean * mean));
    }
    return r;
}

}  // namespace

ArrivalMeasurement measure_delay(const Wavepacket& packet, const std::vector<Complex>& t, double x,
                                 const DelayScan& scan) {
    check_table(packet, t);
    if (!(x > 0.0)) throw DomainError("detector path length must be > 0");
    const double k0 = packet.k0;
    const double s = packet.sigma;
    const double tau0 = x / (2.0 * k0);
    const double width = std::sqrt(1.0 / (4.0 * s * s) + 4.0 * s * s * tau0 * tau0) / (2.0 * k0);
    const double from = std::max(0.0, tau0 - scan.half_width * width);
    const double to = tau0 + scan.half_width * width;

    const auto free = scan_arrival(packet, detector_coefficients(packet, nullptr, x), from, to, scan);
    const auto scattered = scan_arrival(packet, detector_coefficients(packet, &t, x), from, to, scan);

    ArrivalMeasurement m;
    m.detector = x;
    m.tau_free = free.tau_peak;
    m.tau_scattered = scattered.tau_peak;
    m.delay = m.tau_scattered - m.tau_free;
    m.spread = scattered.spread;
    m.peaks = scattered.peaks;
    double w0 = 0.0, w1 = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double r = packet.weights[i] * std::norm(packet.a[i] * t[i]);
        w0 += r;
        w1 += r * packet.k[i];
    }
    m.spectral_shift = w0 > 0.0 ? (w1 / w0 - k0) / s : 0.0;
    m.stationary_phase_breakdown =
        scattered.peaks.size() > 1 || scattered.edge || std::abs(m.spectral_shift) > 0.5;
    return m;
}

}  // namespace qwire
