#pragma once

#include "qwire/graph.hpp"
#include "qwire/units.hpp"

#include <functional>
#include <vector>

namespace qwire {

struct PacketGrid {
    /// Half-width of the k window in units of sigma.
    double span = 8.0;
    int order = 16;
    /// 0 picks the panel count from the resolution requirement.
    int panels = 0;
    /// Required nodes per oscillation period 2 pi / x_max.
    double nodes_per_period = 10.0;
};

/// a(k) = (1/(sigma sqrt 2)) exp(-(k - k0)^2 / (4 sigma^2)) on a composite
/// Gauss-Legendre grid, rescaled so that sum w |a|^2 = 1.
struct Wavepacket {
    double k0 = 0.0;
    double sigma = 0.0;
    std::vector<double> k;
    std::vector<double> weights;
    std::vector<Complex> a;
};

/// sigma with |a(k_edge)| / |a(k0)| = ratio.
double sigma_for_edge_ratio(double k0, double k_edge, double ratio);

/// x_max is the largest path length the packet is evaluated at; the grid must
/// resolve e^{i k x_max}. Throws ResolutionError if a fixed panel count is too
/// coarse.
Wavepacket build_packet(double k0, double sigma, double x_max, const PacketGrid& grid = {});

double spectral_norm(const Wavepacket& packet);

/// t(k) on the packet grid for one channel of the graph.
std::vector<Complex> tabulate_response(const Wavepacket& packet, const StarGraph& graph,
                                       const Channel& channel);
std::vector<Complex> tabulate_response(const Wavepacket& packet,
                                       const std::function<Complex(double)>& t);

/// (1/sqrt(2 pi)) sum w a t e^{i(k x - k^2 tau)}. x is the total path length
/// from the source point to the detector point.
Complex propagate(const Wavepacket& packet, const std::vector<Complex>& t, double x, double tau);
/// Same with t = 1.
Complex propagate_free(const Wavepacket& packet, double x, double tau);

/// sum w |a|^2 |t|^2.
double transmitted_spectral_norm(const Wavepacket& packet, const std::vector<Complex>& t);

struct SpatialMoments {
    double norm = 0.0;
    double mean = 0.0;
    double variance = 0.0;
};

/// Moments of |u(x, tau)|^2 over x in [x_from, x_to] by composite Gauss-Legendre.
SpatialMoments spatial_moments(const Wavepacket& packet, const std::vector<Complex>& t, double tau,
                               double x_from, double x_to, int panels = 400);

struct DelayScan {
    /// Scan half-width around the free arrival time, in packet time widths.
    double half_width = 40.0;
    int points = 4001;
    double tolerance = 1e-12;
};

struct ArrivalMeasurement {
    double detector = 0.0;  ///< total path length x
    double tau_free = 0.0;
    double tau_scattered = 0.0;
    double delay = 0.0;
    double spread = 0.0;  ///< rms time width of |u|^2 at the detector
    std::vector<double> peaks;  ///< local maxima above half the global maximum
    /// (centroid of |a t|^2 - k0) / sigma
    double spectral_shift = 0.0;
    /// Several peaks, a peak at the scan edge, or |spectral_shift| > 0.5.
    bool stationary_phase_breakdown = false;
};

/// Time of the |u|^2 maximum at fixed x by a scan and golden-section search,
/// for the scattered and the free packet.
ArrivalMeasurement measure_delay(const Wavepacket& packet, const std::vector<Complex>& t, double x,
                                 const DelayScan& scan = {});

}  // namespace qwire
