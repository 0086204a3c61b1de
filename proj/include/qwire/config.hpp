#pragma once

#include "qwire/graph.hpp"
#include "qwire/times.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace qwire {

enum class Operation { Trace, Phases, Delays, Dos, Winding, Subloops, Wavepacket };

const char* to_string(Operation op);

struct PacketConfig {
    double k0 = 0.0;
    /// Either sigma or the edge wavevector where |a| has fallen by e^-2.
    double sigma = 0.0;
    double edge = 0.0;
    /// Total path length from source point to detector point.
    double detector = 120.0;
};

/// One batch run. Lengths in units of l, so kl = k and eVl = V.
struct RunConfig {
    std::string name = "run";
    std::vector<Arm> arms;
    double lead_potential = 0.0;
    Channel channel{0, 2};
    Sweep sweep;
    std::vector<Operation> operations;
    std::size_t points = 2000;    ///< grid size for delays and dos
    double agreement = 1e-2;      ///< relative WDT/LPT agreement for the flag
    double max_angle = pi / 8.0;  ///< trace angular tolerance
    double potential_step = 0.0;  ///< <= 0 selects the default
    PacketConfig packet;

    StarGraph graph() const;
    bool has(Operation op) const;
    /// Throws ConfigError on any inconsistency.
    void validate() const;
};

/// Flat `key = value` format, one entry per line, `#` comments:
///
///     name = fig2
///     arms = (1, -1000), (5, -1000), (1, -1000)
///     channel = 3 <- 1
///     sweep = wavevector          # or sample-potential, global-potential
///     from = 0
///     to = 5
///     operations = trace, winding, subloops
///
/// Further keys: kl (fixed wavevector of potential sweeps), lead_potential,
/// points, agreement, max_angle_deg, potential_step, packet_k0,
/// packet_sigma, packet_edge, detector. Channels may also be written as
/// labels such as t31 or r11. Errors carry the line number.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

/// Canonical text form; parse_config(format_config(c)) reproduces c.
std::string format_config(const RunConfig& config);

struct Preset {
    std::string name;
    std::string description;
    RunConfig config;
};

/// Figure presets fig2 ... fig12.
const std::vector<Preset>& presets();
/// Throws ConfigError for an unknown name.
const Preset& find_preset(std::string_view name);

}  // namespace qwire
