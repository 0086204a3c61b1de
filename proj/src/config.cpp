#include "qwire/config.hpp"

#include "qwire/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <map>
#include <sstream>

namespace qwire {

const char* to_string(Operation op) {
    switch (op) {
        case Operation::Trace: return "trace";
        case Operation::Phases: return "phases";
        case Operation::Delays: return "delays";
        case Operation::Dos: return "dos";
        case Operation::Winding: return "winding";
        case Operation::Subloops: return "subloops";
        case Operation::Wavepacket: return "wavepacket";
    }
    return "?";
}

StarGraph RunConfig::graph() const { return StarGraph(arms, lead_potential); }

bool RunConfig::has(Operation op) const {
    return std::find(operations.begin(), operations.end(), op) != operations.end();
}

void RunConfig::validate() const {
    if (name.empty() || name.find_first_of("/\\ ") != std::string::npos) {
        throw ConfigError(fmt::format("name '{}' must be non-empty without spaces or slashes", name));
    }
    try {
        channel.check(graph());
    } catch (const InvalidGraph& e) {
        throw ConfigError(e.what());
    }
    if (operations.empty()) throw ConfigError("no operations selected");
    if (!std::isfinite(sweep.from) || !std::isfinite(sweep.to) || sweep.from == sweep.to) {
        throw ConfigError(fmt::format("sweep range [{}, {}] is empty", sweep.from, sweep.to));
    }
    const bool energy = sweep.kind == SweepKind::Wavevector;
    if (energy && (sweep.from < 0.0 || sweep.to < 0.0)) {
        throw ConfigError("wavevector sweeps need kl >= 0");
    }
    if (!energy && !(sweep.fixed_wavevector > 0.0)) {
        throw ConfigError("potential sweeps need kl > 0");
    }
    for (Operation op : {Operation::Delays, Operation::Dos}) {
        if (has(op) && (!energy || sweep.to <= sweep.from)) {
            throw ConfigError(
                fmt::format("{} needs an increasing wavevector sweep", to_string(op)));
        }
    }
    if (points < 2) throw ConfigError("points must be >= 2");
    if (!(agreement > 0.0)) throw ConfigError("agreement must be > 0");
    if (!(max_angle > 0.0 && max_angle < pi / 2)) {
        throw ConfigError("max_angle_deg must lie in (0, 90)");
    }
    if (!(potential_step >= 0.0)) throw ConfigError("potential_step must be >= 0");
    if (has(Operation::Wavepacket)) {
        if (!(packet.k0 > 0.0)) throw ConfigError("wavepacket needs packet_k0 > 0");
        if ((packet.sigma > 0.0) == (packet.edge > 0.0)) {
            throw ConfigError("wavepacket needs exactly one of packet_sigma, packet_edge");
        }
        if (packet.edge > 0.0 && packet.edge == packet.k0) {
            throw ConfigError("packet_edge must differ from packet_k0");
        }
        if (!(packet.detector > 0.0)) throw ConfigError("detector must be > 0");
    }
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    for (;;) {
        const auto pos = s.find(sep);
        out.push_back(trim(s.substr(0, pos)));
        if (pos == std::string_view::npos) return out;
        s.remove_prefix(pos + 1);
    }
}

class LineError {
public:
    explicit LineError(int line) : line_(line) {}
    [[noreturn]] void operator()(const std::string& what) const {
        throw ConfigError(fmt::format("line {}: {}", line_, what));
    }

private:
    int line_;
};

double number(std::string_view s, const LineError& fail) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || end != s.data() + s.size() || !std::isfinite(v)) {
        fail(fmt::format("'{}' is not a number", s));
    }
    return v;
}

std::size_t count(std::string_view s, const LineError& fail) {
    s = trim(s);
    std::size_t v = 0;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || end != s.data() + s.size()) {
        fail(fmt::format("'{}' is not a non-negative integer", s));
    }
    return v;
}

std::vector<Arm> parse_arms(std::string_view s, const LineError& fail) {
    std::vector<Arm> arms;
    s = trim(s);
    while (!s.empty()) {
        if (s.front() != '(') fail("arms must be written as (length, potential), ...");
        const auto close = s.find(')');
        if (close == std::string_view::npos) fail("unbalanced parenthesis in arms");
        const auto parts = split(s.substr(1, close - 1), ',');
        if (parts.size() != 2) fail("each arm needs exactly (length, potential)");
        arms.push_back({number(parts[0], fail), number(parts[1], fail)});
        s = trim(s.substr(close + 1));
        if (!s.empty()) {
            if (s.front() != ',') fail("arms must be separated by commas");
            s = trim(s.substr(1));
            if (s.empty()) fail("trailing comma in arms");
        }
    }
    if (arms.empty()) fail("arms list is empty");
    return arms;
}

Channel parse_channel(std::string_view s, const LineError& fail) {
    s = trim(s);
    if (const auto arrow = s.find("<-"); arrow != std::string_view::npos) {
        const std::size_t out = count(s.substr(0, arrow), fail);
        const std::size_t in = count(s.substr(arrow + 2), fail);
        if (out == 0 || in == 0) fail("channel arms are numbered from 1");
        return {in - 1, out - 1};
    }
    if (s.size() == 3 && (s[0] == 't' || s[0] == 'r') && std::isdigit(static_cast<unsigned char>(s[1])) &&
        std::isdigit(static_cast<unsigned char>(s[2]))) {
        const std::size_t out = s[1] - '0';
        const std::size_t in = s[2] - '0';
        if (out == 0 || in == 0) fail("channel arms are numbered from 1");
        if ((s[0] == 'r') != (out == in)) fail(fmt::format("'{}' mixes r and t labels", s));
        return {in - 1, out - 1};
    }
    fail(fmt::format("channel '{}' must look like '3 <- 1' or 't31'", s));
}

SweepKind parse_sweep(std::string_view s, const LineError& fail) {
    for (SweepKind k : {SweepKind::Wavevector, SweepKind::SamplePotential, SweepKind::GlobalPotential}) {
        if (s == to_string(k)) return k;
    }
    fail(fmt::format("unknown sweep '{}'", s));
}

std::vector<Operation> parse_operations(std::string_view s, const LineError& fail) {
    std::vector<Operation> ops;
    for (auto item : split(s, ',')) {
        bool found = false;
        for (Operation op : {Operation::Trace, Operation::Phases, Operation::Delays, Operation::Dos,
                             Operation::Winding, Operation::Subloops, Operation::Wavepacket}) {
            if (item == to_string(op)) {
                if (std::find(ops.begin(), ops.end(), op) == ops.end()) ops.push_back(op);
                found = true;
            }
        }
        if (!found) fail(fmt::format("unknown operation '{}'", item));
    }
    return ops;
}

}  // namespace

RunConfig parse_config(std::string_view text) {
    RunConfig c;
    std::map<std::string, int, std::less<>> seen;
    bool have_arms = false;
    int line_no = 0;
    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
        ++line_no;
        const LineError fail(line_no);
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) fail("expected 'key = value'");
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));
        if (key.empty()) fail("missing key");
        if (value.empty()) fail(fmt::format("missing value for '{}'", key));
        if (auto [it, fresh] = seen.emplace(key, line_no); !fresh) {
            fail(fmt::format("'{}' already set on line {}", key, it->second));
        }

        if (key == "name") c.name = std::string(value);
        else if (key == "arms") { c.arms = parse_arms(value, fail); have_arms = true; }
        else if (key == "lead_potential") c.lead_potential = number(value, fail);
        else if (key == "channel") c.channel = parse_channel(value, fail);
        else if (key == "sweep") c.sweep.kind = parse_sweep(value, fail);
        else if (key == "from") c.sweep.from = number(value, fail);
        else if (key == "to") c.sweep.to = number(value, fail);
        else if (key == "kl") c.sweep.fixed_wavevector = number(value, fail);
        else if (key == "operations") c.operations = parse_operations(value, fail);
        else if (key == "points") c.points = count(value, fail);
        else if (key == "agreement") c.agreement = number(value, fail);
        else if (key == "max_angle_deg") c.max_angle = number(value, fail) * pi / 180.0;
        else if (key == "potential_step") c.potential_step = number(value, fail);
        else if (key == "packet_k0") c.packet.k0 = number(value, fail);
        else if (key == "packet_sigma") c.packet.sigma = number(value, fail);
        else if (key == "packet_edge") c.packet.edge = number(value, fail);
        else if (key == "detector") c.packet.detector = number(value, fail);
        else fail(fmt::format("unknown key '{}'", key));
    }
    if (!have_arms) throw ConfigError("config has no arms");
    if (!seen.contains("from") || !seen.contains("to")) {
        throw ConfigError("config needs both 'from' and 'to'");
    }
    c.validate();
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(fmt::format("cannot read config '{}'", path.string()));
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
        return parse_config(buffer.str());
    } catch (const ConfigError& e) {
        throw ConfigError(fmt::format("{}: {}", path.string(), e.what()));
    }
}

std::string format_config(const RunConfig& c) {
    std::string out;
    auto line = [&](std::string_view key, const std::string& value) {
        out += fmt::format("{} = {}\n", key, value);
    };
    line("name", c.name);
    std::string arms;
    for (std::size_t i = 0; i < c.arms.size(); ++i) {
        arms += fmt::format("{}({}, {})", i ? ", " : "", c.arms[i].length, c.arms[i].potential);
    }
    line("arms", arms);
    if (c.lead_potential != 0.0) line("lead_potential", fmt::format("{}", c.lead_potential));
    line("channel", fmt::format("{} <- {}", c.channel.outgoing + 1, c.channel.incident + 1));
    line("sweep", to_string(c.sweep.kind));
    line("from", fmt::format("{}", c.sweep.from));
    line("to", fmt::format("{}", c.sweep.to));
    if (c.sweep.kind != SweepKind::Wavevector) {
        line("kl", fmt::format("{}", c.sweep.fixed_wavevector));
    }
    std::string ops;
    for (std::size_t i = 0; i < c.operations.size(); ++i) {
        ops += fmt::format("{}{}", i ? ", " : "", to_string(c.operations[i]));
    }
    line("operations", ops);
    line("points", fmt::format("{}", c.points));
    line("agreement", fmt::format("{}", c.agreement));
    line("max_angle_deg", fmt::format("{}", c.max_angle * 180.0 / pi));
    if (c.potential_step > 0.0) line("potential_step", fmt::format("{}", c.potential_step));
    if (c.has(Operation::Wavepacket)) {
        line("packet_k0", fmt::format("{}", c.packet.k0));
        if (c.packet.sigma > 0.0) line("packet_sigma", fmt::format("{}", c.packet.sigma));
        if (c.packet.edge > 0.0) line("packet_edge", fmt::format("{}", c.packet.edge));
        line("detector", fmt::format("{}", c.packet.detector));
    }
    return out;
}

namespace {

RunConfig base(std::string name, std::vector<Arm> arms, Sweep sweep, std::vector<Operation> ops) {
    RunConfig c;
    c.name = std::move(name);
    c.arms = std::move(arms);
    c.sweep = sweep;
    c.operations = std::move(ops);
    return c;
}

std::vector<Preset> make_presets() {
    using enum Operation;
    const std::vector<Arm> wide{{1, -1000}, {5, -1000}, {1, -1000}};
    const std::vector<Arm> bare{{0, -1000}, {5, -1000}, {0, -1000}};
    const Sweep energy5{SweepKind::Wavevector, 0.0, 5.0};
    const Sweep well{SweepKind::SamplePotential, 0.0, -25.0, 2.7};

    std::vector<Preset> p;
    p.push_back({"fig2", "Argand diagram of t31, kl 0 to 5, l1 = l3 = 1, l2 = 5, eVl = -1000",
                 base("fig2", wide, energy5, {Trace, Winding, Subloops})});
    p.push_back({"fig3", "phase of t31 against kl for the fig2 sweep",
                 base("fig3", wide, energy5, {Phases})});
    p.push_back({"fig4", "Argand diagram of t31 as eVl goes 0 to -25 at kl = 2.7",
                 base("fig4", wide, well, {Trace, Winding, Subloops})});
    p.push_back({"fig5", "phase of t31 against eVl for the fig4 sweep",
                 base("fig5", wide, well, {Phases})});

    auto fig6 = base("fig6", wide, {SweepKind::Wavevector, 0.005, 10.0}, {Delays});
    p.push_back({"fig6", "dtheta/dE against dtheta/deV, l1 = l3 = 1, kl up to 10", fig6});

    p.push_back({"fig7", "Argand diagram of t31, kl 0 to 20, fig2 graph",
                 base("fig7", wide, {SweepKind::Wavevector, 0.0, 20.0}, {Trace, Winding, Subloops})});
    p.push_back({"fig8", "Argand diagram of t31 as eVl goes -1 to -1000 at kl = 4",
                 base("fig8", wide, {SweepKind::SamplePotential, -1.0, -1000.0, 4.0},
                      {Trace, Winding, Subloops})});
    p.push_back({"fig9", "Argand diagram of t31, l1 = l3 = 0, kl 0 to 12.5",
                 base("fig9", bare, {SweepKind::Wavevector, 0.0, 12.5}, {Trace, Winding, Subloops})});
    p.push_back({"fig10", "Argand diagram of t31 as eVl goes -1000 to -1050 at kl = 8.22, l1 = l3 = 0",
                 base("fig10", bare, {SweepKind::SamplePotential, -1000.0, -1050.0, 8.22},
                      {Trace, Winding, Subloops})});

    auto fig11 = base("fig11", bare, {SweepKind::Wavevector, 0.005, 12.5}, {Delays});
    p.push_back({"fig11", "dtheta/dE against dtheta/deV, l1 = l3 = 0, kl up to 12.5", fig11});

    auto fig12 = base("fig12", bare, {SweepKind::Wavevector, 0.0, 12.5}, {Phases, Wavepacket});
    fig12.packet = {8.7, 0.0, 8.5, 120.0};
    p.push_back({"fig12", "phase of t31 against kl, l1 = l3 = 0, and a packet at k0 = 8.7", fig12});

    for (auto& preset : p) preset.config.validate();
    return p;
}

}  // namespace

const std::vector<Preset>& presets() {
    static const std::vector<Preset> all = make_presets();
    return all;
}

const Preset& find_preset(std::string_view name) {
    for (const auto& p : presets()) {
        if (p.name == name) return p;
    }
    throw ConfigError(fmt::format("unknown preset '{}'; try list-presets", name));
}

}  // namespace qwire
