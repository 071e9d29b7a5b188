#include "abq/config.hpp"

#include "abq/errors.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

namespace abq {

namespace {

enum Scope : unsigned {
    kMadelung = 1u << 0,
    kContinuous = 1u << 1,
    kInstantaneous = 1u << 2,
    kGauge = 1u << 3,
    kSweep = 1u << 4,
    kAll = 0x1Fu,
    kLattice = kMadelung | kInstantaneous | kGauge | kSweep,
    kInterferometer = kInstantaneous | kGauge | kSweep,
    kStepped = kContinuous | kInstantaneous | kGauge | kSweep,
};

unsigned scope_of(const std::string& scenario) {
    const auto& names = scenario_names();
    for (std::size_t k = 0; k < names.size(); ++k) {
        if (names[k] == scenario) return 1u << k;
    }
    throw ConfigError("unknown scenario '" + scenario + "'");
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& text) {
    std::string s = trim(text);
    if (!s.empty() && s.front() == '+') s.erase(0, 1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
        throw ConfigError("expected a finite number, got '" + trim(text) + "'");
    }
    return v;
}

int parse_int(const std::string& text) {
    std::string s = trim(text);
    if (!s.empty() && s.front() == '+') s.erase(0, 1);
    int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
        throw ConfigError("expected an integer, got '" + trim(text) + "'");
    }
    return v;
}

bool parse_bool(const std::string& text) {
    const std::string s = trim(text);
    if (s == "true" || s == "1") return true;
    if (s == "false" || s == "0") return false;
    throw ConfigError("expected true or false, got '" + s + "'");
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    if (trim(text).empty()) return out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_double(item));
    return out;
}

std::string format_list(const std::vector<double>& v) {
    std::string out;
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (k) out += ",";
        out += format_double(v[k]);
    }
    return out;
}

struct Key {
    std::string name;
    unsigned scope;
    std::function<void(ScenarioConfig&, const std::string&)> set;
    std::function<std::string(const ScenarioConfig&)> get;
};

void require(bool ok, const std::string& what) {
    if (!ok) throw ConfigError("value out of range: " + what);
}

Key real(const char* name, double ScenarioConfig::*field, unsigned scope,
         std::function<bool(double)> valid, const char* range) {
    return {name, scope,
            [=](ScenarioConfig& c, const std::string& v) {
                const double x = parse_double(v);
                require(valid(x), std::string(name) + " must be " + range);
                c.*field = x;
            },
            [=](const ScenarioConfig& c) { return format_double(c.*field); }};
}

Key integer(const char* name, int ScenarioConfig::*field, unsigned scope, int lo, int hi) {
    return {name, scope,
            [=](ScenarioConfig& c, const std::string& v) {
                const int x = parse_int(v);
                require(x >= lo && x <= hi, std::string(name) + " must lie in [" +
                                                std::to_string(lo) + ", " + std::to_string(hi) + "]");
                c.*field = x;
            },
            [=](const ScenarioConfig& c) { return std::to_string(c.*field); }};
}

const std::vector<Key>& keys() {
    auto positive = [](double x) { return x > 0.0; };
    auto any = [](double) { return true; };
    auto non_negative = [](double x) { return x >= 0.0; };
    static const std::vector<Key> table = {
        {"output_dir", kAll,
         [](ScenarioConfig& c, const std::string& v) {
             require(!trim(v).empty(), "output_dir must not be empty");
             c.output_dir = trim(v);
         },
         [](const ScenarioConfig& c) { return c.output_dir; }},
        integer("nx", &ScenarioConfig::nx, kLattice, 16, 1 << 14),
        integer("ny", &ScenarioConfig::ny, kLattice, 16, 1 << 14),
        real("dx", &ScenarioConfig::dx, kLattice, positive, "positive"),
        real("dy", &ScenarioConfig::dy, kLattice, positive, "positive"),
        real("x0", &ScenarioConfig::x0, kLattice, any, "finite"),
        real("y0", &ScenarioConfig::y0, kLattice, any, "finite"),
        real("packet_x", &ScenarioConfig::packet_x, kInterferometer, positive, "positive"),
        real("packet_y", &ScenarioConfig::packet_y, kInterferometer, positive, "positive"),
        real("sigma_x", &ScenarioConfig::sigma_x, kInterferometer, positive, "positive"),
        real("sigma_y", &ScenarioConfig::sigma_y, kInterferometer, positive, "positive"),
        real("momentum", &ScenarioConfig::momentum, kInterferometer, positive, "positive"),
        real("modular_length", &ScenarioConfig::modular_length, kInterferometer, positive,
             "positive"),
        real("core_radius", &ScenarioConfig::core_radius, kInterferometer, positive, "positive"),
        real("alpha", &ScenarioConfig::alpha, kInstantaneous | kGauge, any, "finite"),
        {"engine", kInstantaneous | kSweep,
         [](ScenarioConfig& c, const std::string& v) {
             const std::string s = trim(v);
             require(s == "staged" || s == "lattice" || s == "both",
                     "engine must be staged, lattice or both");
             c.engine = s;
         },
         [](const ScenarioConfig& c) { return c.engine; }},
        {"dispersion", kInstantaneous | kSweep,
         [](ScenarioConfig& c, const std::string& v) {
             const std::string s = trim(v);
             require(s == "lattice" || s == "continuum", "dispersion must be lattice or continuum");
             c.dispersion = s == "lattice" ? Dispersion::lattice : Dispersion::continuum;
         },
         [](const ScenarioConfig& c) {
             return std::string(c.dispersion == Dispersion::lattice ? "lattice" : "continuum");
         }},
        integer("k_max", &ScenarioConfig::k_max, kSweep, 1, 16),
        {"skip_gauge_transform", kGauge,
         [](ScenarioConfig& c, const std::string& v) { c.skip_gauge_transform = parse_bool(v); },
         [](const ScenarioConfig& c) {
             return std::string(c.skip_gauge_transform ? "true" : "false");
         }},
        {"snapshot_times", kGauge,
         [](ScenarioConfig& c, const std::string& v) {
             auto times = parse_list(v);
             for (double t : times) require(t >= 0.0, "snapshot_times must be non-negative");
             c.snapshot_times = std::move(times);
         },
         [](const ScenarioConfig& c) { return format_list(c.snapshot_times); }},
        real("dt", &ScenarioConfig::dt, kStepped, positive, "positive"),
        real("t_end", &ScenarioConfig::t_end, kAll, non_negative, "non-negative"),
        integer("sample_every", &ScenarioConfig::sample_every, kStepped, 1, 1 << 20),
        real("norm_tolerance", &ScenarioConfig::norm_tolerance, kStepped,
             [](double x) { return x > 0.0 && x <= 1e-10; }, "in (0, 1e-10]"),
        real("boundary_tolerance", &ScenarioConfig::boundary_tolerance, kStepped,
             [](double x) { return x > 0.0 && x <= 1e-6; }, "in (0, 1e-6]"),
        real("bump_radius", &ScenarioConfig::bump_radius, kMadelung, positive, "positive"),
        real("bump_separation", &ScenarioConfig::bump_separation, kMadelung, non_negative,
             "non-negative"),
        {"betas", kMadelung,
         [](ScenarioConfig& c, const std::string& v) {
             auto b = parse_list(v);
             require(!b.empty(), "betas needs at least one phase");
             c.betas = std::move(b);
         },
         [](const ScenarioConfig& c) { return format_list(c.betas); }},
        integer("line_nodes", &ScenarioConfig::line_nodes, kContinuous, 16, 1 << 22),
        real("line_dy", &ScenarioConfig::line_dy, kContinuous, positive, "positive"),
        real("line_y0", &ScenarioConfig::line_y0, kContinuous, any, "finite"),
        real("line_center", &ScenarioConfig::line_center, kContinuous, any, "finite"),
        real("line_sigma", &ScenarioConfig::line_sigma, kContinuous, positive, "positive"),
        real("line_momentum", &ScenarioConfig::line_momentum, kContinuous, any, "finite"),
        real("offset_d", &ScenarioConfig::offset_d, kContinuous, positive, "positive"),
        real("mu", &ScenarioConfig::mu, kContinuous, any, "finite"),
        integer("n0", &ScenarioConfig::n0, kContinuous, -100000, 100000),
        integer("n1", &ScenarioConfig::n1, kContinuous, -100000, 100000),
        real("cylinder_inertia", &ScenarioConfig::cylinder_inertia, kContinuous | kSweep, positive,
             "positive"),
        real("electron_inertia", &ScenarioConfig::electron_inertia, kSweep, positive, "positive"),
        real("lambda", &ScenarioConfig::lambda, kSweep, any, "finite"),
        real("delta_m", &ScenarioConfig::delta_m, kSweep, positive, "positive"),
        real("phi0", &ScenarioConfig::phi0, kSweep, any, "finite"),
        integer("n_max", &ScenarioConfig::n_max, kSweep, 2, 4096),
        integer("m_max", &ScenarioConfig::m_max, kSweep, 2, 4096),
        real("cylinder_center", &ScenarioConfig::cylinder_center, kSweep, any, "finite"),
        real("cylinder_width", &ScenarioConfig::cylinder_width, kSweep, positive, "positive"),
    };
    return table;
}

}  // namespace

const std::vector<std::string>& scenario_names() {
    static const std::vector<std::string> names = {
        "madelung-demo", "continuous-aspect", "instantaneous-aspect", "gauge-invariance",
        "flux-quantization-sweep"};
    return names;
}

std::string format_double(double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, ptr);
}

ScenarioConfig default_config(const std::string& scenario) {
    const unsigned scope = scope_of(scenario);
    ScenarioConfig c;
    c.scenario = scenario;
    if (scope == kMadelung) {
        c.nx = 512;
        c.ny = 512;
        c.x0 = -31.9375;
        c.y0 = -31.9375;
        c.t_end = 1.0;
    } else if (scope == kContinuous) {
        c.t_end = 6.0;
        c.sample_every = 1;
    } else if (scope == kGauge) {
        c.alpha = 1.3;
        c.snapshot_times = {1.75, 3.5, 5.25, 7.0};
    }
    return c;
}

ScenarioConfig parse_config(const std::string& text) {
    struct Entry {
        int line;
        std::string key;
        std::string value;
    };
    std::vector<Entry> entries;
    std::map<std::string, int> seen;
    std::string scenario;
    int scenario_line = 0;

    std::stringstream ss(text);
    std::string raw;
    int line_no = 0;
    auto fail = [](int line, const std::string& msg) {
        throw ConfigError("config line " + std::to_string(line) + ": " + msg);
    };
    while (std::getline(ss, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) fail(line_no, "expected key=value, got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) fail(line_no, "missing key before '='");
        if (seen.count(key)) {
            fail(line_no, "key '" + key + "' repeats line " + std::to_string(seen[key]));
        }
        seen[key] = line_no;
        if (key == "scenario") {
            scenario = value;
            scenario_line = line_no;
        } else {
            entries.push_back({line_no, key, value});
        }
    }
    auto apply = [&](ScenarioConfig& cfg, const Entry& e, unsigned scope) {
        const Key* match = nullptr;
        for (const Key& k : keys()) {
            if (k.name == e.key) match = &k;
        }
        if (!match) fail(e.line, "unknown key '" + e.key + "'");
        if (!(match->scope & scope)) {
            fail(e.line, "key '" + e.key + "' is not used by scenario " + cfg.scenario);
        }
        try {
            match->set(cfg, e.value);
        } catch (const ConfigError& err) {
            fail(e.line, "key '" + e.key + "': " + err.what());
        }
    };

    if (scenario_line == 0) {
        // Report malformed lines first; they are the more specific error.
        ScenarioConfig scratch;
        for (const Entry& e : entries) apply(scratch, e, kAll);
        throw ConfigError("scenario key required");
    }

    ScenarioConfig cfg;
    unsigned scope = 0;
    try {
        scope = scope_of(scenario);
        cfg = default_config(scenario);
    } catch (const ConfigError& e) {
        fail(scenario_line, e.what());
    }
    for (const Entry& e : entries) apply(cfg, e, scope);
    return cfg;
}

std::vector<std::pair<std::string, std::string>> config_echo(const ScenarioConfig& cfg) {
    const unsigned scope = scope_of(cfg.scenario);
    std::vector<std::pair<std::string, std::string>> out;
    out.emplace_back("scenario", cfg.scenario);
    for (const Key& k : keys()) {
        if (k.scope & scope) out.emplace_back(k.name, k.get(cfg));
    }
    return out;
}

}  // namespace abq
