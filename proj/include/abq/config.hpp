#pragma once

// Scenario configuration: plain `key = value` text, `#` starts a comment.
// Defaults depend on the scenario, so the `scenario` key is mandatory and the
// remaining keys are checked against the set that scenario reads.

#include "abq/propagators.hpp"

#include <string>
#include <utility>
#include <vector>

namespace abq {

inline constexpr const char* kVersion = "abq 1.0.0";

/// The five scenario names, in the order `list-scenarios` prints them.
const std::vector<std::string>& scenario_names();

struct ScenarioConfig {
    std::string scenario;
    std::string output_dir = "out";

    // 2D lattice
    int nx = 640;
    int ny = 504;
    double dx = 0.125;
    double dy = 0.125;
    double x0 = -39.9375;
    double y0 = -35.9375;

    // Two-packet interferometer: packets start at (+-packet_x, packet_y) and
    // move along -y with wave number `momentum`.
    double packet_x = 11.0;
    double packet_y = 12.0;
    double sigma_x = 0.9;
    double sigma_y = 1.5;
    double momentum = 4.0;
    double modular_length = 22.0;  // L
    double core_radius = 0.5;      // hard-wall solenoid core and symmetric-gauge r0
    double alpha = 3.141592653589793;
    std::string engine = "both";   // staged | lattice | both
    Dispersion dispersion = Dispersion::lattice;
    int k_max = 3;
    bool skip_gauge_transform = false;
    std::vector<double> snapshot_times;

    // Time stepping and numerical guards
    double dt = 0.0025;
    double t_end = 7.0;
    int sample_every = 4;
    double norm_tolerance = 1e-10;
    double boundary_tolerance = 1e-6;

    // Madelung demo
    double bump_radius = 1.0;
    double bump_separation = 4.0;
    std::vector<double> betas{0.0, 3.141592653589793};

    // Line electron and cylinder branches
    int line_nodes = 1281;
    double line_dy = 0.05;
    double line_y0 = -32.0;
    double line_center = 12.0;
    double line_sigma = 2.0;
    double line_momentum = -4.0;
    double offset_d = 2.0;
    double mu = 0.05;
    int n0 = 10;
    int n1 = 11;

    // Rotor model
    double cylinder_inertia = 10.0;
    double electron_inertia = 1.0;
    double lambda = 0.1;
    double delta_m = 8.0;
    double phi0 = 1.0;
    int n_max = 128;
    int m_max = 128;
    double cylinder_center = 5.0;
    double cylinder_width = 2.0;
};

/// Defaults for a scenario; throws ConfigError for an unknown name.
ScenarioConfig default_config(const std::string& scenario);

/// Throws ConfigError with a line-numbered message on unknown or inapplicable
/// keys, malformed values, range violations, or a missing `scenario` key.
ScenarioConfig parse_config(const std::string& text);

/// Every key the scenario reads, with its resolved value, in a fixed order.
/// Feeding the result back through parse_config reproduces the config.
std::vector<std::pair<std::string, std::string>> config_echo(const ScenarioConfig& cfg);

std::string format_double(double v);

}  // namespace abq
