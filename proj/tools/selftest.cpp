#include "selftest.hpp"

#include "abq/config.hpp"
#include "abq/errors.hpp"
#include "abq/gauge.hpp"
#include "abq/io.hpp"
#include "abq/observables.hpp"
#include "abq/propagators.hpp"
#include "abq/rotor.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

namespace abq_tools {

namespace {

using namespace abq;

struct Check {
    const char* name;
    std::function<double()> measure;  // returns the error, compared against tol
    double tol;
};

Grid2D small_grid() { return make_grid(64, 64, 0.25, 0.25, -7.875, -7.875); }

double energy_example() {
    const RotorParams p{2.0, 1.0, 0.5, InertiaMode::as_written};
    return std::abs(energy_level(p, 2, 1) - 1.0) + std::abs(energy_level(p, 0, 0));
}

double string_loop_example() {
    const GaugeField g = string_gauge(small_grid(), 1.3);
    const double around = loop_phase(g, 10, 10, 50, 50);
    const double beside = loop_phase(g, 2, 40, 20, 60);
    return std::abs(around - 1.3) + std::abs(beside);
}

// <e^{i p L}> of a Gaussian with momentum k and width s is
// e^{i k L} e^{-L^2 / (8 s^2)}.
double modular_example() {
    const Grid2D g = make_grid(256, 64, 0.125, 0.25, -15.9375, -7.875);
    const double k = 1.7;
    const double s = 1.2;
    const double L = 1.5;
    const WaveField f = gaussian_packet(g, {0.0, 0.0}, {s, 0.6}, {k, 0.0});
    const cplx expected = std::polar(std::exp(-L * L / (8.0 * s * s)), k * L);
    return std::abs(modular_momentum_expectation(f, L) - expected);
}

double bell_entropy_example() {
    const RotorParams p{10.0, 1.0, 0.1, InertiaMode::as_written};
    std::vector<cplx> c(9 * 9, 0.0);
    const double w = 1.0 / std::sqrt(2.0);
    c[(-1 + 4) * 9 + (0 + 4)] = w;
    c[(1 + 4) * 9 + (1 + 4)] = w;
    return std::abs(entanglement_entropy(RotorState(p, 4, 4, c)) - std::numbers::ln2);
}

double coupling_example() {
    const RotorParams p{10.0, 1.0, 0.1, InertiaMode::as_written};
    std::vector<cplx> cyl(2 * 10 + 1, 0.0);
    cyl[4 + 10] = 1.0;
    cyl[6 + 10] = 1.0;
    const RotorState s = product_state(p, cyl, basis_vector(0, 4));
    const CouplingReport r = coupling_decomposition(s);
    return std::abs(r.mean_lc - 5.0) + std::abs(r.variance_lc - 1.0);
}

double coherent_example() {
    const std::vector<cplx> c = coherent_angular_state(1.0, 8.0, 48);
    return std::abs(circular_mean(c) - 1.0);
}

double lattice_norm_example() {
    const Grid2D g = make_grid(96, 96, 0.25, 0.25, -11.875, -11.875);
    const WaveField f = gaussian_packet(g, {-2.0, 0.5}, 0.9, {1.0, 0.0});
    PropagatorConfig cfg;
    cfg.dt = 0.01;
    cfg.t_end = 0.5;
    const LatticeRun run = evolve_lattice(f, string_gauge(g, 2.0), cfg);
    return run.norm_drift;
}

double config_example() {
    try {
        parse_config("alpha=abc\n");
    } catch (const ConfigError& e) {
        return std::string(e.what()).find("line 1") == std::string::npos ? 1.0 : 0.0;
    }
    return 1.0;
}

double snapshot_example() {
    const WaveField f = gaussian_packet(small_grid(), {0.3, -0.2}, 0.7, {0.7, -1.9});
    const auto path = std::filesystem::temp_directory_path() / "abq_selftest_snapshot.txt";
    write_snapshot(f, "string", 0.125, path);
    const SnapshotFile back = read_snapshot(path);
    std::filesystem::remove(path);
    double diff = back.t == 0.125 && back.gauge == "string" ? 0.0 : 1.0;
    for (std::size_t k = 0; k < f.amplitudes().size(); ++k) {
        if (f.amplitudes()[k] != back.field.amplitudes()[k]) diff = 1.0;
    }
    return diff;
}

}  // namespace

bool run_selftest() {
    const std::vector<Check> checks{
        {"rotor energy levels", energy_example, 1e-15},
        {"string gauge loop phases", string_loop_example, 1e-12},
        {"modular momentum of a gaussian", modular_example, 1e-9},
        {"entropy of a maximally entangled pair", bell_entropy_example, 1e-12},
        {"cylinder momentum mean and variance", coupling_example, 1e-12},
        {"coherent state circular mean", coherent_example, 1e-9},
        {"lattice propagator conserves norm", lattice_norm_example, 1e-12},
        {"config error names the line", config_example, 0.0},
        {"snapshot round trip is bit-exact", snapshot_example, 0.0},
    };
    bool all = true;
    for (const Check& c : checks) {
        double err = 0.0;
        bool pass = false;
        try {
            err = c.measure();
            pass = err <= c.tol;
        } catch (const std::exception& e) {
            std::printf("FAIL %s: %s\n", c.name, e.what());
            all = false;
            continue;
        }
        std::printf("%s %s: error %.3g (tolerance %.3g)\n", pass ? "PASS" : "FAIL", c.name, err, c.tol);
        all = all && pass;
    }
    return all;
}

}  // namespace abq_tools
