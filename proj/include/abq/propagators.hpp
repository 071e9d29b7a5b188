#pragma once

// Time-evolution engines.
//
//  * evolve_lattice: Peierls-discretized kinetic Hamiltonian
//    H = -(1/2) (gauge-covariant 5-point Laplacian), advanced with a
//    dimension-split Crank-Nicolson scheme. Each step applies the Cayley
//    factors C_x(dt/2) C_y(dt) C_x(dt/2), every one of which is an exact
//    unitary built from independent tridiagonal solves per row or column.
//  * evolve_staged: piecewise-free spectral evolution of two packets with a
//    single phase kick on the right packet when it crosses y = 0.
//  * evolve_line_system: 1D electron in a superposition of cylinder angular
//    momentum branches n, each branch seeing H_n = (p_y - a_n(y))^2 / 2 with
//    a_n(y) = mu n / sqrt(d^2 + y^2).

#include "abq/gauge.hpp"
#include "abq/grid.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

namespace abq {

struct PropagatorConfig {
    double dt = 0.0025;
    double t_end = 0.0;
    std::vector<std::uint8_t> mask;  // empty, or one flag per node (1 = hard wall)
    double solver_tolerance = 1e-12;
    std::vector<double> snapshot_times;
    double norm_tolerance = 1e-10;
    double boundary_tolerance = 1e-6;
    int sample_every = 1;
};

/// Number of steps; throws ConfigError unless dt > 0, t_end >= 0, t_end is an
/// integer multiple of dt, solver_tolerance <= 1e-10 and sample_every >= 1.
int step_count(const PropagatorConfig& cfg);

/// Called at t = 0, after every `sample_every` steps, and at t_end.
using SampleCallback = std::function<void(double t, const WaveField&)>;
/// Called once per requested snapshot time, in increasing order, at the step
/// boundary nearest to it.
using SnapshotCallback = std::function<void(double t, const WaveField&)>;

struct LatticeRun {
    WaveField final_field;
    int steps = 0;
    double norm_drift = 0.0;
    double max_boundary_amplitude = 0.0;
    double solver_residual = 0.0;  // relative residual audited on the first step
};

/// Throws NumericalError when |norm - initial norm| exceeds cfg.norm_tolerance
/// or the boundary amplitude exceeds cfg.boundary_tolerance.
LatticeRun evolve_lattice(const WaveField& f, const GaugeField& gauge, const PropagatorConfig& cfg,
                          const SampleCallback& on_sample = {},
                          const SnapshotCallback& on_snapshot = {});

enum class Dispersion {
    continuum,  // E = |k|^2 / 2
    lattice,    // E = sum (1 - cos(k h)) / h^2, the spectrum of the lattice engine
};

/// Spectral free propagator on the periodic extension of a grid.
class FreePropagator {
public:
    FreePropagator(const Grid2D& grid, Dispersion dispersion);
    ~FreePropagator();
    FreePropagator(const FreePropagator&) = delete;
    FreePropagator& operator=(const FreePropagator&) = delete;

    const Grid2D& grid() const { return grid_; }
    std::vector<cplx> spectrum(const WaveField& f) const;
    /// Field at time t from a t = 0 spectrum.
    WaveField field_at(const std::vector<cplx>& spectrum, double t) const;
    WaveField evolve(const WaveField& f, double t) const;
    /// Group velocity <dE/dk> of a spectrum (time independent).
    Vec2 group_velocity(const std::vector<cplx>& spectrum) const;
    double energy(int i, int j) const { return energy_[grid_.index(i, j)]; }

private:
    struct Plans;
    Grid2D grid_;
    Dispersion dispersion_;
    std::vector<double> kx_;
    std::vector<double> ky_;
    std::vector<double> energy_;
    std::unique_ptr<Plans> plans_;
};

WaveField evolve_free(const WaveField& f, double t, Dispersion dispersion);

struct StagedRun {
    WaveField final_field;
    bool kicked = false;
    double crossing_time = 0.0;  // continuous zero crossing of the right centroid
    double kick_time = 0.0;      // step boundary where the phase was applied
    double mutual_mass = 0.0;    // sum |psi_L| |psi_R| dx dy at the kick
    double norm_drift = 0.0;
};

/// Evolves superpose(left, right, 1, 1, 0) freely, multiplies the right packet
/// by e^{i alpha} when its centroid crosses y = 0, and evolves freely again.
/// Throws ScenarioError if the packets overlap at the kick (mutual mass > 1e-6)
/// and NumericalError on norm drift or boundary leakage.
StagedRun evolve_staged(const WaveField& left, const WaveField& right, double alpha,
                        const PropagatorConfig& cfg, Dispersion dispersion,
                        const SampleCallback& on_sample = {});

inline constexpr double kStagedOverlapLimit = 1e-6;

// ---------------------------------------------------------------------------
// Line electron entangled with cylinder branches.

struct LineGrid {
    int n = 0;
    double dy = 0.0;
    double y0 = 0.0;
    double y(int j) const { return y0 + j * dy; }
};

struct LineBranch {
    int n = 0;                // cylinder angular momentum quantum number
    std::vector<cplx> amp;    // c_n(y)
};

struct LineSystemState {
    LineGrid grid;
    double offset = 2.0;      // transverse distance d of the straight path
    double mu = 0.0;
    double cylinder_inertia = 1.0;
    std::vector<LineBranch> branches;
};

struct LinePacket {
    double center = 0.0;
    double sigma = 1.0;
    double momentum = 0.0;
};

/// Integral of a_n between two points: mu n (asinh(y_b/d) - asinh(y_a/d)).
double line_gauge_phase(double mu, int n, double offset, double ya, double yb);

/// Branch n starts as weight_n e^{i mu n asinh(y/d)} g(y), where g is the
/// normalized Gaussian of `packet`: every branch carries the same kinetic
/// momentum profile. Weights are normalized to unit total norm.
LineSystemState make_line_state(const LineGrid& grid, double offset, double mu,
                                double cylinder_inertia,
                                const std::vector<std::pair<int, cplx>>& weights,
                                const LinePacket& packet);

double line_norm_squared(const LineSystemState& s);

struct LineSample {
    double t = 0.0;
    std::vector<double> velocity;  // <v_y> per branch, normalized by branch mass
    std::vector<double> position;  // <y> per branch
    std::vector<double> mass;      // per branch
    cplx overlap{};                // <c_0|c_1> / (|c_0| |c_1|), 1 if one branch
    double inv_r = 0.0;            // <1/r> of the full density
    double v_over_r = 0.0;         // Re <(1/r) v_y>
    double delta_phi_c = 0.0;      // -mu integral of <v_y> <1/r> dt so far
};

struct LineRun {
    LineSystemState final_state;
    std::vector<LineSample> samples;
    double norm_drift = 0.0;
};

LineSample measure_line(const LineSystemState& s, double t);

/// Crank-Nicolson per branch. Throws NumericalError on norm drift, branch mass
/// loss beyond cfg.norm_tolerance, or boundary leakage.
LineRun evolve_line_system(const LineSystemState& state, const PropagatorConfig& cfg);

}  // namespace abq
