#include "abq/errors.hpp"
#include "abq/observables.hpp"
#include "abq/propagators.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <mutex>
#include <numbers>
#include <sstream>

namespace abq {

namespace {

// FFTW's planner is not re-entrant.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

double angular_frequency(int index, int n, double spacing) {
    const int m = index <= n / 2 ? index : index - n;
    return 2.0 * std::numbers::pi * m / (n * spacing);
}

}  // namespace

struct FreePropagator::Plans {
    fftw_complex* buffer = nullptr;
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;

    Plans(int nx, int ny) {
        std::lock_guard lock(planner_mutex());
        buffer = fftw_alloc_complex(static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny));
        if (!buffer) throw NumericalError("FFTW buffer allocation failed");
        forward = fftw_plan_dft_2d(ny, nx, buffer, buffer, FFTW_FORWARD, FFTW_ESTIMATE);
        backward = fftw_plan_dft_2d(ny, nx, buffer, buffer, FFTW_BACKWARD, FFTW_ESTIMATE);
        if (!forward || !backward) throw NumericalError("FFTW planning failed");
    }
    ~Plans() {
        std::lock_guard lock(planner_mutex());
        if (forward) fftw_destroy_plan(forward);
        if (backward) fftw_destroy_plan(backward);
        fftw_free(buffer);
    }
    Plans(const Plans&) = delete;
    Plans& operator=(const Plans&) = delete;

    cplx* data() { return reinterpret_cast<cplx*>(buffer); }
};

FreePropagator::FreePropagator(const Grid2D& grid, Dispersion dispersion)
    : grid_(grid), dispersion_(dispersion) {
    kx_.resize(static_cast<std::size_t>(grid.nx));
    ky_.resize(static_cast<std::size_t>(grid.ny));
    for (int i = 0; i < grid.nx; ++i) kx_[static_cast<std::size_t>(i)] = angular_frequency(i, grid.nx, grid.dx);
    for (int j = 0; j < grid.ny; ++j) ky_[static_cast<std::size_t>(j)] = angular_frequency(j, grid.ny, grid.dy);
    energy_.resize(grid.size());
    for (int j = 0; j < grid.ny; ++j) {
        const double ky = ky_[static_cast<std::size_t>(j)];
        for (int i = 0; i < grid.nx; ++i) {
            const double kx = kx_[static_cast<std::size_t>(i)];
            double e = 0.0;
            if (dispersion == Dispersion::continuum) {
                e = 0.5 * (kx * kx + ky * ky);
            } else {
                e = (1.0 - std::cos(kx * grid.dx)) / (grid.dx * grid.dx) +
                    (1.0 - std::cos(ky * grid.dy)) / (grid.dy * grid.dy);
            }
            energy_[grid.index(i, j)] = e;
        }
    }
    plans_ = std::make_unique<Plans>(grid.nx, grid.ny);
}

FreePropagator::~FreePropagator() = default;

std::vector<cplx> FreePropagator::spectrum(const WaveField& f) const {
    if (!(f.grid() == grid_)) throw ConfigError("FreePropagator: grid mismatch");
    const auto amp = f.amplitudes();
    std::copy(amp.begin(), amp.end(), plans_->data());
    fftw_execute(plans_->forward);
    return std::vector<cplx>(plans_->data(), plans_->data() + grid_.size());
}

WaveField FreePropagator::field_at(const std::vector<cplx>& spectrum, double t) const {
    if (spectrum.size() != grid_.size()) throw ConfigError("FreePropagator: spectrum size mismatch");
    const double scale = 1.0 / static_cast<double>(grid_.size());
    cplx* buf = plans_->data();
    for (std::size_t k = 0; k < spectrum.size(); ++k) {
        buf[k] = spectrum[k] * std::polar(scale, -energy_[k] * t);
    }
    fftw_execute(plans_->backward);
    return WaveField(grid_, std::vector<cplx>(buf, buf + grid_.size()));
}

WaveField FreePropagator::evolve(const WaveField& f, double t) const {
    return field_at(spectrum(f), t);
}

Vec2 FreePropagator::group_velocity(const std::vector<cplx>& spectrum) const {
    if (spectrum.size() != grid_.size()) throw ConfigError("FreePropagator: spectrum size mismatch");
    double weight = 0.0;
    double vx = 0.0;
    double vy = 0.0;
    for (int j = 0; j < grid_.ny; ++j) {
        const double ky = ky_[static_cast<std::size_t>(j)];
        const double gy =
            dispersion_ == Dispersion::continuum ? ky : std::sin(ky * grid_.dy) / grid_.dy;
        for (int i = 0; i < grid_.nx; ++i) {
            const double kx = kx_[static_cast<std::size_t>(i)];
            const double gx =
                dispersion_ == Dispersion::continuum ? kx : std::sin(kx * grid_.dx) / grid_.dx;
            const double p = std::norm(spectrum[grid_.index(i, j)]);
            weight += p;
            vx += p * gx;
            vy += p * gy;
        }
    }
    if (!(weight > 0.0)) throw ConfigError("group_velocity: empty spectrum");
    return {vx / weight, vy / weight};
}

WaveField evolve_free(const WaveField& f, double t, Dispersion dispersion) {
    const FreePropagator prop(f.grid(), dispersion);
    return prop.evolve(f, t);
}

StagedRun evolve_staged(const WaveField& left, const WaveField& right, double alpha,
                        const PropagatorConfig& cfg, Dispersion dispersion,
                        const SampleCallback& on_sample) {
    if (!(left.grid() == right.grid())) throw ConfigError("evolve_staged: grid mismatch");
    if (!std::isfinite(alpha)) throw ConfigError("evolve_staged: alpha must be finite");
    const int steps = step_count(cfg);
    const Grid2D& g = left.grid();
    const FreePropagator prop(g, dispersion);

    const WaveField before = superpose(left, right, 1.0, 1.0, 0.0);
    const WaveField after = superpose(left, right, 1.0, 1.0, alpha);
    const std::vector<cplx> spec_before = prop.spectrum(before);
    const std::vector<cplx> spec_after = prop.spectrum(after);
    const std::vector<cplx> spec_right = prop.spectrum(right);

    StagedRun run;
    // The centroid of a freely moving packet advances at its (constant) group
    // velocity, so the crossing time is known before any evolution.
    const double y_start = expectation_position(right).y;
    const double vy = prop.group_velocity(spec_right).y;
    int kick_step = steps + 1;
    if (vy != 0.0 && y_start * vy < 0.0) {
        run.crossing_time = -y_start / vy;
        const long nearest = std::lround(run.crossing_time / cfg.dt);
        if (nearest <= steps) {
            kick_step = static_cast<int>(std::max(0L, nearest));
            run.kicked = true;
            run.kick_time = kick_step * cfg.dt;
        }
    } else {
        run.crossing_time = std::numeric_limits<double>::infinity();
    }

    if (run.kicked) {
        const WaveField l = prop.evolve(left, run.kick_time);
        const WaveField r = prop.evolve(right, run.kick_time);
        const auto la = l.amplitudes();
        const auto ra = r.amplitudes();
        double mutual = 0.0;
        for (std::size_t k = 0; k < la.size(); ++k) mutual += std::abs(la[k]) * std::abs(ra[k]);
        run.mutual_mass = mutual * g.cell_area();
        if (run.mutual_mass > kStagedOverlapLimit) {
            std::ostringstream msg;
            msg << "packets overlap at the phase kick (mutual mass " << run.mutual_mass
                << " > " << kStagedOverlapLimit << "); a staged evolution is not valid here";
            throw ScenarioError(msg.str());
        }
    }

    const double norm0 = norm_squared(before);
    auto field_at_step = [&](int step) {
        const double t = step * cfg.dt;
        return prop.field_at(step >= kick_step ? spec_after : spec_before, t);
    };
    auto check = [&](const WaveField& f, double t) {
        const double drift = std::abs(norm_squared(f) - norm0);
        run.norm_drift = std::max(run.norm_drift, drift);
        if (drift > cfg.norm_tolerance) {
            std::ostringstream msg;
            msg << "staged evolution norm drift " << drift << " at t = " << t;
            throw NumericalError(msg.str());
        }
        const double edge = boundary_amplitude(f);
        if (edge > cfg.boundary_tolerance) {
            std::ostringstream msg;
            msg << "boundary amplitude " << edge << " at t = " << t << " exceeds "
                << cfg.boundary_tolerance << " (domain too small)";
            throw NumericalError(msg.str());
        }
    };

    if (on_sample) {
        for (int step = 0; step <= steps; ++step) {
            if (step % cfg.sample_every != 0 && step != steps) continue;
            const WaveField f = field_at_step(step);
            check(f, step * cfg.dt);
            on_sample(step * cfg.dt, f);
        }
    }
    run.final_field = field_at_step(steps);
    check(run.final_field, cfg.t_end);
    return run;
}

}  // namespace abq
