#include "abq/errors.hpp"
#include "abq/observables.hpp"
#include "abq/propagators.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace abq {

namespace {

constexpr cplx kI{0.0, 1.0};

// Cayley factor (1 + i tau H / 2)^{-1} (1 - i tau H / 2) for a family of
// independent tridiagonal lines laid out on the grid. Lines along x are rows,
// lines along y are columns; both are swept with the node index as the fast
// loop variable so the memory access stays contiguous.
class CayleySweep {
public:
    enum class Axis { x, y };

    CayleySweep(const GaugeField& gauge, const std::vector<std::uint8_t>& mask, Axis axis,
                double tau)
        : grid_(gauge.grid()), axis_(axis) {
        const Grid2D& g = grid_;
        const std::size_t n = g.size();
        diag_.assign(n, 0.0);
        upper_.assign(n, cplx{});
        lower_.assign(n, cplx{});
        cprime_.assign(n, cplx{});
        inv_denom_.assign(n, cplx{});
        wall_.assign(n, 0);
        if (!mask.empty()) std::copy(mask.begin(), mask.end(), wall_.begin());

        const double h = axis == Axis::x ? g.dx : g.dy;
        const double hop = -0.5 / (h * h);
        const double on_site = 1.0 / (h * h);
        const int len = line_length();
        const int count = line_count();
        for (int line = 0; line < count; ++line) {
            for (int k = 0; k < len; ++k) {
                const std::size_t p = node(line, k);
                if (wall_[p]) continue;
                diag_[p] = on_site;
                if (k + 1 < len && !wall_[node(line, k + 1)]) {
                    upper_[p] = hop * std::polar(1.0, -link(gauge, line, k));
                }
                if (k > 0 && !wall_[node(line, k - 1)]) {
                    lower_[p] = hop * std::polar(1.0, link(gauge, line, k - 1));
                }
            }
        }

        half_ = 0.5 * tau;
        // Thomas factorization of 1 + i (tau/2) H, reused for every step.
        for (int line = 0; line < count; ++line) {
            cplx prev_cprime{};
            for (int k = 0; k < len; ++k) {
                const std::size_t p = node(line, k);
                const cplx b = wall_[p] ? cplx{1.0, 0.0} : 1.0 + kI * half_ * diag_[p];
                const cplx a = kI * half_ * lower_[p];
                const cplx c = kI * half_ * upper_[p];
                const cplx denom = k == 0 ? b : b - a * prev_cprime;
                inv_denom_[p] = 1.0 / denom;
                cprime_[p] = c * inv_denom_[p];
                prev_cprime = cprime_[p];
            }
        }
    }

    // psi <- Cayley(psi). `scratch` holds the forward-sweep values.
    void apply(std::span<cplx> psi, std::vector<cplx>& scratch) const {
        scratch.resize(psi.size());
        const Grid2D& g = grid_;
        if (axis_ == Axis::x) {
            for (int j = 0; j < g.ny; ++j) {
                const std::size_t row = g.index(0, j);
                const cplx* in = psi.data() + row;
                cplx* fwd = scratch.data() + row;
                cplx prev{};
                for (int i = 0; i < g.nx; ++i) {
                    const std::size_t p = row + static_cast<std::size_t>(i);
                    const cplx r = rhs(in, i, g.nx, p, 1);
                    const cplx a = kI * half_ * lower_[p];
                    prev = (r - a * prev) * inv_denom_[p];
                    fwd[i] = prev;
                }
                cplx* out = psi.data() + row;
                cplx next{};
                for (int i = g.nx - 1; i >= 0; --i) {
                    const std::size_t p = row + static_cast<std::size_t>(i);
                    next = fwd[i] - cprime_[p] * next;
                    out[i] = next;
                }
            }
        } else {
            const auto stride = static_cast<std::size_t>(g.nx);
            // Forward sweep over rows; every column advances together.
            for (int j = 0; j < g.ny; ++j) {
                for (int i = 0; i < g.nx; ++i) {
                    const std::size_t p = g.index(i, j);
                    const cplx r = rhs(psi.data() + i, j, g.ny, p, stride);
                    const cplx a = kI * half_ * lower_[p];
                    const cplx prev = j > 0 ? scratch[p - stride] : cplx{};
                    scratch[p] = (r - a * prev) * inv_denom_[p];
                }
            }
            for (int j = g.ny - 1; j >= 0; --j) {
                for (int i = 0; i < g.nx; ++i) {
                    const std::size_t p = g.index(i, j);
                    const cplx next = j + 1 < g.ny ? psi[p + stride] : cplx{};
                    psi[p] = scratch[p] - cprime_[p] * next;
                }
            }
        }
    }

    // Max over lines of |A x - r| / |r| for x = solve(r), using `psi` as r.
    double audit_residual(std::span<const cplx> psi) const {
        std::vector<cplx> rhs_values(psi.size());
        const int len = line_length();
        const int count = line_count();
        for (int line = 0; line < count; ++line) {
            for (int k = 0; k < len; ++k) {
                const std::size_t p = node(line, k);
                cplx r = wall_[p] ? cplx{} : psi[p] - kI * half_ * diag_[p] * psi[p];
                if (!wall_[p] && k + 1 < len) r -= kI * half_ * upper_[p] * psi[node(line, k + 1)];
                if (!wall_[p] && k > 0) r -= kI * half_ * lower_[p] * psi[node(line, k - 1)];
                rhs_values[p] = r;
            }
        }
        std::vector<cplx> x(psi.begin(), psi.end());
        std::vector<cplx> scratch;
        apply(x, scratch);
        double worst = 0.0;
        for (int line = 0; line < count; ++line) {
            double res2 = 0.0;
            double rhs2 = 0.0;
            for (int k = 0; k < len; ++k) {
                const std::size_t p = node(line, k);
                cplx ax = wall_[p] ? x[p] : x[p] + kI * half_ * diag_[p] * x[p];
                if (k + 1 < len) ax += kI * half_ * upper_[p] * x[node(line, k + 1)];
                if (k > 0) ax += kI * half_ * lower_[p] * x[node(line, k - 1)];
                res2 += std::norm(ax - rhs_values[p]);
                rhs2 += std::norm(rhs_values[p]);
            }
            if (rhs2 > 0.0) worst = std::max(worst, std::sqrt(res2 / rhs2));
        }
        return worst;
    }

private:
    int line_length() const { return axis_ == Axis::x ? grid_.nx : grid_.ny; }
    int line_count() const { return axis_ == Axis::x ? grid_.ny : grid_.nx; }
    std::size_t node(int line, int k) const {
        return axis_ == Axis::x ? grid_.index(k, line) : grid_.index(line, k);
    }
    double link(const GaugeField& gauge, int line, int k) const {
        return axis_ == Axis::x ? gauge.link_x(k, line) : gauge.link_y(line, k);
    }

    // (1 - i tau H / 2) psi at line position k; `base` points at position 0 of
    // the line and `stride` is the node distance between positions.
    cplx rhs(const cplx* base, int k, int len, std::size_t p, std::size_t stride) const {
        if (wall_[p]) return {};
        const cplx self = base[static_cast<std::size_t>(k) * stride];
        cplx h = diag_[p] * self;
        if (k + 1 < len) h += upper_[p] * base[static_cast<std::size_t>(k + 1) * stride];
        if (k > 0) h += lower_[p] * base[static_cast<std::size_t>(k - 1) * stride];
        return self - kI * half_ * h;
    }

    Grid2D grid_;
    Axis axis_;
    double half_ = 0.0;
    std::vector<double> diag_;
    std::vector<cplx> upper_;
    std::vector<cplx> lower_;
    std::vector<cplx> cprime_;
    std::vector<cplx> inv_denom_;
    std::vector<std::uint8_t> wall_;
};

}  // namespace

int step_count(const PropagatorConfig& cfg) {
    if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) throw ConfigError("dt must be positive");
    if (!(cfg.t_end >= 0.0) || !std::isfinite(cfg.t_end)) {
        throw ConfigError("t_end must be non-negative");
    }
    if (!(cfg.solver_tolerance > 0.0) || cfg.solver_tolerance > 1e-10) {
        throw ConfigError("solver_tolerance must lie in (0, 1e-10]");
    }
    if (cfg.sample_every < 1) throw ConfigError("sample_every must be at least 1");
    return lattice_steps(cfg.t_end, cfg.dt, "t_end");
}

LatticeRun evolve_lattice(const WaveField& f, const GaugeField& gauge, const PropagatorConfig& cfg,
                          const SampleCallback& on_sample, const SnapshotCallback& on_snapshot) {
    if (!(f.grid() == gauge.grid())) throw ConfigError("evolve_lattice: grid mismatch");
    const Grid2D& g = f.grid();
    if (!cfg.mask.empty() && cfg.mask.size() != g.size()) {
        throw ConfigError("evolve_lattice: mask does not match the grid");
    }
    const int steps = step_count(cfg);

    std::vector<int> snapshot_steps;
    for (double t : cfg.snapshot_times) {
        if (t < 0.0 || t > cfg.t_end + 1e-12) {
            throw ConfigError("snapshot time outside [0, t_end]");
        }
        snapshot_steps.push_back(static_cast<int>(std::lround(t / cfg.dt)));
    }
    std::sort(snapshot_steps.begin(), snapshot_steps.end());

    WaveField state = f;
    auto psi = state.mutable_amplitudes();
    if (!cfg.mask.empty()) {
        for (std::size_t k = 0; k < psi.size(); ++k) {
            if (cfg.mask[k]) psi[k] = cplx{};
        }
    }
    const double norm0 = norm_squared(state);

    const CayleySweep half_x(gauge, cfg.mask, CayleySweep::Axis::x, 0.5 * cfg.dt);
    const CayleySweep full_y(gauge, cfg.mask, CayleySweep::Axis::y, cfg.dt);

    LatticeRun run;
    run.steps = steps;
    run.solver_residual =
        std::max(half_x.audit_residual(psi), full_y.audit_residual(psi));
    if (!(run.solver_residual <= cfg.solver_tolerance)) {
        std::ostringstream msg;
        msg << "tridiagonal solve residual " << run.solver_residual << " exceeds tolerance "
            << cfg.solver_tolerance;
        throw NumericalError(msg.str());
    }

    auto check = [&](double t) {
        const double drift = std::abs(norm_squared(state) - norm0);
        run.norm_drift = std::max(run.norm_drift, drift);
        if (drift > cfg.norm_tolerance) {
            std::ostringstream msg;
            msg << "norm drift " << drift << " at t = " << t << " exceeds " << cfg.norm_tolerance;
            throw NumericalError(msg.str());
        }
        const double edge = boundary_amplitude(state);
        run.max_boundary_amplitude = std::max(run.max_boundary_amplitude, edge);
        if (edge > cfg.boundary_tolerance) {
            std::ostringstream msg;
            msg << "boundary amplitude " << edge << " at t = " << t << " exceeds "
                << cfg.boundary_tolerance << " (domain too small)";
            throw NumericalError(msg.str());
        }
    };

    std::size_t next_snapshot = 0;
    auto deliver = [&](int step) {
        const double t = step * cfg.dt;
        while (next_snapshot < snapshot_steps.size() && snapshot_steps[next_snapshot] == step) {
            if (on_snapshot) on_snapshot(t, state);
            ++next_snapshot;
        }
    };

    check(0.0);
    if (on_sample) on_sample(0.0, state);
    deliver(0);

    std::vector<cplx> scratch;
    for (int step = 1; step <= steps; ++step) {
        half_x.apply(psi, scratch);
        full_y.apply(psi, scratch);
        half_x.apply(psi, scratch);
        const double t = step * cfg.dt;
        if (step % cfg.sample_every == 0 || step == steps) {
            check(t);
            if (on_sample) on_sample(t, state);
        }
        deliver(step);
    }
    check(cfg.t_end);
    run.final_field = std::move(state);
    return run;
}

}  // namespace abq
