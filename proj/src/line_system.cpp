#include "abq/errors.hpp"
#include "abq/observables.hpp"
#include "abq/propagators.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace abq {

namespace {

constexpr cplx kI{0.0, 1.0};

void validate_line_grid(const LineGrid& grid) {
    if (grid.n < 16) throw ConfigError("line grid needs at least 16 nodes");
    if (!(grid.dy > 0.0) || !std::isfinite(grid.dy) || !std::isfinite(grid.y0)) {
        throw ConfigError("line grid spacing must be positive and origin finite");
    }
}

std::vector<double> branch_links(const LineSystemState& s, int n) {
    const auto len = static_cast<std::size_t>(s.grid.n);
    std::vector<double> links(len - 1);
    for (std::size_t k = 0; k + 1 < len; ++k) {
        const int j = static_cast<int>(k);
        links[k] = line_gauge_phase(s.mu, n, s.offset, s.grid.y(j), s.grid.y(j + 1));
    }
    return links;
}

double branch_mass(const LineBranch& b, double dy) {
    double sum = 0.0;
    for (const cplx& a : b.amp) sum += std::norm(a);
    return sum * dy;
}

// Crank-Nicolson factor for one branch with a precomputed Thomas factorization.
class BranchStepper {
public:
    BranchStepper(const std::vector<double>& links, double dy, double dt) : half_(0.5 * dt) {
        const std::size_t n = links.size() + 1;
        diag_ = 1.0 / (dy * dy);
        upper_.assign(n, cplx{});
        lower_.assign(n, cplx{});
        const double hop = -0.5 / (dy * dy);
        for (std::size_t k = 0; k + 1 < n; ++k) {
            upper_[k] = hop * std::polar(1.0, -links[k]);
            lower_[k + 1] = hop * std::polar(1.0, links[k]);
        }
        cprime_.resize(n);
        inv_denom_.resize(n);
        const cplx b = 1.0 + kI * half_ * diag_;
        cplx prev{};
        for (std::size_t k = 0; k < n; ++k) {
            const cplx denom = k == 0 ? b : b - kI * half_ * lower_[k] * prev;
            inv_denom_[k] = 1.0 / denom;
            cprime_[k] = kI * half_ * upper_[k] * inv_denom_[k];
            prev = cprime_[k];
        }
        scratch_.resize(n);
    }

    void apply(std::vector<cplx>& psi) {
        const std::size_t n = psi.size();
        cplx prev{};
        for (std::size_t k = 0; k < n; ++k) {
            cplx h = diag_ * psi[k];
            if (k + 1 < n) h += upper_[k] * psi[k + 1];
            if (k > 0) h += lower_[k] * psi[k - 1];
            const cplx r = psi[k] - kI * half_ * h;
            prev = (r - kI * half_ * lower_[k] * prev) * inv_denom_[k];
            scratch_[k] = prev;
        }
        cplx next{};
        for (std::size_t k = n; k-- > 0;) {
            next = scratch_[k] - cprime_[k] * next;
            psi[k] = next;
        }
    }

private:
    double half_;
    double diag_ = 0.0;
    std::vector<cplx> upper_;
    std::vector<cplx> lower_;
    std::vector<cplx> cprime_;
    std::vector<cplx> inv_denom_;
    std::vector<cplx> scratch_;
};

}  // namespace

double line_gauge_phase(double mu, int n, double offset, double ya, double yb) {
    return mu * n * (std::asinh(yb / offset) - std::asinh(ya / offset));
}

LineSystemState make_line_state(const LineGrid& grid, double offset, double mu,
                                double cylinder_inertia,
                                const std::vector<std::pair<int, cplx>>& weights,
                                const LinePacket& packet) {
    validate_line_grid(grid);
    if (!(offset > 0.0) || !std::isfinite(offset)) throw ConfigError("offset d must be positive");
    if (!std::isfinite(mu)) throw ConfigError("mu must be finite");
    if (!(cylinder_inertia > 0.0)) throw ConfigError("cylinder inertia must be positive");
    if (weights.empty()) throw ConfigError("line state needs at least one cylinder branch");
    if (!(packet.sigma > 2.0 * grid.dy)) {
        throw ConfigError("line packet width is under-resolved (need sigma > 2 dy)");
    }
    double total = 0.0;
    for (std::size_t a = 0; a < weights.size(); ++a) {
        for (std::size_t b = a + 1; b < weights.size(); ++b) {
            if (weights[a].first == weights[b].first) {
                throw ConfigError("line state lists a cylinder branch twice");
            }
        }
        total += std::norm(weights[a].second);
    }
    if (!(total > 0.0)) throw ConfigError("line state branch weights vanish");

    auto envelope = [&](double y) {
        const double u = (y - packet.center) / packet.sigma;
        return std::exp(-0.25 * u * u);
    };
    const double y_last = grid.y(grid.n - 1);
    if (std::max(envelope(grid.y0), envelope(y_last)) >= 1e-10) {
        throw ConfigError("line packet tail at the grid boundary exceeds 1e-10 of its peak");
    }
    std::vector<cplx> g(static_cast<std::size_t>(grid.n));
    double g_norm = 0.0;
    for (int j = 0; j < grid.n; ++j) {
        const double y = grid.y(j);
        g[static_cast<std::size_t>(j)] = envelope(y) * std::polar(1.0, packet.momentum * y);
        g_norm += std::norm(g[static_cast<std::size_t>(j)]);
    }
    const double g_scale = 1.0 / std::sqrt(g_norm * grid.dy);

    LineSystemState s;
    s.grid = grid;
    s.offset = offset;
    s.mu = mu;
    s.cylinder_inertia = cylinder_inertia;
    for (const auto& [n, w] : weights) {
        LineBranch b;
        b.n = n;
        b.amp.resize(g.size());
        const cplx weight = w / std::sqrt(total) * g_scale;
        for (int j = 0; j < grid.n; ++j) {
            // Node phase chi_j = mu n asinh(y_j / d): a pure gauge dressing of g.
            const double chi = line_gauge_phase(mu, n, offset, 0.0, grid.y(j));
            b.amp[static_cast<std::size_t>(j)] =
                weight * std::polar(1.0, chi) * g[static_cast<std::size_t>(j)];
        }
        s.branches.push_back(std::move(b));
    }
    return s;
}

double line_norm_squared(const LineSystemState& s) {
    double total = 0.0;
    for (const auto& b : s.branches) total += branch_mass(b, s.grid.dy);
    return total;
}

LineSample measure_line(const LineSystemState& s, double t) {
    LineSample out;
    out.t = t;
    const double dy = s.grid.dy;
    const auto len = static_cast<std::size_t>(s.grid.n);
    std::vector<cplx> deriv(len);
    double total_mass = 0.0;
    double inv_r_sum = 0.0;
    double v_over_r_sum = 0.0;
    for (const auto& b : s.branches) {
        const std::vector<double> links = branch_links(s, b.n);
        covariant_derivative_line(b.amp, links, dy, deriv);
        double mass = 0.0;
        double ysum = 0.0;
        double vsum = 0.0;
        for (std::size_t k = 0; k < len; ++k) {
            const double y = s.grid.y(static_cast<int>(k));
            const double rho = std::norm(b.amp[k]);
            const double flux = std::imag(std::conj(b.amp[k]) * deriv[k]);
            const double inv_r = 1.0 / std::hypot(s.offset, y);
            mass += rho;
            ysum += rho * y;
            vsum += flux;
            inv_r_sum += rho * inv_r;
            v_over_r_sum += flux * inv_r;
        }
        total_mass += mass;
        out.mass.push_back(mass * dy);
        out.position.push_back(mass > 0.0 ? ysum / mass : 0.0);
        out.velocity.push_back(mass > 0.0 ? vsum / mass : 0.0);
    }
    out.inv_r = total_mass > 0.0 ? inv_r_sum / total_mass : 0.0;
    out.v_over_r = total_mass > 0.0 ? v_over_r_sum / total_mass : 0.0;
    if (s.branches.size() >= 2) {
        const auto& c0 = s.branches[0].amp;
        const auto& c1 = s.branches[1].amp;
        cplx inner{};
        for (std::size_t k = 0; k < len; ++k) inner += std::conj(c0[k]) * c1[k];
        const double denom = std::sqrt(out.mass[0] * out.mass[1]);
        out.overlap = denom > 0.0 ? inner * dy / denom : cplx{};
    } else {
        out.overlap = 1.0;
    }
    return out;
}

LineRun evolve_line_system(const LineSystemState& state, const PropagatorConfig& cfg) {
    validate_line_grid(state.grid);
    const int steps = step_count(cfg);
    const double norm0 = line_norm_squared(state);
    if (std::abs(norm0 - 1.0) > 1e-12) {
        throw ConfigError("line system state must be normalized to 1 within 1e-12");
    }

    LineRun run;
    run.final_state = state;
    std::vector<BranchStepper> steppers;
    steppers.reserve(state.branches.size());
    for (const auto& b : state.branches) {
        if (b.amp.size() != static_cast<std::size_t>(state.grid.n)) {
            throw ConfigError("line branch size does not match its grid");
        }
        steppers.emplace_back(branch_links(state, b.n), state.grid.dy, cfg.dt);
    }
    std::vector<double> mass0;
    for (const auto& b : state.branches) mass0.push_back(branch_mass(b, state.grid.dy));

    auto check = [&](const LineSystemState& s, double t) {
        const double drift = std::abs(line_norm_squared(s) - norm0);
        run.norm_drift = std::max(run.norm_drift, drift);
        if (drift > cfg.norm_tolerance) {
            std::ostringstream msg;
            msg << "line system norm drift " << drift << " at t = " << t;
            throw NumericalError(msg.str());
        }
        for (std::size_t b = 0; b < s.branches.size(); ++b) {
            const auto& amp = s.branches[b].amp;
            const double loss = std::abs(branch_mass(s.branches[b], s.grid.dy) - mass0[b]);
            if (loss > cfg.norm_tolerance) {
                std::ostringstream msg;
                msg << "branch n = " << s.branches[b].n << " mass changed by " << loss
                    << " at t = " << t;
                throw NumericalError(msg.str());
            }
            const double edge = std::max(std::abs(amp.front()), std::abs(amp.back()));
            if (edge > cfg.boundary_tolerance) {
                std::ostringstream msg;
                msg << "line boundary amplitude " << edge << " at t = " << t
                    << " (domain too small)";
                throw NumericalError(msg.str());
            }
        }
    };

    LineSystemState& s = run.final_state;
    check(s, 0.0);
    LineSample prev = measure_line(s, 0.0);
    run.samples.push_back(prev);
    double phi_c = 0.0;
    // Integrand of delta phi_c: -mu <v_y> <1/r>, with <v_y> the branch-mass
    // weighted mean velocity. Integrated by the trapezoid rule on every step.
    auto integrand = [&](const LineSample& m) {
        double v = 0.0;
        for (std::size_t b = 0; b < m.velocity.size(); ++b) v += m.mass[b] * m.velocity[b];
        return -s.mu * v * m.inv_r;
    };
    for (int step = 1; step <= steps; ++step) {
        for (std::size_t b = 0; b < s.branches.size(); ++b) steppers[b].apply(s.branches[b].amp);
        const double t = step * cfg.dt;
        LineSample cur = measure_line(s, t);
        phi_c += 0.5 * cfg.dt * (integrand(prev) + integrand(cur));
        cur.delta_phi_c = phi_c;
        if (step % cfg.sample_every == 0 || step == steps) {
            check(s, t);
            run.samples.push_back(cur);
        }
        prev = std::move(cur);
    }
    return run;
}

}  // namespace abq
