#include "abq/errors.hpp"
#include "abq/observables.hpp"
#include "abq/propagators.hpp"
#include "abq/rotor.hpp"
#include "abq/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace abq {

namespace {

double total_position(const LineSample& s) {
    double y = 0.0;
    for (std::size_t b = 0; b < s.mass.size(); ++b) y += s.mass[b] * s.position[b];
    return y;
}

double total_velocity(const LineSample& s) {
    double v = 0.0;
    for (std::size_t b = 0; b < s.mass.size(); ++b) v += s.mass[b] * s.velocity[b];
    return v;
}

// Cylinder reduced density matrix of the two-branch state:
// rho(n, n') = integral c_n conj(c_n') dy.
double branch_entropy(const LineSample& s) {
    const double m0 = s.mass[0];
    const double m1 = s.mass[1];
    const cplx off = std::conj(s.overlap) * std::sqrt(m0 * m1);
    Eigen::Matrix2cd rho;
    rho << m0, off, std::conj(off), m1;
    return von_neumann_entropy(rho);
}

// <v^2> = sum_n integral |D c_n|^2 dy, constant under the evolution.
double mean_square_velocity(const LineSystemState& s) {
    double sum = 0.0;
    const auto len = static_cast<std::size_t>(s.grid.n);
    std::vector<cplx> deriv(len);
    std::vector<double> links(len - 1);
    for (const auto& b : s.branches) {
        for (std::size_t k = 0; k + 1 < len; ++k) {
            const int j = static_cast<int>(k);
            links[k] = line_gauge_phase(s.mu, b.n, s.offset, s.grid.y(j), s.grid.y(j + 1));
        }
        covariant_derivative_line(b.amp, links, s.grid.dy, deriv);
        for (const cplx& d : deriv) sum += std::norm(d);
    }
    return sum * s.grid.dy;
}

// Branch n is e^{i mu n asinh(y/d)} times the neutral packet, so the overlap
// phase is arg integral |g|^2 e^{i mu (n1 - n0) asinh(y/d)} dy with g taken
// from the independently evolved neutral run.
double pure_gauge_overlap_phase(const LineSystemState& neutral, double mu, int dn, double d) {
    cplx sum = 0.0;
    const auto& amp = neutral.branches[0].amp;
    for (std::size_t k = 0; k < amp.size(); ++k) {
        const double y = neutral.grid.y(static_cast<int>(k));
        sum += std::norm(amp[k]) * std::polar(1.0, mu * dn * std::asinh(y / d));
    }
    return std::arg(sum);
}

}  // namespace

ScenarioReport run_continuous_aspect(const ScenarioConfig& c) {
    ScenarioReport r;
    r.scenario = c.scenario;
    r.params = config_echo(c);
    if (c.n0 == c.n1) throw ConfigError("n0 and n1 must be different cylinder branches");

    const LineGrid grid{c.line_nodes, c.line_dy, c.line_y0};
    const LinePacket packet{c.line_center, c.line_sigma, c.line_momentum};
    const double w = 1.0 / std::sqrt(2.0);
    const std::vector<std::pair<int, cplx>> weights{{c.n0, w}, {c.n1, w}};
    const LineSystemState charged =
        make_line_state(grid, c.offset_d, c.mu, c.cylinder_inertia, weights, packet);
    const LineSystemState neutral =
        make_line_state(grid, c.offset_d, 0.0, c.cylinder_inertia, weights, packet);

    PropagatorConfig p;
    p.dt = c.dt;
    p.t_end = c.t_end;
    p.sample_every = c.sample_every;
    p.norm_tolerance = c.norm_tolerance;
    p.boundary_tolerance = c.boundary_tolerance;
    const LineRun run_c = evolve_line_system(charged, p);
    const LineRun run_n = evolve_line_system(neutral, p);
    const double domain = (grid.n - 1) * grid.dy;

    TimeSeries ts;
    ts.name = "line";
    ts.columns = {"y_charged", "y_neutral",   "v_charged", "v_branch0",   "v_branch1",
                  "overlap_abs", "overlap_arg", "inv_r",   "v_over_r",    "delta_phi_c",
                  "entropy"};
    std::vector<double> arg_raw;
    for (const auto& s : run_c.samples) arg_raw.push_back(std::arg(s.overlap));
    const std::vector<double> arg = unwrap_phase(arg_raw);

    double lag = 0.0;
    double v_drift = 0.0;
    double max_step = 0.0;
    double max_dev_from_one = 0.0;
    double entropy_max = 0.0;
    double integral_v_over_r = 0.0;
    double integral_factorized = 0.0;
    const double v0 = total_velocity(run_c.samples.front());
    for (std::size_t k = 0; k < run_c.samples.size(); ++k) {
        const LineSample& s = run_c.samples[k];
        const LineSample& sn = run_n.samples[k];
        const double yc = total_position(s);
        const double yn = total_position(sn);
        const double v = total_velocity(s);
        const double entropy = branch_entropy(s);
        lag = std::max(lag, std::abs(yc - yn));
        v_drift = std::max(v_drift, std::abs(v - v0));
        for (std::size_t b = 0; b < s.velocity.size(); ++b) {
            v_drift = std::max(v_drift, std::abs(s.velocity[b] - run_c.samples.front().velocity[b]));
        }
        max_dev_from_one = std::max(max_dev_from_one, std::abs(s.overlap - 1.0));
        entropy_max = std::max(entropy_max, entropy);
        if (k > 0) {
            const LineSample& prev = run_c.samples[k - 1];
            max_step = std::max(max_step, std::abs(s.overlap - prev.overlap));
            const double dt = s.t - prev.t;
            integral_v_over_r += 0.5 * dt * (s.v_over_r + prev.v_over_r);
            integral_factorized +=
                0.5 * dt * (v * s.inv_r + total_velocity(prev) * prev.inv_r);
        }
        ts.add(s.t, {yc, yn, v, s.velocity[0], s.velocity[1], std::abs(s.overlap), arg[k] - arg[0],
                     s.inv_r, s.v_over_r, s.delta_phi_c, entropy});
    }
    r.series.push_back(std::move(ts));

    r.check("norm_drift[charged]", run_c.norm_drift, c.norm_tolerance);
    r.check("norm_drift[neutral]", run_n.norm_drift, c.norm_tolerance);
    r.check("velocity_constant", v_drift, 1e-8, Comparison::at_most,
            "max |<v_y>(t) - <v_y>(0)|, total and per branch");
    {
        std::ostringstream d;
        d << "max |<y>_charged - <y>_neutral| against 1e-8 x domain length " << domain;
        r.check("no_charged_neutral_lag", lag, 1e-8 * domain, Comparison::at_most, d.str());
    }

    // Each branch is a gauge copy of the neutral packet: densities must agree.
    double density_gap = 0.0;
    for (std::size_t b = 0; b < run_c.final_state.branches.size(); ++b) {
        const auto& ac = run_c.final_state.branches[b].amp;
        const auto& an = run_n.final_state.branches[b].amp;
        for (std::size_t k = 0; k < ac.size(); ++k) {
            density_gap = std::max(density_gap, std::abs(std::norm(ac[k]) - std::norm(an[k])));
        }
    }
    r.check("branch_densities_match_free_evolution", density_gap, 1e-8, Comparison::at_most,
            "max pointwise density difference at t_end");

    // |d/dt <c0|c1>| <= mu |n1 - n0| sqrt(<v^2>) / d, so one sample interval
    // can move the overlap by at most that times the interval.
    const double bound_rate =
        std::abs(c.mu * (c.n1 - c.n0)) * std::sqrt(mean_square_velocity(charged)) / c.offset_d;
    const double interval = c.dt * c.sample_every;
    r.events.push_back({"overlap_rate_bound", 0.0, bound_rate});
    r.check("overlap_continuous", max_step, bound_rate * interval, Comparison::at_most,
            "largest overlap change between samples against the rate bound times the interval");

    const int dn = c.n1 - c.n0;
    const double phase_change = wrap_angle(arg_raw.back() - arg_raw.front());
    const double oracle =
        wrap_angle(pure_gauge_overlap_phase(run_n.final_state, c.mu, dn, c.offset_d) -
                   pure_gauge_overlap_phase(neutral, c.mu, dn, c.offset_d));
    const double first_order = c.mu * dn * integral_v_over_r;
    r.events.push_back({"branch_phase_change", c.t_end, phase_change});
    r.events.push_back({"branch_phase_pure_gauge", c.t_end, oracle});
    r.events.push_back({"branch_phase_first_order", c.t_end, first_order});
    r.events.push_back({"branch_phase_first_order_factorized", c.t_end,
                        c.mu * dn * integral_factorized});
    r.events.push_back({"branch_phase_first_order_error", c.t_end,
                        std::abs(wrap_angle(phase_change - first_order))});
    r.check("branch_phase_matches_gauge_oracle", std::abs(wrap_angle(phase_change - oracle)), 1e-4,
            Comparison::at_most,
            "arg <c0|c1> change against the pure-gauge phase of the neutral density");
    r.events.push_back({"delta_phi_c", c.t_end, run_c.samples.back().delta_phi_c});
    r.events.push_back({"entropy_max", c.t_end, entropy_max});
    if (c.mu == 0.0) {
        r.check("decoupled_overlap_stays_unity", max_dev_from_one, 1e-12);
        r.check("decoupled_lag_vanishes", lag, 0.0);
    }
    return r;
}

}  // namespace abq
