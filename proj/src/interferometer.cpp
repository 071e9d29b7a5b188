// Two-packet interferometer around a thin solenoid: the instantaneous-aspect
// scenario, the flux-quantum sweep and the two-gauge audit.

#include "abq/errors.hpp"
#include "abq/observables.hpp"
#include "abq/propagators.hpp"
#include "abq/rotor.hpp"
#include "abq/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>

namespace abq {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Free stages of the lattice run: the crossed fraction of the right packet is
// within this distance of 0 (before) or 1 (after).
constexpr double kFreeStageFraction = 1e-4;

Grid2D lattice_grid(const ScenarioConfig& c) {
    return make_grid(c.nx, c.ny, c.dx, c.dy, c.x0, c.y0);
}

std::pair<WaveField, WaveField> make_packets(const ScenarioConfig& c, const Grid2D& g) {
    const Vec2 sigma{c.sigma_x, c.sigma_y};
    const Vec2 k{0.0, -c.momentum};
    return {gaussian_packet(g, {-c.packet_x, c.packet_y}, sigma, k),
            gaussian_packet(g, {c.packet_x, c.packet_y}, sigma, k)};
}

PropagatorConfig propagator_config(const ScenarioConfig& c) {
    PropagatorConfig p;
    p.dt = c.dt;
    p.t_end = c.t_end;
    p.sample_every = c.sample_every;
    p.norm_tolerance = c.norm_tolerance;
    p.boundary_tolerance = c.boundary_tolerance;
    return p;
}

// Per-sample record of one interferometer run.
struct Trace {
    std::vector<double> t;
    std::vector<double> abs_m;
    std::vector<double> arg_m;
    std::vector<double> crossed;   // mass(x > 0, y < 0) / mass(x > 0)
    std::vector<double> centroid;  // <y> over x > 0
    WaveField final_field;
    double norm_drift = 0.0;
    double boundary = 0.0;
    double solver_residual = 0.0;
    bool kicked = false;
    double crossing_time = kNaN;
    double kick_time = kNaN;
    double mutual_mass = 0.0;

    void record(double time, const WaveField& f, double modular_length) {
        const cplx m = modular_momentum_expectation(f, modular_length);
        const Grid2D& g = f.grid();
        const auto amp = f.amplitudes();
        double right = 0.0;
        double below = 0.0;
        double ysum = 0.0;
        for (int j = 0; j < g.ny; ++j) {
            const double y = g.y(j);
            for (int i = 0; i < g.nx; ++i) {
                if (!(g.x(i) > 0.0)) continue;
                const double rho = std::norm(amp[g.index(i, j)]);
                right += rho;
                ysum += rho * y;
                if (y < 0.0) below += rho;
            }
        }
        t.push_back(time);
        abs_m.push_back(std::abs(m));
        arg_m.push_back(std::arg(m));
        crossed.push_back(right > 0.0 ? below / right : kNaN);
        centroid.push_back(right > 0.0 ? ysum / right : kNaN);
    }
};

std::string lattice_key(const ScenarioConfig& c, double alpha) {
    std::ostringstream k;
    for (double v : {c.dx, c.dy, c.x0, c.y0, c.packet_x, c.packet_y, c.sigma_x, c.sigma_y,
                     c.momentum, c.modular_length, c.core_radius, c.dt, c.t_end, c.norm_tolerance,
                     c.boundary_tolerance, alpha}) {
        k << format_double(v) << ';';
    }
    k << c.nx << ';' << c.ny << ';' << c.sample_every;
    return k.str();
}

// Lattice runs are the expensive part and several scenarios (and the
// acceptance suite) need the same flux values, so finished runs are shared.
std::shared_ptr<const Trace> lattice_run(const ScenarioConfig& c, double alpha) {
    static std::mutex mutex;
    static std::map<std::string, std::shared_ptr<const Trace>> cache;
    const std::string key = lattice_key(c, alpha);
    {
        std::lock_guard lock(mutex);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    const Grid2D g = lattice_grid(c);
    const auto [left, right] = make_packets(c, g);
    PropagatorConfig p = propagator_config(c);
    p.mask = core_mask(g, c.core_radius);
    auto trace = std::make_shared<Trace>();
    const LatticeRun run =
        evolve_lattice(superpose(left, right, 1.0, 1.0, 0.0), string_gauge(g, alpha), p,
                       [&](double t, const WaveField& f) { trace->record(t, f, c.modular_length); });
    trace->final_field = run.final_field;
    trace->norm_drift = run.norm_drift;
    trace->boundary = run.max_boundary_amplitude;
    trace->solver_residual = run.solver_residual;
    // Centroid crossing of the right packet, interpolated between samples.
    for (std::size_t k = 0; k + 1 < trace->t.size(); ++k) {
        const double a = trace->centroid[k];
        const double b = trace->centroid[k + 1];
        if (a > 0.0 && b <= 0.0) {
            trace->crossing_time = trace->t[k] + (trace->t[k + 1] - trace->t[k]) * a / (a - b);
            break;
        }
    }
    std::lock_guard lock(mutex);
    return cache.emplace(key, std::move(trace)).first->second;
}

std::shared_ptr<const Trace> staged_run(const ScenarioConfig& c, double alpha, bool with_samples) {
    const Grid2D g = lattice_grid(c);
    const auto [left, right] = make_packets(c, g);
    auto trace = std::make_shared<Trace>();
    SampleCallback sampler;
    if (with_samples) {
        sampler = [&](double t, const WaveField& f) { trace->record(t, f, c.modular_length); };
    }
    const StagedRun run = evolve_staged(left, right, alpha, propagator_config(c), c.dispersion, sampler);
    trace->final_field = run.final_field;
    trace->norm_drift = run.norm_drift;
    trace->kicked = run.kicked;
    trace->crossing_time = run.crossing_time;
    trace->kick_time = run.kick_time;
    trace->mutual_mass = run.mutual_mass;
    return trace;
}

double density_distance(const WaveField& a, const WaveField& b) {
    return l2_distance(density(a), density(b));
}

bool multiple_of_two_pi(double alpha) { return std::abs(wrap_angle(alpha)) < 1e-12; }

// Fringe-shift tolerance: 2% of the expected (wrapped) shift, floored so that a
// zero expectation still has a finite band.
double shift_tolerance(double expected) { return std::max(0.02 * std::abs(expected), 1e-3); }

double expected_shift(double alpha) { return wrap_angle(alpha) / (2.0 * kPi); }

double fringe_search_floor(const ScenarioConfig& c) {
    const double tau = c.t_end / (2.0 * c.sigma_x * c.sigma_x);
    const double sigma_final = c.sigma_x * std::sqrt(1.0 + tau * tau);
    return 3.0 / sigma_final;
}

struct EngineOutcome {
    std::string label;
    std::shared_ptr<const Trace> trace;
    std::shared_ptr<const Trace> reference;  // alpha = 0, same engine
};

struct EngineSummary {
    double jump = kNaN;
    double shift = kNaN;
    double crossing_time = kNaN;
};

EngineSummary analyze_engine(ScenarioReport& r, const EngineOutcome& e, double alpha,
                             double wavenumber, const ScenarioConfig& c) {
    const Trace& tr = *e.trace;
    const std::string tag = "[" + e.label + "]";
    const bool staged = e.label == "staged";
    EngineSummary s;
    s.crossing_time = tr.crossing_time;
    const double window = c.sigma_y / c.momentum;
    const std::size_t n = tr.t.size();

    r.events.push_back({"crossing_time" + tag, tr.crossing_time, tr.crossing_time});
    if (staged && tr.kicked) {
        r.events.push_back({"kick" + tag, tr.kick_time, wrap_angle(alpha)});
        r.events.push_back({"mutual_mass_at_kick" + tag, tr.kick_time, tr.mutual_mass});
    }

    // (a) argument flat outside the crossing window.
    double drift = 0.0;
    if (std::isfinite(tr.crossing_time)) {
        for (std::size_t k = 0; k < n; ++k) {
            if (tr.t[k] < tr.crossing_time - 0.5 * window) {
                drift = std::max(drift, std::abs(wrap_angle(tr.arg_m[k] - tr.arg_m.front())));
            } else if (tr.t[k] > tr.crossing_time + 0.5 * window) {
                drift = std::max(drift, std::abs(wrap_angle(tr.arg_m[k] - tr.arg_m.back())));
            }
        }
    } else {
        drift = kNaN;
    }
    {
        std::ostringstream d;
        d << "max |arg M - arg M(0)| before and |arg M - arg M(t_end)| after the window "
          << "[t_c - w/2, t_c + w/2], w = sigma_y / k = " << window;
        r.check("argument_flat_outside_crossing_window" + tag, drift, 1e-3, Comparison::at_most,
                d.str());
    }

    // (b) jump magnitude.
    s.jump = wrap_angle(tr.arg_m.back() - tr.arg_m.front());
    r.events.push_back({"jump_magnitude" + tag, c.t_end, s.jump});
    r.check("jump_magnitude_equals_alpha" + tag, std::abs(wrap_angle(s.jump - alpha)), 1e-2,
            Comparison::at_most, "arg M(t_end) - arg M(0) against alpha, modulo 2 pi");

    // (c) jump time.
    const JumpEstimate est =
        estimate_jump(tr.t, unwrap_phase(tr.arg_m), 0.5 * tr.crossing_time);
    if (est.detected) r.events.push_back({"jump_time" + tag, est.time, est.end - est.start});
    if (multiple_of_two_pi(alpha)) {
        r.check("jump_time_within_window" + tag, est.detected ? 1.0 : 0.0, 0.0, Comparison::at_most,
                "alpha is a multiple of 2 pi: no jump may be detected (1 = spurious jump)");
    } else {
        r.check("jump_time_within_window" + tag,
                est.detected ? std::abs(est.time - tr.crossing_time) : kNaN, window,
                Comparison::at_most, "|jump-time estimate - centroid crossing time| within w");
    }

    // (d) fringe shift against the same engine's alpha = 0 run.
    s.shift = fringe_shift(tr.final_field, e.reference->final_field, wavenumber);
    const double expected = expected_shift(alpha);
    r.events.push_back({"fringe_shift" + tag, c.t_end, s.shift});
    r.check("fringe_shift_equals_alpha_over_2pi" + tag, std::abs(wrap_angle(2.0 * kPi * (s.shift - expected)) / (2.0 * kPi)),
            shift_tolerance(expected), Comparison::at_most,
            "fringes, modulo one fringe; tolerance 2% of the expected shift (floor 1e-3)");

    // Free-stage conservation of <e^{i p_x L}>.
    std::size_t stage1_end = 0;  // exclusive
    std::size_t stage3_begin = n;
    if (staged) {
        while (stage1_end < n && !(tr.kicked && tr.t[stage1_end] >= tr.kick_time - 1e-12)) ++stage1_end;
        stage3_begin = stage1_end;
    } else {
        while (stage1_end < n && tr.crossed[stage1_end] <= kFreeStageFraction) ++stage1_end;
        while (stage3_begin > 0 && tr.crossed[stage3_begin - 1] >= 1.0 - kFreeStageFraction) {
            --stage3_begin;
        }
    }
    double mod_drift = 0.0;
    double arg_drift = 0.0;
    auto scan = [&](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k) {
            mod_drift = std::max(mod_drift, std::abs(tr.abs_m[k] - tr.abs_m[begin]));
            arg_drift = std::max(arg_drift, std::abs(wrap_angle(tr.arg_m[k] - tr.arg_m[begin])));
        }
    };
    scan(0, stage1_end);
    scan(stage3_begin, n);
    const bool stages_found = stage1_end >= 2 && (n - stage3_begin >= 2 || (staged && !tr.kicked));
    if (!stages_found) {
        mod_drift = kNaN;
        arg_drift = kNaN;
    }
    const double stage_tol = staged ? 1e-6 : 1e-3;
    {
        std::ostringstream d;
        d << "free stages: t < " << (stage1_end < n ? tr.t[stage1_end] : c.t_end) << " and t >= "
          << (stage3_begin < n ? tr.t[stage3_begin] : c.t_end);
        r.check("free_stage_modulus_conserved" + tag, mod_drift, stage_tol, Comparison::at_most,
                d.str());
        r.check("free_stage_argument_conserved" + tag, arg_drift, stage_tol, Comparison::at_most,
                d.str());
    }

    if (!staged) {
        // Between the stages, M(t) follows M(0) ((1 - F) + F e^{i alpha}) with F
        // the crossed fraction; a direct check of where the phase comes from.
        double worst = 0.0;
        const cplx m0 = std::polar(tr.abs_m.front(), tr.arg_m.front());
        for (std::size_t k = 0; k < n; ++k) {
            const double f = tr.crossed[k];
            const cplx model = m0 * ((1.0 - f) + f * std::polar(1.0, alpha));
            const cplx m = std::polar(tr.abs_m[k], tr.arg_m[k]);
            worst = std::max(worst, std::abs(m - model));
        }
        r.events.push_back({"crossed_fraction_model_deviation" + tag, c.t_end, worst});
        r.events.push_back({"solver_residual" + tag, 0.0, tr.solver_residual});
        r.events.push_back({"max_boundary_amplitude" + tag, c.t_end, tr.boundary});
    }
    r.check("norm_drift" + tag, tr.norm_drift, c.norm_tolerance);
    return s;
}

bool wants(const std::string& engine, const char* which) {
    return engine == "both" || engine == which;
}

std::vector<EngineOutcome> run_engines(const ScenarioConfig& c, double alpha) {
    std::vector<EngineOutcome> out;
    if (wants(c.engine, "staged")) {
        auto trace = staged_run(c, alpha, true);
        auto reference = alpha == 0.0 ? trace : staged_run(c, 0.0, false);
        out.push_back({"staged", std::move(trace), std::move(reference)});
    }
    if (wants(c.engine, "lattice")) {
        out.push_back({"lattice", lattice_run(c, alpha), lattice_run(c, 0.0)});
    }
    return out;
}

void add_series(ScenarioReport& r, const std::string& name,
                const std::vector<std::pair<std::string, const std::vector<double>*>>& cols,
                const std::vector<double>& t) {
    TimeSeries ts;
    ts.name = name;
    for (const auto& [col, values] : cols) {
        if (values->size() != t.size()) throw NumericalError("sample grids of the engines differ");
        ts.columns.push_back(col);
    }
    for (std::size_t k = 0; k < t.size(); ++k) {
        std::vector<double> row;
        for (const auto& col : cols) row.push_back((*col.second)[k]);
        ts.add(t[k], std::move(row));
    }
    r.series.push_back(std::move(ts));
}

void record_params(ScenarioReport& r, const ScenarioConfig& c) {
    r.scenario = c.scenario;
    r.params = config_echo(c);
}

void validate_interferometer(const ScenarioConfig& c) {
    if (!(c.core_radius < c.packet_x)) throw ConfigError("core_radius must be smaller than packet_x");
    if (!(c.packet_y > 0.0)) throw ConfigError("packets must start above the string (packet_y > 0)");
}

}  // namespace

ScenarioReport run_instantaneous_aspect(const ScenarioConfig& c) {
    validate_interferometer(c);
    ScenarioReport r;
    record_params(r, c);
    const double alpha = c.alpha;
    const std::vector<EngineOutcome> engines = run_engines(c, alpha);

    const double wavenumber = fringe_wavenumber(engines.front().reference->final_field,
                                                fringe_search_floor(c));
    r.events.push_back({"fringe_wavenumber", c.t_end, wavenumber});

    std::vector<EngineSummary> summaries;
    for (const EngineOutcome& e : engines) summaries.push_back(analyze_engine(r, e, alpha, wavenumber, c));

    if (engines.size() == 2) {
        const WaveField& a = engines[0].trace->final_field;
        const WaveField& b = engines[1].trace->final_field;
        r.check("engines_agree_final_density", density_distance(a, b), 1e-3, Comparison::at_most,
                "L2 distance of staged and lattice final densities");
        const double dphase = wrap_angle(fringe_phase(a, wavenumber) - fringe_phase(b, wavenumber));
        r.check("engines_agree_fringe_position", std::abs(dphase) / wavenumber, 0.5 * c.dx,
                Comparison::at_most, "fringe displacement between engines, within half a cell");
    }
    if (multiple_of_two_pi(alpha)) {
        for (const EngineOutcome& e : engines) {
            r.check("pattern_matches_zero_flux[" + e.label + "]",
                    density_distance(e.trace->final_field, e.reference->final_field), 1e-3);
        }
    }

    std::vector<std::pair<std::string, const std::vector<double>*>> cols;
    for (const EngineOutcome& e : engines) {
        cols.push_back({e.label + "_abs_m", &e.trace->abs_m});
        cols.push_back({e.label + "_arg_m", &e.trace->arg_m});
        if (e.label == "lattice") {
            cols.push_back({"lattice_crossed_fraction", &e.trace->crossed});
            cols.push_back({"lattice_right_centroid_y", &e.trace->centroid});
        }
    }
    add_series(r, "modular_momentum", cols, engines.front().trace->t);
    for (const EngineOutcome& e : engines) {
        r.snapshots.push_back({e.label + "_final", c.t_end,
                               e.label == "lattice" && alpha != 0.0 ? GaugeKind::string
                                                                    : GaugeKind::zero,
                               e.trace->final_field});
    }
    return r;
}

ScenarioReport run_flux_quantization_sweep(const ScenarioConfig& c) {
    validate_interferometer(c);
    ScenarioReport r;
    record_params(r, c);
    const std::vector<double> alphas = quantized_flux_values(c.k_max);

    std::vector<std::vector<EngineOutcome>> runs;
    for (double alpha : alphas) runs.push_back(run_engines(c, alpha));
    const double wavenumber =
        fringe_wavenumber(runs.front().front().trace->final_field, fringe_search_floor(c));
    r.events.push_back({"fringe_wavenumber", c.t_end, wavenumber});

    std::vector<std::pair<std::string, const std::vector<double>*>> cols;
    for (std::size_t k = 0; k < alphas.size(); ++k) {
        for (std::size_t e = 0; e < runs[k].size(); ++e) {
            const EngineOutcome& eo = runs[k][e];
            const std::string tag = "[k=" + std::to_string(k) + "," + eo.label + "]";
            const double shift = fringe_shift(eo.trace->final_field, eo.reference->final_field, wavenumber);
            const double jump = wrap_angle(eo.trace->arg_m.back() - eo.trace->arg_m.front());
            r.events.push_back({"fringe_shift" + tag, c.t_end, shift});
            r.events.push_back({"jump_magnitude" + tag, c.t_end, jump});
            r.check("norm_drift" + tag, eo.trace->norm_drift, c.norm_tolerance);
            r.check("jump_magnitude_equals_alpha" + tag, std::abs(wrap_angle(jump - alphas[k])), 1e-2);
            const double expected = expected_shift(alphas[k]);
            r.check("fringe_shift_equals_alpha_over_2pi" + tag,
                    std::abs(wrap_angle(2.0 * kPi * (shift - expected))) / (2.0 * kPi),
                    shift_tolerance(expected));
            if (k >= 2) {
                const EngineOutcome& base = runs[k % 2][e];
                const double base_shift =
                    fringe_shift(base.trace->final_field, base.reference->final_field, wavenumber);
                r.check("fringe_shift_depends_on_k_mod_2" + tag,
                        std::abs(wrap_angle(2.0 * kPi * (shift - base_shift))) / (2.0 * kPi),
                        shift_tolerance(expected_shift(alphas[k % 2])), Comparison::at_most,
                        "against k mod 2");
                r.check("density_depends_on_k_mod_2" + tag,
                        density_distance(eo.trace->final_field, base.trace->final_field), 1e-3,
                        Comparison::at_most, "L2 distance of final densities against k mod 2");
            }
            cols.push_back({"arg_m_k" + std::to_string(k) + "_" + eo.label, &eo.trace->arg_m});
        }
    }
    add_series(r, "modular_argument", cols, runs.front().front().trace->t);

    // Flux quantization in the rotor model: a cylinder with a spread of L_c
    // carries both coupling terms; projecting onto one branch leaves only the
    // lambda <L_c> L_e part.
    RotorParams rp;
    rp.cylinder_inertia = c.cylinder_inertia;
    rp.electron_inertia = c.electron_inertia;
    rp.lambda = c.lambda;
    validate(rp);
    std::vector<cplx> cylinder(static_cast<std::size_t>(2 * c.n_max + 1));
    for (int n = -c.n_max; n <= c.n_max; ++n) {
        const double u = (n - c.cylinder_center) / c.cylinder_width;
        cylinder[static_cast<std::size_t>(n + c.n_max)] = std::exp(-u * u);
    }
    const RotorState spread =
        product_state(rp, cylinder, coherent_angular_state(c.phi0, c.delta_m, c.m_max));
    const CouplingReport before = coupling_decomposition(spread);
    const int n_q = static_cast<int>(std::lround(c.cylinder_center));
    const CouplingReport after = coupling_decomposition(quantize_flux(spread, n_q));
    r.events.push_back({"spread_cylinder_mean_lc", 0.0, before.mean_lc});
    r.events.push_back({"spread_cylinder_variance_lc", 0.0, before.variance_lc});
    r.events.push_back({"spread_cylinder_mean_fraction", 0.0, before.mean_fraction});
    r.events.push_back({"quantized_cylinder_mean_lc", 0.0, after.mean_lc});
    r.check("quantized_cylinder_fluctuation_vanishes", after.variance_lc, 1e-12);
    r.check("quantized_cylinder_phase_from_mean_coupling", std::abs(1.0 - after.mean_fraction), 1e-12,
            Comparison::at_most, "share of the coupling carried by lambda <L_c> L_e is 1");
    return r;
}

ScenarioReport run_gauge_invariance(const ScenarioConfig& c) {
    validate_interferometer(c);
    ScenarioReport r;
    record_params(r, c);
    const Grid2D g = lattice_grid(c);
    const auto [left, right] = make_packets(c, g);
    const WaveField psi = superpose(left, right, 1.0, 1.0, 0.0);

    const GaugeField string_links = string_gauge(g, c.alpha);
    const GaugeField symmetric_links = symmetric_gauge(g, c.alpha, c.core_radius);
    // The angular gauge function maps symmetric to string gauge; its inverse
    // carries the physical initial field into the symmetric gauge.
    GaugeFunction inverse = angular_gauge_function(g, c.alpha);
    for (double& v : inverse.chi) v = -v;
    const auto [psi_symmetric, transformed_links] = gauge_transform(psi, string_links, inverse);
    const WaveField start_symmetric = c.skip_gauge_transform ? psi : psi_symmetric;

    // How closely the transformed string links reproduce the symmetric links
    // away from the core.
    double link_gap = 0.0;
    for (int j = 0; j + 1 < g.ny; ++j) {
        for (int i = 0; i + 1 < g.nx; ++i) {
            if (std::hypot(g.x(i), g.y(j)) < c.core_radius + 2.0 * std::max(g.dx, g.dy)) continue;
            link_gap = std::max({link_gap,
                                 std::abs(wrap_angle(transformed_links.link_x(i, j) -
                                                     symmetric_links.link_x(i, j))),
                                 std::abs(wrap_angle(transformed_links.link_y(i, j) -
                                                     symmetric_links.link_y(i, j)))});
        }
    }
    r.events.push_back({"max_link_difference_outside_core", 0.0, link_gap});

    PropagatorConfig p = propagator_config(c);
    p.mask = core_mask(g, c.core_radius);
    p.snapshot_times = c.snapshot_times;
    std::vector<std::pair<double, WaveField>> string_snaps;
    const LatticeRun run_s = evolve_lattice(
        psi, string_links, p, {}, [&](double t, const WaveField& f) { string_snaps.emplace_back(t, f); });

    TimeSeries ts;
    ts.name = "gauge_comparison";
    ts.columns = {"density_l2", "velocity_dx", "velocity_dy", "canonical_dx", "canonical_dy"};
    double worst_density = 0.0;
    double worst_velocity = 0.0;
    std::size_t next = 0;
    const LatticeRun run_sym = evolve_lattice(
        start_symmetric, symmetric_links, p, {}, [&](double t, const WaveField& f) {
            const auto& [ts_time, fs] = string_snaps.at(next++);
            const double d = density_distance(fs, f);
            const Vec2 vs = expectation_velocity(fs, string_links);
            const Vec2 va = expectation_velocity(f, symmetric_links);
            const Vec2 ps = expectation_canonical_momentum(fs);
            const Vec2 pa = expectation_canonical_momentum(f);
            worst_density = std::max(worst_density, d);
            worst_velocity = std::max({worst_velocity, std::abs(vs.x - va.x), std::abs(vs.y - va.y)});
            ts.add(t, {d, vs.x - va.x, vs.y - va.y, ps.x - pa.x, ps.y - pa.y});
        });
    r.series.push_back(std::move(ts));
    r.check("norm_drift[string]", run_s.norm_drift, c.norm_tolerance);
    r.check("norm_drift[symmetric]", run_sym.norm_drift, c.norm_tolerance);
    r.check("densities_agree_across_gauges", worst_density, 1e-3, Comparison::at_most,
            "max over snapshots of the L2 density distance");
    r.check("velocities_agree_across_gauges", worst_velocity, 1e-6, Comparison::at_most,
            "max over snapshots of |<v>_string - <v>_symmetric| per component");
    if (c.alpha == 0.0) {
        r.check("zero_flux_gauges_coincide", worst_density, 1e-10);
    }
    r.check("initial_fields_gauge_related", c.skip_gauge_transform ? 1.0 : 0.0, 0.0,
            Comparison::at_most,
            c.skip_gauge_transform
                ? "misuse: the symmetric-gauge run starts from the untransformed field"
                : "symmetric-gauge run starts from the gauge-transformed field");
    if (c.skip_gauge_transform) r.events.push_back({"misuse_density_mismatch", c.t_end, worst_density});
    r.snapshots.push_back({"string_final", c.t_end, GaugeKind::string, run_s.final_field});
    r.snapshots.push_back({"symmetric_final", c.t_end, GaugeKind::symmetric, run_sym.final_field});
    return r;
}

}  // namespace abq
