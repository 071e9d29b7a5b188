#include "abq/errors.hpp"
#include "abq/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace abq {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> x_marginal(const WaveField& f) {
    const Grid2D& g = f.grid();
    std::vector<double> p(static_cast<std::size_t>(g.nx), 0.0);
    const auto amp = f.amplitudes();
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) p[static_cast<std::size_t>(i)] += std::norm(amp[g.index(i, j)]);
    }
    for (double& v : p) v *= g.dy;
    return p;
}

cplx demodulate(const std::vector<double>& p, const Grid2D& g, double k) {
    cplx z{};
    for (int i = 0; i < g.nx; ++i) z += p[static_cast<std::size_t>(i)] * std::polar(1.0, -k * g.x(i));
    return z * g.dx;
}

}  // namespace

void TimeSeries::add(double time, std::vector<double> values) {
    if (values.size() != columns.size()) {
        throw ConfigError("time series '" + name + "': row width does not match its columns");
    }
    t.push_back(time);
    rows.push_back(std::move(values));
}

bool ScenarioReport::passed() const {
    return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
}

const Verdict& ScenarioReport::check(const std::string& name, double measured, double tolerance,
                                     Comparison comparison, std::string detail) {
    Verdict v;
    v.name = name;
    v.measured = measured;
    v.tolerance = tolerance;
    v.comparison = comparison;
    v.detail = std::move(detail);
    // NaN fails either way.
    v.pass = comparison == Comparison::at_most ? measured <= tolerance : measured > tolerance;
    verdicts.push_back(std::move(v));
    return verdicts.back();
}

const Event* ScenarioReport::find_event(const std::string& name) const {
    for (const Event& e : events) {
        if (e.name == name) return &e;
    }
    return nullptr;
}

const Verdict* ScenarioReport::find_verdict(const std::string& name) const {
    for (const Verdict& v : verdicts) {
        if (v.name == name) return &v;
    }
    return nullptr;
}

ScenarioReport run_scenario(const ScenarioConfig& cfg) {
    if (cfg.scenario == "madelung-demo") return run_madelung_demo(cfg);
    if (cfg.scenario == "continuous-aspect") return run_continuous_aspect(cfg);
    if (cfg.scenario == "instantaneous-aspect") return run_instantaneous_aspect(cfg);
    if (cfg.scenario == "gauge-invariance") return run_gauge_invariance(cfg);
    if (cfg.scenario == "flux-quantization-sweep") return run_flux_quantization_sweep(cfg);
    throw ConfigError("unknown scenario '" + cfg.scenario + "'");
}

std::vector<double> unwrap_phase(const std::vector<double>& phase) {
    std::vector<double> out(phase.size());
    double offset = 0.0;
    for (std::size_t k = 0; k < phase.size(); ++k) {
        if (k > 0) {
            const double step = phase[k] - phase[k - 1];
            if (step > kPi) offset -= 2.0 * kPi;
            if (step < -kPi) offset += 2.0 * kPi;
        }
        out[k] = phase[k] + offset;
    }
    return out;
}

double wrap_angle(double a) {
    double w = std::remainder(a, 2.0 * kPi);
    if (w <= -kPi) w += 2.0 * kPi;
    return w;
}

double fringe_phase(const WaveField& f, double wavenumber) {
    return std::arg(demodulate(x_marginal(f), f.grid(), wavenumber));
}

double fringe_wavenumber(const WaveField& f, double k_min) {
    const Grid2D& g = f.grid();
    const std::vector<double> p = x_marginal(f);
    const double k_max = kPi / g.dx;
    if (!(k_min > 0.0) || !(k_min < k_max)) {
        throw ConfigError("fringe_wavenumber: search range is empty");
    }
    // Coarse scan at a step well below the peak width (about 1 / domain length),
    // then golden-section refinement around the best sample.
    const double extent = g.x_max() - g.x(0);
    const double step = 0.25 / extent;
    double best_k = k_min;
    double best = -1.0;
    for (double k = k_min; k <= k_max; k += step) {
        const double a = std::abs(demodulate(p, g, k));
        if (a > best) {
            best = a;
            best_k = k;
        }
    }
    double lo = std::max(k_min, best_k - step);
    double hi = std::min(k_max, best_k + step);
    const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = hi - ratio * (hi - lo);
    double d = lo + ratio * (hi - lo);
    double fc = std::abs(demodulate(p, g, c));
    double fd = std::abs(demodulate(p, g, d));
    for (int it = 0; it < 60; ++it) {
        if (fc > fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - ratio * (hi - lo);
            fc = std::abs(demodulate(p, g, c));
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + ratio * (hi - lo);
            fd = std::abs(demodulate(p, g, d));
        }
    }
    return 0.5 * (lo + hi);
}

double fringe_shift(const WaveField& f, const WaveField& reference, double wavenumber) {
    if (!(f.grid() == reference.grid())) throw ConfigError("fringe_shift: grid mismatch");
    // A pattern cos(K x - delta) has demodulated phase -delta and is displaced
    // by delta / K, i.e. delta / 2 pi fringes.
    const double delta = fringe_phase(reference, wavenumber) - fringe_phase(f, wavenumber);
    return wrap_angle(delta) / (2.0 * kPi);
}

JumpEstimate estimate_jump(const std::vector<double>& t, const std::vector<double>& phase,
                           double baseline_end) {
    if (t.size() != phase.size() || t.size() < 3) {
        throw ConfigError("estimate_jump: need at least three matching samples");
    }
    JumpEstimate e;
    std::vector<double> rate(t.size() - 1);
    for (std::size_t k = 0; k + 1 < t.size(); ++k) {
        rate[k] = std::abs(phase[k + 1] - phase[k]) / (t[k + 1] - t[k]);
        if (t[k + 1] <= baseline_end) e.baseline = std::max(e.baseline, rate[k]);
    }
    e.threshold = 10.0 * std::max(e.baseline, 1e-6);
    std::size_t first = rate.size();
    std::size_t last = 0;
    for (std::size_t k = 0; k < rate.size(); ++k) {
        if (t[k + 1] > baseline_end && rate[k] > e.threshold) {
            first = std::min(first, k);
            last = k;
        }
    }
    if (first < rate.size()) {
        e.detected = true;
        e.start = t[first];
        e.end = t[last + 1];
        e.time = 0.5 * (e.start + e.end);
    }
    return e;
}

}  // namespace abq
