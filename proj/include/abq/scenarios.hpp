#pragma once

// Scenario drivers. Each assembles fields, gauges and engines from a
// ScenarioConfig, runs them, and collects time series, events and pass/fail
// verdicts (every verdict carries its measured value and tolerance).

#include "abq/config.hpp"
#include "abq/gauge.hpp"
#include "abq/grid.hpp"

#include <string>
#include <utility>
#include <vector>

namespace abq {

struct TimeSeries {
    std::string name;
    std::vector<std::string> columns;  // excluding the leading t column
    std::vector<double> t;
    std::vector<std::vector<double>> rows;  // rows[k].size() == columns.size()

    void add(double time, std::vector<double> values);
};

struct Event {
    std::string name;
    double time = 0.0;
    double value = 0.0;
};

enum class Comparison { at_most, above };

struct Verdict {
    std::string name;
    bool pass = false;
    double measured = 0.0;
    double tolerance = 0.0;
    Comparison comparison = Comparison::at_most;
    std::string detail;
};

struct Snapshot {
    std::string label;
    double t = 0.0;
    GaugeKind gauge = GaugeKind::zero;
    WaveField field;
};

struct ScenarioReport {
    std::string scenario;
    std::vector<std::pair<std::string, std::string>> params;
    std::vector<TimeSeries> series;
    std::vector<Event> events;
    std::vector<Verdict> verdicts;
    std::vector<Snapshot> snapshots;

    bool passed() const;
    /// Adds a verdict: measured <= tolerance (at_most) or measured > tolerance (above).
    const Verdict& check(const std::string& name, double measured, double tolerance,
                         Comparison comparison = Comparison::at_most, std::string detail = {});
    const Event* find_event(const std::string& name) const;
    const Verdict* find_verdict(const std::string& name) const;
};

ScenarioReport run_madelung_demo(const ScenarioConfig& cfg);
ScenarioReport run_continuous_aspect(const ScenarioConfig& cfg);
ScenarioReport run_instantaneous_aspect(const ScenarioConfig& cfg);
ScenarioReport run_gauge_invariance(const ScenarioConfig& cfg);
ScenarioReport run_flux_quantization_sweep(const ScenarioConfig& cfg);

/// Dispatches on cfg.scenario.
ScenarioReport run_scenario(const ScenarioConfig& cfg);

// ---------------------------------------------------------------------------
// Analysis helpers shared by the drivers and the acceptance suite.

/// Removes 2 pi jumps between consecutive samples.
std::vector<double> unwrap_phase(const std::vector<double>& phase);

/// Wraps an angle into (-pi, pi].
double wrap_angle(double a);

/// Demodulated fringe phase of the x-marginal of a density: arg of
/// sum_x P(x) e^{-i K x}.
double fringe_phase(const WaveField& f, double wavenumber);

/// Wavenumber maximizing |sum_x P(x) e^{-i K x}| over K >= k_min.
double fringe_wavenumber(const WaveField& f, double k_min);

/// Pattern displacement along +x, in fringe spacings, of `f` relative to
/// `reference` at the given fringe wavenumber, wrapped into (-1/2, 1/2].
double fringe_shift(const WaveField& f, const WaveField& reference, double wavenumber);

struct JumpEstimate {
    bool detected = false;
    double time = 0.0;       // midpoint of the exceedance interval
    double start = 0.0;
    double end = 0.0;
    double threshold = 0.0;  // rate threshold used
    double baseline = 0.0;   // largest rate in the baseline interval
};

/// Rate |d arg / dt| from consecutive samples of an unwrapped phase; the
/// threshold is 10 times the largest rate for t <= baseline_end (floored at
/// 1e-6 rad per unit time).
JumpEstimate estimate_jump(const std::vector<double>& t, const std::vector<double>& phase,
                           double baseline_end);

}  // namespace abq
