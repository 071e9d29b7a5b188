#pragma once

// Plain-text outputs: CSV time series, field snapshots, the JSON report and
// the resolved-config echo. Every failure surfaces as IoError.

#include "abq/config.hpp"
#include "abq/grid.hpp"
#include "abq/scenarios.hpp"

#include <filesystem>
#include <string>

namespace abq {

/// Header row `t,<columns...>`, then one row per sample, 17 significant digits.
void write_timeseries(const TimeSeries& series, const std::filesystem::path& path);

/// Header `ABQSNAP1 nx ny dx dy x0 y0 t gauge=<descriptor>`, then nx * ny lines
/// `re im` with y as the outer index.
void write_snapshot(const WaveField& f, const std::string& gauge_descriptor, double t,
                    const std::filesystem::path& path);

struct SnapshotFile {
    WaveField field;
    double t = 0.0;
    std::string gauge;
};

SnapshotFile read_snapshot(const std::filesystem::path& path);

void write_report_json(const ScenarioReport& report, const std::filesystem::path& path);

/// `key=value` lines (parse_config accepts them back) preceded by a version comment.
void write_config_echo(const ScenarioConfig& cfg, const std::filesystem::path& path);

/// Writes config.txt, report.json, one CSV per series and one snapshot per
/// report snapshot into `dir` (created if needed).
void write_outputs(const ScenarioReport& report, const ScenarioConfig& cfg,
                   const std::filesystem::path& dir);

}  // namespace abq
