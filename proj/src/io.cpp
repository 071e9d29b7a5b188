#include "abq/io.hpp"

#include "abq/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

namespace abq {

namespace {

using File = std::unique_ptr<std::FILE, int (*)(std::FILE*)>;

File open_for_writing(const std::filesystem::path& path) {
    File f(std::fopen(path.c_str(), "w"), &std::fclose);
    if (!f) throw IoError("cannot open " + path.string() + " for writing");
    return f;
}

void finish(File& f, const std::filesystem::path& path) {
    const bool bad = std::ferror(f.get()) != 0;
    if (std::fclose(f.release()) != 0 || bad) throw IoError("failed writing " + path.string());
}

nlohmann::json number(double v) {
    if (!std::isfinite(v)) return nullptr;
    return v;
}

const char* comparison_name(Comparison c) { return c == Comparison::at_most ? "<=" : ">"; }

}  // namespace

void write_timeseries(const TimeSeries& series, const std::filesystem::path& path) {
    File f = open_for_writing(path);
    std::fputs("t", f.get());
    for (const auto& c : series.columns) std::fprintf(f.get(), ",%s", c.c_str());
    std::fputc('\n', f.get());
    for (std::size_t k = 0; k < series.t.size(); ++k) {
        std::fprintf(f.get(), "%.17g", series.t[k]);
        for (double v : series.rows[k]) std::fprintf(f.get(), ",%.17g", v);
        std::fputc('\n', f.get());
    }
    finish(f, path);
}

void write_snapshot(const WaveField& field, const std::string& gauge_descriptor, double t,
                    const std::filesystem::path& path) {
    if (gauge_descriptor.empty() || gauge_descriptor.find_first_of(" \t\n") != std::string::npos) {
        throw ConfigError("gauge descriptor must be a single non-empty word");
    }
    const Grid2D& g = field.grid();
    File f = open_for_writing(path);
    std::fprintf(f.get(), "ABQSNAP1 %d %d %.17g %.17g %.17g %.17g %.17g gauge=%s\n", g.nx, g.ny, g.dx,
                 g.dy, g.x0, g.y0, t, gauge_descriptor.c_str());
    for (const cplx& a : field.amplitudes()) {
        std::fprintf(f.get(), "%.17g %.17g\n", a.real(), a.imag());
    }
    finish(f, path);
}

SnapshotFile read_snapshot(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::string header;
    if (!std::getline(in, header)) throw IoError(path.string() + ": missing header");
    std::istringstream hs(header);
    std::string magic;
    std::string gauge;
    Grid2D g;
    SnapshotFile out;
    hs >> magic >> g.nx >> g.ny >> g.dx >> g.dy >> g.x0 >> g.y0 >> out.t >> gauge;
    if (!hs || magic != "ABQSNAP1" || gauge.rfind("gauge=", 0) != 0) {
        throw IoError(path.string() + ": malformed snapshot header");
    }
    out.gauge = gauge.substr(6);
    try {
        g = make_grid(g.nx, g.ny, g.dx, g.dy, g.x0, g.y0);
    } catch (const ConfigError& e) {
        throw IoError(path.string() + ": " + e.what());
    }
    std::vector<cplx> amp(g.size());
    std::string re;
    std::string im;
    for (auto& a : amp) {
        if (!(in >> re >> im)) throw IoError(path.string() + ": truncated snapshot data");
        a = cplx(std::strtod(re.c_str(), nullptr), std::strtod(im.c_str(), nullptr));
    }
    out.field = WaveField(g, std::move(amp));
    return out;
}

void write_report_json(const ScenarioReport& report, const std::filesystem::path& path) {
    nlohmann::ordered_json j;
    j["version"] = kVersion;
    j["scenario"] = report.scenario;
    j["passed"] = report.passed();
    auto& params = j["params"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : report.params) params[k] = v;
    auto& verdicts = j["verdicts"] = nlohmann::ordered_json::array();
    for (const Verdict& v : report.verdicts) {
        verdicts.push_back({{"name", v.name},
                            {"pass", v.pass},
                            {"measured", number(v.measured)},
                            {"comparison", comparison_name(v.comparison)},
                            {"tolerance", number(v.tolerance)},
                            {"detail", v.detail}});
    }
    auto& events = j["events"] = nlohmann::ordered_json::array();
    for (const Event& e : report.events) {
        events.push_back({{"name", e.name}, {"time", number(e.time)}, {"value", number(e.value)}});
    }
    auto& series = j["series"] = nlohmann::ordered_json::array();
    for (const TimeSeries& s : report.series) {
        series.push_back({{"name", s.name}, {"file", s.name + ".csv"}, {"columns", s.columns},
                          {"rows", s.t.size()}});
    }
    auto& snaps = j["snapshots"] = nlohmann::ordered_json::array();
    for (const Snapshot& s : report.snapshots) {
        snaps.push_back({{"label", s.label}, {"file", "snapshot_" + s.label + ".txt"},
                         {"t", s.t}, {"gauge", to_string(s.gauge)}});
    }
    File f = open_for_writing(path);
    const std::string text = j.dump(2) + "\n";
    std::fputs(text.c_str(), f.get());
    finish(f, path);
}

void write_config_echo(const ScenarioConfig& cfg, const std::filesystem::path& path) {
    File f = open_for_writing(path);
    std::fprintf(f.get(), "# %s\n", kVersion);
    for (const auto& [k, v] : config_echo(cfg)) std::fprintf(f.get(), "%s=%s\n", k.c_str(), v.c_str());
    finish(f, path);
}

void write_outputs(const ScenarioReport& report, const ScenarioConfig& cfg,
                   const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
    write_config_echo(cfg, dir / "config.txt");
    for (const TimeSeries& s : report.series) write_timeseries(s, dir / (s.name + ".csv"));
    for (const Snapshot& s : report.snapshots) {
        write_snapshot(s.field, to_string(s.gauge), s.t, dir / ("snapshot_" + s.label + ".txt"));
    }
    write_report_json(report, dir / "report.json");
}

}  // namespace abq
