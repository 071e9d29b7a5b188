#include "abq/gauge.hpp"

#include "abq/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace abq {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_same_grid(const Grid2D& a, const Grid2D& b, const char* op) {
    if (!(a == b)) {
        throw ConfigError(std::string(op) + ": grid mismatch");
    }
}

// Index of the node row just below y = 0; throws if a row sits on y = 0 or the
// origin is outside the grid.
int row_below_origin(const Grid2D& grid) {
    if (!(grid.y(0) < 0.0 && grid.y_max() > 0.0)) {
        throw ConfigError("string gauge: the origin must lie inside the grid's y-range");
    }
    const int j0 = static_cast<int>(std::floor(-grid.y0 / grid.dy));
    for (int j : {j0 - 1, j0, j0 + 1}) {
        if (j >= 0 && j < grid.ny && std::abs(grid.y(j)) <= 1e-12 * grid.dy) {
            throw ConfigError(
                "string gauge: a node row lies on y = 0; offset the grid by half a cell so the "
                "string runs between rows");
        }
    }
    int below = j0;
    while (below + 1 < grid.ny && grid.y(below + 1) < 0.0) ++below;
    while (below > 0 && grid.y(below) > 0.0) --below;
    return below;
}

// Continuum symmetric-gauge potential, clockwise flux alpha through the core.
Vec2 symmetric_potential(double x, double y, double alpha, double core_radius) {
    const double r = std::hypot(x, y);
    if (r == 0.0) return {0.0, 0.0};
    const double a_phi = r >= core_radius
                             ? -alpha / (kTwoPi * r)
                             : -alpha * r / (kTwoPi * core_radius * core_radius);
    return {-a_phi * y / r, a_phi * x / r};
}

}  // namespace

std::string to_string(GaugeKind kind) {
    switch (kind) {
        case GaugeKind::zero: return "zero";
        case GaugeKind::string: return "string";
        case GaugeKind::symmetric: return "symmetric";
    }
    return "zero";
}

GaugeKind gauge_kind_from_string(const std::string& name) {
    if (name == "zero") return GaugeKind::zero;
    if (name == "string") return GaugeKind::string;
    if (name == "symmetric") return GaugeKind::symmetric;
    throw ConfigError("unknown gauge descriptor '" + name + "'");
}

GaugeField::GaugeField(Grid2D grid, std::vector<double> link_x, std::vector<double> link_y,
                       double alpha, GaugeKind kind)
    : grid_(grid), link_x_(std::move(link_x)), link_y_(std::move(link_y)), alpha_(alpha),
      kind_(kind) {
    if (link_x_.size() != grid_.size() || link_y_.size() != grid_.size()) {
        throw ConfigError("gauge field link arrays do not match the grid");
    }
    for (std::size_t k = 0; k < link_x_.size(); ++k) {
        if (!std::isfinite(link_x_[k]) || !std::isfinite(link_y_[k])) {
            throw ConfigError("gauge field contains a non-finite link phase");
        }
    }
}

GaugeField zero_gauge(const Grid2D& grid) {
    return GaugeField(grid, std::vector<double>(grid.size(), 0.0),
                      std::vector<double>(grid.size(), 0.0), 0.0, GaugeKind::zero);
}

GaugeField string_gauge(const Grid2D& grid, double alpha) {
    const int j0 = row_below_origin(grid);
    std::vector<double> lx(grid.size(), 0.0);
    std::vector<double> ly(grid.size(), 0.0);
    if (alpha != 0.0) {
        for (int i = 0; i < grid.nx; ++i) {
            if (grid.x(i) > 0.0) ly[grid.index(i, j0)] = -alpha;
        }
    }
    return GaugeField(grid, std::move(lx), std::move(ly), alpha,
                      alpha == 0.0 ? GaugeKind::zero : GaugeKind::string);
}

GaugeField symmetric_gauge(const Grid2D& grid, double alpha, double core_radius) {
    if (!(core_radius >= 3.0 * std::max(grid.dx, grid.dy))) {
        throw ConfigError("symmetric gauge: core radius must be at least 3 max(dx, dy)");
    }
    std::vector<double> lx(grid.size(), 0.0);
    std::vector<double> ly(grid.size(), 0.0);
    if (alpha != 0.0) {
        for (int j = 0; j < grid.ny; ++j) {
            const double y = grid.y(j);
            for (int i = 0; i < grid.nx; ++i) {
                const double x = grid.x(i);
                if (i + 1 < grid.nx) {
                    lx[grid.index(i, j)] =
                        symmetric_potential(x + 0.5 * grid.dx, y, alpha, core_radius).x * grid.dx;
                }
                if (j + 1 < grid.ny) {
                    ly[grid.index(i, j)] =
                        symmetric_potential(x, y + 0.5 * grid.dy, alpha, core_radius).y * grid.dy;
                }
            }
        }
    }
    return GaugeField(grid, std::move(lx), std::move(ly), alpha,
                      alpha == 0.0 ? GaugeKind::zero : GaugeKind::symmetric);
}

double PlaquetteFlux::raw() const { return wrapped + kTwoPi * winding; }

PlaquetteFlux plaquette_flux(const GaugeField& gauge, int i, int j) {
    const Grid2D& g = gauge.grid();
    if (i < 0 || j < 0 || i + 1 >= g.nx || j + 1 >= g.ny) {
        std::ostringstream msg;
        msg << "plaquette (" << i << ", " << j << ") is not interior to the grid";
        throw ConfigError(msg.str());
    }
    const double raw = gauge.link_y(i, j) + gauge.link_x(i, j + 1) - gauge.link_y(i + 1, j) -
                       gauge.link_x(i, j);
    double wrapped = std::remainder(raw, kTwoPi);
    if (wrapped <= -std::numbers::pi) wrapped += kTwoPi;
    const int winding = static_cast<int>(std::lround((raw - wrapped) / kTwoPi));
    return {wrapped, winding};
}

double loop_phase(const GaugeField& gauge, int i0, int j0, int i1, int j1) {
    const Grid2D& g = gauge.grid();
    if (i0 < 0 || j0 < 0 || i1 >= g.nx || j1 >= g.ny || i0 >= i1 || j0 >= j1) {
        throw ConfigError("loop_phase: rectangle must be non-degenerate and inside the grid");
    }
    double sum = 0.0;
    for (int j = j0; j < j1; ++j) sum += gauge.link_y(i0, j);
    for (int i = i0; i < i1; ++i) sum += gauge.link_x(i, j1);
    for (int j = j0; j < j1; ++j) sum -= gauge.link_y(i1, j);
    for (int i = i0; i < i1; ++i) sum -= gauge.link_x(i, j0);
    return sum;
}

GaugeFunction angular_gauge_function(const Grid2D& grid, double alpha) {
    GaugeFunction out;
    out.chi.resize(grid.size());
    out.cut = BranchCut::positive_x_axis;
    for (int j = 0; j < grid.ny; ++j) {
        for (int i = 0; i < grid.nx; ++i) {
            double phi = std::atan2(grid.y(j), grid.x(i));
            if (phi < 0.0) phi += kTwoPi;
            out.chi[grid.index(i, j)] = alpha * phi / kTwoPi;
        }
    }
    return out;
}

GaugeFunction constant_gauge_function(const Grid2D& grid, double chi) {
    return GaugeFunction{std::vector<double>(grid.size(), chi), BranchCut::none};
}

std::pair<WaveField, GaugeField> gauge_transform(const WaveField& f, const GaugeField& gauge,
                                                 const GaugeFunction& chi) {
    require_same_grid(f.grid(), gauge.grid(), "gauge_transform");
    const Grid2D& g = f.grid();
    if (chi.chi.size() != g.size()) {
        throw ConfigError("gauge_transform: gauge function does not match the grid");
    }
    std::vector<cplx> amp(f.amplitudes().begin(), f.amplitudes().end());
    for (std::size_t k = 0; k < amp.size(); ++k) amp[k] *= std::polar(1.0, chi.chi[k]);

    std::vector<double> lx(gauge.link_x_values().begin(), gauge.link_x_values().end());
    std::vector<double> ly(gauge.link_y_values().begin(), gauge.link_y_values().end());
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const std::size_t k = g.index(i, j);
            if (i + 1 < g.nx) lx[k] += chi.chi[g.index(i + 1, j)] - chi.chi[k];
            if (j + 1 < g.ny) ly[k] += chi.chi[g.index(i, j + 1)] - chi.chi[k];
        }
    }
    return {WaveField(g, std::move(amp)),
            GaugeField(g, std::move(lx), std::move(ly), gauge.alpha(), gauge.kind())};
}

std::vector<std::uint8_t> core_mask(const Grid2D& grid, double radius) {
    std::vector<std::uint8_t> mask(grid.size(), 0);
    for (int j = 0; j < grid.ny; ++j) {
        for (int i = 0; i < grid.nx; ++i) {
            if (std::hypot(grid.x(i), grid.y(j)) < radius) mask[grid.index(i, j)] = 1;
        }
    }
    return mask;
}

std::vector<double> quantized_flux_values(int k_max) {
    if (k_max < 1) throw ConfigError("quantized_flux_values: k_max must be at least 1");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(k_max) + 1);
    for (int k = 0; k <= k_max; ++k) out.push_back(std::numbers::pi * k);
    return out;
}

}  // namespace abq
