#include "abq/grid.hpp"

#include "abq/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <utility>

namespace abq {

Grid2D make_grid(int nx, int ny, double dx, double dy, double x0, double y0) {
    if (nx < 16 || ny < 16) {
        std::ostringstream msg;
        msg << "grid needs at least 16 nodes per direction (got " << nx << " x " << ny << ")";
        throw ConfigError(msg.str());
    }
    if (!(dx > 0.0) || !(dy > 0.0) || !std::isfinite(dx) || !std::isfinite(dy)) {
        throw ConfigError("grid spacings must be positive and finite");
    }
    if (!std::isfinite(x0) || !std::isfinite(y0)) {
        throw ConfigError("grid origin must be finite");
    }
    return Grid2D{nx, ny, dx, dy, x0, y0};
}

WaveField::WaveField(Grid2D grid, std::vector<cplx> amp) : grid_(grid), amp_(std::move(amp)) {
    if (amp_.size() != grid_.size()) {
        throw ConfigError("wave field size does not match its grid");
    }
}

ScalarField::ScalarField(Grid2D grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size()) {
        throw ConfigError("scalar field size does not match its grid");
    }
}

double ScalarField::integral() const {
    double sum = 0.0;
    for (double v : values_) sum += v;
    return sum * grid_.cell_area();
}

VectorField::VectorField(Grid2D grid, std::vector<double> vx, std::vector<double> vy)
    : grid_(grid), vx_(std::move(vx)), vy_(std::move(vy)) {
    if (vx_.size() != grid_.size() || vy_.size() != grid_.size()) {
        throw ConfigError("vector field size does not match its grid");
    }
}

Vec2 VectorField::integral() const {
    double sx = 0.0;
    double sy = 0.0;
    for (std::size_t k = 0; k < vx_.size(); ++k) {
        sx += vx_[k];
        sy += vy_[k];
    }
    return {sx * grid_.cell_area(), sy * grid_.cell_area()};
}

double norm_squared(const WaveField& f) {
    double sum = 0.0;
    for (const cplx& a : f.amplitudes()) sum += std::norm(a);
    return sum * f.grid().cell_area();
}

WaveField normalize(const WaveField& f) {
    const double n2 = norm_squared(f);
    if (!(n2 > 0.0) || !std::isfinite(n2)) {
        throw ConfigError("cannot normalize a field with zero or non-finite norm");
    }
    const double scale = 1.0 / std::sqrt(n2);
    std::vector<cplx> amp(f.amplitudes().begin(), f.amplitudes().end());
    for (cplx& a : amp) a *= scale;
    return WaveField(f.grid(), std::move(amp));
}

WaveField gaussian_packet(const Grid2D& grid, Vec2 center, Vec2 sigma, Vec2 momentum) {
    const double h = std::max(grid.dx, grid.dy);
    if (!(sigma.x > 2.0 * h) || !(sigma.y > 2.0 * h)) {
        throw ConfigError("Gaussian width is under-resolved (need sigma > 2 max(dx, dy))");
    }
    auto envelope = [&](double x, double y) {
        const double ux = (x - center.x) / sigma.x;
        const double uy = (y - center.y) / sigma.y;
        return std::exp(-0.25 * (ux * ux + uy * uy));
    };
    // Largest boundary value: nearest boundary point along each edge.
    const double cx = std::clamp(center.x, grid.x(0), grid.x_max());
    const double cy = std::clamp(center.y, grid.y(0), grid.y_max());
    const double tail = std::max({envelope(grid.x(0), cy), envelope(grid.x_max(), cy),
                                  envelope(cx, grid.y(0)), envelope(cx, grid.y_max())});
    if (tail >= 1e-10) {
        std::ostringstream msg;
        msg << "Gaussian packet tail at the grid boundary is " << tail
            << " of its peak (limit 1e-10)";
        throw ConfigError(msg.str());
    }

    std::vector<cplx> amp(grid.size());
    for (int j = 0; j < grid.ny; ++j) {
        const double y = grid.y(j);
        for (int i = 0; i < grid.nx; ++i) {
            const double x = grid.x(i);
            amp[grid.index(i, j)] =
                envelope(x, y) * std::polar(1.0, momentum.x * x + momentum.y * y);
        }
    }
    return normalize(WaveField(grid, std::move(amp)));
}

WaveField gaussian_packet(const Grid2D& grid, Vec2 center, double sigma, Vec2 momentum) {
    return gaussian_packet(grid, center, Vec2{sigma, sigma}, momentum);
}

double bump_profile(double r, double radius) {
    const double gap = radius * radius - r * r;
    if (!(gap > 0.0)) return 0.0;
    return std::exp(-1.0 / gap);
}

WaveField bump_packet(const Grid2D& grid, Vec2 center, double radius) {
    if (!(radius > 4.0 * std::max(grid.dx, grid.dy))) {
        throw ConfigError("bump radius is under-resolved (need a > 4 max(dx, dy))");
    }
    std::vector<cplx> amp(grid.size());
    for (int j = 0; j < grid.ny; ++j) {
        const double ry = grid.y(j) - center.y;
        for (int i = 0; i < grid.nx; ++i) {
            const double rx = grid.x(i) - center.x;
            amp[grid.index(i, j)] = bump_profile(std::hypot(rx, ry), radius);
        }
    }
    return normalize(WaveField(grid, std::move(amp)));
}

WaveField superpose(const WaveField& f1, const WaveField& f2, double w1, double w2,
                    double relative_phase) {
    if (!(f1.grid() == f2.grid())) {
        throw ConfigError("superpose: fields live on different grids");
    }
    const cplx c1 = w1;
    const cplx c2 = w2 * std::polar(1.0, relative_phase);
    const auto a1 = f1.amplitudes();
    const auto a2 = f2.amplitudes();
    std::vector<cplx> amp(a1.size());
    double scale = 0.0;
    for (std::size_t k = 0; k < amp.size(); ++k) {
        amp[k] = c1 * a1[k] + c2 * a2[k];
        scale += std::norm(c1 * a1[k]) + std::norm(c2 * a2[k]);
    }
    WaveField out(f1.grid(), std::move(amp));
    // Cancellation down to rounding noise is a zero field, not a state.
    if (!(norm_squared(out) > 1e-24 * scale * f1.grid().cell_area())) {
        throw ConfigError("superpose: the weighted sum vanishes");
    }
    return normalize(out);
}

int lattice_steps(double length, double spacing, const char* what) {
    const double ratio = length / spacing;
    const double rounded = std::round(ratio);
    if (!std::isfinite(ratio) || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, std::abs(ratio))) {
        std::ostringstream msg;
        msg << what << " = " << length << " is not an integer multiple of the lattice spacing "
            << spacing;
        throw ConfigError(msg.str());
    }
    return static_cast<int>(rounded);
}

}  // namespace abq
