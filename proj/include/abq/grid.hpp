#pragma once

// Spatial lattice and the complex/real fields that live on it.
//
// Units throughout: hbar = m = 1. Storage is row-major with y as the outer
// index, so node (i, j) sits at offset j * nx + i.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace abq {

using cplx = std::complex<double>;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

struct Grid2D {
    int nx = 0;
    int ny = 0;
    double dx = 0.0;
    double dy = 0.0;
    double x0 = 0.0;
    double y0 = 0.0;

    // One multiply from the corner; no accumulated summation.
    double x(int i) const { return x0 + i * dx; }
    double y(int j) const { return y0 + j * dy; }
    double x_max() const { return x(nx - 1); }
    double y_max() const { return y(ny - 1); }

    std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(j) * static_cast<std::size_t>(nx) +
               static_cast<std::size_t>(i);
    }
    std::size_t size() const {
        return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny);
    }
    double cell_area() const { return dx * dy; }

    bool operator==(const Grid2D&) const = default;
};

/// Throws ConfigError unless nx, ny >= 16 and dx, dy > 0.
Grid2D make_grid(int nx, int ny, double dx, double dy, double x0, double y0);

class WaveField {
public:
    WaveField() = default;
    WaveField(Grid2D grid, std::vector<cplx> amp);

    const Grid2D& grid() const { return grid_; }
    std::span<const cplx> amplitudes() const { return amp_; }
    std::span<cplx> mutable_amplitudes() { return amp_; }
    cplx at(int i, int j) const { return amp_[grid_.index(i, j)]; }

private:
    Grid2D grid_;
    std::vector<cplx> amp_;
};

class ScalarField {
public:
    ScalarField() = default;
    ScalarField(Grid2D grid, std::vector<double> values);

    const Grid2D& grid() const { return grid_; }
    std::span<const double> values() const { return values_; }
    double at(int i, int j) const { return values_[grid_.index(i, j)]; }
    /// Sum of values times the cell area.
    double integral() const;

private:
    Grid2D grid_;
    std::vector<double> values_;
};

class VectorField {
public:
    VectorField() = default;
    VectorField(Grid2D grid, std::vector<double> vx, std::vector<double> vy);

    const Grid2D& grid() const { return grid_; }
    std::span<const double> x_component() const { return vx_; }
    std::span<const double> y_component() const { return vy_; }
    Vec2 integral() const;

private:
    Grid2D grid_;
    std::vector<double> vx_;
    std::vector<double> vy_;
};

/// Sum |amp|^2 dx dy.
double norm_squared(const WaveField& f);

/// Throws ConfigError for a zero (or non-finite) norm.
WaveField normalize(const WaveField& f);

/// Normalized Gaussian exp(-(x-xc)^2/(4 sx^2) - (y-yc)^2/(4 sy^2)) e^{i k.r}.
/// Each width must exceed twice the spacing, and the amplitude on the grid
/// boundary must stay below 1e-10 of the peak.
WaveField gaussian_packet(const Grid2D& grid, Vec2 center, Vec2 sigma, Vec2 momentum);
WaveField gaussian_packet(const Grid2D& grid, Vec2 center, double sigma, Vec2 momentum);

/// Compact bump exp(-1/(a^2 - |r - c|^2)) inside radius a, exactly zero on and
/// outside it, normalized. Requires a > 4 max(dx, dy).
WaveField bump_packet(const Grid2D& grid, Vec2 center, double radius);

/// The unnormalized bump profile at distance r from its center.
double bump_profile(double r, double radius);

/// Normalized w1 f1 + w2 e^{i beta} f2. Throws ConfigError on grid mismatch or
/// a vanishing result.
WaveField superpose(const WaveField& f1, const WaveField& f2, double w1, double w2,
                    double relative_phase);

/// Rounds to the nearest lattice multiple of `spacing`; throws ConfigError if
/// `length` is not within 1e-9 relative of one.
int lattice_steps(double length, double spacing, const char* what);

}  // namespace abq
