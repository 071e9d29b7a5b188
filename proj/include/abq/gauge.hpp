#pragma once

// Lattice gauge fields for an infinitely thin solenoid at the origin.
//
// Link phases hold theta = integral of A along the link in its forward
// direction (+x for x-links, +y for y-links). A hop from node a to node b
// carries the Peierls factor exp(-i theta_ab), so the kinetic operator is
// covariant under psi -> e^{i chi} psi, theta_ab -> theta_ab + chi_b - chi_a.
//
// Circulation convention: fluxes and loop phases are summed clockwise in the
// (x, y) plane. That is the sense in which the interferometer loop is
// traversed (right arm forward along -y, left arm back along +y), so a
// positive alpha is the phase picked up by the right packet relative to the
// left one. In this convention the string gauge puts -alpha on every y-link
// crossing the half-line {y = 0, x > 0}.

#include "abq/grid.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace abq {

enum class GaugeKind { zero, string, symmetric };

std::string to_string(GaugeKind kind);
/// Inverse of to_string; throws ConfigError on unknown names.
GaugeKind gauge_kind_from_string(const std::string& name);

class GaugeField {
public:
    GaugeField() = default;
    GaugeField(Grid2D grid, std::vector<double> link_x, std::vector<double> link_y,
               double alpha, GaugeKind kind);

    const Grid2D& grid() const { return grid_; }
    double alpha() const { return alpha_; }
    GaugeKind kind() const { return kind_; }

    /// Phase on the link (i, j) -> (i + 1, j); valid for i < nx - 1.
    double link_x(int i, int j) const { return link_x_[grid_.index(i, j)]; }
    /// Phase on the link (i, j) -> (i, j + 1); valid for j < ny - 1.
    double link_y(int i, int j) const { return link_y_[grid_.index(i, j)]; }

    std::span<const double> link_x_values() const { return link_x_; }
    std::span<const double> link_y_values() const { return link_y_; }

private:
    Grid2D grid_;
    // nx * ny entries each; the last column (x) / row (y) is unused and zero.
    std::vector<double> link_x_;
    std::vector<double> link_y_;
    double alpha_ = 0.0;
    GaugeKind kind_ = GaugeKind::zero;
};

enum class BranchCut { none, positive_x_axis };

struct GaugeFunction {
    std::vector<double> chi;  // per node, radians
    BranchCut cut = BranchCut::none;
};

GaugeField zero_gauge(const Grid2D& grid);

/// Requires the origin strictly between two node rows (no node at y = 0).
GaugeField string_gauge(const Grid2D& grid, double alpha);

/// A = -(alpha / 2 pi) grad(phi) outside core_radius, solid-rotation profile
/// inside; link phases by the midpoint rule (O(dx^2) error).
GaugeField symmetric_gauge(const Grid2D& grid, double alpha, double core_radius);

struct PlaquetteFlux {
    double wrapped = 0.0;  // in (-pi, pi]
    int winding = 0;       // raw sum = wrapped + 2 pi winding
    double raw() const;
};

/// Clockwise link sum around the plaquette with lower-left node (i, j).
/// Throws ConfigError unless 0 <= i < nx - 1 and 0 <= j < ny - 1.
PlaquetteFlux plaquette_flux(const GaugeField& gauge, int i, int j);

/// Clockwise sum of link phases around the node rectangle [i0, i1] x [j0, j1].
double loop_phase(const GaugeField& gauge, int i0, int j0, int i1, int j1);

/// chi = (alpha / 2 pi) * phi with phi in [0, 2 pi), cut along the positive
/// x-axis. Transforms the symmetric gauge into the string gauge.
GaugeFunction angular_gauge_function(const Grid2D& grid, double alpha);

GaugeFunction constant_gauge_function(const Grid2D& grid, double chi);

/// psi -> e^{i chi} psi; theta_ab -> theta_ab + chi_b - chi_a. Differences are
/// taken from raw node values, so links crossing a branch cut carry its jump.
/// The returned gauge keeps the input's kind and alpha.
std::pair<WaveField, GaugeField> gauge_transform(const WaveField& f, const GaugeField& gauge,
                                                 const GaugeFunction& chi);

/// Hard-wall disk of the given radius at the origin (1 = wall node).
std::vector<std::uint8_t> core_mask(const Grid2D& grid, double radius);

/// Flux values allowed by flux quantization in units of hc/2e: pi * k.
std::vector<double> quantized_flux_values(int k_max);

}  // namespace abq
