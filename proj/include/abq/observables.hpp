#pragma once

// Gauge-aware observables on a WaveField.
//
// Derivatives use a 16th-order central stencil (eight neighbours per side)
// whose off-site values are parallel-transported with the link phases, so
// every kinetic quantity is exactly covariant under lattice gauge changes.
// Values beyond the grid edge count as zero.

#include "abq/gauge.hpp"
#include "abq/grid.hpp"

#include <array>
#include <complex>
#include <span>

namespace abq {

inline constexpr int kStencilReach = 8;

/// Central first-derivative weights w_s, s = 1..kStencilReach:
/// f'(x) ~ sum_s w_s (f(x + s h) - f(x - s h)) / h.
const std::array<double, kStencilReach>& derivative_weights();

/// Covariant derivative along a 1D line of nodes. `links[k]` is the phase on
/// the link k -> k + 1 (size values.size() - 1, or empty for no gauge).
/// Writes D psi at each node into `out`.
void covariant_derivative_line(std::span<const cplx> values, std::span<const double> links,
                               double spacing, std::span<cplx> out);

ScalarField density(const WaveField& f);

/// J = Re[psi^* (-i D) psi]; throws ConfigError on grid mismatch.
VectorField current(const WaveField& f, const GaugeField& gauge);

/// <e^{i p_x L}> = sum psi^*(x, y) psi(x + L, y) dx dy. L must be a lattice
/// multiple of dx (ConfigError otherwise); shifted-out values are zero.
cplx modular_momentum_expectation(const WaveField& f, double L);

/// The modular part of a value: value - n * period with 0 <= result < period.
double modular_part(double value, double period);

/// Modular momentum p_x mod 2 pi / L implied by a <e^{i p_x L}> value.
double modular_momentum_from_expectation(cplx expectation, double L);

Vec2 expectation_position(const WaveField& f);

/// Kinetic velocity <(p - A)>, A from the link phases.
Vec2 expectation_velocity(const WaveField& f, const GaugeField& gauge);

/// Canonical momentum <p>, ignoring link phases (gauge dependent).
Vec2 expectation_canonical_momentum(const WaveField& f);

/// sqrt(sum (a - b)^2 dx dy); throws ConfigError on grid mismatch.
double l2_distance(const ScalarField& a, const ScalarField& b);

/// Largest |psi| on the outermost ring of nodes.
double boundary_amplitude(const WaveField& f);

}  // namespace abq
