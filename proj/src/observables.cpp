#include "abq/observables.hpp"

#include "abq/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace abq {

namespace {

std::array<double, kStencilReach> make_weights() {
    // w_s = (-1)^{s+1} (P!)^2 / (s (P-s)! (P+s)!)
    std::array<double, kStencilReach> w{};
    auto factorial = [](int n) {
        double f = 1.0;
        for (int k = 2; k <= n; ++k) f *= k;
        return f;
    };
    const int p = kStencilReach;
    for (int s = 1; s <= p; ++s) {
        const double sign = (s % 2 == 1) ? 1.0 : -1.0;
        w[static_cast<std::size_t>(s - 1)] =
            sign * factorial(p) * factorial(p) / (s * factorial(p - s) * factorial(p + s));
    }
    return w;
}

// Kinetic flux Im(psi^* D psi) per node along every row (x) and column (y).
void kinetic_flux(const WaveField& f, const GaugeField* gauge, std::vector<double>& jx,
                  std::vector<double>& jy) {
    const Grid2D& g = f.grid();
    const auto amp = f.amplitudes();
    jx.assign(g.size(), 0.0);
    jy.assign(g.size(), 0.0);

    std::vector<cplx> line(static_cast<std::size_t>(std::max(g.nx, g.ny)));
    std::vector<cplx> deriv(line.size());
    std::vector<double> links(line.size());

    for (int j = 0; j < g.ny; ++j) {
        const std::size_t n = static_cast<std::size_t>(g.nx);
        for (int i = 0; i < g.nx; ++i) line[static_cast<std::size_t>(i)] = amp[g.index(i, j)];
        std::span<const double> link_span;
        if (gauge) {
            for (int i = 0; i + 1 < g.nx; ++i) links[static_cast<std::size_t>(i)] = gauge->link_x(i, j);
            link_span = std::span<const double>(links.data(), n - 1);
        }
        covariant_derivative_line(std::span<const cplx>(line.data(), n), link_span, g.dx,
                                  std::span<cplx>(deriv.data(), n));
        for (int i = 0; i < g.nx; ++i) {
            const auto k = static_cast<std::size_t>(i);
            jx[g.index(i, j)] = std::imag(std::conj(line[k]) * deriv[k]);
        }
    }
    for (int i = 0; i < g.nx; ++i) {
        const std::size_t n = static_cast<std::size_t>(g.ny);
        for (int j = 0; j < g.ny; ++j) line[static_cast<std::size_t>(j)] = amp[g.index(i, j)];
        std::span<const double> link_span;
        if (gauge) {
            for (int j = 0; j + 1 < g.ny; ++j) links[static_cast<std::size_t>(j)] = gauge->link_y(i, j);
            link_span = std::span<const double>(links.data(), n - 1);
        }
        covariant_derivative_line(std::span<const cplx>(line.data(), n), link_span, g.dy,
                                  std::span<cplx>(deriv.data(), n));
        for (int j = 0; j < g.ny; ++j) {
            const auto k = static_cast<std::size_t>(j);
            jy[g.index(i, j)] = std::imag(std::conj(line[k]) * deriv[k]);
        }
    }
}

}  // namespace

const std::array<double, kStencilReach>& derivative_weights() {
    static const std::array<double, kStencilReach> weights = make_weights();
    return weights;
}

void covariant_derivative_line(std::span<const cplx> values, std::span<const double> links,
                               double spacing, std::span<cplx> out) {
    const std::size_t n = values.size();
    if (out.size() != n || (!links.empty() && links.size() + 1 != n)) {
        throw ConfigError("covariant_derivative_line: size mismatch");
    }
    const auto& w = derivative_weights();

    // Gauge-fix the line: phi_k = e^{-i Theta_k} psi_k with Theta_k the link
    // sum from node 0 to k; then D psi_k = e^{i Theta_k} (d phi / dx)_k.
    std::vector<cplx> fixed(values.begin(), values.end());
    std::vector<double> theta;
    if (!links.empty()) {
        theta.resize(n);
        theta[0] = 0.0;
        for (std::size_t k = 1; k < n; ++k) theta[k] = theta[k - 1] + links[k - 1];
        for (std::size_t k = 0; k < n; ++k) fixed[k] *= std::polar(1.0, -theta[k]);
    }
    const double inv_h = 1.0 / spacing;
    const auto reach = static_cast<std::ptrdiff_t>(kStencilReach);
    const auto sn = static_cast<std::ptrdiff_t>(n);
    for (std::ptrdiff_t k = 0; k < sn; ++k) {
        cplx acc = 0.0;
        for (std::ptrdiff_t s = reach; s >= 1; --s) {
            const cplx fwd = k + s < sn ? fixed[static_cast<std::size_t>(k + s)] : cplx{};
            const cplx bwd = k - s >= 0 ? fixed[static_cast<std::size_t>(k - s)] : cplx{};
            acc += w[static_cast<std::size_t>(s - 1)] * (fwd - bwd);
        }
        acc *= inv_h;
        if (!links.empty()) acc *= std::polar(1.0, theta[static_cast<std::size_t>(k)]);
        out[static_cast<std::size_t>(k)] = acc;
    }
}

ScalarField density(const WaveField& f) {
    std::vector<double> rho(f.grid().size());
    const auto amp = f.amplitudes();
    for (std::size_t k = 0; k < rho.size(); ++k) rho[k] = std::norm(amp[k]);
    return ScalarField(f.grid(), std::move(rho));
}

VectorField current(const WaveField& f, const GaugeField& gauge) {
    if (!(f.grid() == gauge.grid())) throw ConfigError("current: grid mismatch");
    std::vector<double> jx;
    std::vector<double> jy;
    kinetic_flux(f, &gauge, jx, jy);
    return VectorField(f.grid(), std::move(jx), std::move(jy));
}

cplx modular_momentum_expectation(const WaveField& f, double L) {
    const Grid2D& g = f.grid();
    const int shift = lattice_steps(L, g.dx, "modular length L");
    const auto amp = f.amplitudes();
    const int i_begin = std::max(0, -shift);
    const int i_end = std::min(g.nx, g.nx - shift);
    cplx sum = 0.0;
    for (int j = 0; j < g.ny; ++j) {
        cplx row = 0.0;
        for (int i = i_begin; i < i_end; ++i) {
            row += std::conj(amp[g.index(i, j)]) * amp[g.index(i + shift, j)];
        }
        sum += row;
    }
    return sum * g.cell_area();
}

double modular_part(double value, double period) {
    double r = value - std::floor(value / period) * period;
    if (r >= period) r -= period;
    if (r < 0.0) r = 0.0;
    return r;
}

double modular_momentum_from_expectation(cplx expectation, double L) {
    return modular_part(std::arg(expectation) / L, 2.0 * std::numbers::pi / std::abs(L));
}

Vec2 expectation_position(const WaveField& f) {
    const Grid2D& g = f.grid();
    const auto amp = f.amplitudes();
    double mass = 0.0;
    double sx = 0.0;
    double sy = 0.0;
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const double rho = std::norm(amp[g.index(i, j)]);
            mass += rho;
            sx += rho * g.x(i);
            sy += rho * g.y(j);
        }
    }
    if (!(mass > 0.0)) throw ConfigError("expectation_position: zero field");
    return {sx / mass, sy / mass};
}

Vec2 expectation_velocity(const WaveField& f, const GaugeField& gauge) {
    return current(f, gauge).integral();
}

Vec2 expectation_canonical_momentum(const WaveField& f) {
    std::vector<double> jx;
    std::vector<double> jy;
    kinetic_flux(f, nullptr, jx, jy);
    return VectorField(f.grid(), std::move(jx), std::move(jy)).integral();
}

double l2_distance(const ScalarField& a, const ScalarField& b) {
    if (!(a.grid() == b.grid())) throw ConfigError("l2_distance: grid mismatch");
    const auto va = a.values();
    const auto vb = b.values();
    double sum = 0.0;
    for (std::size_t k = 0; k < va.size(); ++k) {
        const double d = va[k] - vb[k];
        sum += d * d;
    }
    return std::sqrt(sum * a.grid().cell_area());
}

double boundary_amplitude(const WaveField& f) {
    const Grid2D& g = f.grid();
    double m = 0.0;
    for (int i = 0; i < g.nx; ++i) {
        m = std::max({m, std::abs(f.at(i, 0)), std::abs(f.at(i, g.ny - 1))});
    }
    for (int j = 0; j < g.ny; ++j) {
        m = std::max({m, std::abs(f.at(0, j)), std::abs(f.at(g.nx - 1, j))});
    }
    return m;
}

}  // namespace abq
