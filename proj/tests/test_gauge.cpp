#include "abq/errors.hpp"
#include "abq/gauge.hpp"
#include "abq/observables.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace abq;

namespace {

// Origin between nodes in both directions: x(31) = -0.125, x(32) = 0.125.
Grid2D centred_grid() { return make_grid(64, 64, 0.25, 0.25, -7.875, -7.875); }

Grid2D fine_grid() { return make_grid(160, 160, 0.125, 0.125, -9.9375, -9.9375); }

// Independent clockwise loop sum along node paths, written out link by link.
double walk_loop(const GaugeField& g, int i0, int j0, int i1, int j1) {
    double s = 0.0;
    int i = i0;
    int j = j0;
    while (j < j1) s += g.link_y(i, j++);   // up the left side
    while (i < i1) s += g.link_x(i++, j);   // right along the top
    while (j > j0) s -= g.link_y(i, --j);   // down the right side
    while (i > i0) s -= g.link_x(--i, j);   // back along the bottom
    return s;
}

double wrap(double a) { return std::remainder(a, 2.0 * std::numbers::pi); }

}  // namespace

TEST_CASE("zero gauge") {
    const Grid2D g = centred_grid();
    const GaugeField z = zero_gauge(g);
    CHECK(z.kind() == GaugeKind::zero);
    CHECK(to_string(z.kind()) == "zero");
    for (int j = 0; j + 1 < g.ny; j += 7) {
        for (int i = 0; i + 1 < g.nx; i += 5) CHECK(plaquette_flux(z, i, j).raw() == 0.0);
    }
}

TEST_CASE("string gauge places the flux in one plaquette") {
    const Grid2D g = centred_grid();
    const double alpha = 1.3;
    const GaugeField s = string_gauge(g, alpha);
    CHECK(s.kind() == GaugeKind::string);
    for (double v : s.link_x_values()) REQUIRE(v == 0.0);
    for (int j = 0; j + 1 < g.ny; ++j) {
        for (int i = 0; i + 1 < g.nx; ++i) {
            const double expect = (i == 31 && j == 31) ? alpha : 0.0;
            REQUIRE(std::abs(plaquette_flux(s, i, j).raw() - expect) < 1e-12);
        }
    }
    // Only y-links crossing y = 0 at x > 0 carry -alpha.
    for (int j = 0; j + 1 < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const bool crosses = j == 31 && g.x(i) > 0.0;
            REQUIRE(s.link_y(i, j) == (crosses ? -alpha : 0.0));
        }
    }
}

TEST_CASE("string gauge loop sums") {
    const Grid2D g = centred_grid();
    const double alpha = 2.2;
    const GaugeField s = string_gauge(g, alpha);
    CHECK(std::abs(walk_loop(s, 5, 10, 50, 40) - alpha) < 1e-12);
    CHECK(std::abs(loop_phase(s, 5, 10, 50, 40) - alpha) < 1e-12);
    CHECK(std::abs(walk_loop(s, 33, 10, 60, 40)) < 1e-12);  // string enters and leaves
    CHECK(std::abs(walk_loop(s, 2, 40, 20, 60)) < 1e-12);
    CHECK(std::abs(wrap(walk_loop(string_gauge(g, 5.0), 1, 1, 62, 62) - 5.0)) < 1e-12);
}

TEST_CASE("string gauge with zero flux is the zero gauge") {
    const Grid2D g = centred_grid();
    const GaugeField s = string_gauge(g, 0.0);
    for (double v : s.link_y_values()) CHECK(v == 0.0);
}

TEST_CASE("string gauge rejects a node row on the string") {
    const Grid2D g = make_grid(64, 64, 0.25, 0.25, -8.0, -8.0);
    CHECK_THROWS_AS(string_gauge(g, 1.0), ConfigError);
}

TEST_CASE("plaquette fluxes are additive") {
    const Grid2D g = fine_grid();
    const GaugeField s = symmetric_gauge(g, 1.1, 0.5);
    for (int i = 60; i < 100; i += 9) {
        const double pair = plaquette_flux(s, i, 70).raw() + plaquette_flux(s, i + 1, 70).raw();
        CHECK(std::abs(pair - loop_phase(s, i, 70, i + 2, 71)) < 1e-12);
    }
}

TEST_CASE("symmetric gauge loop phases") {
    const Grid2D g = fine_grid();
    const double alpha = 1.1;
    const double r0 = 0.5;
    const GaugeField s = symmetric_gauge(g, alpha, r0);
    CHECK(s.kind() == GaugeKind::symmetric);
    // Square of half-width 10 r0 = 5 around the origin: nodes x = +-4.9375.
    const int lo = 40;
    const int hi = 119;
    CHECK(g.x(lo) == -4.9375);
    CHECK(g.x(hi) == 4.9375);
    CHECK(std::abs(walk_loop(s, lo, lo, hi, hi) - alpha) < 1e-3);
    // Loop clear of the core and the origin.
    CHECK(std::abs(walk_loop(s, 100, 100, 140, 140)) < 1e-3);

    const GaugeField none = symmetric_gauge(g, 0.0, r0);
    for (double v : none.link_x_values()) REQUIRE(v == 0.0);
    for (double v : none.link_y_values()) REQUIRE(v == 0.0);

    CHECK_THROWS_AS(symmetric_gauge(g, alpha, 0.3), ConfigError);  // r0 < 3h
}

TEST_CASE("angular gauge function maps symmetric onto string links") {
    const Grid2D g = fine_grid();
    const double alpha = 1.3;
    const WaveField f = gaussian_packet(g, {1.0, 1.0}, 0.6, {0.0, -1.0});
    const auto [f2, transformed] = gauge_transform(f, symmetric_gauge(g, alpha, 0.5),
                                                   angular_gauge_function(g, alpha));
    const GaugeField target = string_gauge(g, alpha);
    const auto core = core_mask(g, 0.5);
    double worst = 0.0;
    for (int j = 0; j + 1 < g.ny; ++j) {
        for (int i = 0; i + 1 < g.nx; ++i) {
            // Links touching the masked core never enter the dynamics.
            if (core[g.index(i, j)] || core[g.index(i + 1, j)] || core[g.index(i, j + 1)]) continue;
            worst = std::max(worst, std::abs(wrap(transformed.link_x(i, j) - target.link_x(i, j))));
            worst = std::max(worst, std::abs(wrap(transformed.link_y(i, j) - target.link_y(i, j))));
        }
    }
    CHECK(worst < 1e-3);
}

TEST_CASE("gauge transforms leave observables alone") {
    const Grid2D g = fine_grid();
    const WaveField f = gaussian_packet(g, {-1.0, 0.5}, 0.7, {0.7, -1.2});
    const GaugeField a = symmetric_gauge(g, 0.9, 0.5);

    SUBCASE("constant chi is a global phase") {
        const auto [f2, a2] = gauge_transform(f, a, constant_gauge_function(g, 0.4));
        for (std::size_t k = 0; k < g.size(); ++k) {
            REQUIRE(std::abs(f2.amplitudes()[k] - f.amplitudes()[k] * std::polar(1.0, 0.4)) < 1e-15);
            REQUIRE(a2.link_x_values()[k] == a.link_x_values()[k]);
            REQUIRE(a2.link_y_values()[k] == a.link_y_values()[k]);
        }
    }

    SUBCASE("smooth chi") {
        GaugeFunction chi;
        chi.chi.resize(g.size());
        for (int j = 0; j < g.ny; ++j) {
            for (int i = 0; i < g.nx; ++i) {
                chi.chi[g.index(i, j)] = 0.3 * std::sin(0.4 * g.x(i)) + 0.05 * g.y(j) * g.y(j);
            }
        }
        const auto [f2, a2] = gauge_transform(f, a, chi);
        const ScalarField r1 = density(f);
        const ScalarField r2 = density(f2);
        for (std::size_t k = 0; k < g.size(); ++k) {
            // |e^{i chi} a|^2 and |a|^2 can differ in the last bit.
            REQUIRE(std::abs(r1.values()[k] - r2.values()[k]) <= 1e-15 * r1.values()[k]);
        }
        for (int j = 10; j < g.ny - 10; j += 13) {
            for (int i = 10; i < g.nx - 10; i += 11) {
                REQUIRE(std::abs(plaquette_flux(a2, i, j).raw() - plaquette_flux(a, i, j).raw()) < 1e-12);
            }
        }
        const VectorField j1 = current(f, a);
        const VectorField j2 = current(f2, a2);
        double gap = 0.0;
        for (std::size_t k = 0; k < g.size(); ++k) {
            gap = std::max({gap, std::abs(j1.x_component()[k] - j2.x_component()[k]),
                            std::abs(j1.y_component()[k] - j2.y_component()[k])});
        }
        CHECK(gap < 1e-10);
        const Vec2 v1 = expectation_velocity(f, a);
        const Vec2 v2 = expectation_velocity(f2, a2);
        CHECK(std::abs(v1.x - v2.x) < 1e-10);
        CHECK(std::abs(v1.y - v2.y) < 1e-10);
        const Vec2 p1 = expectation_canonical_momentum(f);
        const Vec2 p2 = expectation_canonical_momentum(f2);
        CHECK(std::abs(p1.x - p2.x) + std::abs(p1.y - p2.y) > 1e-3);
    }
}

TEST_CASE("quantized flux values") {
    const auto v = quantized_flux_values(3);
    REQUIRE(v.size() == 4);
    CHECK(v[0] == 0.0);
    CHECK(v[1] == std::numbers::pi);
    CHECK(v[2] == 2.0 * std::numbers::pi);
    CHECK(v[3] == 3.0 * std::numbers::pi);
}
