#include "abq/errors.hpp"
#include "abq/gauge.hpp"
#include "abq/observables.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace abq;

namespace {

Grid2D grid() { return make_grid(192, 128, 0.125, 0.125, -11.9375, -7.9375); }

}  // namespace

TEST_CASE("density integrates to the norm and ignores global phase") {
    const Grid2D g = grid();
    const WaveField f = gaussian_packet(g, {1.0, -0.5}, 0.7, {0.4, 0.9});
    CHECK(std::abs(density(f).integral() - 1.0) < 1e-12);

    std::vector<cplx> rotated(f.amplitudes().begin(), f.amplitudes().end());
    for (auto& a : rotated) a *= std::polar(1.0, 0.77);
    const ScalarField r1 = density(f);
    const ScalarField r2 = density(WaveField(g, rotated));
    // |e^{i t} a|^2 may round differently from |a|^2; the relative gap stays at ulp level.
    for (std::size_t k = 0; k < g.size(); ++k) {
        REQUIRE(std::abs(r1.values()[k] - r2.values()[k]) <= 1e-15 * r1.values()[k]);
    }
}

TEST_CASE("current of a real field vanishes") {
    const Grid2D g = grid();
    const WaveField f = gaussian_packet(g, {0.0, 0.0}, 0.75, {0.0, 0.0});
    const VectorField j = current(f, zero_gauge(g));
    for (std::size_t k = 0; k < g.size(); ++k) {
        REQUIRE(std::abs(j.x_component()[k]) < 1e-14);
        REQUIRE(std::abs(j.y_component()[k]) < 1e-14);
    }
}

TEST_CASE("current of a windowed plane wave is k rho") {
    // For a real envelope times e^{i k x} the continuum current is exactly k rho.
    const Grid2D g = grid();
    const double k = 1.5;
    const WaveField f = gaussian_packet(g, {0.0, 0.0}, {1.0, 0.75}, {k, 0.0});
    const ScalarField rho = density(f);
    const VectorField j = current(f, zero_gauge(g));
    double worst = 0.0;
    for (int jj = 16; jj < g.ny - 16; ++jj) {
        for (int i = 16; i < g.nx - 16; ++i) {
            const std::size_t p = g.index(i, jj);
            worst = std::max(worst, std::abs(j.x_component()[p] - k * rho.values()[p]));
            worst = std::max(worst, std::abs(j.y_component()[p]));
        }
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("integrated current equals the velocity expectation") {
    const Grid2D g = make_grid(160, 160, 0.125, 0.125, -9.9375, -9.9375);
    const WaveField f = gaussian_packet(g, {1.5, -1.0}, 0.7, {-0.6, 1.3});
    const GaugeField a = symmetric_gauge(g, 0.8, 0.5);
    const Vec2 total = current(f, a).integral();
    const Vec2 v = expectation_velocity(f, a);
    CHECK(std::abs(total.x - v.x) < 1e-8);
    CHECK(std::abs(total.y - v.y) < 1e-8);
}

TEST_CASE("position and velocity expectations of a gaussian") {
    const Grid2D g = grid();
    const WaveField at_rest = gaussian_packet(g, {3.0, -2.0}, 0.5, {0.0, 0.0});
    const Vec2 r = expectation_position(at_rest);
    CHECK(std::abs(r.x - 3.0) < 1e-8);
    CHECK(std::abs(r.y + 2.0) < 1e-8);
    const Vec2 v0 = expectation_velocity(at_rest, zero_gauge(g));
    CHECK(std::abs(v0.x) < 1e-8);
    CHECK(std::abs(v0.y) < 1e-8);

    const WaveField moving = gaussian_packet(g, {0.0, 0.0}, 0.75, {1.0, 0.0});
    const Vec2 v1 = expectation_velocity(moving, zero_gauge(g));
    CHECK(std::abs(v1.x - 1.0) < 1e-8);
    CHECK(std::abs(v1.y) < 1e-8);
}

TEST_CASE("modular momentum expectation") {
    const Grid2D g = make_grid(512, 64, 0.125, 0.25, -31.9375, -7.875);

    SUBCASE("zero shift") {
        const WaveField f = gaussian_packet(g, {0.0, 0.0}, {1.0, 0.6}, {0.3, 0.0});
        CHECK(std::abs(modular_momentum_expectation(f, 0.0) - 1.0) < 1e-15);
    }

    SUBCASE("single gaussian self-overlap") {
        const double sigma = 1.3;
        const double k0 = 2.1;
        const double L = 2.5;
        const WaveField f = gaussian_packet(g, {0.0, 0.0}, {sigma, 0.6}, {k0, 0.0});
        const cplx expect = std::exp(-L * L / (8.0 * sigma * sigma)) * std::polar(1.0, k0 * L);
        CHECK(std::abs(modular_momentum_expectation(f, L) - expect) < 1e-8);
    }

    SUBCASE("two packets a distance L apart") {
        const double sigma = 1.0;
        const double L = 16.0;
        const double beta = 0.9;
        const WaveField left = gaussian_packet(g, {-8.0, 0.0}, {sigma, 0.6}, {0.0, 0.0});
        const WaveField right = gaussian_packet(g, {8.0, 0.0}, {sigma, 0.6}, {0.0, 0.0});
        const WaveField f = superpose(left, right, 1.0, 1.0, beta);
        const cplx m = modular_momentum_expectation(f, L);
        CHECK(std::abs(m - 0.5 * std::polar(1.0, beta)) < std::exp(-L * L / (8.0 * sigma * sigma)) + 1e-8);
        CHECK(std::abs(m) <= 1.0);
    }

    SUBCASE("invariances") {
        const WaveField f = gaussian_packet(g, {1.0, -1.0}, {1.0, 0.6}, {0.8, 0.0});
        const cplx m = modular_momentum_expectation(f, 1.5);
        std::vector<cplx> rotated(f.amplitudes().begin(), f.amplitudes().end());
        for (auto& a : rotated) a *= std::polar(1.0, 2.0);
        CHECK(std::abs(modular_momentum_expectation(WaveField(g, rotated), 1.5) - m) < 1e-14);
        const WaveField shifted = gaussian_packet(g, {1.0, 0.5}, {1.0, 0.6}, {0.8, 0.0});
        CHECK(std::abs(modular_momentum_expectation(shifted, 1.5) - m) < 1e-14);
    }

    SUBCASE("shift must be a lattice multiple") {
        const WaveField f = gaussian_packet(g, {0.0, 0.0}, {1.0, 0.6}, {0.0, 0.0});
        CHECK_THROWS_AS(modular_momentum_expectation(f, 0.3), ConfigError);
    }
}

TEST_CASE("modular parts") {
    const double period = 2.0 * std::numbers::pi / 16.0;
    CHECK(std::abs(modular_part(0.1, period) - 0.1) < 1e-15);
    CHECK(std::abs(modular_part(period + 0.1, period) - 0.1) < 1e-14);
    CHECK(std::abs(modular_part(-0.1, period) - (period - 0.1)) < 1e-14);
}

TEST_CASE("l2 distance") {
    const Grid2D g = make_grid(16, 16, 0.5, 0.5, 0.0, 0.0);
    const ScalarField a(g, std::vector<double>(g.size(), 1.0));
    const ScalarField b(g, std::vector<double>(g.size(), 0.0));
    // sqrt(256 * 0.25)
    CHECK(l2_distance(a, b) == doctest::Approx(8.0).epsilon(1e-15));
    const Grid2D other = make_grid(16, 16, 1.0, 1.0, 0.0, 0.0);
    CHECK_THROWS_AS(l2_distance(a, ScalarField(other, std::vector<double>(other.size(), 0.0))), ConfigError);
}
