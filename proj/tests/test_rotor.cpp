#include "abq/errors.hpp"
#include "abq/rotor.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace abq;

namespace {

RotorParams params() { return {10.0, 1.0, 0.1, InertiaMode::as_written}; }

RotorState random_state(const RotorParams& p, int n_max, int m_max, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> normal;
    std::vector<cplx> c(static_cast<std::size_t>((2 * n_max + 1) * (2 * m_max + 1)), 0.0);
    double norm = 0.0;
    for (int n = -n_max + 2; n <= n_max - 2; ++n) {
        for (int m = -m_max + 2; m <= m_max - 2; ++m) {
            const cplx z(normal(rng), normal(rng));
            c[static_cast<std::size_t>((n + n_max) * (2 * m_max + 1) + m + m_max)] = z;
            norm += std::norm(z);
        }
    }
    for (auto& z : c) z /= std::sqrt(norm);
    return RotorState(p, n_max, m_max, c);
}

double max_gap(const RotorState& a, const RotorState& b) {
    double worst = 0.0;
    for (std::size_t k = 0; k < a.coefficients().size(); ++k) {
        worst = std::max(worst, std::abs(a.coefficients()[k] - b.coefficients()[k]));
    }
    return worst;
}

cplx inner(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    cplx s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += std::conj(a[k]) * b[k];
    return s;
}

}  // namespace

TEST_CASE("energy levels") {
    CHECK(energy_level(params(), 0, 0) == 0.0);
    const RotorParams p{2.0, 1.0, 0.5, InertiaMode::as_written};
    CHECK(energy_level(p, 2, 1) == doctest::Approx(1.0).epsilon(1e-15));
    const RotorParams no_coupling{3.0, 1.5, 0.0, InertiaMode::as_written};
    for (int n = -3; n <= 3; ++n) {
        for (int m = 0; m <= 5; ++m) CHECK(energy_level(no_coupling, n, m) == energy_level(no_coupling, n, -m));
    }
}

TEST_CASE("renormalized inertia mode") {
    RotorParams p{2.0, 1.0, 0.5, InertiaMode::renormalized};
    CHECK(effective_electron_inertia(p) == doctest::Approx(0.5).epsilon(1e-15));
    // (1/2) [4/2 + (0 - 1)^2 / 0.5]
    CHECK(energy_level(p, 2, 0) == doctest::Approx(2.0).epsilon(1e-15));
    p.mode = InertiaMode::as_written;
    CHECK(effective_electron_inertia(p) == 1.0);
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(validate({0.0, 1.0, 0.1, InertiaMode::as_written}), ConfigError);
    CHECK_THROWS_AS(validate({1.0, -1.0, 0.1, InertiaMode::as_written}), ConfigError);
    CHECK_THROWS_AS(validate({10.0, 1.0, 0.5, InertiaMode::as_written}), ConfigError);  // I_c lambda^2 > I_e
    CHECK_NOTHROW(validate(params()));
}

TEST_CASE("coherent angular state") {
    const auto c = coherent_angular_state(1.0, 8.0, 128);
    double norm = 0.0;
    for (const auto& z : c) norm += std::norm(z);
    CHECK(std::abs(norm - 1.0) < 1e-12);
    CHECK(std::abs(circular_mean(c) - 1.0) < 1e-6);
    CHECK(angular_spread(c) == doctest::Approx(2.0 / 8.0).epsilon(1e-3));

    // Independent check of the mean: direct sum of <e^{i phi}> = sum conj(c_{m+1}) c_m.
    cplx z = 0.0;
    for (std::size_t k = 0; k + 1 < c.size(); ++k) z += std::conj(c[k + 1]) * c[k];
    CHECK(std::abs(std::arg(z) - 1.0) < 1e-12);

    const auto sharp = coherent_angular_state(1.0, 64.0, 400);
    CHECK(angular_spread(sharp) < angular_spread(c));
    CHECK(std::abs(circular_mean(sharp) - 1.0) < 1e-6);

    CHECK_THROWS_AS(coherent_angular_state(1.0, 8.0, 40), ConfigError);
}

TEST_CASE("rotor state validation") {
    const RotorParams p = params();
    std::vector<cplx> c(9 * 9, 0.0);
    c[4 * 9 + 4] = 0.5;
    CHECK_THROWS_AS(RotorState(p, 4, 4, c), ConfigError);  // norm 0.25
    c[4 * 9 + 4] = 0.0;
    c[0] = 1.0;  // all mass in the outermost shell
    CHECK_THROWS_AS(RotorState(p, 4, 4, c), ConfigError);
}

TEST_CASE("evolution") {
    const RotorState s = random_state(params(), 8, 10, 7);
    CHECK(max_gap(evolve_rotor(s, 0.0), s) == 0.0);
    const RotorState a = evolve_rotor(evolve_rotor(s, 0.7), 1.9);
    const RotorState b = evolve_rotor(s, 2.6);
    CHECK(max_gap(a, b) < 1e-12);
    for (std::size_t k = 0; k < s.coefficients().size(); ++k) {
        REQUIRE(std::abs(std::abs(b.coefficients()[k]) - std::abs(s.coefficients()[k])) < 1e-15);
    }
    CHECK(std::abs(b.norm_squared() - 1.0) < 1e-12);
}

TEST_CASE("shift unitary") {
    const RotorParams p = params();
    const RotorState s = random_state(p, 8, 10, 11);
    CHECK(max_gap(shift_unitary(s, 0.0), s) == 0.0);
    for (double t : {0.3, 4.0}) {
        for (double d : {0.2, -1.7}) {
            CHECK(max_gap(evolve_rotor(shift_unitary(s, d), t), shift_unitary(evolve_rotor(s, t), d)) < 1e-12);
        }
    }
    CHECK(std::abs(shift_unitary(s, 0.9).norm_squared() - 1.0) < 1e-12);

    // Cylinder in eigenstate n: the electron packet moves to phi0 + delta and
    // the state picks up e^{i lambda n delta} relative to the moved packet.
    const int n = 5;
    const double phi0 = 1.0;
    const double delta = 0.4;
    const RotorState eig = product_state(p, basis_vector(n, 8), coherent_angular_state(phi0, 8.0, 64));
    const RotorState shifted = shift_unitary(eig, delta);
    const auto moved = coherent_angular_state(phi0 + delta, 8.0, 64);
    const cplx overlap = inner(moved, electron_branch(shifted, n));
    CHECK(std::abs(overlap - std::polar(1.0, p.lambda * n * delta)) < 1e-12);
    CHECK(std::abs(circular_mean(electron_branch(shifted, n)) - (phi0 + delta)) < 1e-9);
}

TEST_CASE("entanglement entropy") {
    const RotorParams p = params();
    SUBCASE("product state") {
        const RotorState s = product_state(p, basis_vector(3, 8), coherent_angular_state(0.5, 4.0, 32));
        CHECK(std::abs(entanglement_entropy(s)) < 1e-12);
    }
    SUBCASE("orthogonal branches") {
        std::vector<cplx> c(17 * 9, 0.0);
        const double w = 1.0 / std::sqrt(2.0);
        c[(2 + 8) * 9 + (0 + 4)] = w;
        c[(3 + 8) * 9 + (1 + 4)] = w;
        CHECK(std::abs(entanglement_entropy(RotorState(p, 8, 4, c)) - std::log(2.0)) < 1e-10);
    }
    SUBCASE("branches with overlap 0.6") {
        std::vector<cplx> c(17 * 9, 0.0);
        const double w = 1.0 / std::sqrt(2.0);
        c[(2 + 8) * 9 + (0 + 4)] = w;
        c[(3 + 8) * 9 + (0 + 4)] = w * 0.6;
        c[(3 + 8) * 9 + (1 + 4)] = w * 0.8;
        const double hi = 0.8;
        const double lo = 0.2;
        const double expect = -hi * std::log(hi) - lo * std::log(lo);
        CHECK(std::abs(entanglement_entropy(RotorState(p, 8, 4, c)) - expect) < 1e-10);
    }
    SUBCASE("local phases do not change it") {
        const RotorState s = random_state(p, 6, 6, 3);
        std::vector<cplx> c = s.coefficients();
        for (int n = -6; n <= 6; ++n) {
            for (int m = -6; m <= 6; ++m) c[static_cast<std::size_t>((n + 6) * 13 + m + 6)] *= std::polar(1.0, 0.3 * n * n + 1.1 * m);
        }
        CHECK(std::abs(entanglement_entropy(RotorState(p, 6, 6, c)) - entanglement_entropy(s)) < 1e-10);
        const double s_max = std::log(13.0);
        CHECK(entanglement_entropy(s) <= s_max);
    }
}

TEST_CASE("coupling decomposition") {
    const RotorParams p = params();
    const auto electron = coherent_angular_state(0.0, 4.0, 32);
    SUBCASE("eigenstate") {
        const CouplingReport r = coupling_decomposition(product_state(p, basis_vector(5, 8), electron));
        CHECK(r.mean_lc == doctest::Approx(5.0).epsilon(1e-15));
        CHECK(r.variance_lc == 0.0);
        CHECK(r.mean_fraction == doctest::Approx(1.0).epsilon(1e-15));
        REQUIRE(r.populated_n.size() == 1);
        CHECK(r.fluctuation[0] == 0.0);
    }
    SUBCASE("equal mix of 4 and 6") {
        std::vector<cplx> cyl(17, 0.0);
        cyl[4 + 8] = 1.0;
        cyl[6 + 8] = 1.0;
        const CouplingReport r = coupling_decomposition(product_state(p, cyl, electron));
        CHECK(std::abs(r.mean_lc - 5.0) < 1e-12);
        CHECK(std::abs(r.variance_lc - 1.0) < 1e-12);
        CHECK(std::abs(r.mean_fraction - 25.0 / 26.0) < 1e-12);
    }
    SUBCASE("flux quantization removes the fluctuation") {
        std::vector<cplx> cyl(17, 0.0);
        cyl[4 + 8] = 1.0;
        cyl[6 + 8] = cplx(0.0, 1.0);
        const RotorState q = quantize_flux(product_state(p, cyl, electron), 6);
        const CouplingReport r = coupling_decomposition(q);
        CHECK(r.variance_lc == 0.0);
        CHECK(r.mean_fraction == doctest::Approx(1.0).epsilon(1e-15));
        CHECK_THROWS_AS(quantize_flux(q, 4), ConfigError);
    }
}
