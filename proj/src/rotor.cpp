#include "abq/rotor.hpp"

#include "abq/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

namespace abq {

namespace {

void normalize_in_place(std::vector<cplx>& v, const char* what) {
    double n2 = 0.0;
    for (const cplx& a : v) n2 += std::norm(a);
    if (!(n2 > 0.0) || !std::isfinite(n2)) {
        throw ConfigError(std::string(what) + ": zero or non-finite norm");
    }
    const double scale = 1.0 / std::sqrt(n2);
    for (cplx& a : v) a *= scale;
}

int half_width(const std::vector<cplx>& v, const char* what) {
    if (v.size() % 2 == 0 || v.empty()) {
        throw ConfigError(std::string(what) + ": index range must be symmetric (odd length)");
    }
    return static_cast<int>(v.size() / 2);
}

// <e^{i phi}> = sum_m conj(c_{m+1}) c_m.
cplx raising_expectation(const std::vector<cplx>& c) {
    cplx sum{};
    for (std::size_t k = 0; k + 1 < c.size(); ++k) sum += std::conj(c[k + 1]) * c[k];
    double n2 = 0.0;
    for (const cplx& a : c) n2 += std::norm(a);
    if (!(n2 > 0.0)) throw ConfigError("angular moments of a zero vector");
    return sum / n2;
}

}  // namespace

void validate(const RotorParams& p) {
    if (!(p.cylinder_inertia > 0.0) || !(p.electron_inertia > 0.0) ||
        !std::isfinite(p.cylinder_inertia) || !std::isfinite(p.electron_inertia)) {
        throw ConfigError("rotor moments of inertia must be positive and finite");
    }
    if (!std::isfinite(p.lambda)) throw ConfigError("rotor coupling lambda must be finite");
    if (!(p.cylinder_inertia * p.lambda * p.lambda < p.electron_inertia)) {
        throw ConfigError("rotor parameters need I_c lambda^2 < I_e");
    }
}

double effective_electron_inertia(const RotorParams& p) {
    if (p.mode == InertiaMode::renormalized) {
        return p.electron_inertia - p.cylinder_inertia * p.lambda * p.lambda;
    }
    return p.electron_inertia;
}

// Evaluated in extended precision and rounded once: at |n|, |m| ~ 100 the
// plain double expression is off by more than an ulp of the result.
double energy_level(const RotorParams& p, int n, int m) {
    const long double dn = n;
    const long double de = m - static_cast<long double>(p.lambda) * n;
    const long double ie = effective_electron_inertia(p);
    return static_cast<double>(0.5L * (dn * dn / p.cylinder_inertia + de * de / ie));
}

RotorState::RotorState(RotorParams params, int n_max, int m_max, std::vector<cplx> coeffs)
    : params_(params), n_max_(n_max), m_max_(m_max), c_(std::move(coeffs)) {
    validate(params_);
    if (n_max_ < 2 || m_max_ < 2) throw ConfigError("rotor truncation needs N_c, N_e >= 2");
    if (c_.size() != static_cast<std::size_t>(n_count()) * static_cast<std::size_t>(m_count())) {
        throw ConfigError("rotor coefficient count does not match the truncation");
    }
    const double n2 = norm_squared();
    if (std::abs(n2 - 1.0) > 1e-12) {
        std::ostringstream msg;
        msg << "rotor state norm " << n2 << " differs from 1 by more than 1e-12";
        throw ConfigError(msg.str());
    }
    double tail = 0.0;
    for (int n = -n_max_; n <= n_max_; ++n) {
        for (int m = -m_max_; m <= m_max_; ++m) {
            if (std::abs(n) >= n_max_ - 1 || std::abs(m) >= m_max_ - 1) {
                tail += std::norm((*this)(n, m));
            }
        }
    }
    if (tail >= 1e-12) {
        std::ostringstream msg;
        msg << "rotor truncation too tight: outer-shell mass " << tail << " (limit 1e-12)";
        throw ConfigError(msg.str());
    }
}

double RotorState::norm_squared() const {
    double sum = 0.0;
    for (const cplx& a : c_) sum += std::norm(a);
    return sum;
}

std::vector<cplx> coherent_angular_state(double phi0, double dm, int m_max) {
    if (!(dm > 0.0) || !std::isfinite(dm) || !std::isfinite(phi0)) {
        throw ConfigError("coherent state needs a positive, finite width dm");
    }
    if (!(m_max >= 6.0 * dm)) {
        std::ostringstream msg;
        msg << "coherent state truncation too tight: N_e = " << m_max << " < 6 dm = " << 6.0 * dm;
        throw ConfigError(msg.str());
    }
    std::vector<cplx> c(static_cast<std::size_t>(2 * m_max + 1));
    for (int m = -m_max; m <= m_max; ++m) {
        const double u = m / dm;
        c[static_cast<std::size_t>(m + m_max)] = std::exp(-u * u) * std::polar(1.0, -m * phi0);
    }
    normalize_in_place(c, "coherent state");
    return c;
}

std::vector<cplx> basis_vector(int k, int k_max) {
    if (k_max < 0 || std::abs(k) > k_max) throw ConfigError("basis index outside truncation");
    std::vector<cplx> v(static_cast<std::size_t>(2 * k_max + 1));
    v[static_cast<std::size_t>(k + k_max)] = 1.0;
    return v;
}

RotorState product_state(const RotorParams& p, const std::vector<cplx>& cylinder,
                         const std::vector<cplx>& electron) {
    const int n_max = half_width(cylinder, "cylinder state");
    const int m_max = half_width(electron, "electron state");
    std::vector<cplx> a = cylinder;
    std::vector<cplx> b = electron;
    normalize_in_place(a, "cylinder state");
    normalize_in_place(b, "electron state");
    std::vector<cplx> c;
    c.reserve(a.size() * b.size());
    for (const cplx& x : a) {
        for (const cplx& y : b) c.push_back(x * y);
    }
    return RotorState(p, n_max, m_max, std::move(c));
}

double circular_mean(const std::vector<cplx>& coeffs) {
    return std::arg(raising_expectation(coeffs));
}

double angular_spread(const std::vector<cplx>& coeffs) {
    const double r = std::abs(raising_expectation(coeffs));
    return 2.0 * std::sqrt(-2.0 * std::log(r));
}

RotorState evolve_rotor(const RotorState& s, double t) {
    std::vector<cplx> c = s.coefficients();
    std::size_t k = 0;
    for (int n = -s.n_max(); n <= s.n_max(); ++n) {
        for (int m = -s.m_max(); m <= s.m_max(); ++m, ++k) {
            c[k] *= std::polar(1.0, -energy_level(s.params(), n, m) * t);
        }
    }
    return RotorState(s.params(), s.n_max(), s.m_max(), std::move(c));
}

RotorState shift_unitary(const RotorState& s, double delta) {
    std::vector<cplx> c = s.coefficients();
    std::size_t k = 0;
    for (int n = -s.n_max(); n <= s.n_max(); ++n) {
        for (int m = -s.m_max(); m <= s.m_max(); ++m, ++k) {
            c[k] *= std::polar(1.0, (s.params().lambda * n - m) * delta);
        }
    }
    return RotorState(s.params(), s.n_max(), s.m_max(), std::move(c));
}

Eigen::MatrixXcd reduced_cylinder_state(const RotorState& s) {
    const Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
        c(s.coefficients().data(), s.n_count(), s.m_count());
    return c * c.adjoint();
}

double von_neumann_entropy(const Eigen::MatrixXcd& rho) {
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw NumericalError("density matrix eigensolver failed");
    double s = 0.0;
    for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) {
        const double p = solver.eigenvalues()[k];
        if (p > 0.0) s -= p * std::log(p);
    }
    return s;
}

double entanglement_entropy(const RotorState& s) {
    return von_neumann_entropy(reduced_cylinder_state(s));
}

std::vector<cplx> electron_branch(const RotorState& s, int n) {
    if (std::abs(n) > s.n_max()) throw ConfigError("cylinder index outside truncation");
    std::vector<cplx> out(static_cast<std::size_t>(s.m_count()));
    for (int m = -s.m_max(); m <= s.m_max(); ++m) out[static_cast<std::size_t>(m + s.m_max())] = s(n, m);
    return out;
}

CouplingReport coupling_decomposition(const RotorState& s) {
    CouplingReport r;
    double mean = 0.0;
    double second = 0.0;
    std::vector<double> prob(static_cast<std::size_t>(s.n_count()), 0.0);
    for (int n = -s.n_max(); n <= s.n_max(); ++n) {
        double p = 0.0;
        for (int m = -s.m_max(); m <= s.m_max(); ++m) p += std::norm(s(n, m));
        prob[static_cast<std::size_t>(n + s.n_max())] = p;
        mean += p * n;
        second += p * n * n;
    }
    r.mean_lc = mean;
    for (int n = -s.n_max(); n <= s.n_max(); ++n) {
        const double p = prob[static_cast<std::size_t>(n + s.n_max())];
        r.variance_lc += p * (n - mean) * (n - mean);
        if (p > 1e-15) {
            r.populated_n.push_back(n);
            r.fluctuation.push_back(n - mean);
            r.probability.push_back(p);
        }
    }
    r.mean_fraction = second > 0.0 ? mean * mean / second : 1.0;
    return r;
}

RotorState quantize_flux(const RotorState& s, int n) {
    if (std::abs(n) > s.n_max()) throw ConfigError("cylinder index outside truncation");
    std::vector<cplx> c(s.coefficients().size(), cplx{});
    const auto row = static_cast<std::size_t>(n + s.n_max()) * static_cast<std::size_t>(s.m_count());
    double n2 = 0.0;
    for (int k = 0; k < s.m_count(); ++k) {
        c[row + static_cast<std::size_t>(k)] = s.coefficients()[row + static_cast<std::size_t>(k)];
        n2 += std::norm(c[row + static_cast<std::size_t>(k)]);
    }
    if (!(n2 > 0.0)) throw ConfigError("quantize_flux: cylinder branch is empty");
    const double scale = 1.0 / std::sqrt(n2);
    for (cplx& a : c) a *= scale;
    return RotorState(s.params(), s.n_max(), s.m_max(), std::move(c));
}

}  // namespace abq
