#pragma once

// Exact cylinder-electron rotor model.
//
// H = L_c^2 / (2 I_c) + (L_e - lambda L_c)^2 / (2 I_e) is diagonal in the
// angular-momentum basis |n, m> (L_c = n, L_e = m, hbar = 1), so everything
// here is exact up to truncation of n in [-N_c, N_c] and m in [-N_e, N_e].

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace abq {

using cplx = std::complex<double>;

enum class InertiaMode {
    as_written,    // I_e as it appears in the Hamiltonian (default)
    renormalized,  // I'_e = I_e - I_c lambda^2
};

struct RotorParams {
    double cylinder_inertia = 1.0;  // I_c
    double electron_inertia = 1.0;  // I_e
    double lambda = 0.0;
    InertiaMode mode = InertiaMode::as_written;
};

/// Throws ConfigError unless I_c, I_e > 0 and I_c lambda^2 < I_e.
void validate(const RotorParams& p);

/// The electron moment entering the Hamiltonian for the chosen mode.
double effective_electron_inertia(const RotorParams& p);

/// E_nm = n^2 / (2 I_c) + (m - lambda n)^2 / (2 I_e).
double energy_level(const RotorParams& p, int n, int m);

class RotorState {
public:
    /// Coefficients row-major with n outer: c(n, m) at (n + N_c)(2 N_e + 1) + m + N_e.
    /// Throws ConfigError unless the norm is 1 within 1e-12 and the mass on the
    /// two outermost shells of either index is below 1e-12.
    RotorState(RotorParams params, int n_max, int m_max, std::vector<cplx> coeffs);

    const RotorParams& params() const { return params_; }
    int n_max() const { return n_max_; }
    int m_max() const { return m_max_; }
    int n_count() const { return 2 * n_max_ + 1; }
    int m_count() const { return 2 * m_max_ + 1; }
    cplx operator()(int n, int m) const { return c_[offset(n, m)]; }
    const std::vector<cplx>& coefficients() const { return c_; }
    double norm_squared() const;

private:
    std::size_t offset(int n, int m) const {
        return static_cast<std::size_t>(n + n_max_) * static_cast<std::size_t>(m_count()) +
               static_cast<std::size_t>(m + m_max_);
    }

    RotorParams params_;
    int n_max_ = 0;
    int m_max_ = 0;
    std::vector<cplx> c_;
};

/// c_m proportional to exp(-m^2 / dm^2) exp(-i m phi0), normalized, for
/// m in [-m_max, m_max]. Throws ConfigError unless dm > 0 and m_max >= 6 dm.
std::vector<cplx> coherent_angular_state(double phi0, double dm, int m_max);

/// Normalized single-index vector over [-k_max, k_max] with one nonzero entry.
std::vector<cplx> basis_vector(int k, int k_max);

/// |cylinder> (x) |electron>; inputs are normalized first.
RotorState product_state(const RotorParams& p, const std::vector<cplx>& cylinder,
                         const std::vector<cplx>& electron);

/// arg <e^{i phi}> for coefficients over [-m_max, m_max].
double circular_mean(const std::vector<cplx>& coeffs);

/// Twice the circular standard deviation sqrt(-2 ln |<e^{i phi}>|); for the
/// coherent state this is the 1/e half-width of the amplitude, close to 2 / dm.
double angular_spread(const std::vector<cplx>& coeffs);

/// c(n, m) -> e^{-i E_nm t} c(n, m).
RotorState evolve_rotor(const RotorState& s, double t);

/// c(n, m) -> e^{i (lambda n - m) delta} c(n, m): the electron angle shifts by
/// delta and branch n picks up the phase lambda n delta.
RotorState shift_unitary(const RotorState& s, double delta);

/// rho(n, n') = sum_m c(n, m) conj(c(n', m)).
Eigen::MatrixXcd reduced_cylinder_state(const RotorState& s);

/// -sum p ln p over the eigenvalues of a density matrix, in nats.
double von_neumann_entropy(const Eigen::MatrixXcd& rho);

double entanglement_entropy(const RotorState& s);

/// Electron marginal in the m basis for one cylinder branch (unnormalized).
std::vector<cplx> electron_branch(const RotorState& s, int n);

struct CouplingReport {
    double mean_lc = 0.0;              // <L_c>
    double variance_lc = 0.0;          // <(delta L_c)^2>
    std::vector<int> populated_n;      // n with probability above 1e-15
    std::vector<double> fluctuation;   // n - <L_c> for each populated n
    std::vector<double> probability;   // branch probabilities
    // Share of the branch-phase coupling carried by lambda <L_c> L_e:
    // <L_c>^2 / <L_c^2>, and 1 when <L_c^2> = 0.
    double mean_fraction = 1.0;
};

CouplingReport coupling_decomposition(const RotorState& s);

/// Projects onto the single cylinder branch n and renormalizes, so that
/// delta L_c vanishes identically. Throws ConfigError if branch n is empty.
RotorState quantize_flux(const RotorState& s, int n);

}  // namespace abq
