#pragma once

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <cstddef>

namespace catq {

using cplx = std::complex<double>;

// Physical and numerical parameters of one Hamiltonian instance.
//
// The Hamiltonian is stored in the dimensionless form h = H / (2 j R omega),
// so energies are in units of eps = 2 j R omega. The zero of energy is the
// lambda = 0 ground state (vacuum, m_z = -j). In these variables
// [q, p] = i hbar_eff with hbar_eff = 1 / (2 j R), and states evolve as
// exp(-i h t / hbar_eff): t is measured in units of 1/omega, the time in
// which the classical branch Hamiltonians h^(mu)(p, q) run Hamilton's
// equations (free oscillator period 2 pi).
struct ModelParams {
    double j = 0.5;
    double R = 20.0;
    double lambda = 0.0;
    double delta = 0.5;
    double omega = 1.0;
    int n_max = 0;

    int two_j() const;
    double energy_unit() const { return 2.0 * j * R * omega; }
    double hbar_eff() const { return 1.0 / (2.0 * j * R); }

    // Throws ErrorKind::Config on bad input.
    void validate() const;
};

// Product basis Fock (x) spin, n-major: index = n * (2j + 1) + k with
// k = m_z + j in [0, 2j].
class Basis {
public:
    Basis() = default;
    Basis(int n_max, int two_j);

    int n_max() const { return n_max_; }
    int two_j() const { return two_j_; }
    double j() const { return 0.5 * two_j_; }
    int spin_dim() const { return two_j_ + 1; }
    int fock_dim() const { return n_max_ + 1; }
    std::size_t dimension() const { return dim_; }

    std::size_t index(int n, int k) const { return static_cast<std::size_t>(n) * spin_dim() + k; }
    int fock_of(std::size_t i) const { return static_cast<int>(i / spin_dim()); }
    int spin_of(std::size_t i) const { return static_cast<int>(i % spin_dim()); }
    double m_of_spin(int k) const { return k - 0.5 * two_j_; }

    // (-1)^(n + m_z + j) = (-1)^(n + k)
    int parity(std::size_t i) const { return ((fock_of(i) + spin_of(i)) % 2 == 0) ? 1 : -1; }

    bool operator==(const Basis& o) const { return n_max_ == o.n_max_ && two_j_ == o.two_j_; }

private:
    int n_max_ = 0;
    int two_j_ = 1;
    std::size_t dim_ = 2;
};

// Largest dense dimension the library agrees to allocate.
inline constexpr std::size_t kMaxDimension = 40000;

struct OperatorMatrix {
    Basis basis;
    Eigen::MatrixXcd entries;
    bool hermitian = false;
    // Set on Hamiltonians: the evolution generator is entries / hbar_eff.
    double hbar_eff = 1.0;

    // max |A - A^dag| / max |A|  (0 for the zero matrix)
    double hermiticity_defect() const;
};

// Normalized complex amplitude vector over a product basis.
struct QuantumState {
    Basis basis;
    Eigen::VectorXcd amplitudes;

    double norm() const { return amplitudes.norm(); }
};

struct QuadratureOps {
    OperatorMatrix q;
    OperatorMatrix p;
};

struct SpinOps {
    OperatorMatrix jx, jy, jz, jplus, jminus;
};

// Rescaled effective field b = B / 2R seen by the spin at oscillator point (q, p).
struct EffectiveField {
    std::array<double, 3> b{};
    double norm = 0.0;

    std::array<double, 3> direction() const { return {b[0] / norm, b[1] / norm, b[2] / norm}; }
};

Basis build_basis(const ModelParams& params);
OperatorMatrix build_hamiltonian(const ModelParams& params);

// h * psi without forming the matrix; psi is laid out over build_basis(params).
Eigen::VectorXcd apply_hamiltonian(const ModelParams& params, const Eigen::VectorXcd& psi);
OperatorMatrix build_parity(const Basis& basis);
QuadratureOps build_quadratures(const ModelParams& params);
SpinOps build_spin_ops(const Basis& basis);

EffectiveField effective_field(double q, double p, double lambda, double delta);

// sqrt(j(j+1) - m(m+1)), the J+ matrix element <m+1|J+|m>.
double spin_raise_factor(int two_j, int k);

}  // namespace catq
