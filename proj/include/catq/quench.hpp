#pragma once

#include "catq/hilbert.hpp"
#include "catq/spectrum.hpp"

#include <span>
#include <string>
#include <vector>

namespace catq {

enum class PrepMethod { DoubletSuperposition, CoherentProduct };

std::string to_string(PrepMethod m);
PrepMethod prep_method_from_string(const std::string& name);

struct QuenchSpec {
    double j = 0.5;
    double R = 20.0;
    double lambda_in = 1.5;
    double lambda_fi = -0.283;
    double delta = 0.5;
    double omega = 1.0;
    int n_max = 0;  // 0 selects the adaptive truncation
    PrepMethod prep = PrepMethod::DoubletSuperposition;
    std::vector<double> times;  // strictly increasing, first entry 0; may be empty

    void validate() const;
    ModelParams model(double lambda, int truncation) const;
};

struct TruncationReport {
    int n_max = 0;
    bool adaptive = false;
    int rounds = 0;
    double doublet_shift = 0.0;   // ground-doublet energy change against a smaller cutoff
    double top_occupation = 0.0;  // max weight in the top 5% of Fock levels
};

struct ReducedDensity {
    Eigen::MatrixXcd matrix;  // (n_max + 1) square, oscillator Fock basis

    double trace() const;
    double purity() const;
};

// Single-pass observables of one state; cheap enough for dense time grids.
struct StateObservables {
    double q = 0.0, p = 0.0;
    double jx = 0.0, jy = 0.0, jz = 0.0;
    double norm = 0.0;
    double parity = 0.0;
    double purity = 0.0;  // via the (2j+1)-dimensional spin reduced matrix
};

StateObservables state_observables(const QuantumState& psi, double j, double R);

struct Observables {
    std::vector<double> t, q, p, jx, jy, jz, survival, purity, norm, energy, parity;
};

QuantumState prepare_initial_state(const QuenchSpec& spec, int n_max);

// psi(t) = sum_k c_k exp(-i e_k t / hbar_eff) v_k with c = V^dag psi0.
QuantumState evolve(const QuantumState& psi0, const EigenDecomposition& decomp, double t);

// <psi|A|psi>. The Hermitian overload rejects an imaginary part above 1e-12.
cplx expectation(const QuantumState& psi, const OperatorMatrix& a);
double expectation_real(const QuantumState& psi, const OperatorMatrix& a);

ReducedDensity reduced_density(const QuantumState& psi);

double survival_probability(const QuantumState& psi0, const EigenDecomposition& decomp, double t);

// |<psi(tau)|psi(tau + t)>|^2.
double local_survival(const QuantumState& psi0, const EigenDecomposition& decomp, double tau, double t);

struct RabiFrequency {
    double exact = 0.0;     // |b(q, p, lambda_fi)|, units eps
    double expanded = 0.0;  // (1 + lambda^2 (q^2 + delta^2 p^2)) / 2
};

RabiFrequency rabi_frequency(double q, double p, double lambda_fi, double delta);

// One quench run: truncation, initial state, final spectrum and expansion
// coefficients. Immutable after construction, so const methods may be called
// concurrently.
class Quench {
public:
    explicit Quench(QuenchSpec spec);

    // Continues an existing run: psi(t_switch) of `previous` evolves under
    // h(lambda_next) in the same truncated basis.
    static Quench reseeded(const Quench& previous, double t_switch, double lambda_next);

    const QuenchSpec& spec() const { return spec_; }
    const ModelParams& final_params() const { return final_; }
    const TruncationReport& truncation() const { return report_; }
    const QuantumState& initial_state() const { return psi0_; }
    const EigenDecomposition& final_decomposition() const { return decomp_; }
    const Eigen::VectorXcd& coefficients() const { return coeffs_; }
    std::size_t active_count() const { return active_.size(); }

    QuantumState state_at(double t) const;
    double survival(double t) const;
    double energy(const QuantumState& psi) const;
    Observables observe(std::span<const double> times) const;

    // Strength function with peaks assigned to the semiclassical branch energies.
    StrengthFunction strength() const;

private:
    Quench() = default;
    void finish_setup();

    QuenchSpec spec_;
    ModelParams final_;
    TruncationReport report_;
    QuantumState psi0_;
    EigenDecomposition decomp_;
    Eigen::VectorXcd coeffs_;
    std::vector<Eigen::Index> active_;  // eigenstates with non-negligible weight
    Eigen::MatrixXcd active_vectors_;
    Eigen::VectorXcd active_coeffs_;
    Eigen::VectorXd active_energies_;
};

}  // namespace catq
