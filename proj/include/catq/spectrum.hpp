#pragma once

#include "catq/hilbert.hpp"

#include <climits>
#include <span>
#include <vector>

namespace catq {

// Full spectrum of a Hermitian operator, energies ascending (units eps).
struct EigenDecomposition {
    Basis basis;
    Eigen::VectorXd energies;
    Eigen::MatrixXcd states;  // column k is the eigenvector of energies[k]
    std::vector<int> parities;
    double hbar_eff = 1.0;  // inherited from the diagonalized operator

    std::size_t size() const { return static_cast<std::size_t>(energies.size()); }
};

// Dense diagonalization. Operators commuting with the parity are split into
// the two parity sectors first, so every eigenvector carries an exact label.
// Otherwise labels come from <v|Pi|v> after rotating numerically degenerate
// clusters onto parity eigenstates.
EigenDecomposition diagonalize(const OperatorMatrix& h);

// Eigenvalues only, ascending.
Eigen::VectorXd eigenvalues(const OperatorMatrix& h);

// max_k || h v_k - e_k v_k ||
double max_residual(const OperatorMatrix& h, const EigenDecomposition& decomp);

struct GroundDoublet {
    Eigen::VectorXcd even;
    Eigen::VectorXcd odd;
    double energy_even = 0.0;
    double energy_odd = 0.0;
    double splitting = 0.0;
};

// Lowest state overall together with the lowest state of opposite parity.
GroundDoublet ground_doublet(const EigenDecomposition& decomp);

// Same, computing only the lowest eigenpair of each parity sector.
GroundDoublet ground_doublet(const OperatorMatrix& h);

inline constexpr int kUnassigned = INT_MIN;

struct StrengthEntry {
    double energy = 0.0;
    double weight = 0.0;
    int assigned_two_m = kUnassigned;  // 2m, m in {-j..j}
};

struct StrengthFunction {
    int two_j = 1;
    std::vector<StrengthEntry> entries;  // sorted by energy
    std::vector<double> peak_weights;    // indexed by k = m + j, empty until assigned
    double total_weight = 0.0;
    double mean_energy = 0.0;
};

StrengthFunction strength_function(const QuantumState& psi0, const EigenDecomposition& final_decomp);

// Assigns every eigenstate to the branch whose centroid energy is nearest.
// centroids[k] belongs to m = k - j.
StrengthFunction assign_peaks(StrengthFunction sf, std::span<const double> centroids);

}  // namespace catq
