#include "catq/spectrum.hpp"

#include "catq/error.hpp"
#include "catq/log.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace catq {
namespace {

void check_info(lapack_int info, const char* routine, Eigen::Index n, double scale) {
    if (info == 0) {
        return;
    }
    std::ostringstream err;
    err << routine << " failed (info = " << info << ") on a " << n << "x" << n << " matrix with max |entry| = " << scale;
    if (info > 0) {
        err << "; " << info << " off-diagonal elements did not converge";
    }
    throw numerical_error(err.str());
}

// Real symmetric eigensolve in place: a becomes the eigenvector matrix.
Eigen::VectorXd solve_real(Eigen::MatrixXd& a, bool vectors) {
    const auto n = a.rows();
    Eigen::VectorXd w(n);
    if (n == 0) {
        return w;
    }
    const double scale = a.cwiseAbs().maxCoeff();
    const auto info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, vectors ? 'V' : 'N', 'U', static_cast<lapack_int>(n), a.data(),
                                     static_cast<lapack_int>(n), w.data());
    check_info(info, "dsyevd", n, scale);
    return w;
}

Eigen::VectorXd solve_complex(Eigen::MatrixXcd& a, bool vectors) {
    const auto n = a.rows();
    Eigen::VectorXd w(n);
    if (n == 0) {
        return w;
    }
    const double scale = a.cwiseAbs().maxCoeff();
    const auto info = LAPACKE_zheevd(LAPACK_COL_MAJOR, vectors ? 'V' : 'N', 'U', static_cast<lapack_int>(n), a.data(),
                                     static_cast<lapack_int>(n), w.data());
    check_info(info, "zheevd", n, scale);
    return w;
}

bool is_real(const Eigen::MatrixXcd& a) { return a.imag().cwiseAbs().maxCoeff() == 0.0; }

void require_hermitian(const OperatorMatrix& h) {
    const double defect = h.hermiticity_defect();
    if (defect > 1e-12) {
        std::ostringstream err;
        err << "diagonalize: operator is not Hermitian (relative defect " << defect << ")";
        throw numerical_error(err.str());
    }
}

bool commutes_with_parity(const OperatorMatrix& h) {
    const auto& b = h.basis;
    const double scale = h.entries.cwiseAbs().maxCoeff();
    for (Eigen::Index c = 0; c < h.entries.cols(); ++c) {
        for (Eigen::Index r = 0; r < h.entries.rows(); ++r) {
            if (b.parity(r) != b.parity(c) && std::abs(h.entries(r, c)) > 1e-14 * scale) {
                return false;
            }
        }
    }
    return true;
}

struct SectorResult {
    std::vector<std::size_t> indices;
    Eigen::VectorXd energies;
    Eigen::MatrixXcd vectors;
};

SectorResult solve_sector(const OperatorMatrix& h, int parity, bool vectors) {
    SectorResult out;
    for (std::size_t i = 0; i < h.basis.dimension(); ++i) {
        if (h.basis.parity(i) == parity) {
            out.indices.push_back(i);
        }
    }
    const auto n = static_cast<Eigen::Index>(out.indices.size());
    Eigen::MatrixXcd block(n, n);
    for (Eigen::Index c = 0; c < n; ++c) {
        for (Eigen::Index r = 0; r < n; ++r) {
            block(r, c) = h.entries(out.indices[r], out.indices[c]);
        }
    }
    if (is_real(block)) {
        Eigen::MatrixXd real = block.real();
        out.energies = solve_real(real, vectors);
        if (vectors) {
            out.vectors = real.cast<cplx>();
        }
    } else {
        out.energies = solve_complex(block, vectors);
        if (vectors) {
            out.vectors = std::move(block);
        }
    }
    return out;
}

EigenDecomposition merge_sectors(const Basis& basis, const SectorResult& even, const SectorResult& odd) {
    const auto dim = static_cast<Eigen::Index>(basis.dimension());
    const auto ne = even.energies.size();
    const auto no = odd.energies.size();

    EigenDecomposition d;
    d.basis = basis;
    d.energies.resize(dim);
    d.states = Eigen::MatrixXcd::Zero(dim, dim);
    d.parities.resize(dim);
    Eigen::Index ie = 0, io = 0;
    for (Eigen::Index k = 0; k < dim; ++k) {
        const bool take_even = io >= no || (ie < ne && even.energies[ie] <= odd.energies[io]);
        const SectorResult& src = take_even ? even : odd;
        const Eigen::Index col = take_even ? ie++ : io++;
        d.energies[k] = src.energies[col];
        d.parities[k] = take_even ? 1 : -1;
        for (Eigen::Index r = 0; r < src.vectors.rows(); ++r) {
            d.states(src.indices[r], k) = src.vectors(r, col);
        }
    }
    return d;
}

// Rotates each cluster of numerically degenerate eigenvectors onto parity
// eigenstates and labels every column by the sign of <v|Pi|v>.
void label_parities(EigenDecomposition& d) {
    const auto dim = static_cast<Eigen::Index>(d.size());
    Eigen::VectorXd pi_diag(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        pi_diag[i] = d.basis.parity(i);
    }
    Eigen::Index start = 0;
    while (start < dim) {
        Eigen::Index end = start + 1;
        while (end < dim && d.energies[end] - d.energies[end - 1] < 1e-10) {
            ++end;
        }
        const auto width = end - start;
        if (width > 1) {
            auto block = d.states.middleCols(start, width);
            Eigen::MatrixXcd proj = block.adjoint() * pi_diag.asDiagonal() * block;
            proj = 0.5 * (proj + proj.adjoint()).eval();
            Eigen::MatrixXcd rot = proj;
            solve_complex(rot, true);
            Eigen::MatrixXcd rotated = block * rot;
            block = rotated;
        }
        start = end;
    }
    d.parities.resize(dim);
    for (Eigen::Index k = 0; k < dim; ++k) {
        const double expectation = (d.states.col(k).cwiseAbs2().array() * pi_diag.array()).sum();
        d.parities[k] = expectation >= 0.0 ? 1 : -1;
        if (std::abs(std::abs(expectation) - 1.0) > 1e-6) {
            std::ostringstream msg;
            msg << "eigenvector " << k << " has mixed parity <Pi> = " << expectation;
            warn(msg.str());
        }
    }
}

}  // namespace

EigenDecomposition diagonalize(const OperatorMatrix& h) {
    require_hermitian(h);
    if (commutes_with_parity(h)) {
        const auto even = solve_sector(h, 1, true);
        const auto odd = solve_sector(h, -1, true);
        auto d = merge_sectors(h.basis, even, odd);
        d.hbar_eff = h.hbar_eff;
        return d;
    }
    EigenDecomposition d;
    d.basis = h.basis;
    d.hbar_eff = h.hbar_eff;
    if (is_real(h.entries)) {
        Eigen::MatrixXd a = h.entries.real();
        d.energies = solve_real(a, true);
        d.states = a.cast<cplx>();
    } else {
        Eigen::MatrixXcd a = h.entries;
        d.energies = solve_complex(a, true);
        d.states = std::move(a);
    }
    label_parities(d);
    return d;
}

Eigen::VectorXd eigenvalues(const OperatorMatrix& h) {
    require_hermitian(h);
    if (commutes_with_parity(h)) {
        const auto even = solve_sector(h, 1, false);
        const auto odd = solve_sector(h, -1, false);
        Eigen::VectorXd all(even.energies.size() + odd.energies.size());
        all << even.energies, odd.energies;
        std::sort(all.begin(), all.end());
        return all;
    }
    if (is_real(h.entries)) {
        Eigen::MatrixXd a = h.entries.real();
        return solve_real(a, false);
    }
    Eigen::MatrixXcd a = h.entries;
    return solve_complex(a, false);
}

double max_residual(const OperatorMatrix& h, const EigenDecomposition& decomp) {
    const Eigen::MatrixXcd r = h.entries * decomp.states - decomp.states * decomp.energies.asDiagonal();
    return r.colwise().norm().maxCoeff();
}

GroundDoublet ground_doublet(const EigenDecomposition& decomp) {
    if (decomp.size() < 2) {
        throw dimension_error("ground_doublet needs at least two eigenstates");
    }
    const int first_parity = decomp.parities[0];
    std::size_t partner = 1;
    while (partner < decomp.size() && decomp.parities[partner] == first_parity) {
        ++partner;
    }
    if (partner == decomp.size()) {
        throw numerical_error("ground_doublet: spectrum contains a single parity sector");
    }
    GroundDoublet g;
    const std::size_t even = first_parity == 1 ? 0 : partner;
    const std::size_t odd = first_parity == 1 ? partner : 0;
    g.even = decomp.states.col(even);
    g.odd = decomp.states.col(odd);
    g.energy_even = decomp.energies[even];
    g.energy_odd = decomp.energies[odd];
    g.splitting = std::abs(g.energy_odd - g.energy_even);
    return g;
}

GroundDoublet ground_doublet(const OperatorMatrix& h) {
    require_hermitian(h);
    if (!commutes_with_parity(h)) {
        return ground_doublet(diagonalize(h));
    }
    GroundDoublet g;
    for (int parity : {1, -1}) {
        std::vector<std::size_t> indices;
        for (std::size_t i = 0; i < h.basis.dimension(); ++i) {
            if (h.basis.parity(i) == parity) {
                indices.push_back(i);
            }
        }
        const auto n = static_cast<lapack_int>(indices.size());
        if (n == 0) {
            throw numerical_error("ground_doublet: empty parity sector");
        }
        Eigen::MatrixXcd block(n, n);
        for (lapack_int c = 0; c < n; ++c) {
            for (lapack_int r = 0; r < n; ++r) {
                block(r, c) = h.entries(indices[r], indices[c]);
            }
        }
        double energy = 0.0;
        Eigen::VectorXcd vec = Eigen::VectorXcd::Zero(h.basis.dimension());
        lapack_int found = 0;
        std::vector<lapack_int> support(2);
        const double scale = block.cwiseAbs().maxCoeff();
        if (is_real(block)) {
            Eigen::MatrixXd a = block.real();
            Eigen::VectorXd w(n);
            Eigen::VectorXd z(n);
            const auto info = LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'I', 'U', n, a.data(), n, 0.0, 0.0, 1, 1, 0.0,
                                             &found, w.data(), z.data(), n, support.data());
            check_info(info, "dsyevr", n, scale);
            energy = w[0];
            for (lapack_int r = 0; r < n; ++r) {
                vec[indices[r]] = z[r];
            }
        } else {
            Eigen::VectorXd w(n);
            Eigen::VectorXcd z(n);
            const auto info = LAPACKE_zheevr(LAPACK_COL_MAJOR, 'V', 'I', 'U', n, block.data(), n, 0.0, 0.0, 1, 1, 0.0,
                                             &found, w.data(), z.data(), n, support.data());
            check_info(info, "zheevr", n, scale);
            energy = w[0];
            for (lapack_int r = 0; r < n; ++r) {
                vec[indices[r]] = z[r];
            }
        }
        if (parity == 1) {
            g.even = std::move(vec);
            g.energy_even = energy;
        } else {
            g.odd = std::move(vec);
            g.energy_odd = energy;
        }
    }
    g.splitting = std::abs(g.energy_odd - g.energy_even);
    return g;
}

StrengthFunction strength_function(const QuantumState& psi0, const EigenDecomposition& final_decomp) {
    if (!(psi0.basis == final_decomp.basis) || static_cast<std::size_t>(psi0.amplitudes.size()) != final_decomp.size()) {
        throw dimension_error("strength_function: state and eigenbasis live in different bases");
    }
    const Eigen::VectorXcd c = final_decomp.states.adjoint() * psi0.amplitudes;
    StrengthFunction sf;
    sf.two_j = psi0.basis.two_j();
    sf.entries.resize(final_decomp.size());
    for (std::size_t k = 0; k < final_decomp.size(); ++k) {
        const double w = std::norm(c[k]);
        sf.entries[k] = {final_decomp.energies[k], w, kUnassigned};
        sf.total_weight += w;
        sf.mean_energy += w * final_decomp.energies[k];
    }
    return sf;
}

StrengthFunction assign_peaks(StrengthFunction sf, std::span<const double> centroids) {
    const auto n_branch = static_cast<std::size_t>(sf.two_j + 1);
    if (centroids.size() != n_branch) {
        throw dimension_error("assign_peaks: need one centroid per spin projection");
    }
    // Coinciding centroids are merged into the lowest projection of the group.
    std::vector<std::size_t> owner(n_branch);
    std::iota(owner.begin(), owner.end(), std::size_t{0});
    for (std::size_t a = 0; a < n_branch; ++a) {
        for (std::size_t b = 0; b < a; ++b) {
            if (std::abs(centroids[a] - centroids[b]) <= 1e-9 * (1.0 + std::abs(centroids[a]))) {
                std::ostringstream msg;
                msg << "assign_peaks: branches m=" << (a - 0.5 * sf.two_j) << " and m=" << (b - 0.5 * sf.two_j)
                    << " share centroid " << centroids[a] << "; weights merged";
                warn(msg.str());
                owner[a] = owner[b];
                break;
            }
        }
    }
    sf.peak_weights.assign(n_branch, 0.0);
    for (auto& e : sf.entries) {
        std::size_t best = 0;
        for (std::size_t k = 1; k < n_branch; ++k) {
            if (std::abs(e.energy - centroids[k]) < std::abs(e.energy - centroids[best])) {
                best = k;
            }
        }
        best = owner[best];
        e.assigned_two_m = 2 * static_cast<int>(best) - sf.two_j;
        sf.peak_weights[best] += e.weight;
    }
    return sf;
}

}  // namespace catq
