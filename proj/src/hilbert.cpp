#include "catq/hilbert.hpp"

#include "catq/error.hpp"
#include "catq/log.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace catq {

int ModelParams::two_j() const { return static_cast<int>(std::lround(2.0 * j)); }

void ModelParams::validate() const {
    std::ostringstream err;
    const double twice = 2.0 * j;
    if (!std::isfinite(j) || twice < 1.0 - 1e-12 || std::abs(twice - std::round(twice)) > 1e-12) {
        err << "spin size j must be a positive half-integer, got " << j;
    } else if (!(R > 0.0) || !std::isfinite(R)) {
        err << "size parameter R must be positive, got " << R;
    } else if (!std::isfinite(lambda)) {
        err << "coupling lambda must be finite";
    } else if (!(delta >= -1.0 && delta <= 1.0)) {
        err << "mixing parameter delta must lie in [-1, 1], got " << delta;
    } else if (!(omega > 0.0) || !std::isfinite(omega)) {
        err << "oscillator quantum omega must be positive, got " << omega;
    } else if (n_max < 0) {
        err << "Fock truncation n_max must be >= 0, got " << n_max;
    } else {
        return;
    }
    throw config_error(err.str());
}

Basis::Basis(int n_max, int two_j) : n_max_(n_max), two_j_(two_j) {
    if (n_max < 0 || two_j < 1) {
        throw config_error("basis needs n_max >= 0 and 2j >= 1");
    }
    const auto fock = static_cast<std::size_t>(n_max) + 1;
    const auto spin = static_cast<std::size_t>(two_j) + 1;
    if (fock > std::numeric_limits<std::size_t>::max() / spin || fock * spin > kMaxDimension) {
        std::ostringstream err;
        err << "basis dimension (" << fock << " x " << spin << ") exceeds the dense limit " << kMaxDimension;
        throw dimension_error(err.str());
    }
    dim_ = fock * spin;
}

double OperatorMatrix::hermiticity_defect() const {
    const double scale = entries.cwiseAbs().maxCoeff();
    if (scale == 0.0) {
        return 0.0;
    }
    return (entries - entries.adjoint()).cwiseAbs().maxCoeff() / scale;
}

double spin_raise_factor(int two_j, int k) {
    const double j = 0.5 * two_j;
    const double m = k - j;
    const double v = j * (j + 1.0) - m * (m + 1.0);
    return v > 0.0 ? std::sqrt(v) : 0.0;
}

Basis build_basis(const ModelParams& params) {
    params.validate();
    return Basis(params.n_max, params.two_j());
}

OperatorMatrix build_hamiltonian(const ModelParams& params) {
    const Basis basis = build_basis(params);
    if (params.n_max == 0 && params.lambda != 0.0) {
        warn("n_max = 0 with nonzero coupling: the interaction has no Fock partner states");
    }
    const double j = basis.j();
    const double jr2 = 2.0 * j * params.R;
    const double g = params.lambda * std::sqrt(params.R / (8.0 * j)) / jr2;
    const double g_minus = g * (1.0 + params.delta);  // b^dag J- + b J+
    const double g_plus = g * (1.0 - params.delta);   // b^dag J+ + b J-

    OperatorMatrix h{basis, Eigen::MatrixXcd::Zero(basis.dimension(), basis.dimension()), true, params.hbar_eff()};
    auto& a = h.entries;
    const int spin = basis.spin_dim();
    for (int n = 0; n <= basis.n_max(); ++n) {
        for (int k = 0; k < spin; ++k) {
            const auto i = basis.index(n, k);
            a(i, i) = n / jr2 + k / (2.0 * j);
            if (n == basis.n_max()) {
                continue;
            }
            const double up = std::sqrt(n + 1.0);
            if (k > 0) {
                const auto f = basis.index(n + 1, k - 1);
                const double v = g_minus * up * spin_raise_factor(basis.two_j(), k - 1);
                a(f, i) += v;
                a(i, f) += v;
            }
            if (k + 1 < spin) {
                const auto f = basis.index(n + 1, k + 1);
                const double v = g_plus * up * spin_raise_factor(basis.two_j(), k);
                a(f, i) += v;
                a(i, f) += v;
            }
        }
    }
    return h;
}

Eigen::VectorXcd apply_hamiltonian(const ModelParams& params, const Eigen::VectorXcd& psi) {
    const Basis basis = build_basis(params);
    if (static_cast<std::size_t>(psi.size()) != basis.dimension()) {
        throw dimension_error("apply_hamiltonian: state does not match the basis");
    }
    const double j = basis.j();
    const double jr2 = 2.0 * j * params.R;
    const double g = params.lambda * std::sqrt(params.R / (8.0 * j)) / jr2;
    const double g_minus = g * (1.0 + params.delta);
    const double g_plus = g * (1.0 - params.delta);
    const int spin = basis.spin_dim();
    Eigen::VectorXcd out(psi.size());
    for (int n = 0; n <= basis.n_max(); ++n) {
        for (int k = 0; k < spin; ++k) {
            const auto i = basis.index(n, k);
            out[i] = (n / jr2 + k / (2.0 * j)) * psi[i];
        }
    }
    for (int n = 0; n < basis.n_max(); ++n) {
        const double up = std::sqrt(n + 1.0);
        for (int k = 0; k < spin; ++k) {
            const auto i = basis.index(n, k);
            if (k > 0) {
                const auto f = basis.index(n + 1, k - 1);
                const double v = g_minus * up * spin_raise_factor(basis.two_j(), k - 1);
                out[f] += v * psi[i];
                out[i] += v * psi[f];
            }
            if (k + 1 < spin) {
                const auto f = basis.index(n + 1, k + 1);
                const double v = g_plus * up * spin_raise_factor(basis.two_j(), k);
                out[f] += v * psi[i];
                out[i] += v * psi[f];
            }
        }
    }
    return out;
}

OperatorMatrix build_parity(const Basis& basis) {
    OperatorMatrix pi{basis, Eigen::MatrixXcd::Zero(basis.dimension(), basis.dimension()), true};
    for (std::size_t i = 0; i < basis.dimension(); ++i) {
        pi.entries(i, i) = static_cast<double>(basis.parity(i));
    }
    return pi;
}

QuadratureOps build_quadratures(const ModelParams& params) {
    const Basis basis = build_basis(params);
    const double scale = 1.0 / std::sqrt(4.0 * basis.j() * params.R);
    const auto dim = basis.dimension();
    QuadratureOps ops{{basis, Eigen::MatrixXcd::Zero(dim, dim), true}, {basis, Eigen::MatrixXcd::Zero(dim, dim), true}};
    const cplx i_unit(0.0, 1.0);
    for (int n = 0; n < basis.n_max(); ++n) {
        const double amp = std::sqrt(n + 1.0) * scale;
        for (int k = 0; k < basis.spin_dim(); ++k) {
            const auto lo = basis.index(n, k);
            const auto hi = basis.index(n + 1, k);
            // <n+1|b^dag|n> = sqrt(n+1)
            ops.q.entries(hi, lo) = amp;
            ops.q.entries(lo, hi) = amp;
            ops.p.entries(hi, lo) = i_unit * amp;
            ops.p.entries(lo, hi) = -i_unit * amp;
        }
    }
    return ops;
}

SpinOps build_spin_ops(const Basis& basis) {
    const auto dim = basis.dimension();
    const Eigen::MatrixXcd zero = Eigen::MatrixXcd::Zero(dim, dim);
    SpinOps ops{{basis, zero, true}, {basis, zero, true}, {basis, zero, true}, {basis, zero, false}, {basis, zero, false}};
    for (int n = 0; n <= basis.n_max(); ++n) {
        for (int k = 0; k < basis.spin_dim(); ++k) {
            const auto i = basis.index(n, k);
            ops.jz.entries(i, i) = basis.m_of_spin(k);
            if (k + 1 < basis.spin_dim()) {
                const auto f = basis.index(n, k + 1);
                const double v = spin_raise_factor(basis.two_j(), k);
                ops.jplus.entries(f, i) = v;
                ops.jminus.entries(i, f) = v;
            }
        }
    }
    ops.jx.entries = 0.5 * (ops.jplus.entries + ops.jminus.entries);
    ops.jy.entries = cplx(0.0, -0.5) * (ops.jplus.entries - ops.jminus.entries);
    return ops;
}

EffectiveField effective_field(double q, double p, double lambda, double delta) {
    EffectiveField f;
    f.b = {lambda * q / std::sqrt(2.0), -lambda * delta * p / std::sqrt(2.0), 0.5};
    f.norm = 0.5 * std::sqrt(2.0 * lambda * lambda * (q * q + delta * delta * p * p) + 1.0);
    return f;
}

}  // namespace catq
