#include "catq/phasespace.hpp"

#include "catq/error.hpp"
#include "catq/log.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace catq {
namespace {

constexpr double kRescaleAbove = 1e150;
constexpr double kTailTolerance = 1e-4;
constexpr double kSupportCutoff = 1e-28;
constexpr double kEigenCutoff = 1e-12;

// Signed rank-one split rho = sum_k sign_k u_k u_k^dag over the first
// `support` Fock levels.
struct RankOne {
    Eigen::MatrixXcd u;  // support x rank
    Eigen::VectorXd sign;
    double trace = 0.0;
    double mean_excitation = 0.0;
};

int fock_support(const Eigen::MatrixXcd& u) {
    const Eigen::VectorXd rows = u.rowwise().squaredNorm();
    const double total = std::max(rows.sum(), 1e-300);
    int n = static_cast<int>(rows.size());
    while (n > 1 && rows[n - 1] <= kSupportCutoff * total) {
        --n;
    }
    return n;
}

RankOne finish(Eigen::MatrixXcd u, Eigen::VectorXd sign) {
    RankOne r;
    const int n = fock_support(u);
    r.u = u.topRows(n);
    r.sign = std::move(sign);
    for (Eigen::Index k = 0; k < r.u.cols(); ++k) {
        const Eigen::VectorXd w = r.u.col(k).cwiseAbs2();
        r.trace += r.sign[k] * w.sum();
        for (Eigen::Index m = 0; m < w.size(); ++m) {
            r.mean_excitation += r.sign[k] * m * w[m];
        }
    }
    if (r.trace != 0.0) {
        r.mean_excitation /= r.trace;
    }
    return r;
}

RankOne from_density(const ReducedDensity& rho) {
    const Eigen::MatrixXcd& a = rho.matrix;
    if (a.rows() != a.cols() || a.rows() == 0) {
        throw dimension_error("wigner: density matrix must be square and non-empty");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (a + a.adjoint()));
    if (es.info() != Eigen::Success) {
        throw numerical_error("wigner: eigen-decomposition of the density matrix failed");
    }
    const Eigen::VectorXd& w = es.eigenvalues();
    const double top = w.cwiseAbs().maxCoeff();
    std::vector<Eigen::Index> keep;
    for (Eigen::Index k = 0; k < w.size(); ++k) {
        if (std::abs(w[k]) > kEigenCutoff * std::max(top, 1e-300)) {
            keep.push_back(k);
        }
    }
    Eigen::MatrixXcd u(a.rows(), static_cast<Eigen::Index>(keep.size()));
    Eigen::VectorXd sign(static_cast<Eigen::Index>(keep.size()));
    for (std::size_t c = 0; c < keep.size(); ++c) {
        const double ev = w[keep[c]];
        u.col(static_cast<Eigen::Index>(c)) = std::sqrt(std::abs(ev)) * es.eigenvectors().col(keep[c]);
        sign[static_cast<Eigen::Index>(c)] = ev >= 0.0 ? 1.0 : -1.0;
    }
    return finish(std::move(u), std::move(sign));
}

RankOne from_state(const QuantumState& psi) {
    const Basis& b = psi.basis;
    if (static_cast<std::size_t>(psi.amplitudes.size()) != b.dimension()) {
        throw dimension_error("wigner: state does not match its basis");
    }
    Eigen::Map<const Eigen::MatrixXcd> m(psi.amplitudes.data(), b.spin_dim(), b.fock_dim());
    return finish(m.transpose(), Eigen::VectorXd::Ones(b.spin_dim()));
}

// Sum_n coeff(n, k) phi_n(x) for every column k, with phi_n the normalized
// Hermite functions. Scaled recurrence keeps phi_0 from underflowing.
void hermite_sum(double x, const Eigen::MatrixXcd& coeff, Eigen::Ref<Eigen::VectorXcd> out) {
    const auto n_levels = coeff.rows();
    out.setZero();
    double log_scale = -0.5 * x * x - 0.25 * std::log(std::numbers::pi);
    double factor = std::exp(log_scale);
    double prev = 0.0;
    double cur = 1.0;
    for (Eigen::Index n = 0; n < n_levels; ++n) {
        if (factor != 0.0) {
            out += (cur * factor) * coeff.row(n).transpose();
        }
        const double next = std::sqrt(2.0 / (n + 1.0)) * x * cur - std::sqrt(n / (n + 1.0)) * prev;
        prev = cur;
        cur = next;
        if (std::abs(cur) > kRescaleAbove) {
            cur /= kRescaleAbove;
            prev /= kRescaleAbove;
            log_scale += std::log(kRescaleAbove);
            factor = std::exp(log_scale);
        }
    }
}

// Momentum-space amplitudes are position-space ones with coefficients (-i)^n.
Eigen::MatrixXcd momentum_coefficients(const Eigen::MatrixXcd& u) {
    Eigen::MatrixXcd out = u;
    const cplx cycle[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
    for (Eigen::Index n = 0; n < u.rows(); ++n) {
        out.row(n) *= cycle[n % 4];
    }
    return out;
}

// Probability outside [lo, hi] (standard units) in the representation given by coeff.
double outside_mass(const Eigen::MatrixXcd& coeff, const Eigen::VectorXd& sign, double trace, double lo, double hi) {
    const int samples = std::max(400, static_cast<int>(std::ceil((hi - lo) / 0.02)));
    const double h = (hi - lo) / samples;
    double inside = 0.0;
    Eigen::VectorXcd vals(coeff.cols());
    for (int i = 0; i <= samples; ++i) {
        hermite_sum(lo + i * h, coeff, vals);
        const double dens = sign.dot(vals.cwiseAbs2());
        inside += (i == 0 || i == samples ? 0.5 : 1.0) * dens;
    }
    return trace - inside * h;
}

Eigen::VectorXd trapezoid_weights(const Axis& a) {
    Eigen::VectorXd w = Eigen::VectorXd::Constant(a.n, a.step());
    if (a.n == 1) {
        w[0] = 1.0;
        return w;
    }
    w[0] *= 0.5;
    w[a.n - 1] *= 0.5;
    return w;
}

Eigen::MatrixXd position_transform(const RankOne& r, double scale, const Axis& qa, const Axis& pa) {
    const auto levels = r.u.rows();
    const double reach = std::sqrt(2.0 * levels + 1.0) + 8.0;
    const double x0 = scale * qa.lo;
    const double x1 = scale * qa.hi;
    const double ymax = scale * std::max(std::abs(pa.lo), std::abs(pa.hi));
    const double h_needed = std::numbers::pi / (2.0 * (reach + ymax));

    const double hx = scale * qa.step();
    const int sub = qa.n > 1 ? std::max(1, static_cast<int>(std::ceil(hx / h_needed))) : 1;
    const double h = qa.n > 1 ? hx / sub : h_needed;

    // Lattice z_m = x0 + m h covering the grid and the support [-reach, reach].
    const auto m_lo = static_cast<long>(std::floor((std::min(-reach, x0) - x0) / h));
    const auto m_hi = static_cast<long>(std::ceil((std::max(reach, x1) - x0) / h));
    const auto lattice = static_cast<Eigen::Index>(m_hi - m_lo + 1);
    Eigen::MatrixXcd psi(r.u.cols(), lattice);
#pragma omp parallel for schedule(static)
    for (Eigen::Index m = 0; m < lattice; ++m) {
        Eigen::VectorXcd col(r.u.cols());
        hermite_sum(x0 + (m_lo + m) * h, r.u, col);
        psi.col(m) = col;
    }
    const Eigen::MatrixXcd signed_psi = r.sign.cast<cplx>().asDiagonal() * psi;

    long l_max = 0;
    for (int i = 0; i < qa.n; ++i) {
        const long c = static_cast<long>(i) * sub - m_lo;
        l_max = std::max(l_max, std::min(c, static_cast<long>(lattice) - 1 - c));
    }
    const auto nl = static_cast<Eigen::Index>(l_max + 1);
    Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(qa.n, nl);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < qa.n; ++i) {
        const long c = static_cast<long>(i) * sub - m_lo;
        const long reach_i = std::min(c, static_cast<long>(lattice) - 1 - c);
        for (long l = 0; l <= reach_i; ++l) {
            g(i, l) = psi.col(c + l).dot(signed_psi.col(c - l));
        }
    }
    Eigen::MatrixXcd e(nl, pa.n);
    for (int k = 0; k < pa.n; ++k) {
        const double y = scale * pa.at(k);
        for (Eigen::Index l = 0; l < nl; ++l) {
            e(l, k) = (l == 0 ? 1.0 : 2.0) * std::polar(1.0, 2.0 * y * l * h);
        }
    }
    return (h / std::numbers::pi) * (g * e).real();
}

Eigen::MatrixXd laguerre_transform(const RankOne& r, double scale, const Axis& qa, const Axis& pa) {
    const Eigen::MatrixXcd rho = r.u * r.sign.cast<cplx>().asDiagonal() * r.u.adjoint();
    const auto levels = rho.rows();
    Eigen::MatrixXd out(qa.n, pa.n);
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < qa.n; ++i) {
        for (int k = 0; k < pa.n; ++k) {
            const double x = scale * qa.at(i);
            const double y = scale * pa.at(k);
            const double s = 2.0 * (x * x + y * y);  // 4 |alpha|^2
            const double phi = std::atan2(y, x);
            double total = 0.0;
            for (Eigen::Index d = 0; d < levels; ++d) {
                if (s == 0.0 && d > 0) {
                    break;
                }
                const double log_f0 = (d > 0 ? 0.5 * d * std::log(s) : 0.0) - 0.5 * s - 0.5 * std::lgamma(d + 1.0);
                double log_scale = log_f0;
                double factor = std::exp(log_scale);
                double prev = 0.0;
                double cur = 1.0;
                cplx acc{0.0, 0.0};
                for (Eigen::Index m = 0; m + d < levels; ++m) {
                    if (factor != 0.0) {
                        const double parity = (m % 2 == 0) ? 1.0 : -1.0;
                        acc += parity * cur * factor * rho(m, m + d);
                    }
                    const double next = ((2.0 * m + 1.0 + d - s) * cur - std::sqrt(m * (m + static_cast<double>(d))) * prev) /
                                        std::sqrt((m + 1.0) * (m + d + 1.0));
                    prev = cur;
                    cur = next;
                    if (std::abs(cur) > kRescaleAbove) {
                        cur /= kRescaleAbove;
                        prev /= kRescaleAbove;
                        log_scale += std::log(kRescaleAbove);
                        factor = std::exp(log_scale);
                    }
                }
                const cplx rot = std::polar(1.0, d * phi);
                total += (d == 0 ? 1.0 : 2.0) * (acc * rot).real();
            }
            out(i, k) = total / std::numbers::pi;
        }
    }
    return out;
}

WignerGrid transform(const RankOne& r, const ModelParams& params, const Axis& qa, const Axis& pa, WignerMethod method) {
    qa.validate("q");
    pa.validate("p");
    params.validate();
    const double jr = params.j * params.R;
    const double scale = std::sqrt(2.0 * jr);

    const double tail_q = outside_mass(r.u, r.sign, r.trace, scale * qa.lo, scale * qa.hi);
    const double tail_p = outside_mass(momentum_coefficients(r.u), r.sign, r.trace, scale * pa.lo, scale * pa.hi);
    const int needed = std::max(suggested_grid_points(jr, r.mean_excitation, qa.hi - qa.lo),
                                suggested_grid_points(jr, r.mean_excitation, pa.hi - pa.lo));
    if (qa.n < needed || pa.n < needed) {
        std::ostringstream msg;
        msg << "Wigner grid " << qa.n << "x" << pa.n << " may not resolve interference fringes; use at least " << needed
            << " points per axis";
        warn(msg.str());
    }

    WignerGrid w;
    w.q_axis = qa;
    w.p_axis = pa;
    w.jr = jr;
    w.values = method == WignerMethod::Position ? position_transform(r, scale, qa, pa)
                                                : laguerre_transform(r, scale, qa, pa);
    w.values *= 2.0 * jr;
    w.norm_residual = std::abs(w.integral() - r.trace);
    w.tail_mass = std::max(0.0, tail_q) + std::max(0.0, tail_p);
    return w;
}

}  // namespace

void Axis::validate(const char* name) const {
    if (n < 1 || !std::isfinite(lo) || !std::isfinite(hi) || (n > 1 && !(hi > lo))) {
        std::ostringstream err;
        err << name << " axis needs n >= 1 points and lo < hi (got n = " << n << ", [" << lo << ", " << hi << "])";
        throw config_error(err.str());
    }
}

double WignerGrid::integral() const {
    return trapezoid_weights(q_axis).dot(values * trapezoid_weights(p_axis));
}

WignerGrid wigner(const ReducedDensity& rho, const ModelParams& params, const Axis& q_axis, const Axis& p_axis,
                  WignerMethod method) {
    return transform(from_density(rho), params, q_axis, p_axis, method);
}

WignerGrid wigner(const QuantumState& psi, const ModelParams& params, const Axis& q_axis, const Axis& p_axis,
                  WignerMethod method) {
    return transform(from_state(psi), params, q_axis, p_axis, method);
}

double purity(const ReducedDensity& rho) { return rho.purity(); }

double negativity(const WignerGrid& w) {
    if (w.tail_mass > kTailTolerance) {
        std::ostringstream err;
        err << "Wigner window [" << w.q_axis.lo << ", " << w.q_axis.hi << "] x [" << w.p_axis.lo << ", "
            << w.p_axis.hi << "] misses probability " << w.tail_mass << "; enlarge the extent";
        throw extent_error(err.str());
    }
    const Eigen::MatrixXd f = w.values.cwiseAbs() - w.values;
    return trapezoid_weights(w.q_axis).dot(f * trapezoid_weights(w.p_axis));
}

double phase_space_purity(const WignerGrid& w) {
    const Eigen::MatrixXd sq = w.values.cwiseAbs2();
    const double integral = trapezoid_weights(w.q_axis).dot(sq * trapezoid_weights(w.p_axis));
    return 2.0 * std::numbers::pi / (2.0 * w.jr) * integral;
}

Marginals marginals(const WignerGrid& w) {
    const Eigen::VectorXd q = w.values * trapezoid_weights(w.p_axis);
    const Eigen::VectorXd p = w.values.transpose() * trapezoid_weights(w.q_axis);
    return {std::vector<double>(q.begin(), q.end()), std::vector<double>(p.begin(), p.end())};
}

double covering_extent(const QuantumState& psi, const ModelParams& params, double minimum) {
    const RankOne r = from_state(psi);
    const Eigen::VectorXd rows = r.u.rowwise().squaredNorm();
    double tail = rows.sum();
    int n = 0;
    while (n + 1 < rows.size() && tail - rows[n] > 1e-10 * rows.sum()) {
        tail -= rows[n];
        ++n;
    }
    // A Fock state |n> lives inside the phase-space radius sqrt((2n + 1) / (2 j R)); add a few widths.
    const double hbar = 1.0 / (2.0 * params.j * params.R);
    const double radius = std::sqrt((2.0 * n + 1.0) * hbar) + 3.0 * std::sqrt(hbar);
    return std::max(minimum, std::ceil(radius * 10.0) / 10.0);
}

int suggested_grid_points(double jr, double mean_excitation, double width) {
    // Packets a phase-space diameter apart produce fringes of wavelength
    // 2 pi / (2 j R * separation); sample each at least twice.
    const double separation = 2.0 * std::sqrt((2.0 * std::max(mean_excitation, 0.0) + 1.0) / (2.0 * jr));
    const double wavelength = 2.0 * std::numbers::pi / (2.0 * jr * separation);
    return static_cast<int>(std::ceil(2.0 * width / wavelength)) + 1;
}

}  // namespace catq
