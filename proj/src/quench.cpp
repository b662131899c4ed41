#include "catq/quench.hpp"

#include "catq/error.hpp"
#include "catq/log.hpp"
#include "catq/semiclassics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace catq {
namespace {

constexpr int kMaxAdaptiveRounds = 5;
constexpr double kDoubletTolerance = 1e-10;
constexpr double kTopOccupationTolerance = 1e-8;
constexpr double kActiveWeightCutoff = 1e-20;
constexpr int kTimeBlock = 64;

using ConstStateMatrix = Eigen::Map<const Eigen::MatrixXcd>;

// Columns are Fock levels, rows spin components.
ConstStateMatrix as_matrix(const QuantumState& psi) {
    return ConstStateMatrix(psi.amplitudes.data(), psi.basis.spin_dim(), psi.basis.fock_dim());
}

double q_min_of(double lambda_in) { return minimum(lambda_in).q; }

int initial_cutoff(const QuenchSpec& spec) {
    const double q = q_min_of(spec.lambda_in);
    return static_cast<int>(std::ceil(2.0 * spec.j * spec.R * (q * q + 1.0))) + 20;
}

int top_start(const Basis& basis) {
    const int band = std::max(1, static_cast<int>(std::ceil(0.05 * basis.fock_dim())));
    return basis.fock_dim() - band;
}

double top_occupation(const QuantumState& psi) {
    const auto m = as_matrix(psi);
    const int first = top_start(psi.basis);
    return m.rightCols(psi.basis.fock_dim() - first).squaredNorm();
}

struct DoubletPrep {
    QuantumState psi;
    double energy_even = 0.0;
    double energy_odd = 0.0;
};

DoubletPrep doublet_prep(const QuenchSpec& spec, int n_max) {
    const ModelParams in = spec.model(spec.lambda_in, n_max);
    const GroundDoublet g = ground_doublet(build_hamiltonian(in));
    DoubletPrep out;
    out.energy_even = g.energy_even;
    out.energy_odd = g.energy_odd;
    out.psi.basis = build_basis(in);
    out.psi.amplitudes = (g.even + g.odd) / std::sqrt(2.0);
    if (state_observables(out.psi, spec.j, spec.R).q > 0.0) {
        out.psi.amplitudes = (g.even - g.odd) / std::sqrt(2.0);
    }
    out.psi.amplitudes.normalize();
    return out;
}

QuantumState coherent_product(const QuenchSpec& spec, int n_max) {
    const ModelParams in = spec.model(spec.lambda_in, n_max);
    const Basis basis = build_basis(in);
    const double q0 = q_min_of(spec.lambda_in);
    const double alpha = std::sqrt(spec.j * spec.R) * q0;

    Eigen::VectorXd fock(basis.fock_dim());
    fock[0] = std::exp(-0.5 * alpha * alpha);
    for (int n = 1; n < basis.fock_dim(); ++n) {
        fock[n] = fock[n - 1] * alpha / std::sqrt(static_cast<double>(n));
    }
    const double kept = fock.squaredNorm();
    if (1.0 - kept > 1e-10) {
        std::ostringstream msg;
        msg << "coherent_product: truncation at n_max = " << n_max << " drops weight " << 1.0 - kept;
        warn(msg.str());
    }
    fock /= std::sqrt(kept);

    const EffectiveField field = effective_field(q0, 0.0, spec.lambda_in, spec.delta);
    const Eigen::VectorXcd spin = spin_coherent_state(basis.two_j(), -basis.two_j(), field.direction());

    QuantumState psi{basis, Eigen::VectorXcd(basis.dimension())};
    for (int n = 0; n < basis.fock_dim(); ++n) {
        for (int k = 0; k < basis.spin_dim(); ++k) {
            psi.amplitudes[basis.index(n, k)] = fock[n] * spin[k];
        }
    }
    return psi;
}

void require_same_basis(const Basis& a, const Basis& b, const char* where) {
    if (!(a == b)) {
        std::ostringstream err;
        err << where << ": basis mismatch (n_max " << a.n_max() << " vs " << b.n_max() << ", 2j " << a.two_j() << " vs "
            << b.two_j() << ")";
        throw dimension_error(err.str());
    }
}

Eigen::VectorXcd phases(const Eigen::VectorXd& energies, double t, double hbar_eff) {
    Eigen::VectorXcd out(energies.size());
    for (Eigen::Index k = 0; k < energies.size(); ++k) {
        out[k] = std::polar(1.0, -energies[k] * t / hbar_eff);
    }
    return out;
}

}  // namespace

std::string to_string(PrepMethod m) {
    return m == PrepMethod::DoubletSuperposition ? "doublet_superposition" : "coherent_product";
}

PrepMethod prep_method_from_string(const std::string& name) {
    if (name == "doublet_superposition" || name == "doublet") {
        return PrepMethod::DoubletSuperposition;
    }
    if (name == "coherent_product" || name == "coherent") {
        return PrepMethod::CoherentProduct;
    }
    throw config_error("unknown preparation method '" + name + "'");
}

void QuenchSpec::validate() const {
    model(lambda_in, n_max).validate();
    if (!std::isfinite(lambda_fi)) {
        throw config_error("lambda_fi must be finite");
    }
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!std::isfinite(times[i])) {
            throw config_error("time grid contains a non-finite value");
        }
        if (i == 0 && times[0] != 0.0) {
            throw config_error("time grid must start at 0");
        }
        if (i > 0 && !(times[i] > times[i - 1])) {
            throw config_error("time grid must be strictly increasing");
        }
    }
}

ModelParams QuenchSpec::model(double lambda, int truncation) const {
    ModelParams p;
    p.j = j;
    p.R = R;
    p.lambda = lambda;
    p.delta = delta;
    p.omega = omega;
    p.n_max = truncation;
    return p;
}

double ReducedDensity::trace() const { return matrix.trace().real(); }

double ReducedDensity::purity() const { return matrix.squaredNorm(); }

StateObservables state_observables(const QuantumState& psi, double j, double R) {
    const Basis& b = psi.basis;
    const auto m = as_matrix(psi);
    const int spin = b.spin_dim();
    const double scale = 1.0 / std::sqrt(4.0 * j * R);

    StateObservables o;
    cplx bdag{0.0, 0.0};  // <b^dag>
    for (int n = 0; n + 1 < b.fock_dim(); ++n) {
        bdag += std::sqrt(n + 1.0) * m.col(n + 1).dot(m.col(n));
    }
    o.q = 2.0 * scale * bdag.real();
    o.p = -2.0 * scale * bdag.imag();

    cplx jplus{0.0, 0.0};
    for (int n = 0; n < b.fock_dim(); ++n) {
        for (int k = 0; k < spin; ++k) {
            const double w = std::norm(m(k, n));
            o.norm += w;
            o.jz += b.m_of_spin(k) * w;
            o.parity += ((n + k) % 2 == 0 ? 1.0 : -1.0) * w;
            if (k + 1 < spin) {
                jplus += spin_raise_factor(b.two_j(), k) * std::conj(m(k + 1, n)) * m(k, n);
            }
        }
    }
    o.jx = jplus.real();
    o.jy = jplus.imag();
    o.norm = std::sqrt(o.norm);
    const Eigen::MatrixXcd rho_spin = m * m.adjoint();
    o.purity = rho_spin.squaredNorm();
    return o;
}

QuantumState prepare_initial_state(const QuenchSpec& spec, int n_max) {
    spec.validate();
    if (spec.prep == PrepMethod::CoherentProduct) {
        return coherent_product(spec, n_max);
    }
    if (std::abs(spec.lambda_in) <= 1.0) {
        warn("doublet preparation with |lambda_in| <= 1: the lowest doublet is not quasi-degenerate");
    }
    return doublet_prep(spec, n_max).psi;
}

QuantumState evolve(const QuantumState& psi0, const EigenDecomposition& decomp, double t) {
    require_same_basis(psi0.basis, decomp.basis, "evolve");
    const Eigen::VectorXcd c = decomp.states.adjoint() * psi0.amplitudes;
    const Eigen::VectorXcd ct = c.cwiseProduct(phases(decomp.energies, t, decomp.hbar_eff));
    return {psi0.basis, decomp.states * ct};
}

cplx expectation(const QuantumState& psi, const OperatorMatrix& a) {
    require_same_basis(psi.basis, a.basis, "expectation");
    return psi.amplitudes.dot(a.entries * psi.amplitudes);
}

double expectation_real(const QuantumState& psi, const OperatorMatrix& a) {
    const cplx v = expectation(psi, a);
    const double scale = std::max(1.0, a.entries.cwiseAbs().maxCoeff());
    if (std::abs(v.imag()) > 1e-12 * scale) {
        std::ostringstream err;
        err << "expectation of a Hermitian operator has imaginary part " << v.imag();
        throw numerical_error(err.str());
    }
    return v.real();
}

ReducedDensity reduced_density(const QuantumState& psi) {
    const auto m = as_matrix(psi);
    return {m.transpose() * m.conjugate()};
}

double survival_probability(const QuantumState& psi0, const EigenDecomposition& decomp, double t) {
    require_same_basis(psi0.basis, decomp.basis, "survival_probability");
    const Eigen::VectorXcd c = decomp.states.adjoint() * psi0.amplitudes;
    const Eigen::VectorXd w = c.cwiseAbs2();
    return std::norm(w.cast<cplx>().dot(phases(decomp.energies, t, decomp.hbar_eff).conjugate()));
}

double local_survival(const QuantumState& psi0, const EigenDecomposition& decomp, double tau, double t) {
    const QuantumState a = evolve(psi0, decomp, tau);
    const QuantumState b = evolve(psi0, decomp, tau + t);
    return std::norm(a.amplitudes.dot(b.amplitudes));
}

RabiFrequency rabi_frequency(double q, double p, double lambda_fi, double delta) {
    RabiFrequency r;
    r.exact = effective_field(q, p, lambda_fi, delta).norm;
    r.expanded = 0.5 * (1.0 + lambda_fi * lambda_fi * (q * q + delta * delta * p * p));
    return r;
}

Quench::Quench(QuenchSpec spec) : spec_(std::move(spec)) {
    spec_.validate();
    const bool adaptive = spec_.n_max == 0;
    int n = adaptive ? initial_cutoff(spec_) : spec_.n_max;
    report_.adaptive = adaptive;

    for (int round = 1;; ++round) {
        report_.rounds = round;
        report_.n_max = n;
        try {
            DoubletPrep prep = doublet_prep(spec_, n);
            psi0_ = spec_.prep == PrepMethod::CoherentProduct ? coherent_product(spec_, n) : std::move(prep.psi);
            if (spec_.prep == PrepMethod::DoubletSuperposition && std::abs(spec_.lambda_in) <= 1.0 && round == 1) {
                warn("doublet preparation with |lambda_in| <= 1: the lowest doublet is not quasi-degenerate");
            }
            if (adaptive) {
                const int smaller = static_cast<int>(std::ceil(0.75 * n));
                const DoubletPrep ref = doublet_prep(spec_, smaller);
                report_.doublet_shift = std::max(std::abs(prep.energy_even - ref.energy_even),
                                                 std::abs(prep.energy_odd - ref.energy_odd));
            }
            final_ = spec_.model(spec_.lambda_fi, n);
            decomp_ = diagonalize(build_hamiltonian(final_));
        } catch (const Error& e) {
            if (adaptive && e.kind() == ErrorKind::Dimension) {
                std::ostringstream err;
                err << "adaptive truncation did not converge before the dimension limit (n_max = " << n
                    << ", last doublet shift " << report_.doublet_shift << ", top-level occupation "
                    << report_.top_occupation << ")";
                throw convergence_error(err.str());
            }
            throw;
        }
        finish_setup();

        // Diagonal-ensemble estimate of the top-band weight, then explicit checks on the requested times.
        const int first = top_start(decomp_.basis);
        const int spin = decomp_.basis.spin_dim();
        double top = 0.0;
        for (Eigen::Index a = 0; a < active_vectors_.cols(); ++a) {
            const double band = active_vectors_.col(a).tail((decomp_.basis.fock_dim() - first) * spin).squaredNorm();
            top += std::norm(active_coeffs_[a]) * band;
        }
        top = std::max(top, top_occupation(psi0_));
        if (!spec_.times.empty()) {
            const std::size_t samples = std::min<std::size_t>(32, spec_.times.size());
            for (std::size_t s = 0; s < samples; ++s) {
                const std::size_t idx = samples == 1 ? 0 : s * (spec_.times.size() - 1) / (samples - 1);
                top = std::max(top, top_occupation(state_at(spec_.times[idx])));
            }
        }
        report_.top_occupation = top;

        if (!adaptive) {
            if (top > kTopOccupationTolerance) {
                std::ostringstream msg;
                msg << "fixed truncation n_max = " << n << " leaves weight " << top << " in the top Fock levels";
                warn(msg.str());
            }
            break;
        }
        if (report_.doublet_shift < kDoubletTolerance && top < kTopOccupationTolerance) {
            break;
        }
        if (round == kMaxAdaptiveRounds) {
            std::ostringstream err;
            err << "adaptive truncation did not converge after " << round << " rounds (n_max = " << n
                << ", doublet shift " << report_.doublet_shift << ", top-level occupation " << top << ")";
            throw convergence_error(err.str());
        }
        n *= 2;
    }
}

Quench Quench::reseeded(const Quench& previous, double t_switch, double lambda_next) {
    if (!(t_switch >= 0.0) || !std::isfinite(lambda_next)) {
        throw config_error("second quench needs t_switch >= 0 and a finite coupling");
    }
    Quench q;
    q.spec_ = previous.spec_;
    q.spec_.lambda_fi = lambda_next;
    q.spec_.n_max = previous.report_.n_max;
    q.spec_.times.clear();
    q.report_ = previous.report_;
    q.report_.adaptive = false;
    q.psi0_ = previous.state_at(t_switch);
    q.final_ = q.spec_.model(lambda_next, q.spec_.n_max);
    q.decomp_ = diagonalize(build_hamiltonian(q.final_));
    q.finish_setup();
    return q;
}

void Quench::finish_setup() {
    coeffs_ = decomp_.states.adjoint() * psi0_.amplitudes;
    active_.clear();
    for (Eigen::Index k = 0; k < coeffs_.size(); ++k) {
        if (std::norm(coeffs_[k]) > kActiveWeightCutoff) {
            active_.push_back(k);
        }
    }
    const auto na = static_cast<Eigen::Index>(active_.size());
    active_vectors_.resize(decomp_.states.rows(), na);
    active_coeffs_.resize(na);
    active_energies_.resize(na);
    for (Eigen::Index a = 0; a < na; ++a) {
        active_vectors_.col(a) = decomp_.states.col(active_[a]);
        active_coeffs_[a] = coeffs_[active_[a]];
        active_energies_[a] = decomp_.energies[active_[a]];
    }
}

QuantumState Quench::state_at(double t) const {
    const Eigen::VectorXcd ct = active_coeffs_.cwiseProduct(phases(active_energies_, t, decomp_.hbar_eff));
    return {psi0_.basis, active_vectors_ * ct};
}

double Quench::survival(double t) const {
    const Eigen::VectorXd w = active_coeffs_.cwiseAbs2();
    return std::norm(w.cast<cplx>().dot(phases(active_energies_, t, decomp_.hbar_eff).conjugate()));
}

double Quench::energy(const QuantumState& psi) const {
    return psi.amplitudes.dot(apply_hamiltonian(final_, psi.amplitudes)).real();
}

Observables Quench::observe(std::span<const double> times) const {
    Observables o;
    const auto nt = times.size();
    for (auto* v : {&o.t, &o.q, &o.p, &o.jx, &o.jy, &o.jz, &o.survival, &o.purity, &o.norm, &o.energy, &o.parity}) {
        v->resize(nt);
    }
    const auto na = active_coeffs_.size();
    for (std::size_t start = 0; start < nt; start += kTimeBlock) {
        const auto width = static_cast<Eigen::Index>(std::min<std::size_t>(kTimeBlock, nt - start));
        Eigen::MatrixXcd weights(na, width);
        for (Eigen::Index c = 0; c < width; ++c) {
            weights.col(c) = active_coeffs_.cwiseProduct(phases(active_energies_, times[start + c], decomp_.hbar_eff));
        }
        const Eigen::MatrixXcd states = active_vectors_ * weights;
#pragma omp parallel for schedule(static)
        for (Eigen::Index c = 0; c < width; ++c) {
            const std::size_t i = start + static_cast<std::size_t>(c);
            const QuantumState psi{psi0_.basis, states.col(c)};
            const StateObservables s = state_observables(psi, spec_.j, spec_.R);
            o.t[i] = times[i];
            o.q[i] = s.q;
            o.p[i] = s.p;
            o.jx[i] = s.jx;
            o.jy[i] = s.jy;
            o.jz[i] = s.jz;
            o.norm[i] = s.norm;
            o.parity[i] = s.parity;
            o.purity[i] = s.purity;
            o.energy[i] = energy(psi);
            o.survival[i] = std::norm(active_coeffs_.dot(weights.col(c)));
        }
    }
    return o;
}

StrengthFunction Quench::strength() const {
    const StrengthFunction sf = strength_function(psi0_, decomp_);
    const std::vector<double> centroids = branch_energies(spec_.lambda_in, spec_.lambda_fi, spec_.j);
    return assign_peaks(sf, centroids);
}

}  // namespace catq
