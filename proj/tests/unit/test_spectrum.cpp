#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "catq/hilbert.hpp"
#include "catq/quench.hpp"
#include "catq/semiclassics.hpp"
#include "catq/spectrum.hpp"

#include <cmath>
#include <numeric>

using namespace catq;

namespace {

ModelParams params(double j, double R, double lambda, double delta, int n_max) {
    ModelParams p;
    p.j = j;
    p.R = R;
    p.lambda = lambda;
    p.delta = delta;
    p.n_max = n_max;
    return p;
}

// Lowest classical energy written out directly: -(lambda^2 + lambda^-2)/4 + 1/2.
double e_min_oracle(double lambda) { return -0.25 * (lambda * lambda + 1.0 / (lambda * lambda)) + 0.5; }

}  // namespace

TEST_CASE("diagonalization: residuals, orthonormality and parity labels") {
    const auto h = build_hamiltonian(params(1.0, 10.0, 1.2, 0.5, 40));
    const auto d = diagonalize(h);
    CHECK(max_residual(h, d) < 1e-12);
    const Eigen::MatrixXcd gram = d.states.adjoint() * d.states;
    CHECK((gram - Eigen::MatrixXcd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff() < 1e-12);
    const auto pi = build_parity(h.basis);
    for (std::size_t k = 0; k < d.size(); ++k) {
        const Eigen::VectorXcd v = d.states.col(static_cast<Eigen::Index>(k));
        const double label = (v.adjoint() * pi.entries * v)(0).real();
        CHECK(label == doctest::Approx(d.parities[k]).epsilon(1e-10));
    }
    for (Eigen::Index k = 1; k < d.energies.size(); ++k) {
        CHECK(d.energies[k] >= d.energies[k - 1]);
    }
}

TEST_CASE("ground energy approaches the classical minimum") {
    const double lambda = 1.5;
    const auto d = diagonalize(build_hamiltonian(params(0.5, 50.0, lambda, 0.5, 140)));
    const double e0 = d.energies[0];
    CHECK(e_min_oracle(lambda) == doctest::Approx(-0.173611).epsilon(1e-5));
    // Zero-point corrections are of order 1/(2 j R).
    CHECK(std::abs(e0 - e_min_oracle(lambda)) < 1.0 / 50.0);
}

TEST_CASE("spectrum is even in lambda") {
    for (double delta : {0.0, 0.5, 1.0}) {
        const auto a = eigenvalues(build_hamiltonian(params(1.5, 6.0, 1.1, delta, 30)));
        const auto b = eigenvalues(build_hamiltonian(params(1.5, 6.0, -1.1, delta, 30)));
        CHECK((a - b).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("superradiant ground doublet") {
    const auto h = build_hamiltonian(params(0.5, 50.0, 1.5, 0.5, 140));
    const auto d = diagonalize(h);
    const auto g = ground_doublet(d);
    const double spacing = d.energies[2] - d.energies[0];
    CHECK(g.splitting < 1e-6 * spacing);
    const auto pi = build_parity(h.basis);
    const double pe = (g.even.adjoint() * pi.entries * g.even)(0).real();
    const double po = (g.odd.adjoint() * pi.entries * g.odd)(0).real();
    CHECK(pe == doctest::Approx(1.0));
    CHECK(po == doctest::Approx(-1.0));

    SUBCASE("sector solver matches the full decomposition") {
        const auto fast = ground_doublet(h);
        CHECK(fast.energy_even == doctest::Approx(g.energy_even).epsilon(1e-12));
        CHECK(fast.energy_odd == doctest::Approx(g.energy_odd).epsilon(1e-12));
    }
}

TEST_CASE("doublet splitting shrinks with R") {
    double previous = 1.0;
    for (double R : {10.0, 20.0, 50.0}) {
        const int n = static_cast<int>(std::ceil(R * (2.25 + 1.0))) + 40;
        const auto g = ground_doublet(build_hamiltonian(params(0.5, R, 1.5, 0.5, n)));
        CHECK(g.splitting < previous);
        previous = g.splitting;
    }
}

TEST_CASE("decoupled doublet is the first ladder step") {
    for (double R : {0.5, 3.0, 20.0}) {
        const auto g = ground_doublet(build_hamiltonian(params(0.5, R, 0.0, 0.5, 8)));
        CHECK(g.splitting == doctest::Approx(std::min(1.0 / R, 1.0)).epsilon(1e-13));
    }
}

TEST_CASE("strength function sum rules") {
    const auto h = build_hamiltonian(params(1.0, 8.0, -0.6, 0.5, 50));
    const auto d = diagonalize(h);
    QuantumState psi{h.basis, Eigen::VectorXcd::Random(static_cast<Eigen::Index>(h.basis.dimension()))};
    psi.amplitudes.normalize();
    const auto sf = strength_function(psi, d);
    double total = 0.0, mean = 0.0;
    for (const auto& e : sf.entries) {
        total += e.weight;
        mean += e.weight * e.energy;
    }
    const double direct = (psi.amplitudes.adjoint() * h.entries * psi.amplitudes)(0).real();
    CHECK(std::abs(total - 1.0) < 1e-10);
    CHECK(std::abs(mean - direct) < 1e-10);
    CHECK(sf.total_weight == doctest::Approx(total));
    CHECK(sf.mean_energy == doctest::Approx(direct));
}

TEST_CASE("an eigenstate has a single strength line") {
    const auto h = build_hamiltonian(params(0.5, 8.0, 0.7, 0.5, 30));
    const auto d = diagonalize(h);
    const QuantumState psi{h.basis, d.states.col(5)};
    const auto sf = strength_function(psi, d);
    double largest = 0.0;
    for (const auto& e : sf.entries) {
        largest = std::max(largest, e.weight);
    }
    CHECK(largest == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("peak assignment puts each line on the nearest branch") {
    StrengthFunction sf;
    sf.two_j = 1;
    sf.entries = {{0.1, 0.2}, {0.45, 0.3}, {0.9, 0.5}};
    const double centroids[] = {0.0, 1.0};
    const auto out = assign_peaks(sf, centroids);
    CHECK(out.entries[0].assigned_two_m == -1);
    CHECK(out.entries[1].assigned_two_m == -1);
    CHECK(out.entries[2].assigned_two_m == 1);
    CHECK(out.peak_weights[0] == doctest::Approx(0.5));
    CHECK(out.peak_weights[1] == doctest::Approx(0.5));
}

TEST_CASE("quench without a change of coupling stays on the lowest branch") {
    QuenchSpec spec;
    spec.R = 30.0;
    spec.lambda_in = 1.5;
    spec.lambda_fi = 1.5;
    const Quench q(spec);
    const auto sf = q.strength();
    CHECK(sf.peak_weights[0] == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("balanced quench splits the weight evenly at j = 1/2") {
    QuenchSpec spec;
    spec.R = 50.0;
    spec.lambda_fi = balanced_quench(1.5);
    const auto sf = Quench(spec).strength();
    CHECK(sf.peak_weights[0] == doctest::Approx(0.5).epsilon(0.04));
    CHECK(sf.peak_weights[1] == doctest::Approx(0.5).epsilon(0.04));
}

TEST_CASE("j = 2 balanced quench shows five branches") {
    QuenchSpec spec;
    spec.j = 2.0;
    spec.R = 20.0;
    spec.lambda_fi = balanced_quench(1.5);
    const auto sf = Quench(spec).strength();
    REQUIRE(sf.peak_weights.size() == 5);
    for (double w : sf.peak_weights) {
        CHECK(w > 0.02);
    }
    const double total = std::accumulate(sf.peak_weights.begin(), sf.peak_weights.end(), 0.0);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
}
