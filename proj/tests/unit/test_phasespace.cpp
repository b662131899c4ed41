#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "catq/error.hpp"
#include "catq/hilbert.hpp"
#include "catq/log.hpp"
#include "catq/phasespace.hpp"
#include "catq/quench.hpp"
#include "catq/wig_io.hpp"

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

using namespace catq;

namespace {

constexpr double kPi = std::numbers::pi;

ModelParams oscillator(int n_max, double j = 0.5, double R = 20.0) {
    ModelParams p;
    p.j = j;
    p.R = R;
    p.n_max = n_max;
    return p;
}

// Fock amplitudes of the coherent state |alpha>.
Eigen::VectorXcd coherent(std::complex<double> alpha, int n_max) {
    Eigen::VectorXcd c(n_max + 1);
    c[0] = std::exp(-0.5 * std::norm(alpha));
    for (int n = 1; n <= n_max; ++n) {
        c[n] = c[n - 1] * alpha / std::sqrt(static_cast<double>(n));
    }
    return c;
}

ReducedDensity pure(const Eigen::VectorXcd& v) { return {v * v.adjoint()}; }

// Oscillator state |v> times spin down, as a product-basis vector.
QuantumState product(const Eigen::VectorXcd& v, int two_j = 1) {
    const Basis b(static_cast<int>(v.size()) - 1, two_j);
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(b.dimension()));
    for (int n = 0; n < v.size(); ++n) {
        psi[static_cast<Eigen::Index>(b.index(n, 0))] = v[n];
    }
    return {b, psi};
}

std::pair<Eigen::Index, Eigen::Index> argmax(const Eigen::MatrixXd& m) {
    Eigen::Index i = 0, k = 0;
    m.maxCoeff(&i, &k);
    return {i, k};
}

struct QuietLog {
    QuietLog() {
        set_log_sink([](const std::string&) {});
    }
    ~QuietLog() { set_log_sink(nullptr); }
};

}  // namespace

TEST_CASE("vacuum Wigner function") {
    const int n = 20;
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(n + 1);
    v[0] = 1.0;
    const auto p = oscillator(n);
    const Axis a{-1.0, 1.0, 201};
    const auto w = wigner(pure(v), p, a, a);
    const double jr2 = 2.0 * p.j * p.R;
    CHECK(w.values(100, 100) == doctest::Approx(jr2 / kPi).epsilon(1e-12));
    CHECK(std::abs(w.integral() - 1.0) < 1e-4);
    CHECK(w.norm_residual < 1e-4);
    CHECK(negativity(w) < 1e-4);

    SUBCASE("marginals are Gaussians of variance 1/(4jR)") {
        const auto m = marginals(w);
        const double var = 1.0 / (2.0 * jr2);
        for (int i : {60, 100, 130}) {
            const double q = a.at(i);
            const double want = std::exp(-q * q / (2 * var)) / std::sqrt(2 * kPi * var);
            CHECK(m.q[static_cast<std::size_t>(i)] == doctest::Approx(want).epsilon(1e-6));
            CHECK(m.p[static_cast<std::size_t>(i)] == doctest::Approx(want).epsilon(1e-6));
        }
    }
}

TEST_CASE("coherent state is a displaced Gaussian centred on the quadrature means") {
    const int n = 80;
    const std::complex<double> alpha(1.7, -2.3);
    const Eigen::VectorXcd v = coherent(alpha, n);
    const auto p = oscillator(n);
    const auto state = product(v);
    const auto ops = build_quadratures(p);
    const double q0 = expectation_real(state, ops.q);
    const double p0 = expectation_real(state, ops.p);
    CHECK(std::abs(p0) > 0.3);

    const Axis a{-1.5, 1.5, 301};
    const auto w = wigner(state, p, a, a);
    const auto [i, k] = argmax(w.values);
    CHECK(std::abs(a.at(static_cast<int>(i)) - q0) <= a.step());
    CHECK(std::abs(a.at(static_cast<int>(k)) - p0) <= a.step());
    CHECK(std::abs(w.integral() - 1.0) < 1e-4);
    CHECK(negativity(w) < 1e-4);
}

TEST_CASE("even cat shows fringes, negativity and two-bump marginals") {
    const int n = 80;
    const double x = 3.0;
    const Eigen::VectorXcd v = (coherent(x, n) + coherent(-x, n)).normalized();
    const auto p = oscillator(n);
    const Axis a{-2.0, 2.0, 401};
    const auto w = wigner(pure(v), p, a, a);
    CHECK(negativity(w) > 0.1);
    const auto m = marginals(w);
    double lowest = 1.0;
    for (double y : m.q) {
        lowest = std::min(lowest, y);
    }
    for (double y : m.p) {
        lowest = std::min(lowest, y);
    }
    CHECK(lowest > -1e-8);
    // Maxima near q = +-x / sqrt(jR), dip at the origin.
    const double centre = x / std::sqrt(p.j * p.R);
    const auto near = [&](double q) { return m.q[static_cast<std::size_t>(std::lround((q - a.lo) / a.step()))]; };
    CHECK(near(centre) > 10.0 * near(0.0));
    CHECK(near(-centre) == doctest::Approx(near(centre)).epsilon(1e-8));
}

TEST_CASE("position and Laguerre transforms agree") {
    const int n = 12;
    std::mt19937 rng(3);
    std::normal_distribution<double> g;
    Eigen::MatrixXcd a(n + 1, 3);
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
        for (Eigen::Index c = 0; c < a.cols(); ++c) {
            a(r, c) = {g(rng), g(rng)};
        }
    }
    Eigen::MatrixXcd rho = a * a.adjoint();
    rho /= rho.trace().real();
    const auto p = oscillator(n);
    const Axis axis{-1.2, 1.2, 41};
    const auto w1 = wigner(ReducedDensity{rho}, p, axis, axis, WignerMethod::Position);
    const auto w2 = wigner(ReducedDensity{rho}, p, axis, axis, WignerMethod::Laguerre);
    CHECK((w1.values - w2.values).cwiseAbs().maxCoeff() < 1e-10);

    SUBCASE("phase-space purity equals tr rho^2") {
        const Axis fine{-1.5, 1.5, 201};
        const auto w = wigner(ReducedDensity{rho}, p, fine, fine);
        CHECK(phase_space_purity(w) == doctest::Approx(purity(ReducedDensity{rho})).epsilon(1e-6));
    }
}

TEST_CASE("purity bounds") {
    const int n = 4;
    const Eigen::MatrixXcd mixed = Eigen::MatrixXcd::Identity(n, n) / static_cast<double>(n);
    CHECK(purity(ReducedDensity{mixed}) == doctest::Approx(1.0 / n).epsilon(1e-14));
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(n);
    v[2] = 1.0;
    CHECK(purity(pure(v)) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("window checks") {
    const int n = 120;
    const auto p = oscillator(n);
    const auto state = product(coherent(5.0, n));
    const Axis small{-0.5, 0.5, 101};
    const auto w = wigner(state, p, small, small);
    CHECK(w.tail_mass > 1e-4);
    try {
        (void)negativity(w);
        FAIL("expected an extent error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Extent);
    }
    const double half = covering_extent(state, p);
    const Axis cover{-half, half, 301};
    const auto wc = wigner(state, p, cover, cover);
    CHECK(wc.tail_mass < 1e-8);
    CHECK(negativity(wc) < 1e-4);

    CHECK_THROWS_AS(wigner(state, p, Axis{1.0, -1.0, 11}, small), Error);
}

TEST_CASE("coarse grids raise a resolution warning") {
    int warnings = 0;
    set_log_sink([&](const std::string&) { ++warnings; });
    const int n = 80;
    const Eigen::VectorXcd v = (coherent(4.0, n) + coherent(-4.0, n)).normalized();
    const Axis coarse{-1.5, 1.5, 15};
    (void)wigner(pure(v), oscillator(n), coarse, coarse);
    set_log_sink(nullptr);
    CHECK(warnings == 1);
    CHECK(suggested_grid_points(10.0, 16.0, 3.0) > suggested_grid_points(10.0, 1.0, 3.0));
}

TEST_CASE("WIGv1 round trip and layout") {
    const QuietLog quiet;
    const int n = 10;
    const auto p = oscillator(n);
    const auto w = wigner(pure(coherent({0.5, 0.2}, n)), p, Axis{-1.0, 1.0, 7}, Axis{-0.5, 0.8, 5});
    const auto dir = std::filesystem::temp_directory_path() / "catq_wig_test";
    std::filesystem::create_directories(dir);
    const std::string path = (dir / "frame.wig").string();
    write_wig(path, w);

    CHECK(std::filesystem::file_size(path) == 5 + 2 * 4 + 4 * 8 + 7 * 5 * 8);
    std::ifstream raw(path, std::ios::binary);
    char head[5];
    raw.read(head, 5);
    CHECK(std::memcmp(head, "WIGv1", 5) == 0);
    std::uint32_t nq = 0, np = 0;
    raw.read(reinterpret_cast<char*>(&nq), 4);
    raw.read(reinterpret_cast<char*>(&np), 4);
    CHECK(nq == 7);
    CHECK(np == 5);
    double bounds[4];
    raw.read(reinterpret_cast<char*>(bounds), sizeof bounds);
    CHECK(bounds[0] == -1.0);
    CHECK(bounds[3] == 0.8);
    double second = 0.0;
    raw.read(reinterpret_cast<char*>(&second), 8);
    raw.read(reinterpret_cast<char*>(&second), 8);
    CHECK(second == w.values(0, 1));

    const auto back = read_wig(path);
    CHECK(back.q_axis.n == 7);
    CHECK(back.p_axis.lo == -0.5);
    CHECK((back.values - w.values).cwiseAbs().maxCoeff() == 0.0);

    {
        std::ofstream bad(dir / "bad.wig", std::ios::binary);
        bad << "WIGv2xxxxxxxx";
    }
    try {
        (void)read_wig((dir / "bad.wig").string());
        FAIL("expected an io error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Io);
    }

    write_wig_csv((dir / "frame.csv").string(), w);
    std::ifstream csv(dir / "frame.csv");
    std::string line;
    int lines = 0;
    while (std::getline(csv, line)) {
        ++lines;
    }
    CHECK(lines == 1 + 7 * 5);
    std::filesystem::remove_all(dir);
}

TEST_CASE("quench negativity vanishes at t = 0 and grows with j between revivals") {
    const QuietLog quiet;
    double previous = 0.0;
    for (double j : {0.5, 1.0, 2.0}) {
        QuenchSpec s;
        s.j = j;
        const Quench q(s);
        const auto& params = q.final_params();
        const auto psi0 = q.initial_state();
        const double h0 = covering_extent(psi0, params);
        const auto w0 = wigner(psi0, params, Axis{-h0, h0, 201}, Axis{-h0, h0, 201});
        CHECK(negativity(w0) < 1e-4);

        double mean = 0.0;
        int count = 0;
        for (double t = 20.0; t <= 50.0; t += 5.0) {
            const auto psi = q.state_at(t);
            const double h = covering_extent(psi, params);
            const auto w = wigner(psi, params, Axis{-h, h, 201}, Axis{-h, h, 201});
            mean += negativity(w);
            ++count;
        }
        mean /= count;
        CHECK(mean > previous);
        previous = mean;
    }
}
