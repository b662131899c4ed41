#pragma once

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <utility>
#include <vector>

namespace catq {

// Parameters of one classical branch h^(mu), mu = m / j.
struct ClassicalParams {
    double lambda = 0.0;
    double delta = 0.5;
    double mu = -1.0;

    void validate() const;
};

// Classical branch Hamiltonian
//   h^(mu)(p, q) = (p^2 + q^2)/2 + 1/2 + mu * sqrt(lambda^2 (q^2 + delta^2 p^2)/2 + 1/4)
double h_classical(double p, double q, const ClassicalParams& cp);

// Hamilton's equations: (dq/dt, dp/dt) = (dh/dp, -dh/dq).
std::pair<double, double> classical_velocity(double q, double p, const ClassicalParams& cp);

struct Minimum {
    double q = 0.0;
    double p = 0.0;
    double e = 0.0;
};

// Global minimum of the mu = -1 branch. For |lambda| > 1 the q < 0 member of
// the symmetric pair is returned; otherwise the origin.
Minimum minimum(double lambda);

// Mean energy of the relaxed pre-quench state with respect to h(lambda_fi).
double after_quench_energy(double lambda_in, double lambda_fi);

// cos of the angle between the pre- and post-quench effective fields at the
// pre-quench minimum.
double mixing_angle(double lambda_in, double lambda_fi);

// Wigner small-d element d^j_{m', m}(beta), spins given as doubled integers.
double wigner_small_d(int two_j, int two_mp, int two_m, double beta);

// alpha^(m) = d^j_{m,-j}(theta), indexed by k = m + j.
std::vector<double> amplitudes(double j, double cos_theta);

// Spin state |m; n> with n = (sin t cos f, sin t sin f, cos t), components
// indexed by k = m_z + j.
Eigen::VectorXcd spin_coherent_state(int two_j, int two_m, double theta, double phi);
Eigen::VectorXcd spin_coherent_state(int two_j, int two_m, const std::array<double, 3>& direction);

// lambda_fi giving equal weights to the +mu and -mu branches.
double balanced_quench(double lambda_in);

// Positive root of the critical quench pair (+lc, -lc): the mu = -1 orbit from
// the pre-quench minimum runs into the saddle at the origin.
double critical_quench(double lambda_in);

// True when the mu = -1 branch has an index-1 saddle at the origin:
// 1 < |lambda| < 1/|delta|.
bool has_saddle(double lambda, double delta);

struct ClassicalOrbit {
    std::vector<double> t, q, p;
    double period = 0.0;       // units tau; meaningful when !divergent && !stationary
    bool divergent = false;    // no return to the section within t_end
    bool stationary = false;   // started on a fixed point
    double energy = 0.0;
    double mu = 0.0;
    double max_energy_drift = 0.0;  // relative, over the whole integration
};

// Adaptive Dormand-Prince integration from (q0, p0) up to t_end, sampled every
// sample_dt. The period is measured between successive same-direction crossings
// of the p = 0 section on the starting side of q; the integration stops after
// the first return unless full_span is set.
ClassicalOrbit integrate_orbit(const ClassicalParams& cp, double q0, double p0, double t_end, double sample_dt = 0.05,
                               bool full_span = true);

struct QuadraturePeriod {
    double period = 0.0;
    bool divergent = false;
    double q_lo = 0.0, q_hi = 0.0;  // turning points
};

// Period of the closed orbit of energy h^(mu) = energy that touches the p = 0
// line at q_turning, from T = 2 * integral dq / qdot between turning points.
QuadraturePeriod orbit_period_quadrature(const ClassicalParams& cp, double energy, double q_turning);

struct WeakCouplingFrequency {
    double exact = 0.0;     // sqrt((1 + mu l^2 d^2)(1 + mu l^2))
    double expanded = 0.0;  // 1 + mu l^2 (1 + d^2) / 2
};

WeakCouplingFrequency weak_coupling_frequency(const ClassicalParams& cp);

// h^(m/j)(p_min, q_min(lambda_in), lambda_fi), indexed by k = m + j.
std::vector<double> branch_energies(double lambda_in, double lambda_fi, double j);

}  // namespace catq
