#include "catq/semiclassics.hpp"

#include "catq/error.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>
#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace catq {
namespace {

using State = std::array<double, 2>;  // (q, p)

double field_norm(double q, double p, const ClassicalParams& cp) {
    const double l2 = cp.lambda * cp.lambda;
    return std::sqrt(0.5 * l2 * (q * q + cp.delta * cp.delta * p * p) + 0.25);
}

double dh_dq(double q, double p, const ClassicalParams& cp) {
    return q * (1.0 + cp.mu * cp.lambda * cp.lambda / (2.0 * field_norm(q, p, cp)));
}

double dh_dp(double q, double p, const ClassicalParams& cp) {
    return p * (1.0 + cp.mu * cp.lambda * cp.lambda * cp.delta * cp.delta / (2.0 * field_norm(q, p, cp)));
}

double log_factorial(int n) { return std::lgamma(n + 1.0); }

int sign_of(double x) { return (x > 0.0) - (x < 0.0); }

template <class F>
double bracket_root(F&& f, double lo, double hi) {
    boost::uintmax_t iters = 200;
    const auto r = boost::math::tools::toms748_solve(f, lo, hi, boost::math::tools::eps_tolerance<double>(52), iters);
    return 0.5 * (r.first + r.second);
}

}  // namespace

void ClassicalParams::validate() const {
    if (!std::isfinite(lambda) || !std::isfinite(delta)) {
        throw config_error("classical parameters must be finite");
    }
    if (std::abs(mu) > 1.0 + 1e-12) {
        std::ostringstream err;
        err << "branch label mu = m/j must satisfy |mu| <= 1, got " << mu;
        throw config_error(err.str());
    }
}

double h_classical(double p, double q, const ClassicalParams& cp) {
    return 0.5 * (p * p + q * q) + 0.5 + cp.mu * field_norm(q, p, cp);
}

std::pair<double, double> classical_velocity(double q, double p, const ClassicalParams& cp) {
    return {dh_dp(q, p, cp), -dh_dq(q, p, cp)};
}

Minimum minimum(double lambda) {
    if (std::abs(lambda) <= 1.0) {
        return {};
    }
    const double l2 = lambda * lambda;
    return {-std::sqrt(0.5 * (l2 - 1.0 / l2)), 0.0, -0.25 * (l2 + 1.0 / l2) + 0.5};
}

double after_quench_energy(double lambda_in, double lambda_fi) {
    const double li2 = lambda_in * lambda_in;
    return 0.25 * (li2 - 3.0 / li2) - 0.5 * lambda_fi * (lambda_in - 1.0 / (li2 * lambda_in)) + 0.5;
}

double mixing_angle(double lambda_in, double lambda_fi) {
    const double li2 = lambda_in * lambda_in;
    const double gap = li2 - 1.0 / li2;  // 2 q_min^2
    const double c = (1.0 + lambda_fi * lambda_in * gap) / (li2 * std::sqrt(1.0 + lambda_fi * lambda_fi * gap));
    if (std::abs(c) > 1.0 + 1e-12) {
        std::ostringstream err;
        err << "mixing_angle: |cos theta| = " << std::abs(c) << " exceeds 1 (lambda_in = " << lambda_in << ")";
        throw numerical_error(err.str());
    }
    return std::clamp(c, -1.0, 1.0);
}

double wigner_small_d(int two_j, int two_mp, int two_m, double beta) {
    // Wigner's sum, with every factorial argument an integer: j + m etc.
    const int jpm = (two_j + two_m) / 2;
    const int jmm = (two_j - two_m) / 2;
    const int jpmp = (two_j + two_mp) / 2;
    const int jmmp = (two_j - two_mp) / 2;
    const int mp_m = (two_mp - two_m) / 2;
    if ((two_j + two_m) % 2 != 0 || (two_j + two_mp) % 2 != 0 || jmm < 0 || jpm < 0 || jmmp < 0 || jpmp < 0) {
        throw config_error("wigner_small_d: projections outside [-j, j] or of wrong parity");
    }
    const double c = std::cos(0.5 * beta);
    const double s = std::sin(0.5 * beta);
    const double prefactor =
        0.5 * (log_factorial(jpmp) + log_factorial(jmmp) + log_factorial(jpm) + log_factorial(jmm));
    double sum = 0.0;
    const int s_lo = std::max(0, -mp_m);
    const int s_hi = std::min(jpm, jmmp);
    for (int k = s_lo; k <= s_hi; ++k) {
        const double denom =
            log_factorial(jpm - k) + log_factorial(k) + log_factorial(mp_m + k) + log_factorial(jmmp - k);
        const int cos_pow = two_j - mp_m - 2 * k;  // 2j + m - m' - 2k
        const int sin_pow = mp_m + 2 * k;
        const double sign = ((mp_m + k) % 2 == 0) ? 1.0 : -1.0;
        sum += sign * std::exp(prefactor - denom) * std::pow(c, cos_pow) * std::pow(s, sin_pow);
    }
    return sum;
}

std::vector<double> amplitudes(double j, double cos_theta) {
    if (std::abs(cos_theta) > 1.0 + 1e-12) {
        throw config_error("amplitudes: |cos theta| must not exceed 1");
    }
    const int two_j = static_cast<int>(std::lround(2.0 * j));
    const double theta = std::acos(std::clamp(cos_theta, -1.0, 1.0));
    std::vector<double> out(two_j + 1);
    for (int k = 0; k <= two_j; ++k) {
        out[k] = wigner_small_d(two_j, 2 * k - two_j, -two_j, theta);
    }
    return out;
}

Eigen::VectorXcd spin_coherent_state(int two_j, int two_m, double theta, double phi) {
    Eigen::VectorXcd v(two_j + 1);
    for (int k = 0; k <= two_j; ++k) {
        const int two_mp = 2 * k - two_j;
        v[k] = std::polar(wigner_small_d(two_j, two_mp, two_m, theta), -0.5 * two_mp * phi);
    }
    return v;
}

Eigen::VectorXcd spin_coherent_state(int two_j, int two_m, const std::array<double, 3>& direction) {
    const double theta = std::acos(std::clamp(direction[2], -1.0, 1.0));
    const double phi = std::atan2(direction[1], direction[0]);
    return spin_coherent_state(two_j, two_m, theta, phi);
}

double balanced_quench(double lambda_in) {
    const double l4 = std::pow(lambda_in, 4);
    if (std::abs(1.0 - l4) < 1e-14) {
        throw numerical_error("balanced_quench: pole at lambda_in^4 = 1");
    }
    return lambda_in / (1.0 - l4);
}

double critical_quench(double lambda_in) {
    const double l2 = lambda_in * lambda_in;
    return std::sqrt(0.25 * (l2 - 1.0 / l2) + 1.0);
}

bool has_saddle(double lambda, double delta) {
    const double a = std::abs(lambda);
    return a > 1.0 && (delta == 0.0 || a < 1.0 / std::abs(delta));
}

ClassicalOrbit integrate_orbit(const ClassicalParams& cp, double q0, double p0, double t_end, double sample_dt,
                               bool full_span) {
    namespace odeint = boost::numeric::odeint;
    cp.validate();
    if (!(t_end > 0.0) || !std::isfinite(q0) || !std::isfinite(p0)) {
        throw config_error("integrate_orbit: need finite start point and t_end > 0");
    }
    if (!(sample_dt > 0.0)) {
        throw config_error("integrate_orbit: sample_dt must be positive");
    }

    ClassicalOrbit orbit;
    orbit.mu = cp.mu;
    orbit.energy = h_classical(p0, q0, cp);
    const double energy_scale = std::max(std::abs(orbit.energy), 1.0);

    const auto [qdot0, pdot0] = classical_velocity(q0, p0, cp);
    if (std::abs(qdot0) < 1e-14 && std::abs(pdot0) < 1e-14) {
        orbit.stationary = true;
        for (double t = 0.0; t <= t_end + 1e-12; t += sample_dt) {
            orbit.t.push_back(t);
            orbit.q.push_back(q0);
            orbit.p.push_back(p0);
        }
        orbit.period = std::numeric_limits<double>::quiet_NaN();
        return orbit;
    }

    auto rhs = [&cp](const State& x, State& dxdt, double /*t*/) {
        const auto [qd, pd] = classical_velocity(x[0], x[1], cp);
        dxdt = {qd, pd};
    };

    auto stepper = odeint::make_dense_output(1e-12, 1e-10, odeint::runge_kutta_dopri5<State>());
    stepper.initialize(State{q0, p0}, 0.0, 1e-3);

    // Reference crossing of the p = 0 section.
    bool have_ref = false;
    int ref_dir = 0;
    int ref_side = 0;
    double ref_time = 0.0;
    if (p0 == 0.0) {
        have_ref = true;
        ref_dir = sign_of(pdot0);
        ref_side = sign_of(q0);
    }
    bool found_period = false;

    double next_sample = 0.0;
    State x{};
    while (stepper.current_time() < t_end) {
        const State before = stepper.current_state();
        const auto [t0, t1] = stepper.do_step(rhs);
        const State& after = stepper.current_state();

        const double t_stop = std::min(t1, t_end);
        while (next_sample <= t_stop + 1e-12) {
            stepper.calc_state(next_sample, x);
            orbit.t.push_back(next_sample);
            orbit.q.push_back(x[0]);
            orbit.p.push_back(x[1]);
            next_sample += sample_dt;
        }
        const double drift = std::abs(h_classical(after[1], after[0], cp) - orbit.energy) / energy_scale;
        orbit.max_energy_drift = std::max(orbit.max_energy_drift, drift);

        if (!found_period && before[1] * after[1] < 0.0) {
            auto p_at = [&](double t) {
                State s;
                stepper.calc_state(t, s);
                return s[1];
            };
            const double tc = bracket_root(p_at, t0, t1);
            State sc;
            stepper.calc_state(tc, sc);
            const int dir = sign_of(after[1] - before[1]);
            const int side = sign_of(sc[0]);
            if (!have_ref) {
                have_ref = true;
                ref_dir = dir;
                ref_side = side;
                ref_time = tc;
            } else if (dir == ref_dir && (ref_side == 0 || side == ref_side)) {
                orbit.period = tc - ref_time;
                found_period = true;
                if (!full_span) {
                    break;
                }
            }
        }
    }
    if (!found_period) {
        orbit.divergent = true;
        orbit.period = std::numeric_limits<double>::infinity();
    }
    return orbit;
}

QuadraturePeriod orbit_period_quadrature(const ClassicalParams& cp, double energy, double q_turning) {
    cp.validate();
    QuadraturePeriod out;
    const double slope = dh_dq(q_turning, 0.0, cp);
    const double mismatch = std::abs(h_classical(0.0, q_turning, cp) - energy);
    if (mismatch > 1e-9 * std::max(1.0, std::abs(energy))) {
        throw config_error("orbit_period_quadrature: q_turning does not lie on the requested energy shell");
    }
    if (std::abs(slope) < 1e-12) {
        out.divergent = true;  // fixed point: saddle or minimum
        out.period = std::numeric_limits<double>::infinity();
        return out;
    }

    // March from q_turning into the allowed region until h(0, q) climbs back to e.
    auto shell = [&](double q) { return h_classical(0.0, q, cp) - energy; };
    const int dir = -sign_of(slope);
    double step = 1e-7 * std::max(1.0, std::abs(q_turning));
    double q_prev = q_turning;
    double q_next = q_turning + dir * step;
    int guard = 0;
    while (shell(q_next) < 0.0) {
        q_prev = q_next;
        step = std::min(step * 1.5, 1e-2);
        q_next = q_prev + dir * step;
        if (++guard > 1000000) {
            throw numerical_error("orbit_period_quadrature: no second turning point");
        }
    }
    const double q_other = bracket_root(shell, std::min(q_prev, q_next), std::max(q_prev, q_next));
    if (std::abs(dh_dq(q_other, 0.0, cp)) < 1e-10) {
        out.divergent = true;
        out.period = std::numeric_limits<double>::infinity();
        return out;
    }
    out.q_lo = std::min(q_turning, q_other);
    out.q_hi = std::max(q_turning, q_other);

    const double centre = 0.5 * (out.q_lo + out.q_hi);
    const double half = 0.5 * (out.q_hi - out.q_lo);
    auto momentum = [&](double q) {
        const double base = shell(q);
        if (base >= 0.0) {
            return 0.0;
        }
        auto g = [&](double p) { return h_classical(p, q, cp) - energy; };
        double hi = std::sqrt(2.0 * -base) + 1e-300;
        int n = 0;
        while (g(hi) < 0.0) {
            hi *= 2.0;
            if (++n > 200) {
                throw numerical_error("orbit_period_quadrature: momentum bracket failed");
            }
        }
        return bracket_root(g, 0.0, hi);
    };
    auto integrand = [&](double phi) {
        const double q = centre - half * std::cos(phi);
        const double p = momentum(q);
        const double qdot = dh_dp(q, p, cp);
        return half * std::sin(phi) / qdot;
    };
    double error = 0.0;
    const double half_period = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        integrand, 0.0, std::numbers::pi, 15, 1e-12, &error);
    out.period = 2.0 * half_period;
    return out;
}

WeakCouplingFrequency weak_coupling_frequency(const ClassicalParams& cp) {
    cp.validate();
    const double l2 = cp.lambda * cp.lambda;
    const double fp = 1.0 + cp.mu * l2 * cp.delta * cp.delta;
    const double fq = 1.0 + cp.mu * l2;
    if (fp <= 0.0 || fq <= 0.0) {
        throw numerical_error("weak_coupling_frequency: inverted well, the origin is not a minimum");
    }
    return {std::sqrt(fp * fq), 1.0 + 0.5 * cp.mu * l2 * (1.0 + cp.delta * cp.delta)};
}

std::vector<double> branch_energies(double lambda_in, double lambda_fi, double j) {
    const int two_j = static_cast<int>(std::lround(2.0 * j));
    const Minimum start = minimum(lambda_in);
    std::vector<double> out(two_j + 1);
    for (int k = 0; k <= two_j; ++k) {
        const ClassicalParams cp{lambda_fi, 0.0, (2.0 * k - two_j) / two_j};
        out[k] = h_classical(start.p, start.q, cp);
    }
    return out;
}

}  // namespace catq
