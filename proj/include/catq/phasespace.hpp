#pragma once

#include "catq/hilbert.hpp"
#include "catq/quench.hpp"

#include <vector>

namespace catq {

// Uniform axis of n points covering [lo, hi].
struct Axis {
    double lo = -1.5;
    double hi = 1.5;
    int n = 301;

    double step() const { return n > 1 ? (hi - lo) / (n - 1) : 0.0; }
    double at(int i) const { return lo + i * step(); }
    void validate(const char* name) const;
};

// W(q, p) in rescaled phase-space units, values(i, k) = W(q_i, p_k).
struct WignerGrid {
    Axis q_axis;
    Axis p_axis;
    Eigen::MatrixXd values;
    double norm_residual = 0.0;  // |integral W dq dp - tr rho|
    double tail_mass = 0.0;      // probability outside the window (q and p marginals)
    double jr = 0.0;             // j * R of the underlying model

    double integral() const;
};

enum class WignerMethod {
    // Position representation: rho is split into rank-one pieces, each
    // sampled through Hermite functions, and the Weyl integral is a
    // trapezoidal sum on a refined position lattice.
    Position,
    // Fock-basis Laguerre kernel, evaluated point by point. Slower; kept as
    // the reference transform.
    Laguerre,
};

// Standard-units Wigner function of rho mapped to rescaled coordinates:
// W(q, p) = 2 j R W_std(sqrt(2 j R) q, sqrt(2 j R) p).
WignerGrid wigner(const ReducedDensity& rho, const ModelParams& params, const Axis& q_axis, const Axis& p_axis,
                  WignerMethod method = WignerMethod::Position);

// Wigner function of the oscillator part of a spin-oscillator state, using
// the spin components as the rank-one decomposition directly.
WignerGrid wigner(const QuantumState& psi, const ModelParams& params, const Axis& q_axis, const Axis& p_axis,
                  WignerMethod method = WignerMethod::Position);

double purity(const ReducedDensity& rho);

// integral (|W| - W) dq dp, trapezoidal. Throws an extent error when the
// window misses more than 1e-4 of the probability.
double negativity(const WignerGrid& w);

// Half-width of a square window centred on the origin that holds the state
// up to a tail of roughly 1e-10, never below `minimum`.
double covering_extent(const QuantumState& psi, const ModelParams& params, double minimum = 1.5);

// 2 pi / (2 j R) * integral W^2 dq dp
double phase_space_purity(const WignerGrid& w);

struct Marginals {
    std::vector<double> q;  // |psi(q)|^2 on q_axis
    std::vector<double> p;  // |psi(p)|^2 on p_axis
};

Marginals marginals(const WignerGrid& w);

// Smallest number of points per axis resolving interference fringes of a
// state with the given mean excitation, on an axis of the given width.
int suggested_grid_points(double jr, double mean_excitation, double width);

}  // namespace catq
