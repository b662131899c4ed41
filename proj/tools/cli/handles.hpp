#pragma once

#include "config.hpp"

#include "catq/catq.h"

#include <memory>
#include <string>
#include <vector>

namespace catq::cli {

// Throws CliError carrying the exit code that matches a failed C API call.
void check(catq_status s, const char* call);

struct QuenchDeleter {
    void operator()(catq_quench* q) const { catq_quench_destroy(q); }
};
struct WignerDeleter {
    void operator()(catq_wigner* w) const { catq_wigner_destroy(w); }
};
struct OrbitDeleter {
    void operator()(catq_orbit* o) const { catq_orbit_destroy(o); }
};

using QuenchPtr = std::unique_ptr<catq_quench, QuenchDeleter>;
using WignerPtr = std::unique_ptr<catq_wigner, WignerDeleter>;
using OrbitPtr = std::unique_ptr<catq_orbit, OrbitDeleter>;

catq_quench_spec quench_spec(const RunConfig& cfg, double lambda_fi, double delta, const std::vector<double>& times);
QuenchPtr make_quench(const catq_quench_spec& spec);
catq_quench_info info_of(const catq_quench* q);

struct Strength {
    std::vector<catq_strength_entry> entries;
    std::vector<double> peak_weights;
};
Strength strength_of(const catq_quench* q, double j);

std::vector<catq_observables_row> observe(const catq_quench* q, const std::vector<double>& times);

WignerPtr wigner_at(const catq_quench* q, double t, const catq_axis& qa, const catq_axis& pa);
catq_wigner_stats stats_of(const catq_wigner* w);

// Negativity on a square window centred on the origin that is enlarged until
// it covers the state.
double negativity_at(const catq_quench* q, double t, int points_per_axis);

OrbitPtr orbit(double lambda, double delta, double mu, double q0, double p0, double t_end, double dt, bool full_span);
catq_orbit_info info_of(const catq_orbit* o);

}  // namespace catq::cli
