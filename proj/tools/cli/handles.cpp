#include "handles.hpp"

#include <cmath>

namespace catq::cli {

void check(catq_status s, const char* call) {
    if (s == CATQ_OK) {
        return;
    }
    int code = kExitNumerical;
    switch (s) {
        case CATQ_ERR_CONFIG:
        case CATQ_ERR_EXTENT: code = kExitConfig; break;
        case CATQ_ERR_CONVERGENCE:
        case CATQ_ERR_DIMENSION: code = kExitConvergence; break;
        default: break;
    }
    throw CliError(code, std::string(call) + " failed (" + catq_status_name(s) + "): " + catq_last_error());
}

catq_quench_spec quench_spec(const RunConfig& cfg, double lambda_fi, double delta, const std::vector<double>& times) {
    catq_quench_spec s{};
    s.j = cfg.j;
    s.R = cfg.R;
    s.lambda_in = cfg.lambda_in;
    s.lambda_fi = lambda_fi;
    s.delta = delta;
    s.omega = cfg.omega;
    s.n_max = cfg.n_max;
    s.prep = (cfg.prep == "coherent_product" || cfg.prep == "coherent") ? CATQ_PREP_COHERENT : CATQ_PREP_DOUBLET;
    s.times = times.empty() ? nullptr : times.data();
    s.n_times = times.size();
    return s;
}

QuenchPtr make_quench(const catq_quench_spec& spec) {
    catq_quench* q = nullptr;
    check(catq_quench_create(&spec, &q), "catq_quench_create");
    return QuenchPtr(q);
}

catq_quench_info info_of(const catq_quench* q) {
    catq_quench_info info{};
    check(catq_quench_info_get(q, &info), "catq_quench_info_get");
    return info;
}

Strength strength_of(const catq_quench* q, double j) {
    Strength s;
    std::size_t count = 0;
    check(catq_quench_strength(q, nullptr, 0, &count, nullptr, 0), "catq_quench_strength");
    s.entries.resize(count);
    s.peak_weights.resize(static_cast<std::size_t>(std::lround(2.0 * j)) + 1);
    check(catq_quench_strength(q, s.entries.data(), s.entries.size(), &count, s.peak_weights.data(),
                               s.peak_weights.size()),
          "catq_quench_strength");
    return s;
}

std::vector<catq_observables_row> observe(const catq_quench* q, const std::vector<double>& times) {
    std::vector<catq_observables_row> rows(times.size());
    check(catq_quench_observables(q, times.data(), times.size(), rows.data()), "catq_quench_observables");
    return rows;
}

WignerPtr wigner_at(const catq_quench* q, double t, const catq_axis& qa, const catq_axis& pa) {
    catq_wigner* w = nullptr;
    check(catq_quench_wigner(q, t, &qa, &pa, CATQ_WIGNER_POSITION, &w), "catq_quench_wigner");
    return WignerPtr(w);
}

catq_wigner_stats stats_of(const catq_wigner* w) {
    catq_wigner_stats st{};
    check(catq_wigner_stats_get(w, &st), "catq_wigner_stats_get");
    return st;
}

double negativity_at(const catq_quench* q, double t, int points_per_axis) {
    const double base = 1.5;
    for (double half = base;; half += 0.5) {
        int n = static_cast<int>(std::ceil(points_per_axis * half / base));
        n += (n % 2 == 0) ? 1 : 0;
        const catq_axis axis{-half, half, n};
        const WignerPtr w = wigner_at(q, t, axis, axis);
        catq_wigner_stats st{};
        const catq_status s = catq_wigner_stats_get(w.get(), &st);
        if (s == CATQ_OK) {
            return st.negativity;
        }
        if (s != CATQ_ERR_EXTENT || half >= 8.0) {
            check(s, "catq_wigner_stats_get");
        }
    }
}

OrbitPtr orbit(double lambda, double delta, double mu, double q0, double p0, double t_end, double dt, bool full_span) {
    const catq_orbit_request req{lambda, delta, mu, q0, p0, t_end, dt, full_span ? 1 : 0};
    catq_orbit* o = nullptr;
    check(catq_orbit_integrate(&req, &o), "catq_orbit_integrate");
    return OrbitPtr(o);
}

catq_orbit_info info_of(const catq_orbit* o) {
    catq_orbit_info info{};
    check(catq_orbit_info_get(o, &info), "catq_orbit_info_get");
    return info;
}

}  // namespace catq::cli
