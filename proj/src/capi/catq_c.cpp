#include "catq/catq.h"

#include "catq/error.hpp"
#include "catq/log.hpp"
#include "catq/phasespace.hpp"
#include "catq/quench.hpp"
#include "catq/semiclassics.hpp"
#include "catq/spectrum.hpp"
#include "catq/wig_io.hpp"

#include <omp.h>

#include <limits>
#include <new>
#include <string>

extern "C" void openblas_set_num_threads(int);

struct catq_quench {
    catq::Quench impl;
};

struct catq_wigner {
    catq::WignerGrid grid;
};

struct catq_orbit {
    catq::ClassicalOrbit orbit;
};

namespace {

thread_local std::string g_last_error;

struct LogTarget {
    catq_log_fn fn = nullptr;
    void* user = nullptr;
};
LogTarget g_log;

catq_status fail(catq_status s, const std::string& msg) {
    g_last_error = msg;
    return s;
}

catq_status status_of(catq::ErrorKind k) {
    switch (k) {
        case catq::ErrorKind::Config: return CATQ_ERR_CONFIG;
        case catq::ErrorKind::Numerical: return CATQ_ERR_NUMERICAL;
        case catq::ErrorKind::Convergence: return CATQ_ERR_CONVERGENCE;
        case catq::ErrorKind::Dimension: return CATQ_ERR_DIMENSION;
        case catq::ErrorKind::Extent: return CATQ_ERR_EXTENT;
        case catq::ErrorKind::Io: return CATQ_ERR_IO;
    }
    return CATQ_ERR_INTERNAL;
}

template <typename F>
catq_status guarded(F&& body) {
    try {
        g_last_error.clear();
        body();
        return CATQ_OK;
    } catch (const catq::Error& e) {
        return fail(status_of(e.kind()), e.what());
    } catch (const std::bad_alloc&) {
        return fail(CATQ_ERR_DIMENSION, "out of memory");
    } catch (const std::exception& e) {
        return fail(CATQ_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(CATQ_ERR_INTERNAL, "unknown failure");
    }
}

void require(const void* p, const char* what) {
    if (p == nullptr) {
        throw std::invalid_argument(std::string("null argument: ") + what);
    }
}

// Shared (buffer, capacity, count) protocol. Returns false when the caller only
// asked for the size.
bool reserve_output(const void* buffer, std::size_t capacity, std::size_t* count, std::size_t needed) {
    require(count, "count");
    *count = needed;
    if (buffer == nullptr) {
        return false;
    }
    if (capacity < needed) {
        throw catq::dimension_error("output buffer holds " + std::to_string(capacity) + " items, " +
                                    std::to_string(needed) + " needed");
    }
    return true;
}

catq::ModelParams to_params(const catq_model& m) {
    catq::ModelParams p;
    p.j = m.j;
    p.R = m.R;
    p.lambda = m.lambda;
    p.delta = m.delta;
    p.omega = m.omega;
    p.n_max = m.n_max;
    return p;
}

catq::Axis to_axis(const catq_axis& a) { return {a.lo, a.hi, a.n}; }
catq_axis from_axis(const catq::Axis& a) { return {a.lo, a.hi, a.n}; }

catq::ClassicalParams classical(double lambda, double delta, double mu) {
    catq::ClassicalParams cp;
    cp.lambda = lambda;
    cp.delta = delta;
    cp.mu = mu;
    return cp;
}

}  // namespace

extern "C" {

const char* catq_version(void) { return CATQ_VERSION_STRING; }

const char* catq_last_error(void) { return g_last_error.c_str(); }

const char* catq_status_name(catq_status status) {
    switch (status) {
        case CATQ_OK: return "ok";
        case CATQ_ERR_CONFIG: return "config";
        case CATQ_ERR_NUMERICAL: return "numerical";
        case CATQ_ERR_CONVERGENCE: return "convergence";
        case CATQ_ERR_DIMENSION: return "dimension";
        case CATQ_ERR_EXTENT: return "extent";
        case CATQ_ERR_IO: return "io";
        case CATQ_ERR_NULL: return "null";
        case CATQ_ERR_INTERNAL: return "internal";
    }
    return "unknown";
}

catq_status catq_set_threads(int n) {
    const int threads = n > 0 ? n : omp_get_num_procs();
    omp_set_num_threads(threads);
    openblas_set_num_threads(threads);
    return CATQ_OK;
}

void catq_set_log_callback(catq_log_fn fn, void* user) {
    g_log = {fn, user};
    if (fn == nullptr) {
        catq::set_log_sink(nullptr);
        return;
    }
    catq::set_log_sink([](const std::string& msg) {
        if (g_log.fn != nullptr) {
            g_log.fn(msg.c_str(), g_log.user);
        }
    });
}

catq_status catq_basis_dimension(const catq_model* model, size_t* dimension) {
    if (model == nullptr || dimension == nullptr) {
        return fail(CATQ_ERR_NULL, "catq_basis_dimension: null argument");
    }
    return guarded([&] { *dimension = catq::build_basis(to_params(*model)).dimension(); });
}

catq_status catq_spectrum(const catq_model* model, double* energies, int* parities, size_t capacity, size_t* count) {
    if (model == nullptr || count == nullptr) {
        return fail(CATQ_ERR_NULL, "catq_spectrum: null argument");
    }
    return guarded([&] {
        const catq::ModelParams p = to_params(*model);
        const std::size_t dim = catq::build_basis(p).dimension();
        if (!reserve_output(energies, capacity, count, dim)) {
            return;
        }
        const catq::EigenDecomposition d = catq::diagonalize(catq::build_hamiltonian(p));
        for (std::size_t k = 0; k < dim; ++k) {
            energies[k] = d.energies[static_cast<Eigen::Index>(k)];
            if (parities != nullptr) {
                parities[k] = d.parities[k];
            }
        }
    });
}

catq_status catq_effective_field(double q, double p, double lambda, double delta, double b[3], double* norm) {
    if (b == nullptr || norm == nullptr) {
        return fail(CATQ_ERR_NULL, "catq_effective_field: null argument");
    }
    return guarded([&] {
        const catq::EffectiveField f = catq::effective_field(q, p, lambda, delta);
        for (int i = 0; i < 3; ++i) {
            b[i] = f.b[i];
        }
        *norm = f.norm;
    });
}

catq_status catq_rabi_frequency(double q, double p, double lambda_fi, double delta, double* exact, double* expanded) {
    if (exact == nullptr || expanded == nullptr) {
        return fail(CATQ_ERR_NULL, "catq_rabi_frequency: null argument");
    }
    return guarded([&] {
        const catq::RabiFrequency r = catq::rabi_frequency(q, p, lambda_fi, delta);
        *exact = r.exact;
        *expanded = r.expanded;
    });
}

catq_status catq_quench_create(const catq_quench_spec* spec, catq_quench** out) {
    if (spec == nullptr || out == nullptr) {
        return fail(CATQ_ERR_NULL, "catq_quench_create: null argument");
    }
    *out = nullptr;
    return guarded([&] {
        catq::QuenchSpec s;
        s.j = spec->j;
        s.R = spec->R;
        s.lambda_in = spec->lambda_in;
        s.lambda_fi = spec->lambda_fi;
        s.delta = spec->delta;
        s.omega = spec->omega;
        s.n_max = spec->n_max;
        if (spec->prep != CATQ_PREP_DOUBLET && spec->prep != CATQ_PREP_COHERENT) {
            throw catq::config_error("unknown preparation method code " + std::to_string(spec->prep));
        }
        s.prep = spec->prep == CATQ_PREP_COHERENT ? catq::PrepMethod::CoherentProduct
                                                  : catq::PrepMethod::DoubletSuperposition;
        if (spec->n_times > 0) {
            require(spec->times, "times");
            s.times.assign(spec->times, spec->times + spec->n_times);
        }
        *out = new catq_quench{catq::Quench(std::move(s))};
    });
}

catq_status catq_quench_create_second(const catq_quench* previous, double t_switch, double lambda_next,
                                      catq_quench** out) {
    if (previous == nullptr || out == nullptr) {
        return fail(CATQ_ERR_NULL, "catq_quench_create_second: null argument");
    }
    *out = nullptr;
    return guarded([&] { *out = new catq_quench{catq::Quench::reseeded(previous->impl, t_switch, lambda_next)}; });
}

void catq_quench_destroy(catq_quench* q) { delete q; }

catq_status catq_quench_info_get(const catq_quench* q, catq_quench_info* info) {
    if (q == nullptr || info == nullptr) {
        return fail(CATQ_ERR_NULL, "catq_quench_info_get: null argument");
    }
    return guarded([&] {
        const auto& r = q->impl.truncation();
        info->n_max = r.n_max;
        info->adaptive = r.adaptive ? 1 : 0;
        info->rounds = r.rounds;
        info->doublet_shift = r.doublet_shift;
        info->top_occupation = r.top_occupation;
        info->dimension = q->impl.final_decomposition().basis.dimension();
        info->hbar_eff = q->impl.final_decomposition().hbar_eff;
        info->lambda_fi = q->impl.final_params().lambda;
        info->active_states = q->impl.active_count();
    });
}

catq_status catq_quench_strength(const catq_quench* q, catq_strength_entry* entries, size_t capacity, size_t* count,
                                 double* peak_weights, size_t peak_capacity) {
    if (q == nullptr || count == nullptr) {
        return fail(CATQ_ERR_NULL, "catq_quench_strength: null argument");
    }
    return guarded([&] {
        const catq::StrengthFunction sf = q->impl.strength();
        const bool fill = reserve_output(entries, capacity, count, sf.entries.size());
        if (peak_weights != nullptr) {
            if (peak_capacity < sf.peak_weights.size()) {
                throw catq::dimension_error("peak weight buffer too small");
            }
            for (std::size_t k = 0; k < sf.peak_weights.size(); ++k) {
                peak_weights[k] = sf.peak_weights[k];
            }
        }
        if (!fill) {
            return;
        }
        for (std::size_t i = 0; i < sf.entries.size(); ++i) {
            entries[i] = {sf.entries[i].energy, sf.entries[i].weight, sf.entries[i].assigned_two_m};
        }
    });
}

catq_status catq_quench_observables(const catq_quench* q, const double* times, size_t n, catq_observables_row* rows) {
    if (q == nullptr || (n > 0 && (times == nullptr || rows == nullptr))) {
        return fail(CATQ_ERR_NULL, "catq_quench_observables: null argument");
    }
    return guarded([&] {
        const catq::Observables o = q->impl.observe(std::span<const double>(times, n));
        for (std::size_t i = 0; i < n; ++i) {
            rows[i] = {o.t[i],        o.q[i],      o.p[i],    o.jx[i],     o.jy[i],    o.jz[i],
                       o.survival[i], o.purity[i], o.norm[i], o.energy[i], o.parity[i]};
        }
    });
}

catq_status catq_quench_state(const catq_quench* q, double t, double* amplitudes, size_t capacity, size_t* count) {
    if (q == nullptr || count == nullptr) {
        return fail(CATQ_ERR_NULL, "catq_quench_state: null argument");
    }
    return guarded([&] {
        const std::size_t dim = q->impl.final_decomposition().basis.dimension();
        if (!reserve_output(amplitudes, capacity, count, 2 * dim)) {
            return;
        }
        const catq::QuantumState psi = q->impl.state_at(t);
        for (std::size_t i = 0; i < dim; ++i) {
            amplitudes[2 * i] = psi.amplitudes[static_cast<Eigen::Index>(i)].real();
            amplitudes[2 * i + 1] = psi.amplitudes[static_cast<Eigen::Index>(i)].imag();
        }
    });
}

catq_status catq_quench_local_survival(const catq_quench* q, double tau, const double* t, size_t n, double* out) {
    if (q == nullptr || (n > 0 && (t == nullptr || out == nullptr))) {
        return fail(CATQ_ERR_NULL, "catq_quench_local_survival: null argument");
    }
    return guarded([&] {
        const auto& impl = q->impl;
        for (std::size_t i = 0; i < n; ++i) {
            out[i] = catq::local_survival(impl.initial_state(), impl.final_decomposition(), tau, t[i]);
        }
    });
}

catq_status catq_quench_wigner(const catq_quench* q, double t, const catq_axis* q_axis, const catq_axis* p_axis,
                               int method, catq_wigner** out) {
    if (q == nullptr || q_axis == nullptr || p_axis == nullptr || out == nullptr) {
        return fail(CATQ_ERR_NULL, "catq_quench_wigner: null argument");
    }
    *out = nullptr;
    return guarded([&] {
        if (method != CATQ_WIGNER_POSITION && method != CATQ_WIGNER_LAGUERRE) {
            throw catq::config_error("unknown Wigner method code " + std::to_string(method));
        }
        const auto m = method == CATQ_WIGNER_LAGUERRE ? catq::WignerMethod::Laguerre : catq::WignerMethod::Position;
        const catq::QuantumState psi = q->impl.state_at(t);
        *out = new catq_wigner{catq::wigner(psi, q->impl.final_params(), to_axis(*q_axis), to_axis(*p_axis), m)};
    });
}

void catq_wigner_destroy(catq_wigner* w) { delete w; }

catq_status catq_wigner_shape(const catq_wigner* w, catq_axis* q_axis, catq_axis* p_axis) {
    if (w == nullptr || q_axis == nullptr || p_axis == nullptr) {
        return fail(CATQ_ERR_NULL, "catq_wigner_shape: null argument");
    }
    *q_axis = from_axis(w->grid.q_axis);
    *p_axis = from_axis(w->grid.p_axis);
    return CATQ_OK;
}

catq_status catq_wigner_values(const catq_wigner* w, double* values, size_t capacity, size_t* count) {
    if (w == nullptr || count == nullptr) {
        return fail(CATQ_ERR_NULL, "catq_wigner_values: null argument");
    }
    return guarded([&] {
        const auto& g = w->grid;
        if (!reserve_output(values, capacity, count, static_cast<std::size_t>(g.values.size()))) {
            return;
        }
        std::size_t idx = 0;
        for (int i = 0; i < g.q_axis.n; ++i) {
            for (int k = 0; k < g.p_axis.n; ++k) {
                values[idx++] = g.values(i, k);
            }
        }
    });
}

catq_status catq_wigner_stats_get(const catq_wigner* w, catq_wigner_stats* stats) {
    if (w == nullptr || stats == nullptr) {
        return fail(CATQ_ERR_NULL, "catq_wigner_stats_get: null argument");
    }
    return guarded([&] {
        stats->integral = w->grid.integral();
        stats->norm_residual = w->grid.norm_residual;
        stats->phase_space_purity = w->grid.jr > 0.0 ? catq::phase_space_purity(w->grid) : 0.0;
        stats->negativity = std::numeric_limits<double>::quiet_NaN();
        stats->negativity = catq::negativity(w->grid);
    });
}

catq_status catq_wigner_marginals(const catq_wigner* w, double* q_out, double* p_out) {
    if (w == nullptr || q_out == nullptr || p_out == nullptr) {
        return fail(CATQ_ERR_NULL, "catq_wigner_marginals: null argument");
    }
    return guarded([&] {
        const catq::Marginals m = catq::marginals(w->grid);
        std::copy(m.q.begin(), m.q.end(), q_out);
        std::copy(m.p.begin(), m.p.end(), p_out);
    });
}

catq_status catq_wig_write(const catq_wigner* w, const char* path) {
    if (w == nullptr || path == nullptr) {
        return fail(CATQ_ERR_NULL, "catq_wig_write: null argument");
    }
    return guarded([&] { catq::write_wig(path, w->grid); });
}

catq_status catq_wig_write_csv(const catq_wigner* w, const char* path) {
    if (w == nullptr || path == nullptr) {
        return fail(CATQ_ERR_NULL, "catq_wig_write_csv: null argument");
    }
    return guarded([&] { catq::write_wig_csv(path, w->grid); });
}

catq_status catq_wig_read(const char* path, catq_wigner** out) {
    if (path == nullptr || out == nullptr) {
        return fail(CATQ_ERR_NULL, "catq_wig_read: null argument");
    }
    *out = nullptr;
    return guarded([&] { *out = new catq_wigner{catq::read_wig(path)}; });
}

catq_status catq_sc_h(double p, double q, double lambda, double delta, double mu, double* out) {
    if (out == nullptr) {
        return fail(CATQ_ERR_NULL, "catq_sc_h: null argument");
    }
    return guarded([&] {
        const auto cp = classical(lambda, delta, mu);
        cp.validate();
        *out = catq::h_classical(p, q, cp);
    });
}

catq_status catq_sc_minimum(double lambda, double* q, double* p, double* e) {
    if (q == nullptr || p == nullptr || e == nullptr) {
        return fail(CATQ_ERR_NULL, "catq_sc_minimum: null argument");
    }
    return guarded([&] {
        const catq::Minimum m = catq::minimum(lambda);
        *q = m.q;
        *p = m.p;
        *e = m.e;
    });
}

catq_status catq_sc_after_quench_energy(double lambda_in, double lambda_fi, double* out) {
    if (out == nullptr) {
        return fail(CATQ_ERR_NULL, "catq_sc_after_quench_energy: null argument");
    }
    return guarded([&] { *out = catq::after_quench_energy(lambda_in, lambda_fi); });
}

catq_status catq_sc_mixing_angle(double lambda_in, double lambda_fi, double* cos_theta) {
    if (cos_theta == nullptr) {
        return fail(CATQ_ERR_NULL, "catq_sc_mixing_angle: null argument");
    }
    return guarded([&] { *cos_theta = catq::mixing_angle(lambda_in, lambda_fi); });
}

catq_status catq_sc_amplitudes(double j, double cos_theta, double* out, size_t capacity, size_t* count) {
    if (count == nullptr) {
        return fail(CATQ_ERR_NULL, "catq_sc_amplitudes: null argument");
    }
    return guarded([&] {
        const std::vector<double> a = catq::amplitudes(j, cos_theta);
        if (reserve_output(out, capacity, count, a.size())) {
            std::copy(a.begin(), a.end(), out);
        }
    });
}

catq_status catq_sc_balanced(double lambda_in, double* lambda_fi) {
    if (lambda_fi == nullptr) {
        return fail(CATQ_ERR_NULL, "catq_sc_balanced: null argument");
    }
    return guarded([&] { *lambda_fi = catq::balanced_quench(lambda_in); });
}

catq_status catq_sc_critical(double lambda_in, double* lambda_c) {
    if (lambda_c == nullptr) {
        return fail(CATQ_ERR_NULL, "catq_sc_critical: null argument");
    }
    return guarded([&] { *lambda_c = catq::critical_quench(lambda_in); });
}

catq_status catq_sc_has_saddle(double lambda, double delta, int* out) {
    if (out == nullptr) {
        return fail(CATQ_ERR_NULL, "catq_sc_has_saddle: null argument");
    }
    *out = catq::has_saddle(lambda, delta) ? 1 : 0;
    return CATQ_OK;
}

catq_status catq_sc_branch_energies(double lambda_in, double lambda_fi, double j, double* out, size_t capacity,
                                    size_t* count) {
    if (count == nullptr) {
        return fail(CATQ_ERR_NULL, "catq_sc_branch_energies: null argument");
    }
    return guarded([&] {
        const std::vector<double> e = catq::branch_energies(lambda_in, lambda_fi, j);
        if (reserve_output(out, capacity, count, e.size())) {
            std::copy(e.begin(), e.end(), out);
        }
    });
}

catq_status catq_sc_weak_frequency(double lambda, double delta, double mu, double* exact, double* expanded) {
    if (exact == nullptr || expanded == nullptr) {
        return fail(CATQ_ERR_NULL, "catq_sc_weak_frequency: null argument");
    }
    return guarded([&] {
        const catq::WeakCouplingFrequency w = catq::weak_coupling_frequency(classical(lambda, delta, mu));
        *exact = w.exact;
        *expanded = w.expanded;
    });
}

catq_status catq_sc_period_quadrature(double lambda, double delta, double mu, double energy, double q_turning,
                                      double* period, int* divergent) {
    if (period == nullptr || divergent == nullptr) {
        return fail(CATQ_ERR_NULL, "catq_sc_period_quadrature: null argument");
    }
    return guarded([&] {
        const catq::QuadraturePeriod r = catq::orbit_period_quadrature(classical(lambda, delta, mu), energy, q_turning);
        *period = r.period;
        *divergent = r.divergent ? 1 : 0;
    });
}

catq_status catq_orbit_integrate(const catq_orbit_request* request, catq_orbit** out) {
    if (request == nullptr || out == nullptr) {
        return fail(CATQ_ERR_NULL, "catq_orbit_integrate: null argument");
    }
    *out = nullptr;
    return guarded([&] {
        const double dt = request->sample_dt > 0.0 ? request->sample_dt : 0.05;
        *out = new catq_orbit{catq::integrate_orbit(classical(request->lambda, request->delta, request->mu),
                                                    request->q0, request->p0, request->t_end, dt,
                                                    request->full_span != 0)};
    });
}

void catq_orbit_destroy(catq_orbit* o) { delete o; }

catq_status catq_orbit_info_get(const catq_orbit* o, catq_orbit_info* info) {
    if (o == nullptr || info == nullptr) {
        return fail(CATQ_ERR_NULL, "catq_orbit_info_get: null argument");
    }
    const auto& r = o->orbit;
    *info = {r.period, r.divergent ? 1 : 0, r.stationary ? 1 : 0, r.energy, r.mu, r.max_energy_drift, r.t.size()};
    return CATQ_OK;
}

catq_status catq_orbit_samples(const catq_orbit* o, double* t, double* q, double* p, size_t capacity) {
    if (o == nullptr) {
        return fail(CATQ_ERR_NULL, "catq_orbit_samples: null argument");
    }
    const auto& r = o->orbit;
    if (capacity < r.t.size()) {
        return fail(CATQ_ERR_DIMENSION, "catq_orbit_samples: buffer too small");
    }
    if (t != nullptr) {
        std::copy(r.t.begin(), r.t.end(), t);
    }
    if (q != nullptr) {
        std::copy(r.q.begin(), r.q.end(), q);
    }
    if (p != nullptr) {
        std::copy(r.p.begin(), r.p.end(), p);
    }
    return CATQ_OK;
}

}  // extern "C"
