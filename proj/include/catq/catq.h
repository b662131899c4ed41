/*
 * catq: spin-oscillator quench dynamics, phase-space diagnostics and
 * semiclassical companions.
 *
 * Conventions shared by every entry point:
 *  - energies are in units eps = 2 j R omega; times are in units 1/omega;
 *  - the product basis is n-major: index = n * (2j + 1) + (m_z + j);
 *  - functions return a catq_status; on failure catq_last_error() holds a
 *    message for the calling thread;
 *  - array outputs take (buffer, capacity, count). Passing a NULL buffer
 *    stores the required length in *count and returns CATQ_OK; a buffer that
 *    is too small yields CATQ_ERR_DIMENSION with *count set.
 */
#ifndef CATQ_CATQ_H
#define CATQ_CATQ_H

#include <stddef.h>

#if defined(CATQ_BUILDING_LIBRARY)
#define CATQ_API __attribute__((visibility("default")))
#else
#define CATQ_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum catq_status {
    CATQ_OK = 0,
    CATQ_ERR_CONFIG = 1,
    CATQ_ERR_NUMERICAL = 2,
    CATQ_ERR_CONVERGENCE = 3,
    CATQ_ERR_DIMENSION = 4,
    CATQ_ERR_EXTENT = 5,
    CATQ_ERR_IO = 6,
    CATQ_ERR_NULL = 7,
    CATQ_ERR_INTERNAL = 8
} catq_status;

typedef enum catq_prep { CATQ_PREP_DOUBLET = 0, CATQ_PREP_COHERENT = 1 } catq_prep;

typedef enum catq_wigner_method { CATQ_WIGNER_POSITION = 0, CATQ_WIGNER_LAGUERRE = 1 } catq_wigner_method;

typedef struct catq_model {
    double j;
    double R;
    double lambda;
    double delta;
    double omega;
    int n_max;
} catq_model;

typedef struct catq_quench_spec {
    double j;
    double R;
    double lambda_in;
    double lambda_fi;
    double delta;
    double omega;
    int n_max; /* 0 = adaptive */
    int prep;  /* catq_prep */
    const double* times; /* optional; strictly increasing from 0 */
    size_t n_times;
} catq_quench_spec;

typedef struct catq_quench_info {
    int n_max;
    int adaptive;
    int rounds;
    double doublet_shift;
    double top_occupation;
    size_t dimension;
    double hbar_eff;
    double lambda_fi;
    size_t active_states;
} catq_quench_info;

typedef struct catq_strength_entry {
    double energy;
    double weight;
    int two_m; /* 2m of the assigned branch */
} catq_strength_entry;

typedef struct catq_observables_row {
    double t, q, p, jx, jy, jz, survival, purity, norm, energy, parity;
} catq_observables_row;

typedef struct catq_axis {
    double lo;
    double hi;
    int n;
} catq_axis;

typedef struct catq_wigner_stats {
    double integral;
    double norm_residual;
    double negativity;
    double phase_space_purity;
} catq_wigner_stats;

typedef struct catq_orbit_request {
    double lambda;
    double delta;
    double mu;
    double q0;
    double p0;
    double t_end;
    double sample_dt; /* <= 0 selects 0.05 */
    int full_span;    /* 0: stop after the first return to the section */
} catq_orbit_request;

typedef struct catq_orbit_info {
    double period;
    int divergent;
    int stationary;
    double energy;
    double mu;
    double max_energy_drift;
    size_t samples;
} catq_orbit_info;

typedef struct catq_quench catq_quench;
typedef struct catq_wigner catq_wigner;
typedef struct catq_orbit catq_orbit;

typedef void (*catq_log_fn)(const char* message, void* user);

/* ---- library ---- */
CATQ_API const char* catq_version(void);
CATQ_API const char* catq_last_error(void);
CATQ_API const char* catq_status_name(catq_status status);
/* Caps OpenMP and BLAS threads; n <= 0 restores the runtime default. */
CATQ_API catq_status catq_set_threads(int n);
/* Warnings go to stderr unless a callback is installed; NULL restores stderr. */
CATQ_API void catq_set_log_callback(catq_log_fn fn, void* user);

/* ---- model and spectrum ---- */
CATQ_API catq_status catq_basis_dimension(const catq_model* model, size_t* dimension);
/* Ascending eigenvalues of h and the parity label of each eigenvector. */
CATQ_API catq_status catq_spectrum(const catq_model* model, double* energies, int* parities, size_t capacity,
                                   size_t* count);
CATQ_API catq_status catq_effective_field(double q, double p, double lambda, double delta, double b[3], double* norm);
CATQ_API catq_status catq_rabi_frequency(double q, double p, double lambda_fi, double delta, double* exact,
                                         double* expanded);

/* ---- quench ---- */
CATQ_API catq_status catq_quench_create(const catq_quench_spec* spec, catq_quench** out);
/* psi(t_switch) of `previous` continues under h(lambda_next) in the same basis. */
CATQ_API catq_status catq_quench_create_second(const catq_quench* previous, double t_switch, double lambda_next,
                                               catq_quench** out);
CATQ_API void catq_quench_destroy(catq_quench* q);
CATQ_API catq_status catq_quench_info_get(const catq_quench* q, catq_quench_info* info);
/* Strength function sorted by energy; peak_weights has 2j+1 slots (k = m + j). */
CATQ_API catq_status catq_quench_strength(const catq_quench* q, catq_strength_entry* entries, size_t capacity,
                                          size_t* count, double* peak_weights, size_t peak_capacity);
CATQ_API catq_status catq_quench_observables(const catq_quench* q, const double* times, size_t n,
                                             catq_observables_row* rows);
/* Interleaved (re, im) amplitudes of psi(t); 2 * dimension doubles. */
CATQ_API catq_status catq_quench_state(const catq_quench* q, double t, double* amplitudes, size_t capacity,
                                       size_t* count);
/* |<psi(tau)|psi(tau + t_i)>|^2 */
CATQ_API catq_status catq_quench_local_survival(const catq_quench* q, double tau, const double* t, size_t n,
                                                double* out);
CATQ_API catq_status catq_quench_wigner(const catq_quench* q, double t, const catq_axis* q_axis,
                                        const catq_axis* p_axis, int method, catq_wigner** out);

/* ---- Wigner grids ---- */
CATQ_API void catq_wigner_destroy(catq_wigner* w);
CATQ_API catq_status catq_wigner_shape(const catq_wigner* w, catq_axis* q_axis, catq_axis* p_axis);
/* Row-major values, q outer. */
CATQ_API catq_status catq_wigner_values(const catq_wigner* w, double* values, size_t capacity, size_t* count);
/* When the window misses more than 1e-4 of the probability this returns
 * CATQ_ERR_EXTENT with negativity = NaN; the other fields stay valid. */
CATQ_API catq_status catq_wigner_stats_get(const catq_wigner* w, catq_wigner_stats* stats);
/* q_out has q_axis.n slots, p_out has p_axis.n slots. */
CATQ_API catq_status catq_wigner_marginals(const catq_wigner* w, double* q_out, double* p_out);
CATQ_API catq_status catq_wig_write(const catq_wigner* w, const char* path);
CATQ_API catq_status catq_wig_write_csv(const catq_wigner* w, const char* path);
CATQ_API catq_status catq_wig_read(const char* path, catq_wigner** out);

/* ---- semiclassics ---- */
CATQ_API catq_status catq_sc_h(double p, double q, double lambda, double delta, double mu, double* out);
CATQ_API catq_status catq_sc_minimum(double lambda, double* q, double* p, double* e);
CATQ_API catq_status catq_sc_after_quench_energy(double lambda_in, double lambda_fi, double* out);
CATQ_API catq_status catq_sc_mixing_angle(double lambda_in, double lambda_fi, double* cos_theta);
/* 2j+1 amplitudes d^j_{m,-j}(theta), k = m + j. */
CATQ_API catq_status catq_sc_amplitudes(double j, double cos_theta, double* out, size_t capacity, size_t* count);
CATQ_API catq_status catq_sc_balanced(double lambda_in, double* lambda_fi);
CATQ_API catq_status catq_sc_critical(double lambda_in, double* lambda_c);
CATQ_API catq_status catq_sc_has_saddle(double lambda, double delta, int* out);
CATQ_API catq_status catq_sc_branch_energies(double lambda_in, double lambda_fi, double j, double* out,
                                             size_t capacity, size_t* count);
CATQ_API catq_status catq_sc_weak_frequency(double lambda, double delta, double mu, double* exact, double* expanded);
CATQ_API catq_status catq_sc_period_quadrature(double lambda, double delta, double mu, double energy,
                                               double q_turning, double* period, int* divergent);

CATQ_API catq_status catq_orbit_integrate(const catq_orbit_request* request, catq_orbit** out);
CATQ_API void catq_orbit_destroy(catq_orbit* o);
CATQ_API catq_status catq_orbit_info_get(const catq_orbit* o, catq_orbit_info* info);
/* Each buffer holds info.samples doubles; any of them may be NULL. */
CATQ_API catq_status catq_orbit_samples(const catq_orbit* o, double* t, double* q, double* p, size_t capacity);

#ifdef __cplusplus
}
#endif

#endif
