#include "commands.hpp"

#include "handles.hpp"
#include "pool.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <thread>

namespace catq::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

fs::path prepare_dir(const RunConfig& cfg) {
    const fs::path dir(cfg.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw CliError(kExitNumerical, "cannot create output directory '" + cfg.out_dir + "': " + ec.message());
    }
    return dir;
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw CliError(kExitNumerical, "cannot open '" + path.string() + "' for writing");
    }
    out.precision(std::numeric_limits<double>::max_digits10);
    return out;
}

void write_json(const fs::path& path, const json& j) {
    auto out = open_out(path);
    out << j.dump(2) << '\n';
}

// NaN and infinities are not valid JSON numbers.
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

unsigned worker_count(const RunConfig& cfg) {
    if (cfg.threads > 0) {
        return static_cast<unsigned>(cfg.threads);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

// Several workers share the cores, so each one runs its linear algebra
// single-threaded.
void configure_threads(const RunConfig& cfg, unsigned workers) {
    check(catq_set_threads(workers > 1 ? 1 : cfg.threads), "catq_set_threads");
}

json manifest(const RunConfig& cfg, const std::string& command, const std::string& command_line) {
    return {
        {"command", command},
        {"command_line", command_line},
        {"catq_version", catq_version()},
        {"config", cfg.to_json()},
        {"conventions",
         {{"basis_ordering", "n-major: index = n * (2j + 1) + (m_z + j)"},
          {"energy_unit", "2 j R omega"},
          {"energy_zero", "|n = 0, m_z = -j> has energy 0"},
          {"time_unit", "1 / omega"},
          {"phase_space", "q, p rescaled by sqrt(2 j R); W normalised to 1 over (q, p)"}}},
    };
}

json truncation_json(const catq_quench_info& info) {
    return {{"n_max", info.n_max},
            {"adaptive", info.adaptive != 0},
            {"rounds", info.rounds},
            {"doublet_shift", info.doublet_shift},
            {"top_occupation", info.top_occupation},
            {"dimension", info.dimension},
            {"active_states", info.active_states}};
}

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        v[static_cast<std::size_t>(i)] = n == 1 ? a : a + (b - a) * i / (n - 1);
    }
    return v;
}

std::vector<double> amplitudes_squared(double j, double lambda_in, double lambda_fi) {
    double cos_theta = 0.0;
    check(catq_sc_mixing_angle(lambda_in, lambda_fi, &cos_theta), "catq_sc_mixing_angle");
    std::size_t count = 0;
    check(catq_sc_amplitudes(j, cos_theta, nullptr, 0, &count), "catq_sc_amplitudes");
    std::vector<double> a(count);
    check(catq_sc_amplitudes(j, cos_theta, a.data(), a.size(), &count), "catq_sc_amplitudes");
    for (double& x : a) {
        x *= x;
    }
    return a;
}

std::string m_label(int two_m) {
    if (two_m % 2 == 0) {
        return std::to_string(two_m / 2);
    }
    return std::to_string(two_m) + "/2";
}

bool negativity_due(const RunConfig& cfg, std::size_t i) {
    return cfg.negativity_every > 0 && i % static_cast<std::size_t>(cfg.negativity_every) == 0;
}

// Negativity at the sampled rows, NaN elsewhere.
std::vector<double> negativity_series(const RunConfig& cfg, const catq_quench* q,
                                      const std::vector<catq_observables_row>& rows, unsigned workers) {
    std::vector<double> nu(rows.size(), kNaN);
    std::vector<std::size_t> due;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (negativity_due(cfg, i)) {
            due.push_back(i);
        }
    }
    parallel_for(due.size(), workers,
                 [&](std::size_t k) { nu[due[k]] = negativity_at(q, rows[due[k]].t, cfg.grid.nq); });
    return nu;
}

void write_row(std::ostream& out, const catq_observables_row& r, double t, double nu) {
    out << t << ',' << r.q << ',' << r.p << ',' << r.jx << ',' << r.jy << ',' << r.jz << ',' << r.survival << ','
        << r.purity << ',' << nu << '\n';
}

struct Residuals {
    double norm = 0.0, energy = 0.0, parity = 0.0;
};

Residuals conservation(const std::vector<catq_observables_row>& rows) {
    Residuals r;
    if (rows.empty()) {
        return r;
    }
    for (const auto& row : rows) {
        r.norm = std::max(r.norm, std::abs(row.norm - 1.0));
        r.energy = std::max(r.energy, std::abs(row.energy - rows.front().energy));
        r.parity = std::max(r.parity, std::abs(row.parity - rows.front().parity));
    }
    return r;
}

json residuals_json(const Residuals& r) {
    return {{"norm_max_abs", r.norm}, {"energy_max_drift", r.energy}, {"parity_max_drift", r.parity}};
}

// Mean spacing of upward crossings of x - mean(x), linearly interpolated.
double crossing_period(const std::vector<double>& t, const std::vector<double>& x) {
    if (x.size() < 3) {
        return kNaN;
    }
    double mean = 0.0;
    for (double v : x) {
        mean += v;
    }
    mean /= static_cast<double>(x.size());
    std::vector<double> ups;
    for (std::size_t i = 1; i < x.size(); ++i) {
        const double a = x[i - 1] - mean;
        const double b = x[i] - mean;
        if (a < 0.0 && b >= 0.0) {
            ups.push_back(t[i - 1] + (t[i] - t[i - 1]) * (-a) / (b - a));
        }
    }
    if (ups.size() < 2) {
        return kNaN;
    }
    return (ups.back() - ups.front()) / static_cast<double>(ups.size() - 1);
}

// Classical starting point: the initial packet sits at the lambda_in minimum.
std::pair<double, double> classical_start(double lambda_in) {
    double q = 0.0, p = 0.0, e = 0.0;
    check(catq_sc_minimum(lambda_in, &q, &p, &e), "catq_sc_minimum");
    return {q, p};
}

struct OrbitSamples {
    std::vector<double> t, q, p;
};

OrbitSamples samples_of(const catq_orbit* o) {
    const auto info = info_of(o);
    OrbitSamples s;
    s.t.resize(info.samples);
    s.q.resize(info.samples);
    s.p.resize(info.samples);
    check(catq_orbit_samples(o, s.t.data(), s.q.data(), s.p.data(), info.samples), "catq_orbit_samples");
    return s;
}

std::pair<double, double> interpolate(const OrbitSamples& s, double t) {
    if (s.t.empty()) {
        return {kNaN, kNaN};
    }
    const auto it = std::lower_bound(s.t.begin(), s.t.end(), t);
    if (it == s.t.begin()) {
        return {s.q.front(), s.p.front()};
    }
    if (it == s.t.end()) {
        return {s.q.back(), s.p.back()};
    }
    const auto i = static_cast<std::size_t>(it - s.t.begin());
    const double w = (t - s.t[i - 1]) / (s.t[i] - s.t[i - 1]);
    return {s.q[i - 1] + w * (s.q[i] - s.q[i - 1]), s.p[i - 1] + w * (s.p[i] - s.p[i - 1])};
}

}  // namespace

int cmd_spectrum(const RunConfig& cfg, const std::string& command_line) {
    const fs::path dir = prepare_dir(cfg);
    const unsigned workers = worker_count(cfg);

    check(catq_set_threads(cfg.threads), "catq_set_threads");
    const QuenchPtr quench = make_quench(quench_spec(cfg, cfg.lambda_fi, cfg.delta, {}));
    const auto info = info_of(quench.get());
    const auto strength = strength_of(quench.get(), cfg.j);
    const double e_fi = observe(quench.get(), {0.0}).front().energy;

    const auto lambdas = linspace(cfg.lambda_min, cfg.lambda_max, cfg.lambda_steps);
    std::vector<std::vector<double>> energies(lambdas.size());
    std::vector<std::vector<int>> parities(lambdas.size());
    configure_threads(cfg, workers);
    parallel_for(lambdas.size(), workers, [&](std::size_t i) {
        const catq_model model{cfg.j, cfg.R, lambdas[i], cfg.delta, cfg.omega, info.n_max};
        std::size_t count = 0;
        check(catq_spectrum(&model, nullptr, nullptr, 0, &count), "catq_spectrum");
        energies[i].resize(count);
        parities[i].resize(count);
        check(catq_spectrum(&model, energies[i].data(), parities[i].data(), count, &count), "catq_spectrum");
    });

    {
        auto out = open_out(dir / "spectrum.csv");
        out << "lambda,k,energy,parity\n";
        for (std::size_t i = 0; i < lambdas.size(); ++i) {
            for (std::size_t k = 0; k < energies[i].size(); ++k) {
                out << lambdas[i] << ',' << k << ',' << energies[i][k] << ',' << parities[i][k] << '\n';
            }
        }
    }

    double total = 0.0, mean = 0.0;
    {
        auto out = open_out(dir / "strength.csv");
        out << "e_k,weight,assigned_m\n";
        for (const auto& e : strength.entries) {
            out << e.energy << ',' << e.weight << ','
                << (e.two_m == std::numeric_limits<int>::min() ? std::string("none") : m_label(e.two_m)) << '\n';
            total += e.weight;
            mean += e.weight * e.energy;
        }
    }

    const auto alpha2 = amplitudes_squared(cfg.j, cfg.lambda_in, cfg.lambda_fi);
    json peaks = json::array();
    const int two_j = static_cast<int>(std::lround(2.0 * cfg.j));
    for (int k = 0; k <= two_j; ++k) {
        peaks.push_back({{"m", m_label(2 * k - two_j)},
                         {"peak_weight", strength.peak_weights[static_cast<std::size_t>(k)]},
                         {"alpha2", alpha2[static_cast<std::size_t>(k)]}});
    }

    json m = manifest(cfg, "spectrum", command_line);
    m["truncation"] = truncation_json(info);
    m["levels_per_lambda"] = energies.empty() ? 0 : energies.front().size();
    m["strength"] = {{"entries", strength.entries.size()},
                     {"parseval_residual", std::abs(total - 1.0)},
                     {"mean_energy", e_fi},
                     {"mean_energy_residual", std::abs(mean - e_fi)},
                     {"peaks", peaks}};
    m["files"] = {"spectrum.csv", "strength.csv"};
    write_json(dir / "spectrum.json", m);
    return kExitOk;
}

int cmd_quench(const RunConfig& cfg, const std::string& command_line) {
    const fs::path dir = prepare_dir(cfg);
    const unsigned workers = worker_count(cfg);
    const auto times = parse_times(cfg.times);

    check(catq_set_threads(cfg.threads), "catq_set_threads");
    const QuenchPtr quench = make_quench(quench_spec(cfg, cfg.lambda_fi, cfg.delta, times));
    const auto info = info_of(quench.get());
    const auto rows = observe(quench.get(), times);
    configure_threads(cfg, workers);
    const auto nu = negativity_series(cfg, quench.get(), rows, workers);

    {
        auto out = open_out(dir / "timeseries.csv");
        out << "t,q_mean,p_mean,Jx,Jy,Jz,survival,purity,negativity\n";
        for (std::size_t i = 0; i < rows.size(); ++i) {
            write_row(out, rows[i], rows[i].t, nu[i]);
        }
    }

    json m = manifest(cfg, "quench", command_line);
    m["truncation"] = truncation_json(info);
    m["conservation"] = residuals_json(conservation(rows));
    m["energy"] = rows.front().energy;
    m["parity"] = rows.front().parity;
    m["samples"] = rows.size();
    m["negativity_grid_points"] = cfg.grid.nq;
    m["files"] = {"timeseries.csv"};
    write_json(dir / "quench.json", m);
    return kExitOk;
}

int cmd_wigner(const RunConfig& cfg, const std::string& command_line) {
    const fs::path dir = prepare_dir(cfg);
    const unsigned workers = worker_count(cfg);
    const auto frames = parse_times(cfg.frames);

    std::vector<double> grid = frames;
    grid.push_back(0.0);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    check(catq_set_threads(cfg.threads), "catq_set_threads");
    const QuenchPtr quench = make_quench(quench_spec(cfg, cfg.lambda_fi, cfg.delta, grid));
    const auto info = info_of(quench.get());
    const catq_axis qa{-cfg.extent_q, cfg.extent_q, cfg.grid.nq};
    const catq_axis pa{-cfg.extent_p, cfg.extent_p, cfg.grid.np};
    const json base = manifest(cfg, "wigner", command_line);

    std::vector<json> frame_info(frames.size());
    configure_threads(cfg, workers);
    parallel_for(frames.size(), workers, [&](std::size_t i) {
        char stem[64];
        std::snprintf(stem, sizeof stem, "frame_%03zu", i);
        const WignerPtr w = wigner_at(quench.get(), frames[i], qa, pa);
        catq_wigner_stats st{};
        const catq_status s = catq_wigner_stats_get(w.get(), &st);
        if (s != CATQ_OK && s != CATQ_ERR_EXTENT) {
            check(s, "catq_wigner_stats_get");
        }
        // The binary frame is always written; csv adds a text copy and json
        // embeds the values in the sidecar.
        const std::string data_file = std::string(stem) + ".wig";
        check(catq_wig_write(w.get(), (dir / data_file).c_str()), "catq_wig_write");
        json values = nullptr;
        if (cfg.format == "csv") {
            check(catq_wig_write_csv(w.get(), (dir / (std::string(stem) + ".csv")).c_str()), "catq_wig_write_csv");
        } else if (cfg.format == "json") {
            std::size_t count = 0;
            check(catq_wigner_values(w.get(), nullptr, 0, &count), "catq_wigner_values");
            std::vector<double> v(count);
            check(catq_wigner_values(w.get(), v.data(), count, &count), "catq_wigner_values");
            values = v;
        }

        std::vector<double> mq(static_cast<std::size_t>(qa.n)), mp(static_cast<std::size_t>(pa.n));
        check(catq_wigner_marginals(w.get(), mq.data(), mp.data()), "catq_wigner_marginals");
        {
            auto out = open_out(dir / (std::string(stem) + "_marginals.csv"));
            out << "axis,x,density\n";
            for (int k = 0; k < qa.n; ++k) {
                out << "q," << qa.lo + (qa.hi - qa.lo) * k / (qa.n - 1) << ',' << mq[static_cast<std::size_t>(k)]
                    << '\n';
            }
            for (int k = 0; k < pa.n; ++k) {
                out << "p," << pa.lo + (pa.hi - pa.lo) * k / (pa.n - 1) << ',' << mp[static_cast<std::size_t>(k)]
                    << '\n';
            }
        }

        json side = base;
        side["t"] = frames[i];
        side["file"] = data_file;
        side["grid"] = {{"q", {qa.lo, qa.hi, qa.n}}, {"p", {pa.lo, pa.hi, pa.n}}};
        side["truncation"] = truncation_json(info);
        side["integral"] = number(st.integral);
        side["norm_residual"] = number(st.norm_residual);
        side["negativity"] = number(st.negativity);
        side["phase_space_purity"] = number(st.phase_space_purity);
        if (s == CATQ_ERR_EXTENT) {
            side["warning"] = "window does not cover the state; enlarge --extent for reliable statistics";
        }
        if (!values.is_null()) {
            side["values"] = std::move(values);
        }
        write_json(dir / (std::string(stem) + ".json"), side);
        frame_info[i] = {{"t", frames[i]}, {"file", data_file}, {"sidecar", std::string(stem) + ".json"}};
    });

    // Classical overlay: one trajectory per branch mu = m / j from the initial minimum.
    const auto [q0, p0] = classical_start(cfg.lambda_in);
    const double t_end = std::max(*std::max_element(frames.begin(), frames.end()), cfg.orbit_dt);
    const int two_j = static_cast<int>(std::lround(2.0 * cfg.j));
    {
        auto orbits = open_out(dir / "orbits.csv");
        auto bullets = open_out(dir / "bullets.csv");
        orbits << "mu,t,q,p\n";
        bullets << "mu,t,q,p\n";
        for (int k = 0; k <= two_j; ++k) {
            const double mu = (2.0 * k - two_j) / two_j;
            const OrbitPtr o = orbit(cfg.lambda_fi, cfg.delta, mu, q0, p0, t_end, cfg.orbit_dt, true);
            const auto s = samples_of(o.get());
            for (std::size_t i = 0; i < s.t.size(); ++i) {
                orbits << mu << ',' << s.t[i] << ',' << s.q[i] << ',' << s.p[i] << '\n';
            }
            for (double t : frames) {
                const auto [q, p] = interpolate(s, t);
                bullets << mu << ',' << t << ',' << q << ',' << p << '\n';
            }
        }
    }

    json m = base;
    m["truncation"] = truncation_json(info);
    m["frames"] = frame_info;
    m["classical_start"] = {q0, p0};
    m["files"] = {"orbits.csv", "bullets.csv"};
    write_json(dir / "wigner.json", m);
    return kExitOk;
}

int cmd_scan(const RunConfig& cfg, const std::string& command_line) {
    const fs::path dir = prepare_dir(cfg);
    const unsigned workers = worker_count(cfg);
    const auto deltas = parse_list(cfg.scan_deltas);
    const int n_points = static_cast<int>(std::floor((cfg.scan_max - cfg.scan_min) / cfg.scan_step + 1e-9)) + 1;
    const int two_j = static_cast<int>(std::lround(2.0 * cfg.j));
    const auto [q0, p0] = classical_start(cfg.lambda_in);
    const double orbit_horizon = 400.0;

    struct Row {
        double lambda_fi, delta;
        int two_m;
        double alpha2, peak, period_ode, period_weak, period_weak_expanded;
        bool divergent;
    };
    std::vector<std::vector<Row>> rows(static_cast<std::size_t>(n_points));
    std::vector<catq_quench_info> infos(static_cast<std::size_t>(n_points));

    configure_threads(cfg, workers);
    parallel_for(rows.size(), workers, [&](std::size_t i) {
        const double lf = std::round((cfg.scan_min + cfg.scan_step * static_cast<double>(i)) * 1e12) / 1e12;
        const auto alpha2 = amplitudes_squared(cfg.j, cfg.lambda_in, lf);
        std::vector<double> peaks(alpha2.size(), kNaN);
        for (double d : deltas) {
            const bool quantum = d == cfg.delta;
            if (quantum) {
                const QuenchPtr q = make_quench(quench_spec(cfg, lf, d, {}));
                infos[i] = info_of(q.get());
                peaks = strength_of(q.get(), cfg.j).peak_weights;
            }
            for (int k = 0; k <= two_j; ++k) {
                const double mu = (2.0 * k - two_j) / two_j;
                const OrbitPtr o = orbit(lf, d, mu, q0, p0, orbit_horizon, 0.05, false);
                const auto oi = info_of(o.get());
                double w_exact = 0.0, w_expanded = 0.0;
                // No weak-coupling frequency exists where the origin is not a minimum.
                if (catq_sc_weak_frequency(lf, d, mu, &w_exact, &w_expanded) != CATQ_OK) {
                    w_exact = w_expanded = 0.0;
                }
                const double two_pi = 2.0 * std::numbers::pi;
                rows[i].push_back({lf, d, 2 * k - two_j, alpha2[static_cast<std::size_t>(k)],
                                   quantum ? peaks[static_cast<std::size_t>(k)] : kNaN,
                                   (oi.divergent || oi.stationary) ? kNaN : oi.period,
                                   w_exact > 0.0 ? two_pi / w_exact : kNaN,
                                   w_expanded > 0.0 ? two_pi / w_expanded : kNaN, oi.divergent != 0});
            }
        }
    });

    double max_gap = 0.0;
    {
        auto out = open_out(dir / "scan.csv");
        out << "lambda_fi,delta,m,alpha2,peak_weight,period_ode,period_weak,period_weak_expanded,divergent\n";
        for (const auto& point : rows) {
            for (const auto& r : point) {
                out << r.lambda_fi << ',' << r.delta << ',' << m_label(r.two_m) << ',' << r.alpha2 << ',' << r.peak
                    << ',' << r.period_ode << ',' << r.period_weak << ',' << r.period_weak_expanded << ','
                    << (r.divergent ? 1 : 0) << '\n';
                if (std::isfinite(r.peak)) {
                    max_gap = std::max(max_gap, std::abs(r.peak - r.alpha2));
                }
            }
        }
    }

    double balanced = 0.0, critical = 0.0;
    check(catq_sc_balanced(cfg.lambda_in, &balanced), "catq_sc_balanced");
    check(catq_sc_critical(cfg.lambda_in, &critical), "catq_sc_critical");
    int max_n = 0;
    for (const auto& info : infos) {
        max_n = std::max(max_n, info.n_max);
    }

    json m = manifest(cfg, "scan", command_line);
    m["points"] = n_points;
    m["markers"] = {{"balanced", balanced}, {"critical", {-critical, critical}}};
    m["max_weight_gap"] = std::find(deltas.begin(), deltas.end(), cfg.delta) != deltas.end() ? number(max_gap)
                                                                                               : json(nullptr);
    m["largest_n_max"] = max_n;
    m["classical_start"] = {q0, p0};
    m["period_unit"] = "1 / omega";
    m["files"] = {"scan.csv"};
    write_json(dir / "scan.json", m);
    return kExitOk;
}

int cmd_second_quench(const RunConfig& cfg, const std::string& command_line) {
    const fs::path dir = prepare_dir(cfg);
    const unsigned workers = worker_count(cfg);

    std::vector<double> first;
    for (int i = 0;; ++i) {
        const double t = cfg.dt * i;
        if (t > cfg.t_switch - 1e-12) {
            break;
        }
        first.push_back(t);
    }
    first.push_back(cfg.t_switch);
    const int n_second = static_cast<int>(std::floor(cfg.duration / cfg.dt + 1e-9)) + 1;
    std::vector<double> second(static_cast<std::size_t>(n_second));
    for (int i = 0; i < n_second; ++i) {
        second[static_cast<std::size_t>(i)] = cfg.dt * i;
    }

    check(catq_set_threads(cfg.threads), "catq_set_threads");
    const QuenchPtr q1 = make_quench(quench_spec(cfg, cfg.lambda_fi, cfg.delta, first));
    catq_quench* raw = nullptr;
    check(catq_quench_create_second(q1.get(), cfg.t_switch, cfg.lambda_next, &raw), "catq_quench_create_second");
    const QuenchPtr q2(raw);

    const auto rows1 = observe(q1.get(), first);
    const auto rows2 = observe(q2.get(), second);
    configure_threads(cfg, workers);
    const auto nu1 = negativity_series(cfg, q1.get(), rows1, workers);
    const auto nu2 = negativity_series(cfg, q2.get(), rows2, workers);

    std::vector<double> t_abs, q_mean;
    double g_lo = 1.0, g_hi = 0.0, n_lo = kNaN, n_hi = kNaN;
    {
        auto out = open_out(dir / "second_quench.csv");
        out << "t,phase,q_mean,p_mean,Jx,Jy,Jz,survival,purity,negativity\n";
        const auto put = [&](const catq_observables_row& r, double t, int phase, double nu) {
            out << t << ',' << phase << ',' << r.q << ',' << r.p << ',' << r.jx << ',' << r.jy << ',' << r.jz << ','
                << r.survival << ',' << r.purity << ',' << nu << '\n';
        };
        for (std::size_t i = 0; i < rows1.size(); ++i) {
            put(rows1[i], rows1[i].t, 1, nu1[i]);
        }
        for (std::size_t i = 0; i < rows2.size(); ++i) {
            const double t = cfg.t_switch + rows2[i].t;
            put(rows2[i], t, 2, nu2[i]);
            t_abs.push_back(t);
            q_mean.push_back(rows2[i].q);
            g_lo = std::min(g_lo, rows2[i].purity);
            g_hi = std::max(g_hi, rows2[i].purity);
            if (std::isfinite(nu2[i])) {
                n_lo = std::isfinite(n_lo) ? std::min(n_lo, nu2[i]) : nu2[i];
                n_hi = std::isfinite(n_hi) ? std::max(n_hi, nu2[i]) : nu2[i];
            }
        }
    }

    json m = manifest(cfg, "second-quench", command_line);
    m["truncation"] = truncation_json(info_of(q1.get()));
    m["conservation"] = {{"first", residuals_json(conservation(rows1))},
                         {"second", residuals_json(conservation(rows2))}};
    m["after_switch"] = {{"purity_drift", g_hi - g_lo},
                         {"negativity_drift", number(n_hi - n_lo)},
                         {"q_period", number(crossing_period(t_abs, q_mean))},
                         {"free_period", 2.0 * std::numbers::pi}};
    m["survival_reference"] = "phase 1: psi(0); phase 2: psi(t_switch)";
    m["files"] = {"second_quench.csv"};
    write_json(dir / "second_quench.json", m);
    return kExitOk;
}

}  // namespace catq::cli
