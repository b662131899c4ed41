#include "config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

namespace catq::cli {
namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& raw, const std::string& what) {
    const std::string s = trim(raw);
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw config_failure(what + ": '" + raw + "' is not a number");
    }
    if (used != s.size() || !std::isfinite(v)) {
        throw config_failure(what + ": '" + raw + "' is not a finite number");
    }
    return v;
}

int to_int(const std::string& raw, const std::string& what) {
    const double v = to_double(raw, what);
    if (v != std::floor(v) || std::abs(v) > 1e9) {
        throw config_failure(what + ": '" + raw + "' is not an integer");
    }
    return static_cast<int>(v);
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

Setter real(double RunConfig::*field) {
    return [field](RunConfig& c, const std::string& v, const std::string& what) { c.*field = to_double(v, what); };
}
Setter integer(int RunConfig::*field) {
    return [field](RunConfig& c, const std::string& v, const std::string& what) { c.*field = to_int(v, what); };
}
Setter text(std::string RunConfig::*field) {
    return [field](RunConfig& c, const std::string& v, const std::string&) { c.*field = trim(v); };
}

const std::map<std::string, std::map<std::string, Setter>>& schema() {
    static const std::map<std::string, std::map<std::string, Setter>> s = {
        {"model",
         {{"j", real(&RunConfig::j)},
          {"R", real(&RunConfig::R)},
          {"delta", real(&RunConfig::delta)},
          {"omega", real(&RunConfig::omega)},
          {"nmax", integer(&RunConfig::n_max)}}},
        {"quench",
         {{"lambda_in", real(&RunConfig::lambda_in)},
          {"lambda_fi", real(&RunConfig::lambda_fi)},
          {"prep", text(&RunConfig::prep)},
          {"times", text(&RunConfig::times)}}},
        {"output",
         {{"dir", text(&RunConfig::out_dir)},
          {"format", text(&RunConfig::format)},
          {"grid",
           [](RunConfig& c, const std::string& v, const std::string&) { c.grid = parse_grid(trim(v)); }},
          {"extent",
           [](RunConfig& c, const std::string& v, const std::string& what) {
               const auto vals = parse_list(v);
               if (vals.size() != 2) {
                   throw config_failure(what + ": expected two values 'Q, P'");
               }
               c.extent_q = vals[0];
               c.extent_p = vals[1];
           }},
          {"negativity_every", integer(&RunConfig::negativity_every)},
          {"threads", integer(&RunConfig::threads)}}},
        {"spectrum",
         {{"lambda_min", real(&RunConfig::lambda_min)},
          {"lambda_max", real(&RunConfig::lambda_max)},
          {"lambda_steps", integer(&RunConfig::lambda_steps)}}},
        {"wigner", {{"frames", text(&RunConfig::frames)}, {"orbit_dt", real(&RunConfig::orbit_dt)}}},
        {"scan",
         {{"lambda_fi_min", real(&RunConfig::scan_min)},
          {"lambda_fi_max", real(&RunConfig::scan_max)},
          {"lambda_fi_step", real(&RunConfig::scan_step)},
          {"deltas", text(&RunConfig::scan_deltas)}}},
        {"second_quench",
         {{"t_switch", real(&RunConfig::t_switch)},
          {"lambda_next", real(&RunConfig::lambda_next)},
          {"duration", real(&RunConfig::duration)},
          {"dt", real(&RunConfig::dt)}}},
    };
    return s;
}

}  // namespace

CliError config_failure(const std::string& msg) { return {kExitConfig, msg}; }

GridSpec parse_grid(const std::string& text) {
    const auto x = text.find_first_of("xX");
    if (x == std::string::npos) {
        throw config_failure("grid must look like NQxNP, got '" + text + "'");
    }
    GridSpec g;
    g.nq = to_int(text.substr(0, x), "grid");
    g.np = to_int(text.substr(x + 1), "grid");
    if (g.nq < 2 || g.np < 2) {
        throw config_failure("grid needs at least 2 points per axis");
    }
    return g;
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!trim(item).empty()) {
            out.push_back(to_double(item, "list"));
        }
    }
    return out;
}

std::vector<double> parse_times(const std::string& text) {
    if (text.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ':')) {
            parts.push_back(item);
        }
        if (parts.size() != 3) {
            throw config_failure("time grid '" + text + "' must be start:end:count");
        }
        const double a = to_double(parts[0], "time grid start");
        const double b = to_double(parts[1], "time grid end");
        const int n = to_int(parts[2], "time grid count");
        if (n < 1 || (n > 1 && !(b > a))) {
            throw config_failure("time grid '" + text + "' needs count >= 1 and end > start");
        }
        std::vector<double> t(n);
        for (int i = 0; i < n; ++i) {
            t[i] = n == 1 ? a : a + (b - a) * i / (n - 1);
        }
        return t;
    }
    auto t = parse_list(text);
    if (t.empty()) {
        throw config_failure("empty time list");
    }
    return t;
}

void RunConfig::validate() const {
    const auto fail = [](const std::string& m) { throw config_failure(m); };
    if (!(std::abs(2.0 * j - std::round(2.0 * j)) < 1e-12) || j < 0.5) fail("j must be a positive half-integer");
    if (!(R > 0.0)) fail("R must be positive");
    if (!(delta >= -1.0 && delta <= 1.0)) fail("delta must lie in [-1, 1]");
    if (!(omega > 0.0)) fail("omega must be positive");
    if (n_max < 0) fail("nmax must be >= 0 (0 = adaptive)");
    if (prep != "doublet_superposition" && prep != "coherent_product" && prep != "doublet" && prep != "coherent") {
        fail("prep must be doublet_superposition or coherent_product");
    }
    if (format != "csv" && format != "wig" && format != "json") fail("format must be csv, wig or json");
    if (!(extent_q > 0.0 && extent_p > 0.0)) fail("extent values must be positive");
    if (negativity_every < 0) fail("negativity_every must be >= 0");
    if (lambda_steps < 1 || (lambda_steps > 1 && !(lambda_max > lambda_min))) fail("bad spectrum lambda grid");
    if (!(scan_step > 0.0) || !(scan_max >= scan_min)) fail("bad scan grid");
    if (parse_list(scan_deltas).empty()) fail("scan deltas list is empty");
    for (double d : parse_list(scan_deltas)) {
        if (!(d >= -1.0 && d <= 1.0)) fail("scan deltas must lie in [-1, 1]");
    }
    if (!(t_switch >= 0.0) || !(duration > 0.0) || !(dt > 0.0)) fail("second quench needs t_switch >= 0, duration > 0, dt > 0");
    if (!(orbit_dt > 0.0)) fail("orbit_dt must be positive");
    const auto t = parse_times(times);
    if (t.front() != 0.0) fail("quench time grid must start at 0");
    if (!std::is_sorted(t.begin(), t.end()) || std::adjacent_find(t.begin(), t.end()) != t.end()) {
        fail("quench time grid must be strictly increasing");
    }
    for (double f : parse_times(frames)) {
        if (f < 0.0) fail("frame times must be >= 0");
    }
}

nlohmann::json RunConfig::to_json() const {
    return {
        {"model", {{"j", j}, {"R", R}, {"delta", delta}, {"omega", omega}, {"nmax", n_max}}},
        {"quench", {{"lambda_in", lambda_in}, {"lambda_fi", lambda_fi}, {"prep", prep}, {"times", times}}},
        {"output",
         {{"dir", out_dir},
          {"format", format},
          {"grid", std::to_string(grid.nq) + "x" + std::to_string(grid.np)},
          {"extent", {extent_q, extent_p}},
          {"negativity_every", negativity_every},
          {"threads", threads}}},
        {"spectrum", {{"lambda_min", lambda_min}, {"lambda_max", lambda_max}, {"lambda_steps", lambda_steps}}},
        {"wigner", {{"frames", frames}, {"orbit_dt", orbit_dt}}},
        {"scan",
         {{"lambda_fi_min", scan_min}, {"lambda_fi_max", scan_max}, {"lambda_fi_step", scan_step}, {"deltas", scan_deltas}}},
        {"second_quench", {{"t_switch", t_switch}, {"lambda_next", lambda_next}, {"duration", duration}, {"dt", dt}}},
    };
}

RunConfig load_config(const std::string& path) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        pt::read_ini(path, tree);
    } catch (const pt::ini_parser_error& e) {
        throw config_failure("cannot read config: " + std::string(e.what()));
    }
    RunConfig cfg;
    const auto& known = schema();
    for (const auto& [section, keys] : tree) {
        const auto sec = known.find(section);
        if (sec == known.end()) {
            throw config_failure("unknown config section [" + section + "]");
        }
        if (keys.empty() && !keys.data().empty()) {
            throw config_failure("key '" + section + "' must live inside a section");
        }
        for (const auto& [key, value] : keys) {
            const auto setter = sec->second.find(key);
            if (setter == sec->second.end()) {
                throw config_failure("unknown key '" + key + "' in section [" + section + "]");
            }
            setter->second(cfg, value.data(), section + "." + key);
        }
    }
    return cfg;
}

RunConfig resolve(const Overrides& o, const char* threads_env, const std::string& command) {
    RunConfig cfg = o.config_path ? load_config(*o.config_path) : RunConfig{};
    if (o.out_dir) cfg.out_dir = *o.out_dir;
    if (o.j) cfg.j = *o.j;
    if (o.R) cfg.R = *o.R;
    if (o.lambda_in) cfg.lambda_in = *o.lambda_in;
    if (o.lambda_fi) cfg.lambda_fi = *o.lambda_fi;
    if (o.delta) cfg.delta = *o.delta;
    if (o.n_max) cfg.n_max = *o.n_max;
    if (o.grid) cfg.grid = parse_grid(*o.grid);
    if (o.extent) {
        if (o.extent->size() != 2) {
            throw config_failure("--extent takes two values: Q P");
        }
        cfg.extent_q = (*o.extent)[0];
        cfg.extent_p = (*o.extent)[1];
    }
    if (o.times) {
        (command == "wigner" ? cfg.frames : cfg.times) = *o.times;
    }
    if (o.format) cfg.format = *o.format;
    if (threads_env != nullptr && *threads_env != '\0') {
        cfg.threads = to_int(threads_env, "CATQ_THREADS");
        if (cfg.threads < 1) {
            throw config_failure("CATQ_THREADS must be a positive integer");
        }
    }
    cfg.validate();
    return cfg;
}

}  // namespace catq::cli
