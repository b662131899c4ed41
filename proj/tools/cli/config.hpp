#pragma once

#include <json.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace catq::cli {

// Carries the process exit code chosen for a failure.
class CliError : public std::runtime_error {
public:
    CliError(int code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
    int code() const noexcept { return code_; }

private:
    int code_;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitNumerical = 2;
inline constexpr int kExitConvergence = 3;

CliError config_failure(const std::string& msg);

struct GridSpec {
    int nq = 301;
    int np = 301;
};

struct RunConfig {
    // [model]
    double j = 0.5;
    double R = 20.0;
    double delta = 0.5;
    double omega = 1.0;
    int n_max = 0;

    // [quench]
    double lambda_in = 1.5;
    double lambda_fi = -0.283;
    std::string prep = "doublet_superposition";
    std::string times = "0:80:1601";

    // [output]
    std::string out_dir = "catq_out";
    std::string format = "csv";
    GridSpec grid;
    double extent_q = 1.5;
    double extent_p = 1.5;
    int negativity_every = 10;  // 0 disables the negativity column

    // [spectrum]
    double lambda_min = -1.6;
    double lambda_max = 1.6;
    int lambda_steps = 33;

    // [wigner]
    std::string frames = "0,10,20,31,40,50,66";
    double orbit_dt = 0.02;

    // [scan]
    double scan_min = -1.0;
    double scan_max = 1.0;
    double scan_step = 0.05;
    std::string scan_deltas = "0.5,0";

    // [second_quench]
    double t_switch = 31.0;
    double lambda_next = 0.0;
    double duration = 20.0;
    double dt = 0.05;

    int threads = 0;  // 0 = all hardware threads

    void validate() const;
    nlohmann::json to_json() const;
};

// Flag values; set ones replace config-file values.
struct Overrides {
    std::optional<std::string> config_path;
    std::optional<std::string> out_dir;
    std::optional<double> j, R, lambda_in, lambda_fi, delta;
    std::optional<int> n_max;
    std::optional<std::string> grid;
    std::optional<std::vector<double>> extent;
    std::optional<std::string> times;
    std::optional<std::string> format;
};

// Reads an INI file; unknown sections or keys are errors.
RunConfig load_config(const std::string& path);
// `command` decides whether --times sets the quench grid or the Wigner frames.
RunConfig resolve(const Overrides& o, const char* threads_env, const std::string& command);

GridSpec parse_grid(const std::string& text);
// "a:b:n" (n evenly spaced points) or "t1,t2,..." (explicit list).
std::vector<double> parse_times(const std::string& text);
std::vector<double> parse_list(const std::string& text);

}  // namespace catq::cli
