#include "commands.hpp"
#include "config.hpp"

#include "catq/catq.h"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <map>

namespace {

using catq::cli::Overrides;

std::string join_args(int argc, char** argv) {
    std::string line;
    for (int i = 0; i < argc; ++i) {
        if (i > 0) {
            line += ' ';
        }
        line += argv[i];
    }
    return line;
}

}  // namespace

int main(int argc, char** argv) {
    namespace cli = catq::cli;
    using Command = int (*)(const cli::RunConfig&, const std::string&);
    const std::map<std::string, std::pair<Command, std::string>> commands = {
        {"spectrum", {cli::cmd_spectrum, "eigenvalues over a lambda grid and the quench strength function"}},
        {"quench", {cli::cmd_quench, "observables, purity and negativity after the quench"}},
        {"wigner", {cli::cmd_wigner, "oscillator Wigner frames, marginals and classical overlays"}},
        {"scan", {cli::cmd_scan, "branch weights and classical periods over a lambda_fi grid"}},
        {"second-quench", {cli::cmd_second_quench, "quench, then switch the coupling again at t_switch"}},
    };

    CLI::App app{"catq: spin-oscillator quench simulations"};
    app.set_version_flag("--version", std::string(catq_version()));
    app.require_subcommand(1);

    Overrides o;
    std::string config_path, out_dir, grid, times, format;
    double j = 0, R = 0, lambda_in = 0, lambda_fi = 0, delta = 0;
    int n_max = 0;
    std::vector<double> extent;
    auto* opt_config = app.add_option("--config", config_path, "INI configuration file");
    auto* opt_out = app.add_option("--out", out_dir, "output directory");
    auto* opt_j = app.add_option("--j", j, "spin length (half-integer)");
    auto* opt_R = app.add_option("--R", R, "frequency ratio");
    auto* opt_lin = app.add_option("--lambda-in", lambda_in, "initial coupling");
    auto* opt_lfi = app.add_option("--lambda-fi", lambda_fi, "final coupling");
    auto* opt_delta = app.add_option("--delta", delta, "anisotropy in [-1, 1]");
    auto* opt_nmax = app.add_option("--nmax", n_max, "Fock cutoff; 0 selects it adaptively");
    auto* opt_grid = app.add_option("--grid", grid, "Wigner grid NQxNP");
    auto* opt_extent = app.add_option("--extent", extent, "Wigner half-widths Q P")->expected(2);
    auto* opt_times = app.add_option("--times", times, "start:end:count or a comma list");
    auto* opt_format = app.add_option("--format", format, "csv, wig or json");

    for (const auto& [name, entry] : commands) {
        app.add_subcommand(name, entry.second)->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return cli::kExitConfig;
    }

    const auto set = [](CLI::Option* opt, auto& slot, const auto& value) {
        if (opt->count() > 0) {
            slot = value;
        }
    };
    set(opt_config, o.config_path, config_path);
    set(opt_out, o.out_dir, out_dir);
    set(opt_j, o.j, j);
    set(opt_R, o.R, R);
    set(opt_lin, o.lambda_in, lambda_in);
    set(opt_lfi, o.lambda_fi, lambda_fi);
    set(opt_delta, o.delta, delta);
    set(opt_nmax, o.n_max, n_max);
    set(opt_grid, o.grid, grid);
    set(opt_extent, o.extent, extent);
    set(opt_times, o.times, times);
    set(opt_format, o.format, format);

    const std::string name = app.get_subcommands().front()->get_name();
    try {
        const cli::RunConfig cfg = cli::resolve(o, std::getenv("CATQ_THREADS"), name);
        return commands.at(name).first(cfg, join_args(argc, argv));
    } catch (const cli::CliError& e) {
        std::cerr << "catq " << name << ": " << e.what() << '\n';
        return e.code();
    } catch (const std::exception& e) {
        std::cerr << "catq " << name << ": internal error: " << e.what() << '\n';
        return cli::kExitNumerical;
    }
}
