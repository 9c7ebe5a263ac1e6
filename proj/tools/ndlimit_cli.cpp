// Command-line front end. Talks to the solver library exclusively through
// the C API in ndlimit.h.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "ndlimit.h"

namespace {

int usage_error(const std::string& msg) {
    std::fprintf(stderr, "error: %s\n", msg.c_str());
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ndlimit: normalized nonlinear Dirac states and their "
                 "nonrelativistic limit on a periodic box"};
    app.footer("commands:\n"
               "  solve-dirac         solve the constrained Dirac problem at params.c\n"
               "  solve-nls           ground state of the limit Schroedinger problem\n"
               "  limit-sweep         c-ladder sweep with limit diagnostics\n"
               "  check-inequalities  randomized functional-inequality suite\n"
               "  decay-fit           radial decay fit of a DSPN snapshot (--in)\n"
               "exit codes: 0 pass, 1 assertion failure, 2 usage/config error");

    std::string command;
    std::string config_path;
    std::string out_dir = ".";
    std::string trace_path;
    std::string input_path;
    std::uint64_t seed = 0;
    bool seed_set = false;

    app.add_option("command", command, "command to run")->required();
    app.add_option("--config", config_path, "JSON config file (defaults if omitted)");
    app.add_option("--out", out_dir, "output directory");
    auto* seed_opt = app.add_option("--seed", seed, "override the master seed");
    app.add_option("--trace", trace_path, "per-iteration trace CSV path");
    app.add_option("--in", input_path, "input DSPN snapshot (decay-fit)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    seed_set = seed_opt->count() > 0;

    ndl_config* cfg = nullptr;
    int rc;
    if (config_path.empty()) {
        rc = ndl_config_default(&cfg);
    } else {
        std::ifstream is(config_path);
        if (!is) return usage_error("cannot open config file '" + config_path + "'");
        std::ostringstream ss;
        ss << is.rdbuf();
        rc = ndl_config_parse(ss.str().c_str(), &cfg);
    }
    if (rc != NDL_OK) return usage_error(ndl_last_error());
    if (seed_set) ndl_config_set_seed(cfg, seed);

    char* hash = nullptr;
    if (ndl_config_hash(cfg, &hash) == NDL_OK) {
        std::printf("ndlimit %s | command %s | config %s\n", ndl_version(),
                    command.c_str(), hash);
        ndl_string_free(hash);
    }

    rc = ndl_run(cfg, command.c_str(), out_dir.c_str(),
                 trace_path.empty() ? nullptr : trace_path.c_str(),
                 input_path.empty() ? nullptr : input_path.c_str());
    if (rc == NDL_OK) {
        std::printf("PASS (artifacts in %s)\n", out_dir.c_str());
    } else if (rc == NDL_E_ASSERTION) {
        std::fprintf(stderr, "FAIL: %s\n", ndl_last_error());
    } else {
        ndl_config_free(cfg);
        return usage_error(ndl_last_error());
    }
    ndl_config_free(cfg);
    return rc;
}
