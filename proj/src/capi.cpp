#include "ndlimit.h"

#include <cstring>
#include <string>

#include "ndlimit/commands.hpp"
#include "ndlimit/snapshot.hpp"

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

template <typename Fn>
int guarded(Fn&& fn) {
    try {
        g_last_error.clear();
        return fn();
    } catch (const ndlimit::ConfigError& e) {
        set_error(e.what());
        return NDL_E_CONFIG;
    } catch (const ndlimit::ParamWindowError& e) {
        set_error(e.what());
        return NDL_E_CONFIG;
    } catch (const std::invalid_argument& e) {
        set_error(e.what());
        return NDL_E_CONFIG;
    } catch (const std::exception& e) {
        set_error(e.what());
        return NDL_E_INTERNAL;
    }
}

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

}  // namespace

struct ndl_config {
    ndlimit::RunConfig cfg;
};

struct ndl_dirac_result {
    ndlimit::DiracSolveResult res;
};

struct ndl_nls_result {
    ndlimit::NlsResult res;
};

extern "C" {

const char* ndl_version(void) { return "1.0.0"; }

const char* ndl_last_error(void) { return g_last_error.c_str(); }

int ndl_config_parse(const char* json_text, ndl_config** out) {
    if (!json_text || !out) {
        set_error("null argument");
        return NDL_E_CONFIG;
    }
    return guarded([&] {
        auto cfg = ndlimit::parse_config(json_text);
        *out = new ndl_config{std::move(cfg)};
        return NDL_OK;
    });
}

int ndl_config_default(ndl_config** out) {
    if (!out) {
        set_error("null argument");
        return NDL_E_CONFIG;
    }
    return guarded([&] {
        *out = new ndl_config{};
        return NDL_OK;
    });
}

int ndl_config_to_json(const ndl_config* cfg, char** out_text) {
    if (!cfg || !out_text) {
        set_error("null argument");
        return NDL_E_CONFIG;
    }
    return guarded([&] {
        *out_text = dup_string(ndlimit::serialize_config(cfg->cfg));
        return NDL_OK;
    });
}

int ndl_config_hash(const ndl_config* cfg, char** out_text) {
    if (!cfg || !out_text) {
        set_error("null argument");
        return NDL_E_CONFIG;
    }
    return guarded([&] {
        *out_text = dup_string(ndlimit::config_hash(cfg->cfg));
        return NDL_OK;
    });
}

int ndl_config_set_seed(ndl_config* cfg, uint64_t seed) {
    if (!cfg) {
        set_error("null argument");
        return NDL_E_CONFIG;
    }
    cfg->cfg.seed = seed;
    return NDL_OK;
}

void ndl_config_free(ndl_config* cfg) { delete cfg; }
void ndl_string_free(char* text) { delete[] text; }

int ndl_run(const ndl_config* cfg, const char* command, const char* out_dir,
            const char* trace_path, const char* input_path) {
    if (!cfg || !command || !out_dir) {
        set_error("null argument");
        return NDL_E_CONFIG;
    }
    return guarded([&] {
        ndlimit::DispatchOptions opts;
        opts.out_dir = out_dir;
        if (trace_path) opts.trace_path = trace_path;
        if (input_path) opts.input_path = input_path;
        int rc = ndlimit::dispatch(command, cfg->cfg, opts);
        if (rc == ndlimit::exit_assertion)
            set_error("run-level assertion failed; see failure.json");
        return rc;
    });
}

int ndl_solve_dirac(const ndl_config* cfg, double c, ndl_dirac_result** out) {
    if (!cfg || !out) {
        set_error("null argument");
        return NDL_E_CONFIG;
    }
    return guarded([&] {
        ndlimit::PhysParams p = cfg->cfg.params.with_c(c);
        p.validate();
        ndlimit::GridSpec grid = cfg->cfg.make_grid();
        ndlimit::PotentialSet pot = ndlimit::build_potentials(grid, p);
        ndlimit::SpinorField w0 =
            ndlimit::initial_guess(grid, pot, p, cfg->cfg.solver.guess_width);
        auto res = ndlimit::outer_minimize(w0, cfg->cfg.solver, pot, p);
        *out = new ndl_dirac_result{std::move(res)};
        return NDL_OK;
    });
}

double ndl_dirac_result_omega(const ndl_dirac_result* r) { return r->res.omega; }
double ndl_dirac_result_energy(const ndl_dirac_result* r) { return r->res.energy; }
double ndl_dirac_result_residual(const ndl_dirac_result* r) { return r->res.residual; }
int ndl_dirac_result_converged(const ndl_dirac_result* r) {
    return r->res.converged ? 1 : 0;
}
int ndl_dirac_result_outer_iterations(const ndl_dirac_result* r) {
    return r->res.outer_iterations;
}

int ndl_dirac_result_save_field(const ndl_dirac_result* r, const char* path) {
    if (!r || !path) {
        set_error("null argument");
        return NDL_E_CONFIG;
    }
    return guarded([&] {
        ndlimit::write_snapshot(path, r->res.u);
        return NDL_OK;
    });
}

void ndl_dirac_result_free(ndl_dirac_result* r) { delete r; }

int ndl_solve_nls(const ndl_config* cfg, ndl_nls_result** out) {
    if (!cfg || !out) {
        set_error("null argument");
        return NDL_E_CONFIG;
    }
    return guarded([&] {
        ndlimit::GridSpec grid = cfg->cfg.make_grid();
        ndlimit::PotentialSet pot = ndlimit::build_potentials(grid, cfg->cfg.params);
        auto ms = ndlimit::nls_ground_state_multistart(cfg->cfg.nls, pot, cfg->cfg.params);
        *out = new ndl_nls_result{std::move(ms.best)};
        return NDL_OK;
    });
}

double ndl_nls_result_nu(const ndl_nls_result* r) { return r->res.nu; }
double ndl_nls_result_energy(const ndl_nls_result* r) { return r->res.energy; }
double ndl_nls_result_residual(const ndl_nls_result* r) { return r->res.residual; }
int ndl_nls_result_converged(const ndl_nls_result* r) { return r->res.converged ? 1 : 0; }
int ndl_nls_result_iterations(const ndl_nls_result* r) { return r->res.iterations; }

int ndl_nls_result_save_field(const ndl_nls_result* r, const char* path) {
    if (!r || !path) {
        set_error("null argument");
        return NDL_E_CONFIG;
    }
    return guarded([&] {
        ndlimit::write_snapshot(path, r->res.h);
        return NDL_OK;
    });
}

void ndl_nls_result_free(ndl_nls_result* r) { delete r; }

int ndl_snapshot_info(const char* path, uint32_t* n, uint32_t* components,
                      double* half_width) {
    if (!path) {
        set_error("null argument");
        return NDL_E_CONFIG;
    }
    return guarded([&] {
        auto info = ndlimit::read_snapshot_info(path);
        if (n) *n = info.n;
        if (components) *components = info.components;
        if (half_width) *half_width = info.half_width;
        return NDL_OK;
    });
}

}  // extern "C"
