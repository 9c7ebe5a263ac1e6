#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ndlimit/dirac_solver.hpp"
#include "ndlimit/inequalities.hpp"
#include "ndlimit/limit.hpp"
#include "ndlimit/nls_solver.hpp"
#include "ndlimit/params.hpp"

namespace ndlimit {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Full run configuration. Every field has a default; parse_config rejects
/// unknown keys and enforces the Theorem 1.1 parameter windows.
struct RunConfig {
    int grid_n = 48;
    double grid_half_width = 12.0;

    PhysParams params;                       // single-solve c lives here
    std::vector<double> c_list{4.0, 8.0, 16.0};

    MinMaxConfig solver;
    NlsConfig nls;
    HarnessConfig harness;
    SuiteConfig inequalities;

    std::uint64_t seed = 12345;
    std::optional<std::string> output_dir;

    GridSpec make_grid() const { return GridSpec(grid_n, grid_half_width); }
};

/// Parses and validates a JSON config; missing fields take defaults,
/// unknown keys are an error naming the key, out-of-window parameters are an
/// error naming the key and the admissible window.
RunConfig parse_config(const std::string& json_text);

/// Canonical serialization (all fields, sorted keys). serialize/parse is a
/// fixed point: parse(serialize(cfg)) == cfg.
std::string serialize_config(const RunConfig& cfg);

/// FNV-1a 64 of the canonical serialization, embedded in output headers.
std::string config_hash(const RunConfig& cfg);

}  // namespace ndlimit
