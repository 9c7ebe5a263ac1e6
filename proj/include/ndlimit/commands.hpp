#pragma once

#include <string>

#include "ndlimit/config.hpp"

namespace ndlimit {

/// Exit codes shared by the dispatcher, the C API and the CLI.
enum ExitCode : int {
    exit_ok = 0,
    exit_assertion = 1,  // a run-level assertion failed (details in failure.json)
    exit_usage = 2,      // unknown command, bad config, bad arguments
};

struct DispatchOptions {
    std::string out_dir = ".";
    std::string trace_path;   // empty -> no per-iteration traces
    std::string input_path;   // decay-fit input snapshot
};

/// Runs one of: solve-dirac, solve-nls, limit-sweep, check-inequalities,
/// decay-fit. Writes all artifacts into out_dir; returns an ExitCode. On
/// assertion failures writes failure.json with machine-readable details.
int dispatch(const std::string& command, const RunConfig& cfg,
             const DispatchOptions& opts);

}  // namespace ndlimit
