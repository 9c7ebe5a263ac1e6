#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "ndlimit/dirac_solver.hpp"
#include "ndlimit/nls_solver.hpp"

namespace ndlimit {

/// One row of limit diagnostics per light speed.
struct SweepRecord {
    double c = 0.0;
    double omega = 0.0;
    double gap = 0.0;          // m c^2 - omega
    double a_n = 0.0;          // (m^2 c^4 - omega^2) / c^2
    double b_n = 0.0;          // (m c^2 + omega) / c^2
    double g_H1 = 0.0;         // |g_c|_H1
    double f_dist_H1 = 0.0;    // |f_c - h|_H1 after alignment
    double energy_gap = 0.0;   // |I_c(u_c) - m c^2 - E(f_c)/m|
    double decay_delta = 0.0;  // fitted radial decay rate of |u_c|
    double decay_r2 = 0.0;     // linear-fit quality of the decay fit
    double green_delta = 0.0;  // sqrt(m^2 c^2 - omega^2 / c^2) = sqrt(a_n)
    bool converged = false;
};

/// Least-squares slope of log(ys) against log(xs). All ys must be positive,
/// at least 3 points.
double fit_order(const std::vector<double>& xs, const std::vector<double>& ys);

struct DecayFit {
    double delta = 0.0;  // -slope of log amplitude vs radius
    double r_squared = 0.0;
    int bins_used = 0;
};

/// Radially bin-averages the pointwise modulus over [r1, r2] (bin width h/2),
/// fits log(amplitude) linearly in r. Bins averaging below 1e-14 are
/// excluded; fewer than 8 usable bins is an error. The window must satisfy
/// 0 < r1 < r2 <= L/2 to avoid wraparound contamination.
template <int NC>
DecayFit fit_decay_rate(const Field<NC>& u, double r1, double r2);

struct AlignResult {
    TwoSpinorField aligned;
    std::array<int, 3> shift{0, 0, 0};
    cplx phase{1.0, 0.0};

    explicit AlignResult(const GridSpec& g) : aligned(g) {}
};

/// Aligns f to the reference h: circular translation by the cross-correlation
/// peak of the moduli, then a global phase making <f, h>_L2 real nonnegative.
AlignResult align_fields(const TwoSpinorField& f, const TwoSpinorField& ref);

struct SweepOutput {
    std::vector<SweepRecord> records;
    std::vector<DiracSolveResult> solves;
    NlsResult nls;
    MultistartNls nls_diag;

    SweepOutput(const GridSpec& g) : nls(g), nls_diag(g) {}
};

struct HarnessConfig {
    std::optional<std::array<double, 2>> decay_window;  // default [L/4, L/2]
    double gap_ratio_max = 4.0;
    double f_dist_final_tol = 0.05;
    double energy_gap_final_tol = 0.02;
    std::array<double, 2> g_slope_range{-1.3, -0.7};
    double decay_r2_min = 0.99;
    double decay_delta_factor = 0.8;  // delta >= factor * sqrt(a_n)
    double b_n_final_rel_tol = 0.05;  // |b_n - 2m| / 2m at largest c
};

/// Runs the continuation sweep, solves (NSE) once (multistart), splits each
/// u_c into (f_c, g_c) and fills every record field.
SweepOutput run_sweep(const std::vector<double>& c_values, const MinMaxConfig& cfg,
                      const NlsConfig& nls_cfg, const HarnessConfig& harness,
                      const PotentialSet& pot, const PhysParams& p);

/// One pass/fail line of the consistency report.
struct Criterion {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct ConsistencyReport {
    std::vector<Criterion> criteria;
    double nu = 0.0;
    double nu_over_m = 0.0;    // paper's stated limit of (mc^2 - omega_c)
    double nu_over_2m = 0.0;   // limit implied by a_n -> nu; see note below
    bool all_pass = false;
};

/// Quantifies the limit claims on >= 3 converged records. The nu/m versus
/// nu/(2m) factor in the multiplier-gap limit is reported as a diagnostic,
/// not adjudicated: a_n -> nu is the definition the limit functional uses.
ConsistencyReport consistency_report(const std::vector<SweepRecord>& records,
                                     const NlsResult& nls, const PhysParams& p,
                                     const HarnessConfig& harness);

/// sweep.csv serialization: comment row with the config hash (optional),
/// one header row, shortest round-trip floats, converged as 0/1.
std::string sweep_csv(const std::vector<SweepRecord>& records,
                      const std::string& config_hash_comment = "");
std::vector<SweepRecord> parse_sweep_csv(const std::string& text);

}  // namespace ndlimit
