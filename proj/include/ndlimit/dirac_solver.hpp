#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ndlimit/functional.hpp"

namespace ndlimit {

/// Knobs of the two-level min-max solver. Tolerances are L2 norms of the
/// respective stationarity residuals. step0 is the initial trial step for
/// the spectrally preconditioned directions (the preconditioner already
/// absorbs the O(c^2) gap, so useful steps are O(1)).
struct MinMaxConfig {
    double inner_tol = 1e-8;
    double outer_tol = 1e-7;
    int inner_max_iter = 2000;
    int outer_max_iter = 500;
    double step0 = 1.0;
    double backtrack = 0.5;
    double armijo = 1e-4;
    double minus_norm_cap = 0.9;
    double guess_width = 1.5;
    bool warm_start = true;

    void validate() const {
        if (!(inner_tol > 0.0) || !(outer_tol > 0.0))
            throw std::invalid_argument("MinMaxConfig: tolerances must be positive");
        if (!(minus_norm_cap > 0.0 && minus_norm_cap < 1.0))
            throw std::invalid_argument("MinMaxConfig: minus_norm_cap must be in (0,1)");
        if (inner_max_iter < 1 || outer_max_iter < 1)
            throw std::invalid_argument("MinMaxConfig: iteration caps must be >= 1");
    }
};

struct TraceRow {
    int iteration;
    double energy;
    double residual;
    double omega;
    double uminus_norm;
};

struct DiracSolveResult {
    SpinorField u;
    double omega = 0.0;
    double energy = 0.0;
    double residual = 0.0;
    int inner_iterations = 0;
    int outer_iterations = 0;
    long evaluations = 0;
    bool converged = false;
    bool monotone = true;      // accepted-step energies monotone up to roundoff
    bool cap_hit = false;      // |u-| reached minus_norm_cap (indefinite regime)
    std::vector<TraceRow> trace;

    explicit DiracSolveResult(const GridSpec& g) : u(g) {}
};

/// Centered Gaussian two-spinor lifted through the inverse Foldy-Wouthuysen
/// transform, projected to E_c^+ and L2-normalized.
SpinorField initial_guess(const GridSpec& grid, const PotentialSet& pot,
                          const PhysParams& p, double width = 1.5);

struct InnerResult {
    SpinorField u;        // t w + u_minus, unit L2 norm
    SpinorField u_minus;  // E_c^- part
    double energy = 0.0;
    double omega = 0.0;
    double tangent_norm = 0.0;
    int iterations = 0;
    bool converged = false;
    bool cap_hit = false;
    bool monotone = true;

    explicit InnerResult(const GridSpec& g) : u(g), u_minus(g) {}
};

/// Maximizes I_c over S_W = {t w + u^-} by projected ascent in u^- with
/// t = sqrt(1 - |u^-|^2). Monotone backtracking while energy increments are
/// certifiable, then preconditioned fixed-point refinement guarded by the
/// tangent-residual norm.
InnerResult inner_maximize(const SpinorField& w,
                           const std::optional<SpinorField>& warm_uminus,
                           const MinMaxConfig& cfg, const PotentialSet& pot,
                           const PhysParams& p);

/// Outer minimization of E_c(w) = I_c(phi(w)) over the unit sphere of E_c^+.
DiracSolveResult outer_minimize(const SpinorField& w0, const MinMaxConfig& cfg,
                                const PotentialSet& pot, const PhysParams& p);

/// Stationarity residual  |D_c u - H(u) - P(u) - omega u|_L2.
double residual(const SpinorField& u, double omega, const PotentialSet& pot,
                const PhysParams& p);

/// Warm-started continuation over an ascending ladder of light speeds.
/// Potentials do not depend on c, so one PotentialSet serves every stage.
std::vector<DiracSolveResult> continuation_sweep(const std::vector<double>& c_values,
                                                 const MinMaxConfig& cfg,
                                                 const PotentialSet& pot,
                                                 const PhysParams& p);

}  // namespace ndlimit
