#pragma once

#include <optional>
#include <vector>

#include "ndlimit/functional.hpp"

namespace ndlimit {

struct NlsConfig {
    double tol = 1e-8;           // residual |grad E + nu h|_L2
    int max_iter = 2000;
    double step0 = 1.0;
    double backtrack = 0.5;
    double armijo = 1e-4;
    double guess_width = 1.5;
    double multistart_width_a = 1.0;
    double multistart_width_b = 2.0;

    void validate() const {
        if (!(tol > 0.0)) throw std::invalid_argument("NlsConfig: tol must be positive");
        if (max_iter < 1) throw std::invalid_argument("NlsConfig: max_iter must be >= 1");
    }
};

struct TraceRowNls {
    int iteration;
    double energy;
    double residual;
    double nu;
};

struct NlsResult {
    TwoSpinorField h;
    double nu = 0.0;
    double energy = 0.0;
    double residual = 0.0;
    int iterations = 0;
    long evaluations = 0;
    bool converged = false;
    bool monotone = true;
    std::vector<TraceRowNls> trace;

    explicit NlsResult(const GridSpec& g) : h(g) {}
};

/// Normalized Gaussian two-spinor (first component only) of the given width.
TwoSpinorField gaussian_two_spinor(const GridSpec& grid, double width);

/// Constrained minimization of E on the unit L2 sphere by preconditioned
/// projected gradient descent (CG-accelerated, monotone backtracking, then
/// residual-guarded refinement). nu is recovered from stationarity:
/// nu = <RHS(h), h> - |grad h|^2.
NlsResult nls_ground_state(const TwoSpinorField& g0, const NlsConfig& cfg,
                           const PotentialSet& pot, const PhysParams& p);

/// Two independent starts (widths a and b); returns the lower-energy result
/// and records the cross-start agreement in the diagnostics.
struct MultistartNls {
    NlsResult best;
    double energy_difference = 0.0;       // |E_a - E_b|
    double profile_difference = 0.0;      // max_x | |h_a| - |h_b| | after alignment
    bool agreed = false;

    explicit MultistartNls(const GridSpec& g) : best(g) {}
};
MultistartNls nls_ground_state_multistart(const NlsConfig& cfg, const PotentialSet& pot,
                                          const PhysParams& p);

/// E(v_eps) with v_eps(x) = eps^(3/2) v(eps x) formed by evaluating the
/// trigonometric interpolant of v at the scaled points (exact for
/// band-limited v). Errors if the relative mass of v outside
/// [-eps L, eps L)^3 exceeds 1e-6 (the rescaled field would not fit the box).
double scaling_trial_energy(const TwoSpinorField& v, double epsilon,
                            const PotentialSet& pot, const PhysParams& p);

/// The rescaled field itself (exposed for tests).
TwoSpinorField rescale_field(const TwoSpinorField& v, double epsilon);

}  // namespace ndlimit
