#pragma once

#include <vector>

#include "ndlimit/fft.hpp"
#include "ndlimit/field.hpp"
#include "ndlimit/grid.hpp"
#include "ndlimit/params.hpp"

namespace ndlimit {

/// Grid samples of the potential family plus the Fourier multiplier of the
/// convolution kernel Gamma. Immutable after construction and shareable
/// across concurrent solves.
///
/// The multiplier convention: for series coefficients rho_k of a density,
/// the convolution (Gamma * rho) has coefficients gamma_mult[k] * rho_k,
/// i.e. gamma_mult holds values of the (non-unitary) transform
/// int Gamma(x) e^{-i xi.x} dx on the frequency lattice.
struct PotentialSet {
    GridSpec grid;
    std::vector<double> K;           // K(x) = exp(-a d(x)), d = distance to origin
    std::vector<double> P;           // P(x) = 1/(1 + d(x)^mu)
    std::vector<double> gamma_mult;  // >= 0, finite, includes regularized zero mode
    std::vector<double> dealias;     // 2/3-rule mask, 0 or 1 per mode

    explicit PotentialSet(const GridSpec& g)
        : grid(g),
          K(g.num_points(), 0.0),
          P(g.num_points(), 0.0),
          gamma_mult(g.num_points(), 0.0),
          dealias(g.num_points(), 0.0) {}

    /// Copy with the Hartree channel switched off (K = 0).
    PotentialSet without_hartree() const {
        PotentialSet q = *this;
        std::fill(q.K.begin(), q.K.end(), 0.0);
        return q;
    }
    /// Copy with the local channel switched off (P = 0).
    PotentialSet without_local() const {
        PotentialSet q = *this;
        std::fill(q.P.begin(), q.P.end(), 0.0);
        return q;
    }
    PotentialSet linear_only() const { return without_hartree().without_local(); }
};

/// 2/3-rule mask: keeps modes with |k| < n/3 on every axis.
std::vector<double> dealias_mask(const GridSpec& grid);

/// Power-law multiplier of Gamma(x) = |x|^-tau on the lattice:
///   C_tau |xi|^(tau-3),  C_tau = pi^(3/2) 2^(3-tau) Gamma((3-tau)/2) / Gamma(tau/2),
/// with the zero mode replaced by the integral of the kernel truncated at
/// radius L (the free-space value has no finite mean on the torus).
/// Valid for tau in (0, 3).
std::vector<double> gamma_multiplier_power_law(const GridSpec& grid, double tau);

/// Real-space samples of the truncated kernel: |x|^-tau for 0 < d(x) <= L,
/// zero beyond, and the cell-average of |x|^-tau over an equal-volume ball
/// at the origin. Indexed by grid point (centered coordinates).
std::vector<double> sampled_gamma_kernel(const GridSpec& grid, double tau);

/// DFT of the sampled truncated kernel, displacement-indexed, so that
/// multiplier convolution with it reproduces direct periodic summation of
/// that kernel to machine precision. Used by oracle tests and cross-checks.
std::vector<double> gamma_multiplier_from_kernel(const GridSpec& grid, double tau);

/// Samples K, P via distance to the origin and builds the production
/// (power-law) Gamma multiplier. Throws ParamWindowError on bad windows.
PotentialSet build_potentials(const GridSpec& grid, const PhysParams& p);

/// Periodic convolution with the Gamma multiplier, dealiased:
///   out = IFFT( gamma_mult . mask . FFT(rho) ),  real in, real out.
std::vector<double> convolve_gamma(const PotentialSet& pot,
                                   const std::vector<double>& rho);

}  // namespace ndlimit
