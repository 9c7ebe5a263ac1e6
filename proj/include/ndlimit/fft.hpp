#pragma once

#include <complex>
#include <memory>

#include "ndlimit/field.hpp"
#include "ndlimit/grid.hpp"

namespace ndlimit {

/// Discrete transform between grid samples and Fourier-series coefficients
/// of the centered box: forward produces c_k with
///
///     u(x_j) = sum_k c_k exp(i xi_k . x_j),   xi_k = (pi/L) k,
///
/// i.e. c_k = n^-3 sum_j u(x_j) exp(-i xi_k . x_j). The grid offset -L
/// contributes a (-1)^(kx+ky+kz) phase relative to the raw DFT, which is
/// folded in here so coefficients are literal plane-wave amplitudes
/// (tested against e^{i xi_k0 . x} -> delta at k0). Under this convention
/// Parseval reads h^3 sum_j |u_j|^2 = (2L)^3 sum_k |c_k|^2, and the
/// continuous transform of the paper is u_hat(xi_k) ~ (2pi)^{-3/2} (2L)^3 c_k.
///
/// A workspace owns FFTW plans for one grid size. Plans are created with
/// FFTW_ESTIMATE so results are reproducible run to run. A workspace is not
/// thread-safe; use one per worker.
class Transform {
public:
    explicit Transform(const GridSpec& grid);
    ~Transform();
    Transform(const Transform&) = delete;
    Transform& operator=(const Transform&) = delete;

    const GridSpec& grid() const { return grid_; }

    /// In-place component array transforms (length n^3 each).
    void forward(const cplx* in, cplx* out) const;
    void inverse(const cplx* in, cplx* out) const;

    template <int NC>
    Field<NC> forward_field(const Field<NC>& u) const {
        Field<NC> out(u.grid());
        for (int c = 0; c < NC; ++c) forward(u.component(c), out.component(c));
        return out;
    }
    template <int NC>
    Field<NC> inverse_field(const Field<NC>& u) const {
        Field<NC> out(u.grid());
        for (int c = 0; c < NC; ++c) inverse(u.component(c), out.component(c));
        return out;
    }

private:
    struct Impl;
    GridSpec grid_;
    std::unique_ptr<Impl> impl_;
};

/// Shared per-thread transform for a given grid; creates (and caches) one
/// workspace per grid size per thread.
const Transform& transform_for(const GridSpec& grid);

}  // namespace ndlimit
