#pragma once

#include <array>
#include <complex>

#include "ndlimit/fft.hpp"
#include "ndlimit/field.hpp"
#include "ndlimit/grid.hpp"
#include "ndlimit/params.hpp"

namespace ndlimit {

/// lambda(xi) = sqrt(m^2 c^4 + c^2 |xi|^2), the positive symbol eigenvalue.
inline double lambda_xi(double xi_sq, const PhysParams& p) {
    const double mc2 = p.mc2();
    return std::sqrt(mc2 * mc2 + p.c * p.c * xi_sq);
}
inline double lambda_xi(const std::array<double, 3>& xi, const PhysParams& p) {
    return lambda_xi(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2], p);
}

using Mat4 = std::array<std::array<cplx, 4>, 4>;

/// Free Dirac symbol at frequency xi: [[mc^2 I2, c sigma.xi], [c sigma.xi, -mc^2 I2]].
Mat4 dirac_symbol(const std::array<double, 3>& xi, const PhysParams& p);

enum class EnergySign { plus, minus };
enum class FwDirection { forward, inverse };

/// Per-mode spinor kernels. Each acts on the 4 spectral coefficients of one
/// frequency; the callers stream them across the whole lattice.
namespace spinor_kernel {

// sigma.xi on a 2-spinor (a,b).
inline void sigma_dot(double xx, double xy, double xz, cplx a, cplx b,
                      cplx& oa, cplx& ob) {
    oa = xz * a + cplx(xx, -xy) * b;
    ob = cplx(xx, xy) * a - xz * b;
}

// alpha.xi swaps the upper/lower blocks through sigma.xi.
inline void alpha_dot(double xx, double xy, double xz, const cplx* in, cplx* out) {
    sigma_dot(xx, xy, xz, in[2], in[3], out[0], out[1]);
    sigma_dot(xx, xy, xz, in[0], in[1], out[2], out[3]);
}

inline void dirac_apply(double xx, double xy, double xz, double mc2, double c,
                        const cplx* in, cplx* out) {
    cplx ad[4];
    alpha_dot(xx, xy, xz, in, ad);
    out[0] = c * ad[0] + mc2 * in[0];
    out[1] = c * ad[1] + mc2 * in[1];
    out[2] = c * ad[2] - mc2 * in[2];
    out[3] = c * ad[3] - mc2 * in[3];
}

// P_pm = 1/2 (I4 +- (mc^2/lambda) beta +- (c/lambda) alpha.xi).
inline void project(double xx, double xy, double xz, double mc2, double c,
                    double lambda, double sign, const cplx* in, cplx* out) {
    cplx ad[4];
    alpha_dot(xx, xy, xz, in, ad);
    const double sb = sign * mc2 / lambda;
    const double sa = sign * c / lambda;
    out[0] = 0.5 * (in[0] + sb * in[0] + sa * ad[0]);
    out[1] = 0.5 * (in[1] + sb * in[1] + sa * ad[1]);
    out[2] = 0.5 * (in[2] - sb * in[2] + sa * ad[2]);
    out[3] = 0.5 * (in[3] - sb * in[3] + sa * ad[3]);
}

// U(xi)  = Y+ I4 + Y- beta (alpha.xi)/|xi|   (sign = +1)
// U^-1   = Y+ I4 - Y- beta (alpha.xi)/|xi|   (sign = -1)
// At xi = 0, Y- = 0 and the singular factor is defined as 0.
inline void foldy_wouthuysen(double xx, double xy, double xz, double mc2,
                             double lambda, double sign, const cplx* in,
                             cplx* out) {
    const double yp = std::sqrt(0.5 * (1.0 + mc2 / lambda));
    const double ym_sq = 0.5 * (1.0 - mc2 / lambda);
    const double abs_xi = std::sqrt(xx * xx + xy * xy + xz * xz);
    double fac = 0.0;
    if (abs_xi > 0.0) fac = sign * std::sqrt(ym_sq > 0.0 ? ym_sq : 0.0) / abs_xi;
    cplx ad[4];
    alpha_dot(xx, xy, xz, in, ad);
    out[0] = yp * in[0] + fac * ad[0];
    out[1] = yp * in[1] + fac * ad[1];
    out[2] = yp * in[2] - fac * ad[2];
    out[3] = yp * in[3] - fac * ad[3];
}

}  // namespace spinor_kernel

/// Spectral-space applications; input and output are coefficient fields.
void apply_dirac_hat(const FrequencyTable& freq, const PhysParams& p,
                     const SpinorField& uhat, SpinorField& out);
void project_pm_hat(const FrequencyTable& freq, const PhysParams& p,
                    EnergySign sign, const SpinorField& uhat, SpinorField& out);
void fw_transform_hat(const FrequencyTable& freq, const PhysParams& p,
                      FwDirection dir, const SpinorField& uhat, SpinorField& out);

/// Real-space wrappers (forward transform, multiply, inverse transform).
SpinorField apply_dirac(const SpinorField& u, const PhysParams& p);
SpinorField project_pm(const SpinorField& u, const PhysParams& p, EnergySign sign);
SpinorField fw_transform(const SpinorField& u, const PhysParams& p, FwDirection dir);

/// (-Delta)^(1/4): Fourier multiplier |xi|^(1/2) componentwise.
template <int NC>
Field<NC> frac_laplacian_quarter(const Field<NC>& u) {
    const Transform& tr = transform_for(u.grid());
    FrequencyTable freq(u.grid());
    Field<NC> hat = tr.forward_field(u);
    const std::size_t np = u.points();
    for (int c = 0; c < NC; ++c) {
        cplx* h = hat.component(c);
        for (std::size_t i = 0; i < np; ++i)
            h[i] *= std::sqrt(std::sqrt(freq.xi_sq[i]));
    }
    return tr.inverse_field(hat);
}

enum class NormKind { L2, H1, H12, C_norm };

/// Sobolev-type norms via Fourier multipliers:
///   H1    : 1 + |xi|^2
///   H1/2  : sqrt(1 + |xi|^2)
///   C_norm: lambda(xi)  (the ||.||_c graph norm of |D_c|^(1/2))
template <int NC>
double norm(const Field<NC>& u, NormKind kind, const PhysParams* p = nullptr) {
    if (!u.finite()) throw std::domain_error("norm: field has nonfinite entries");
    if (kind == NormKind::L2) return norm_l2(u);
    if (kind == NormKind::C_norm && p == nullptr)
        throw std::invalid_argument("C_norm requires PhysParams");
    const Transform& tr = transform_for(u.grid());
    FrequencyTable freq(u.grid());
    Field<NC> hat = tr.forward_field(u);
    const std::size_t np = u.points();
    double acc = 0.0;
    for (int c = 0; c < NC; ++c) {
        const cplx* h = hat.component(c);
        for (std::size_t i = 0; i < np; ++i) {
            double w;
            switch (kind) {
                case NormKind::H1: w = 1.0 + freq.xi_sq[i]; break;
                case NormKind::H12: w = std::sqrt(1.0 + freq.xi_sq[i]); break;
                default: w = lambda_xi(freq.xi_sq[i], *p); break;
            }
            acc += w * std::norm(h[i]);
        }
    }
    return std::sqrt(acc * u.grid().box_volume());
}

/// Lp norm by real-space quadrature, p in [1, inf).
template <int NC>
double norm_lp(const Field<NC>& u, double pexp) {
    if (!(pexp >= 1.0)) throw std::invalid_argument("norm_lp: p must be >= 1");
    if (!u.finite()) throw std::domain_error("norm_lp: field has nonfinite entries");
    std::vector<double> mod = modulus(u);
    double acc = 0.0;
    for (double v : mod) acc += std::pow(v, pexp);
    return std::pow(acc * u.grid().cell_volume(), 1.0 / pexp);
}

}  // namespace ndlimit
