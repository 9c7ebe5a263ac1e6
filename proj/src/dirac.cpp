#include "ndlimit/dirac.hpp"

namespace ndlimit {

Mat4 dirac_symbol(const std::array<double, 3>& xi, const PhysParams& p) {
    Mat4 M{};
    const double mc2 = p.mc2();
    const double c = p.c;
    // sigma.xi = [[xz, xx-i xy], [xx+i xy, -xz]]
    const cplx s00(xi[2], 0.0), s01(xi[0], -xi[1]);
    const cplx s10(xi[0], xi[1]), s11(-xi[2], 0.0);
    M[0][0] = mc2;
    M[1][1] = mc2;
    M[2][2] = -mc2;
    M[3][3] = -mc2;
    M[0][2] = c * s00;
    M[0][3] = c * s01;
    M[1][2] = c * s10;
    M[1][3] = c * s11;
    M[2][0] = c * s00;
    M[2][1] = c * s01;
    M[3][0] = c * s10;
    M[3][1] = c * s11;
    return M;
}

namespace {

template <typename Kernel>
void for_each_mode(const FrequencyTable& freq, const SpinorField& in,
                   SpinorField& out, Kernel&& kernel) {
    in.check_same_grid(out);
    const std::size_t np = in.points();
    const cplx* i0 = in.component(0);
    const cplx* i1 = in.component(1);
    const cplx* i2 = in.component(2);
    const cplx* i3 = in.component(3);
    cplx* o0 = out.component(0);
    cplx* o1 = out.component(1);
    cplx* o2 = out.component(2);
    cplx* o3 = out.component(3);
    for (std::size_t i = 0; i < np; ++i) {
        cplx a[4] = {i0[i], i1[i], i2[i], i3[i]};
        cplx b[4];
        kernel(freq.xi_x[i], freq.xi_y[i], freq.xi_z[i], freq.xi_sq[i], a, b);
        o0[i] = b[0];
        o1[i] = b[1];
        o2[i] = b[2];
        o3[i] = b[3];
    }
}

}  // namespace

void apply_dirac_hat(const FrequencyTable& freq, const PhysParams& p,
                     const SpinorField& uhat, SpinorField& out) {
    const double mc2 = p.mc2(), c = p.c;
    for_each_mode(freq, uhat, out,
                  [&](double xx, double xy, double xz, double, const cplx* a, cplx* b) {
                      spinor_kernel::dirac_apply(xx, xy, xz, mc2, c, a, b);
                  });
}

void project_pm_hat(const FrequencyTable& freq, const PhysParams& p,
                    EnergySign sign, const SpinorField& uhat, SpinorField& out) {
    const double mc2 = p.mc2(), c = p.c;
    const double sg = sign == EnergySign::plus ? 1.0 : -1.0;
    for_each_mode(freq, uhat, out,
                  [&](double xx, double xy, double xz, double xi_sq, const cplx* a, cplx* b) {
                      spinor_kernel::project(xx, xy, xz, mc2, c,
                                             lambda_xi(xi_sq, p), sg, a, b);
                  });
}

void fw_transform_hat(const FrequencyTable& freq, const PhysParams& p,
                      FwDirection dir, const SpinorField& uhat, SpinorField& out) {
    const double mc2 = p.mc2();
    const double sg = dir == FwDirection::forward ? 1.0 : -1.0;
    for_each_mode(freq, uhat, out,
                  [&](double xx, double xy, double xz, double xi_sq, const cplx* a, cplx* b) {
                      spinor_kernel::foldy_wouthuysen(xx, xy, xz, mc2,
                                                      lambda_xi(xi_sq, p), sg, a, b);
                  });
}

namespace {

template <typename HatOp>
SpinorField roundtrip(const SpinorField& u, HatOp&& op) {
    if (!u.finite()) throw std::domain_error("field has nonfinite entries");
    const Transform& tr = transform_for(u.grid());
    FrequencyTable freq(u.grid());
    SpinorField hat = tr.forward_field(u);
    SpinorField mul(u.grid());
    op(freq, hat, mul);
    return tr.inverse_field(mul);
}

}  // namespace

SpinorField apply_dirac(const SpinorField& u, const PhysParams& p) {
    return roundtrip(u, [&](const FrequencyTable& f, const SpinorField& h, SpinorField& o) {
        apply_dirac_hat(f, p, h, o);
    });
}

SpinorField project_pm(const SpinorField& u, const PhysParams& p, EnergySign sign) {
    return roundtrip(u, [&](const FrequencyTable& f, const SpinorField& h, SpinorField& o) {
        project_pm_hat(f, p, sign, h, o);
    });
}

SpinorField fw_transform(const SpinorField& u, const PhysParams& p, FwDirection dir) {
    return roundtrip(u, [&](const FrequencyTable& f, const SpinorField& h, SpinorField& o) {
        fw_transform_hat(f, p, dir, h, o);
    });
}

}  // namespace ndlimit
