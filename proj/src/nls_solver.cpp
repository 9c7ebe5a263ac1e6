#include "ndlimit/nls_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ndlimit/limit.hpp"

namespace ndlimit {

namespace {
// Roundoff floor for energy comparisons: quadrature sums over N points
// accumulate O(sqrt(N) eps) relative error.
inline double noise_floor(double energy, std::size_t num_points) {
    return 8.0 * std::numeric_limits<double>::epsilon() *
           std::sqrt(static_cast<double>(num_points)) * (1.0 + std::abs(energy));
}
}

TwoSpinorField gaussian_two_spinor(const GridSpec& grid, double width) {
    if (!(width > 0.0)) throw std::invalid_argument("gaussian width must be > 0");
    TwoSpinorField v(grid);
    const int n = grid.n();
    std::size_t idx = 0;
    for (int z = 0; z < n; ++z)
        for (int y = 0; y < n; ++y)
            for (int x = 0; x < n; ++x, ++idx) {
                double r = grid.radius(x, y, z);
                v.at(0, idx) = std::exp(-r * r / (2.0 * width * width));
            }
    double nn = norm_l2(v);
    v *= 1.0 / nn;
    return v;
}

NlsResult nls_ground_state(const TwoSpinorField& g0, const NlsConfig& cfg,
                           const PotentialSet& pot, const PhysParams& p) {
    cfg.validate();
    const GridSpec& g = g0.grid();
    const Transform& tr = transform_for(g);
    FrequencyTable freq(g);
    NlsEvaluator ev(pot, p);

    NlsResult res(g);
    TwoSpinorField v = g0;
    {
        double nn = norm_l2(v);
        if (std::abs(nn - 1.0) > 1e-8)
            throw std::invalid_argument("nls_ground_state: |g0|_L2 must be 1");
        v *= 1.0 / nn;
    }

    auto precondition = [&](const TwoSpinorField& f, double nu_shift) {
        TwoSpinorField hat = tr.forward_field(f);
        const double shift = std::max(nu_shift, 0.02);
        for (int c = 0; c < 2; ++c) {
            cplx* h = hat.component(c);
            for (std::size_t i = 0; i < f.points(); ++i)
                h[i] /= (freq.xi_sq[i] + shift);
        }
        return tr.inverse_field(hat);
    };

    auto fe = ev.evaluate(v);
    double E = fe.energy;
    double nu = -real_inner_l2(fe.grad, v);
    double step = cfg.step0;
    bool refine = false;
    bool have_prev = false;
    TwoSpinorField d_prev(g), r_prev(g);
    double gmg_prev = 0.0;
    int it = 0;

    auto tangent = [&](const NlsEvaluator::Result& f, const TwoSpinorField& vv) {
        TwoSpinorField r = f.grad;
        add_scaled(r, cplx(-real_inner_l2(f.grad, vv), 0.0), vv);
        return r;
    };

    for (; it < cfg.max_iter; ++it) {
        TwoSpinorField r = tangent(fe, v);
        double rn = norm_l2(r);
        res.trace.push_back({it, E, rn, nu});
        if (rn < cfg.tol) {
            res.converged = true;
            break;
        }
        TwoSpinorField Mr = precondition(r, nu);
        add_scaled(Mr, cplx(-real_inner_l2(Mr, v), 0.0), v);
        double gmg = real_inner_l2(r, Mr);
        TwoSpinorField d(g);
        if (!have_prev || refine || it % 50 == 0) {
            d = Mr;
        } else {
            double beta_pr = std::max(0.0, (gmg - real_inner_l2(r_prev, Mr)) / gmg_prev);
            d = Mr;
            add_scaled(d, cplx(beta_pr, 0.0), d_prev);
            add_scaled(d, cplx(-real_inner_l2(d, v), 0.0), v);
            if (real_inner_l2(r, d) <= 0.0) d = Mr;
        }
        d_prev = d;
        r_prev = r;
        gmg_prev = gmg;
        have_prev = true;
        double dd = real_inner_l2(r, d);
        if (dd <= 0.0) break;

        if (!refine) {
            double trial_step = std::min(step / cfg.backtrack, 4.0);
            bool accepted = false;
            while (true) {
                double pred = cfg.armijo * trial_step * dd;
                if (pred < noise_floor(E, g.num_points())) {
                    refine = true;
                    break;
                }
                TwoSpinorField vt = v;
                add_scaled(vt, cplx(-trial_step, 0.0), d);
                double nn = norm_l2(vt);
                if (nn <= 0.0) {
                    trial_step *= cfg.backtrack;
                    continue;
                }
                vt *= 1.0 / nn;
                auto fet = ev.evaluate(vt);
                if (fet.energy <= E - pred) {
                    v = std::move(vt);
                    E = fet.energy;
                    fe = std::move(fet);
                    nu = -real_inner_l2(fe.grad, v);
                    accepted = true;
                    step = trial_step;
                    break;
                }
                trial_step *= cfg.backtrack;
                if (trial_step < 1e-14) break;
            }
            if (refine) continue;
            if (!accepted) break;
        } else {
            double trial_step = std::min(step, 1.0);
            TwoSpinorField vt = v;
            add_scaled(vt, cplx(-trial_step, 0.0), d);
            double nn = norm_l2(vt);
            if (nn <= 0.0) break;
            vt *= 1.0 / nn;
            auto fet = ev.evaluate(vt);
            TwoSpinorField rt = tangent(fet, vt);
            double rtn = norm_l2(rt);
            if (rtn < rn && fet.energy <= E + noise_floor(E, g.num_points())) {
                v = std::move(vt);
                E = fet.energy;
                fe = std::move(fet);
                nu = -real_inner_l2(fe.grad, v);
            } else {
                step = trial_step * 0.5;
                if (step < 1e-3) break;
            }
        }
    }

    // nu from the stationarity relation; residual of (NSE).
    nu = real_inner_l2(fe.rhs, v) - 2.0 * fe.kinetic;
    TwoSpinorField resid_f = fe.grad;
    add_scaled(resid_f, cplx(nu, 0.0), v);
    res.h = std::move(v);
    res.nu = nu;
    res.energy = E;
    res.residual = norm_l2(resid_f);
    res.iterations = it;
    res.evaluations = ev.evaluations();
    res.converged = res.residual < cfg.tol;
    return res;
}

MultistartNls nls_ground_state_multistart(const NlsConfig& cfg, const PotentialSet& pot,
                                          const PhysParams& p) {
    const GridSpec& g = pot.grid;
    NlsResult ra = nls_ground_state(gaussian_two_spinor(g, cfg.multistart_width_a),
                                    cfg, pot, p);
    NlsResult rb = nls_ground_state(gaussian_two_spinor(g, cfg.multistart_width_b),
                                    cfg, pot, p);
    MultistartNls out(g);
    out.energy_difference = std::abs(ra.energy - rb.energy);

    // Compare |h| profiles after translation alignment.
    AlignResult al = align_fields(ra.h, rb.h);
    std::vector<double> ma = modulus(al.aligned);
    std::vector<double> mb = modulus(rb.h);
    double dmax = 0.0;
    for (std::size_t i = 0; i < ma.size(); ++i)
        dmax = std::max(dmax, std::abs(ma[i] - mb[i]));
    out.profile_difference = dmax;
    out.agreed = out.energy_difference < 1e-6 && dmax < 1e-4;
    out.best = (ra.energy <= rb.energy) ? std::move(ra) : std::move(rb);
    return out;
}

TwoSpinorField rescale_field(const TwoSpinorField& v, double epsilon) {
    if (!(epsilon > 0.0 && epsilon <= 1.0))
        throw std::invalid_argument("rescale_field: epsilon must be in (0, 1]");
    const GridSpec& g = v.grid();
    const int n = g.n();
    const double L = g.half_width();

    // Mass outside the shrunken box [-eps L, eps L)^3 would be folded in by
    // the rescaling; reject if it is non-negligible.
    double mass_out = 0.0, mass_tot = 0.0;
    {
        std::vector<double> m2 = modulus_sq(v);
        std::size_t idx = 0;
        for (int z = 0; z < n; ++z)
            for (int y = 0; y < n; ++y)
                for (int x = 0; x < n; ++x, ++idx) {
                    mass_tot += m2[idx];
                    double ax = std::abs(g.coord(x)), ay = std::abs(g.coord(y)),
                           az = std::abs(g.coord(z));
                    if (std::max({ax, ay, az}) > epsilon * L) mass_out += m2[idx];
                }
    }
    if (mass_out > 1e-6 * mass_tot)
        throw std::invalid_argument(
            "rescale_field: field support exceeds the box after rescaling");

    if (epsilon == 1.0) return v;

    const Transform& tr = transform_for(g);
    TwoSpinorField hat = tr.forward_field(v);

    // Per-axis evaluation matrix  E[j*n + m] = exp(i eps xi_m x_j).
    std::vector<cplx> Emat(static_cast<std::size_t>(n) * n);
    for (int j = 0; j < n; ++j) {
        double xj = g.coord(j);
        for (int m = 0; m < n; ++m) {
            double phase = epsilon * g.xi(m) * xj;
            Emat[static_cast<std::size_t>(j) * n + m] = cplx(std::cos(phase), std::sin(phase));
        }
    }

    auto contract_axis = [&](std::vector<cplx>& a, int axis) {
        // a indexed as (z, y, x): contract the chosen axis against Emat.
        std::vector<cplx> out(a.size(), cplx(0.0, 0.0));
        const std::size_t nn = static_cast<std::size_t>(n);
        if (axis == 0) {  // x fastest
            for (std::size_t zy = 0; zy < nn * nn; ++zy) {
                const cplx* src = a.data() + zy * nn;
                cplx* dst = out.data() + zy * nn;
                for (int m = 0; m < n; ++m) {
                    cplx cm = src[m];
                    if (cm == cplx(0.0, 0.0)) continue;
                    const cplx* row = Emat.data();  // E[j,m] stride n
                    for (int j = 0; j < n; ++j) dst[j] += row[static_cast<std::size_t>(j) * n + m] * cm;
                }
            }
        } else if (axis == 1) {  // y stride n
            for (std::size_t z = 0; z < nn; ++z)
                for (std::size_t x = 0; x < nn; ++x) {
                    const cplx* src = a.data() + z * nn * nn + x;
                    cplx* dst = out.data() + z * nn * nn + x;
                    for (int m = 0; m < n; ++m) {
                        cplx cm = src[static_cast<std::size_t>(m) * nn];
                        if (cm == cplx(0.0, 0.0)) continue;
                        for (int j = 0; j < n; ++j)
                            dst[static_cast<std::size_t>(j) * nn] +=
                                Emat[static_cast<std::size_t>(j) * n + m] * cm;
                    }
                }
        } else {  // z stride n^2
            for (std::size_t y = 0; y < nn; ++y)
                for (std::size_t x = 0; x < nn; ++x) {
                    const cplx* src = a.data() + y * nn + x;
                    cplx* dst = out.data() + y * nn + x;
                    for (int m = 0; m < n; ++m) {
                        cplx cm = src[static_cast<std::size_t>(m) * nn * nn];
                        if (cm == cplx(0.0, 0.0)) continue;
                        for (int j = 0; j < n; ++j)
                            dst[static_cast<std::size_t>(j) * nn * nn] +=
                                Emat[static_cast<std::size_t>(j) * n + m] * cm;
                    }
                }
        }
        a.swap(out);
    };

    TwoSpinorField out(g);
    const double amp = std::pow(epsilon, 1.5);
    for (int c = 0; c < 2; ++c) {
        std::vector<cplx> work(hat.component(c), hat.component(c) + g.num_points());
        contract_axis(work, 0);
        contract_axis(work, 1);
        contract_axis(work, 2);
        cplx* o = out.component(c);
        for (std::size_t i = 0; i < work.size(); ++i) o[i] = amp * work[i];
    }
    return out;
}

double scaling_trial_energy(const TwoSpinorField& v, double epsilon,
                            const PotentialSet& pot, const PhysParams& p) {
    TwoSpinorField ve = rescale_field(v, epsilon);
    return energy_E(ve, pot, p);
}

}  // namespace ndlimit
