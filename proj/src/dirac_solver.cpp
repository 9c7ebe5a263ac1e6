#include "ndlimit/dirac_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ndlimit {

namespace {

// Roundoff floor for energy comparisons: quadrature sums over N points
// accumulate O(sqrt(N) eps) relative error.
inline double noise_floor(double energy, std::size_t num_points) {
    return 8.0 * std::numeric_limits<double>::epsilon() *
           std::sqrt(static_cast<double>(num_points)) * (1.0 + std::abs(energy));
}

// Spectral helpers bound to one (grid, params) pair.
struct Ops {
    const Transform& tr;
    FrequencyTable freq;
    PhysParams p;
    std::vector<double> lambda;       // lambda(xi) per mode
    std::vector<double> minv_inner;   // 1 / (2 lambda + 2 mc^2)

    Ops(const GridSpec& g, const PhysParams& params)
        : tr(transform_for(g)), freq(g), p(params) {
        const std::size_t np = g.num_points();
        lambda.resize(np);
        minv_inner.resize(np);
        const double mc2 = p.mc2();
        for (std::size_t i = 0; i < np; ++i) {
            lambda[i] = lambda_xi(freq.xi_sq[i], p);
            minv_inner[i] = 1.0 / (2.0 * lambda[i] + 2.0 * mc2);
        }
    }

    SpinorField project(const SpinorField& f, EnergySign sign) const {
        SpinorField hat = tr.forward_field(f);
        SpinorField out(f.grid());
        project_pm_hat(freq, p, sign, hat, out);
        return tr.inverse_field(out);
    }

    // P_sign(M^-1 f) with a diagonal spectral preconditioner.
    SpinorField precondition(const SpinorField& f, const std::vector<double>& minv,
                             EnergySign sign) const {
        SpinorField hat = tr.forward_field(f);
        for (int c = 0; c < 4; ++c) {
            cplx* h = hat.component(c);
            for (std::size_t i = 0; i < minv.size(); ++i) h[i] *= minv[i];
        }
        SpinorField proj(f.grid());
        project_pm_hat(freq, p, sign, hat, proj);
        return tr.inverse_field(proj);
    }

    SpinorField normalize(SpinorField f) const {
        double n = norm_l2(f);
        if (n <= 0.0) throw std::runtime_error("cannot normalize zero field");
        f *= 1.0 / n;
        return f;
    }
};

// sqrt(|P_-(s)|^2 + |<w, s>|^2): norm of the S_W-tangent part of s.
double tangent_norm_sw(const Ops& ops, const SpinorField& sg, const SpinorField& w) {
    SpinorField sg_minus = ops.project(sg, EnergySign::minus);
    cplx wc = inner_l2(w, sg);
    return std::sqrt(norm_l2_sq(sg_minus) + std::norm(wc));
}

struct InnerState {
    InnerResult res;
    SpinorField half_grad;  // D u - H(u) - P(u) at the returned iterate

    InnerState(const GridSpec& g) : res(g), half_grad(g) {}
};

InnerState inner_maximize_impl(const Ops& ops, DiracEvaluator& ev,
                               const SpinorField& w,
                               const std::optional<SpinorField>& warm_uminus,
                               const MinMaxConfig& cfg) {
    const GridSpec& g = w.grid();
    InnerState st_out(g);
    InnerResult& res = st_out.res;

    SpinorField uminus = warm_uminus ? *warm_uminus : SpinorField(g);
    const double cap_sq = cfg.minus_norm_cap * cfg.minus_norm_cap;
    double nm = norm_l2_sq(uminus);
    if (nm >= cap_sq) {
        uminus *= 0.0;
        nm = 0.0;
    }
    double t = std::sqrt(std::max(1.0 - nm, 0.0));
    SpinorField u = w * t;
    u += uminus;

    auto fe = ev.evaluate(u);
    double E = fe.energy;
    double step = cfg.step0;
    bool refine = false;
    int nit = 0;
    for (; nit < cfg.inner_max_iter; ++nit) {
        double om = real_inner_l2(fe.half_grad, u);
        SpinorField sg = fe.half_grad;
        add_scaled(sg, cplx(-om, 0.0), u);
        res.tangent_norm = tangent_norm_sw(ops, sg, w);
        res.omega = om;
        if (res.tangent_norm < cfg.inner_tol) {
            res.converged = true;
            break;
        }
        // Ascent gradient of I_c(t(u-) w + u-) with respect to u-.
        SpinorField Gm = ops.project(fe.half_grad, EnergySign::minus);
        Gm *= 2.0;
        double rw = 2.0 * real_inner_l2(fe.half_grad, w);
        add_scaled(Gm, cplx(-rw / std::max(t, 1e-12), 0.0), uminus);
        SpinorField d = ops.precondition(Gm, ops.minv_inner, EnergySign::minus);
        double dd = real_inner_l2(Gm, d);
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
                SpinorField um_t = uminus;
                add_scaled(um_t, cplx(trial_step, 0.0), d);
                double nmt = norm_l2_sq(um_t);
                if (nmt > cap_sq) {
                    trial_step *= cfg.backtrack;
                    continue;
                }
                double tt = std::sqrt(1.0 - nmt);
                SpinorField ut = w * tt;
                ut += um_t;
                auto fet = ev.evaluate(ut);
                if (fet.energy >= E + pred) {
                    uminus = std::move(um_t);
                    t = tt;
                    u = std::move(ut);
                    E = fet.energy;
                    fe = std::move(fet);
                    accepted = true;
                    step = trial_step;
                    break;
                }
                trial_step *= cfg.backtrack;
            }
            if (refine) continue;
            if (!accepted) break;
        } else {
            // Fixed-point refinement: certified by tangent-residual decrease;
            // energy increments here sit below the line-search noise floor.
            double trial_step = std::min(step, 1.0);
            SpinorField um_t = uminus;
            add_scaled(um_t, cplx(trial_step, 0.0), d);
            double nmt = norm_l2_sq(um_t);
            if (nmt > cap_sq) {
                res.cap_hit = true;
                break;
            }
            double tt = std::sqrt(1.0 - nmt);
            SpinorField ut = w * tt;
            ut += um_t;
            auto fet = ev.evaluate(ut);
            double omt = real_inner_l2(fet.half_grad, ut);
            SpinorField sgt = fet.half_grad;
            add_scaled(sgt, cplx(-omt, 0.0), ut);
            double rtn = tangent_norm_sw(ops, sgt, w);
            // Accept only when the residual contracts and the energy does not
            // drop below the roundoff floor (this is still a maximization).
            if (rtn < res.tangent_norm &&
                fet.energy >= E - noise_floor(E, g.num_points())) {
                uminus = std::move(um_t);
                t = tt;
                u = std::move(ut);
                E = fet.energy;
                fe = std::move(fet);
            } else {
                step = trial_step * 0.5;
                if (step < 1e-3) break;
            }
        }
        if (norm_l2_sq(uminus) >= 0.999 * cap_sq) {
            res.cap_hit = true;
            break;
        }
    }
    res.u = std::move(u);
    res.u_minus = std::move(uminus);
    res.energy = E;
    res.omega = real_inner_l2(fe.half_grad, res.u);
    res.iterations = nit;
    st_out.half_grad = std::move(fe.half_grad);
    return st_out;
}

}  // namespace

SpinorField initial_guess(const GridSpec& grid, const PotentialSet& pot,
                          const PhysParams& p, double width) {
    if (!(width > 0.0)) throw std::invalid_argument("initial_guess: width must be > 0");
    (void)pot;
    const int n = grid.n();
    TwoSpinorField v(grid);
    std::size_t idx = 0;
    for (int z = 0; z < n; ++z)
        for (int y = 0; y < n; ++y)
            for (int x = 0; x < n; ++x, ++idx) {
                double r = grid.radius(x, y, z);
                v.at(0, idx) = std::exp(-r * r / (2.0 * width * width));
            }
    SpinorField four = embed_upper(v);
    SpinorField lifted = fw_transform(four, p, FwDirection::inverse);
    SpinorField wplus = project_pm(lifted, p, EnergySign::plus);
    double nn = norm_l2(wplus);
    if (nn <= 0.0) throw std::runtime_error("initial_guess: degenerate grid");
    wplus *= 1.0 / nn;
    return wplus;
}

InnerResult inner_maximize(const SpinorField& w,
                           const std::optional<SpinorField>& warm_uminus,
                           const MinMaxConfig& cfg, const PotentialSet& pot,
                           const PhysParams& p) {
    cfg.validate();
    Ops ops(w.grid(), p);
    DiracEvaluator ev(pot, p);
    return inner_maximize_impl(ops, ev, w, warm_uminus, cfg).res;
}

double residual(const SpinorField& u, double omega, const PotentialSet& pot,
                const PhysParams& p) {
    SpinorField r = apply_dirac(u, p);
    r -= hartree_term(u, pot, p);
    r -= local_term(u, pot, p);
    add_scaled(r, cplx(-omega, 0.0), u);
    return norm_l2(r);
}

DiracSolveResult outer_minimize(const SpinorField& w0, const MinMaxConfig& cfg,
                                const PotentialSet& pot, const PhysParams& p) {
    cfg.validate();
    p.validate();
    const GridSpec& g = w0.grid();
    Ops ops(g, p);
    DiracEvaluator ev(pot, p);
    const double mc2 = p.mc2();

    DiracSolveResult res(g);
    SpinorField w = ops.normalize(ops.project(w0, EnergySign::plus));

    auto inner = [&](const SpinorField& wcur, const std::optional<SpinorField>& warm) {
        InnerState st = inner_maximize_impl(ops, ev, wcur, warm, cfg);
        res.inner_iterations += st.res.iterations;
        if (!st.res.monotone) res.monotone = false;
        if (st.res.cap_hit) res.cap_hit = true;
        return st;
    };

    auto full_residual = [&](const InnerState& st) {
        SpinorField r = st.half_grad;
        add_scaled(r, cplx(-st.res.omega, 0.0), st.res.u);
        return norm_l2(r);
    };

    InnerState cur = inner(w, std::nullopt);
    double E = cur.res.energy;
    double rs = full_residual(cur);

    // Preconditioner 1 / (2 max(lambda - omega, floor)) refreshed per iterate.
    std::vector<double> minv_outer(g.num_points());
    auto refresh_minv = [&](double om) {
        const double floor_v = std::max(1e-4 * mc2, 1e-8);
        for (std::size_t i = 0; i < minv_outer.size(); ++i)
            minv_outer[i] = 1.0 / (2.0 * std::max(ops.lambda[i] - om, floor_v));
    };

    double ostep = cfg.step0;
    bool orefine = false;
    bool have_prev = false;
    SpinorField d_prev(g), r_prev(g);
    double gmg_prev = 0.0;
    int outer_it = 0;

    for (; outer_it < cfg.outer_max_iter; ++outer_it) {
        res.trace.push_back({outer_it, E, rs, cur.res.omega, norm_l2(cur.res.u_minus)});
        if (rs < cfg.outer_tol) {
            res.converged = true;
            break;
        }
        if (cur.res.cap_hit) break;

        // Tangent gradient on the E_c^+ sphere at w.
        SpinorField pg = ops.project(cur.half_grad, EnergySign::plus);
        SpinorField r = pg;
        add_scaled(r, cplx(-real_inner_l2(pg, w), 0.0), w);
        refresh_minv(cur.res.omega);
        SpinorField Mr = ops.precondition(r, minv_outer, EnergySign::plus);
        add_scaled(Mr, cplx(-real_inner_l2(Mr, w), 0.0), w);
        double gmg = real_inner_l2(r, Mr);

        SpinorField d(g);
        if (!have_prev || orefine || outer_it % 25 == 0) {
            d = Mr;
        } else {
            double beta_pr = std::max(0.0, (gmg - real_inner_l2(r_prev, Mr)) / gmg_prev);
            d = Mr;
            add_scaled(d, cplx(beta_pr, 0.0), d_prev);
            add_scaled(d, cplx(-real_inner_l2(d, w), 0.0), w);
            if (real_inner_l2(r, d) <= 0.0) d = Mr;
        }
        d_prev = d;
        r_prev = r;
        gmg_prev = gmg;
        have_prev = true;
        double dd = real_inner_l2(r, d);
        if (dd <= 0.0) break;

        if (!orefine) {
            double trial_step = std::min(ostep / cfg.backtrack, 4.0);
            bool accepted = false;
            while (true) {
                double pred = cfg.armijo * trial_step * dd;
                if (pred < noise_floor(E, g.num_points())) {
                    orefine = true;
                    break;
                }
                SpinorField wt = w;
                add_scaled(wt, cplx(-trial_step, 0.0), d);
                wt = ops.normalize(ops.project(wt, EnergySign::plus));
                InnerState trial = inner(wt, cur.res.u_minus);
                if (trial.res.energy <= E - pred) {
                    w = std::move(wt);
                    cur = std::move(trial);
                    E = cur.res.energy;
                    rs = full_residual(cur);
                    accepted = true;
                    ostep = trial_step;
                    break;
                }
                trial_step *= cfg.backtrack;
                if (trial_step < 1e-14) break;
            }
            if (orefine) continue;
            if (!accepted) break;
        } else {
            double trial_step = std::min(ostep, 1.0);
            SpinorField wt = w;
            add_scaled(wt, cplx(-trial_step, 0.0), d);
            wt = ops.normalize(ops.project(wt, EnergySign::plus));
            InnerState trial = inner(wt, cur.res.u_minus);
            double rst = full_residual(trial);
            if (rst < rs && trial.res.energy <= E + noise_floor(E, g.num_points())) {
                w = std::move(wt);
                cur = std::move(trial);
                E = cur.res.energy;
                rs = rst;
            } else {
                ostep = trial_step * 0.5;
                if (ostep < 1e-3) break;
            }
        }
    }

    // Phase gauge: make <u, w0> real nonnegative.
    SpinorField u = cur.res.u;
    cplx z = inner_l2(u, w0);
    if (std::abs(z) > 0.0) u *= std::conj(z) / std::abs(z);

    res.u = std::move(u);
    res.omega = cur.res.omega;
    res.energy = E;
    res.residual = rs;
    res.outer_iterations = outer_it;
    res.evaluations = ev.evaluations();
    res.converged = rs < cfg.outer_tol;
    return res;
}

std::vector<DiracSolveResult> continuation_sweep(const std::vector<double>& c_values,
                                                 const MinMaxConfig& cfg,
                                                 const PotentialSet& pot,
                                                 const PhysParams& p) {
    if (c_values.empty())
        throw std::invalid_argument("continuation_sweep: need at least one c");
    for (std::size_t i = 1; i < c_values.size(); ++i)
        if (!(c_values[i] > c_values[i - 1]))
            throw std::invalid_argument("continuation_sweep: c values must ascend");

    std::vector<DiracSolveResult> out;
    const GridSpec& g = pot.grid;
    std::optional<TwoSpinorField> prev_upper;
    for (double c : c_values) {
        PhysParams pc = p.with_c(c);
        SpinorField w0(g);
        if (prev_upper && cfg.warm_start) {
            // Re-lift the previous upper spinor through the new FW transform:
            // E_c^+ depends on c, so the seed must be re-projected.
            SpinorField four = embed_upper(*prev_upper);
            SpinorField lifted = fw_transform(four, pc, FwDirection::inverse);
            SpinorField wp = project_pm(lifted, pc, EnergySign::plus);
            double nn = norm_l2(wp);
            if (nn > 0.0) {
                wp *= 1.0 / nn;
                w0 = std::move(wp);
            } else {
                w0 = initial_guess(g, pot, pc, cfg.guess_width);
            }
        } else {
            w0 = initial_guess(g, pot, pc, cfg.guess_width);
        }
        DiracSolveResult r = outer_minimize(w0, cfg, pot, pc);
        if (r.converged) prev_upper = upper_spinor(r.u);
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace ndlimit
