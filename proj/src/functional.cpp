#include "ndlimit/functional.hpp"

#include <cmath>

namespace ndlimit {

namespace {

// rho = K |u|^kappa on the grid.
template <int NC>
std::vector<double> hartree_density(const Field<NC>& u, const PotentialSet& pot,
                                    const PhysParams& p) {
    std::vector<double> rho = modulus_sq(u);
    const double half_kappa = p.kappa / 2.0;
    for (std::size_t i = 0; i < rho.size(); ++i)
        rho[i] = pot.K[i] * std::pow(rho[i], half_kappa);
    return rho;
}

}  // namespace

template <int NC>
Field<NC> hartree_term(const Field<NC>& u, const PotentialSet& pot,
                       const PhysParams& p) {
    if (u.grid() != pot.grid) throw std::invalid_argument("hartree_term: grid mismatch");
    std::vector<double> rho = hartree_density(u, pot, p);
    std::vector<double> w = convolve_gamma(pot, rho);
    std::vector<double> m2 = modulus_sq(u);
    Field<NC> out(u.grid());
    const double e2 = (p.kappa - 2.0) / 2.0;
    for (std::size_t i = 0; i < m2.size(); ++i) {
        double amp = (e2 == 0.0) ? 1.0 : (m2[i] > 0.0 ? std::pow(m2[i], e2) : 0.0);
        double f = w[i] * pot.K[i] * amp;
        for (int c = 0; c < NC; ++c) out.at(c, i) = f * u.at(c, i);
    }
    return out;
}

template <int NC>
Field<NC> local_term(const Field<NC>& u, const PotentialSet& pot,
                     const PhysParams& p) {
    if (u.grid() != pot.grid) throw std::invalid_argument("local_term: grid mismatch");
    std::vector<double> m2 = modulus_sq(u);
    Field<NC> out(u.grid());
    const double e2 = (p.s - 2.0) / 2.0;
    for (std::size_t i = 0; i < m2.size(); ++i) {
        double amp = (e2 == 0.0) ? 1.0 : (m2[i] > 0.0 ? std::pow(m2[i], e2) : 0.0);
        double f = pot.P[i] * amp;
        for (int c = 0; c < NC; ++c) out.at(c, i) = f * u.at(c, i);
    }
    return out;
}

template <int NC>
NonlinearIntegrals nonlinear_integrals(const Field<NC>& u, const PotentialSet& pot,
                                       const PhysParams& p) {
    std::vector<double> rho = hartree_density(u, pot, p);
    std::vector<double> w = convolve_gamma(pot, rho);
    std::vector<double> m2 = modulus_sq(u);
    NonlinearIntegrals out;
    const double half_s = p.s / 2.0;
    for (std::size_t i = 0; i < m2.size(); ++i) {
        out.hartree += w[i] * rho[i];
        out.local += pot.P[i] * std::pow(m2[i], half_s);
    }
    const double dv = u.grid().cell_volume();
    out.hartree *= dv;
    out.local *= dv;
    return out;
}

template Field<2> hartree_term<2>(const Field<2>&, const PotentialSet&, const PhysParams&);
template Field<4> hartree_term<4>(const Field<4>&, const PotentialSet&, const PhysParams&);
template Field<2> local_term<2>(const Field<2>&, const PotentialSet&, const PhysParams&);
template Field<4> local_term<4>(const Field<4>&, const PotentialSet&, const PhysParams&);
template NonlinearIntegrals nonlinear_integrals<2>(const Field<2>&, const PotentialSet&,
                                                   const PhysParams&);
template NonlinearIntegrals nonlinear_integrals<4>(const Field<4>&, const PotentialSet&,
                                                   const PhysParams&);

double energy_Ic(const SpinorField& u, const PotentialSet& pot, const PhysParams& p) {
    SpinorField Du = apply_dirac(u, p);
    double kin = real_inner_l2(u, Du);
    NonlinearIntegrals nl = nonlinear_integrals(u, pot, p);
    return kin - nl.hartree / p.kappa - 2.0 / p.s * nl.local;
}

SpinorField grad_Ic(const SpinorField& u, const PotentialSet& pot, const PhysParams& p) {
    SpinorField g = apply_dirac(u, p);
    g -= hartree_term(u, pot, p);
    g -= local_term(u, pot, p);
    g *= 2.0;
    return g;
}

double multiplier_omega(const SpinorField& u, const PotentialSet& pot,
                        const PhysParams& p) {
    double nrm = norm_l2(u);
    if (std::abs(nrm - 1.0) > 1e-8)
        throw std::invalid_argument("multiplier_omega: |u|_L2 must be 1 within 1e-8");
    SpinorField g = grad_Ic(u, pot, p);
    return 0.5 * real_inner_l2(g, u);
}

double energy_E(const TwoSpinorField& g, const PotentialSet& pot, const PhysParams& p) {
    const Transform& tr = transform_for(g.grid());
    FrequencyTable freq(g.grid());
    TwoSpinorField hat = tr.forward_field(g);
    double kin = 0.0;
    for (int c = 0; c < 2; ++c) {
        const cplx* h = hat.component(c);
        for (std::size_t i = 0; i < g.points(); ++i) kin += freq.xi_sq[i] * std::norm(h[i]);
    }
    kin *= 0.5 * g.grid().box_volume();
    NonlinearIntegrals nl = nonlinear_integrals(g, pot, p);
    return kin - p.m / p.kappa * nl.hartree - 2.0 * p.m / p.s * nl.local;
}

TwoSpinorField grad_E(const TwoSpinorField& g, const PotentialSet& pot,
                      const PhysParams& p) {
    const Transform& tr = transform_for(g.grid());
    FrequencyTable freq(g.grid());
    TwoSpinorField hat = tr.forward_field(g);
    for (int c = 0; c < 2; ++c) {
        cplx* h = hat.component(c);
        for (std::size_t i = 0; i < g.points(); ++i) h[i] *= freq.xi_sq[i];
    }
    TwoSpinorField out = tr.inverse_field(hat);  // -Lap g
    TwoSpinorField nl = hartree_term(g, pot, p);
    nl += local_term(g, pot, p);
    add_scaled(out, cplx(-2.0 * p.m, 0.0), nl);
    return out;
}

DiracEvaluator::DiracEvaluator(const PotentialSet& pot, const PhysParams& p)
    : pot_(pot), p_(p), freq_(pot.grid) {}

DiracEvaluator::Result DiracEvaluator::evaluate(const SpinorField& u) const {
    ++n_eval_;
    const Transform& tr = transform_for(u.grid());
    SpinorField hat = tr.forward_field(u);
    SpinorField Dhat(u.grid());
    apply_dirac_hat(freq_, p_, hat, Dhat);
    SpinorField Du = tr.inverse_field(Dhat);
    double kin = real_inner_l2(u, Du);

    std::vector<double> m2 = modulus_sq(u);
    std::vector<double> rho(m2.size());
    const double half_kappa = p_.kappa / 2.0;
    for (std::size_t i = 0; i < m2.size(); ++i)
        rho[i] = pot_.K[i] * std::pow(m2[i], half_kappa);
    std::vector<double> w = convolve_gamma(pot_, rho);

    NonlinearIntegrals nl;
    const double half_s = p_.s / 2.0;
    for (std::size_t i = 0; i < m2.size(); ++i) {
        nl.hartree += w[i] * rho[i];
        nl.local += pot_.P[i] * std::pow(m2[i], half_s);
    }
    const double dv = u.grid().cell_volume();
    nl.hartree *= dv;
    nl.local *= dv;

    Result res{0.0, kin, nl, std::move(Du)};
    res.energy = kin - nl.hartree / p_.kappa - 2.0 / p_.s * nl.local;
    // half_grad = D u - H(u) - P(u), assembled pointwise.
    const double e_h = (p_.kappa - 2.0) / 2.0;
    const double e_l = (p_.s - 2.0) / 2.0;
    for (std::size_t i = 0; i < m2.size(); ++i) {
        double amp_h = (e_h == 0.0) ? 1.0 : (m2[i] > 0.0 ? std::pow(m2[i], e_h) : 0.0);
        double amp_l = (e_l == 0.0) ? 1.0 : (m2[i] > 0.0 ? std::pow(m2[i], e_l) : 0.0);
        double f = w[i] * pot_.K[i] * amp_h + pot_.P[i] * amp_l;
        for (int c = 0; c < 4; ++c) res.half_grad.at(c, i) -= f * u.at(c, i);
    }
    return res;
}

NlsEvaluator::NlsEvaluator(const PotentialSet& pot, const PhysParams& p)
    : pot_(pot), p_(p), freq_(pot.grid) {}

NlsEvaluator::Result NlsEvaluator::evaluate(const TwoSpinorField& g) const {
    ++n_eval_;
    const Transform& tr = transform_for(g.grid());
    TwoSpinorField hat = tr.forward_field(g);
    double kin = 0.0;
    for (int c = 0; c < 2; ++c) {
        cplx* h = hat.component(c);
        for (std::size_t i = 0; i < g.points(); ++i) {
            kin += freq_.xi_sq[i] * std::norm(h[i]);
            h[i] *= freq_.xi_sq[i];
        }
    }
    kin *= 0.5 * g.grid().box_volume();
    TwoSpinorField neg_lap = tr.inverse_field(hat);

    std::vector<double> m2 = modulus_sq(g);
    std::vector<double> rho(m2.size());
    const double half_kappa = p_.kappa / 2.0;
    for (std::size_t i = 0; i < m2.size(); ++i)
        rho[i] = pot_.K[i] * std::pow(m2[i], half_kappa);
    std::vector<double> w = convolve_gamma(pot_, rho);

    NonlinearIntegrals nl;
    const double half_s = p_.s / 2.0;
    for (std::size_t i = 0; i < m2.size(); ++i) {
        nl.hartree += w[i] * rho[i];
        nl.local += pot_.P[i] * std::pow(m2[i], half_s);
    }
    const double dv = g.grid().cell_volume();
    nl.hartree *= dv;
    nl.local *= dv;

    Result res{0.0, kin, nl, TwoSpinorField(g.grid()), TwoSpinorField(g.grid())};
    res.energy = kin - p_.m / p_.kappa * nl.hartree - 2.0 * p_.m / p_.s * nl.local;
    const double e_h = (p_.kappa - 2.0) / 2.0;
    const double e_l = (p_.s - 2.0) / 2.0;
    const double two_m = 2.0 * p_.m;
    for (std::size_t i = 0; i < m2.size(); ++i) {
        double amp_h = (e_h == 0.0) ? 1.0 : (m2[i] > 0.0 ? std::pow(m2[i], e_h) : 0.0);
        double amp_l = (e_l == 0.0) ? 1.0 : (m2[i] > 0.0 ? std::pow(m2[i], e_l) : 0.0);
        double f = two_m * (w[i] * pot_.K[i] * amp_h + pot_.P[i] * amp_l);
        for (int c = 0; c < 2; ++c) {
            cplx r = f * g.at(c, i);
            res.rhs.at(c, i) = r;
            res.grad.at(c, i) = neg_lap.at(c, i) - r;
        }
    }
    return res;
}

}  // namespace ndlimit
