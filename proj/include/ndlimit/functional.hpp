#pragma once

#include <stdexcept>

#include "ndlimit/dirac.hpp"
#include "ndlimit/field.hpp"
#include "ndlimit/potentials.hpp"

namespace ndlimit {

/// Nonlocal Hartree term  Gamma*(K|u|^kappa) K|u|^(kappa-2) u.
/// The density transform is dealiased inside the convolution; the outer
/// pointwise product is left untouched so the term stays the exact
/// L2-gradient of the Hartree energy.
template <int NC>
Field<NC> hartree_term(const Field<NC>& u, const PotentialSet& pot,
                       const PhysParams& p);

/// Local term  P |u|^(s-2) u, extended by 0 where u vanishes.
template <int NC>
Field<NC> local_term(const Field<NC>& u, const PotentialSet& pot,
                     const PhysParams& p);

/// Both nonlinear quadratures:
///   hartree = int Gamma*(K|u|^k) K|u|^k,   local = int P|u|^s.
struct NonlinearIntegrals {
    double hartree = 0.0;
    double local = 0.0;
};
template <int NC>
NonlinearIntegrals nonlinear_integrals(const Field<NC>& u, const PotentialSet& pot,
                                       const PhysParams& p);

/// Dirac energy  I_c(u) = <u, D_c u> - (1/kappa) int Gamma*(K|u|^k)K|u|^k
///                        - (2/s) int P|u|^s.
double energy_Ic(const SpinorField& u, const PotentialSet& pot, const PhysParams& p);

/// L2 gradient of I_c: 2 (D_c u - hartree_term(u) - local_term(u)).
SpinorField grad_Ic(const SpinorField& u, const PotentialSet& pot, const PhysParams& p);

/// Constraint multiplier omega(u) = 1/2 Re<grad_Ic(u), u>; requires |u|_L2 = 1.
double multiplier_omega(const SpinorField& u, const PotentialSet& pot,
                        const PhysParams& p);

/// Schroedinger energy  E(g) = 1/2 |grad g|^2 - (m/kappa) int Gamma*(K|g|^k)K|g|^k
///                             - (2m/s) int P|g|^s.
double energy_E(const TwoSpinorField& g, const PotentialSet& pot, const PhysParams& p);

/// L2 gradient of E: -Lap g - 2m (hartree_term(g) + local_term(g)).
TwoSpinorField grad_E(const TwoSpinorField& g, const PotentialSet& pot,
                      const PhysParams& p);

/// Fused evaluation used by the solvers: one pass computing the energy and
/// the half-gradient  D_c u - H(u) - P(u)  (= grad_Ic / 2).
class DiracEvaluator {
public:
    DiracEvaluator(const PotentialSet& pot, const PhysParams& p);

    struct Result {
        double energy;
        double kinetic;
        NonlinearIntegrals nl;
        SpinorField half_grad;
    };
    Result evaluate(const SpinorField& u) const;

    const PhysParams& params() const { return p_; }
    const PotentialSet& potentials() const { return pot_; }
    const FrequencyTable& freq() const { return freq_; }
    long evaluations() const { return n_eval_; }

private:
    const PotentialSet& pot_;
    PhysParams p_;
    FrequencyTable freq_;
    mutable long n_eval_ = 0;
};

/// Same for the limit functional: energy plus gradient -Lap g - 2m(H+P).
class NlsEvaluator {
public:
    NlsEvaluator(const PotentialSet& pot, const PhysParams& p);

    struct Result {
        double energy;
        double kinetic;          // 1/2 |grad g|^2
        NonlinearIntegrals nl;
        TwoSpinorField grad;     // full L2 gradient of E
        TwoSpinorField rhs;      // 2m (H(g) + P(g)), the (NSE) right-hand side
    };
    Result evaluate(const TwoSpinorField& g) const;

    const PhysParams& params() const { return p_; }
    const PotentialSet& potentials() const { return pot_; }
    long evaluations() const { return n_eval_; }

private:
    const PotentialSet& pot_;
    PhysParams p_;
    FrequencyTable freq_;
    mutable long n_eval_ = 0;
};

}  // namespace ndlimit
