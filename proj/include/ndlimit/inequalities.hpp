#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ndlimit/dirac.hpp"
#include "ndlimit/functional.hpp"
#include "ndlimit/potentials.hpp"

namespace ndlimit {

/// Deterministic standard-normal generator (mt19937_64 + Box-Muller) so that
/// sampled fields are bit-identical for a given seed on one platform.
class GaussianRng {
public:
    explicit GaussianRng(std::uint64_t seed) : eng_(seed) {}
    double normal();
    cplx complex_normal() { double re = normal(), im = normal(); return {re, im}; }

private:
    double uniform01();
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// Band-limited random field: i.i.d. standard complex Gaussian Fourier
/// coefficients on modes with |k| <= cutoff_fraction * n/2 per axis, zero
/// above. Deterministic in seed.
template <int NC>
Field<NC> random_field(std::uint64_t seed, const GridSpec& grid, double cutoff_fraction);

struct RatioSample {
    std::uint64_t seed = 0;
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
};

/// int P|u|^s  vs  |(-Lap)^(1/4) u|^(3s-6) |u|^(6-2s); s in [2, 3].
std::optional<RatioSample> check_gn(const SpinorField& u, double s,
                                    const PotentialSet& pot);

/// int Gamma*(K|u|^k) K|u|^k  vs  |(-Lap)^(1/4) u|^2 |u|^(2k-2).
std::optional<RatioSample> check_hartree_bound(const SpinorField& u,
                                               const PotentialSet& pot,
                                               const PhysParams& p);

/// int Gamma*(K|u|^k) K|u|^(k-2) |v||w|  vs  |u|_2^(2k-3) |u|_3 |v|_2 |w|_3.
std::optional<RatioSample> check_trilinear(const SpinorField& u, const SpinorField& v,
                                           const SpinorField& w, const PotentialSet& pot,
                                           const PhysParams& p);

/// Local Lipschitz bound of F(u) = Gamma*(K|u|^k) K|u|^(k-1) from H^(1/2)
/// into L^p, p in [2, 3].
std::optional<RatioSample> check_lipschitz(const SpinorField& u1, const SpinorField& u2,
                                           double p_exp, const PotentialSet& pot,
                                           const PhysParams& p);

/// The scalar field F(u); exposed for the Lipschitz check's unit tests.
std::vector<double> hartree_map(const SpinorField& u, const PotentialSet& pot,
                                const PhysParams& p);

struct SplittingSample {
    std::uint64_t seed = 0;
    double lhs = 0.0;       // int P|u|^s
    double rhs_main = 0.0;  // int P|w|^s
    double rhs_l2 = 0.0;    // |u^-|_2^2 |w|_{H1/2}^2
    double rhs_h12 = 0.0;   // |u^-|_{H1/2}^2
    double feasible_c = 0.0;        // sup of C keeping the inequality valid
    bool unconstrained = false;     // rhs_main - rhs_l2 - rhs_h12 <= 0
};

/// Splitting bound with w = P+u/|P+u| and u- = P-u; requires |u|_L2 = 1 and
/// P+u != 0 (rejected otherwise).
std::optional<SplittingSample> check_splitting(const SpinorField& u,
                                               const PotentialSet& pot,
                                               const PhysParams& p);

struct CheckReport {
    std::string name;
    int samples = 0;          // N (the reference sample count)
    int rejected = 0;
    double max_ratio = 0.0;   // over N samples
    double max_ratio_2n = 0.0;
    double stability_ratio = 0.0;  // max over 2N / max over N
    double homogeneity_dev = 0.0;  // worst ratio deviation under rescaling
    double min_feasible_c = 0.0;   // splitting only
    bool pass = false;
};

struct SuiteConfig {
    int samples = 500;
    double cutoff_fraction = 0.5;
    std::uint64_t seed = 12345;
    double stability_factor = 1.10;
    double homogeneity_tol = 1e-10;
    double s_exp = 2.5;      // exponent for the GN check
    double p_exp = 2.0;      // L^p exponent for the Lipschitz check
    int workers = 1;
};

/// Runs every check over 2N seeded samples; pass requires the exact
/// homogeneity invariances and the sup-stability criterion
/// max(2N) <= stability_factor * max(N).
std::vector<CheckReport> run_inequality_suite(const SuiteConfig& scfg,
                                              const GridSpec& grid,
                                              const PotentialSet& pot,
                                              const PhysParams& p);

}  // namespace ndlimit
