#include "ndlimit/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

namespace ndlimit {

double GaussianRng::uniform01() {
    // 53-bit mantissa from the top bits; identical across platforms.
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
}

double GaussianRng::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u1 = uniform01(), u2 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    double mag = std::sqrt(-2.0 * std::log(u1));
    double ang = 2.0 * M_PI * u2;
    spare_ = mag * std::sin(ang);
    have_spare_ = true;
    return mag * std::cos(ang);
}

template <int NC>
Field<NC> random_field(std::uint64_t seed, const GridSpec& grid, double cutoff_fraction) {
    if (!(cutoff_fraction > 0.0 && cutoff_fraction <= 2.0 / 3.0))
        throw std::invalid_argument("random_field: cutoff_fraction must be in (0, 2/3]");
    GaussianRng rng(seed);
    const int n = grid.n();
    const double kmax = cutoff_fraction * (n / 2.0);
    Field<NC> hat(grid);
    for (int c = 0; c < NC; ++c) {
        cplx* h = hat.component(c);
        std::size_t idx = 0;
        for (int z = 0; z < n; ++z)
            for (int y = 0; y < n; ++y)
                for (int x = 0; x < n; ++x, ++idx) {
                    if (std::abs(grid.freq_index(x)) <= kmax &&
                        std::abs(grid.freq_index(y)) <= kmax &&
                        std::abs(grid.freq_index(z)) <= kmax)
                        h[idx] = rng.complex_normal();
                }
    }
    return transform_for(grid).inverse_field(hat);
}

template Field<2> random_field<2>(std::uint64_t, const GridSpec&, double);
template Field<4> random_field<4>(std::uint64_t, const GridSpec&, double);

namespace {

double quadrature_p_modulus_pow(const std::vector<double>& P,
                                const std::vector<double>& m2, double pow_half,
                                double dv) {
    double acc = 0.0;
    for (std::size_t i = 0; i < m2.size(); ++i)
        acc += P[i] * std::pow(m2[i], pow_half);
    return acc * dv;
}

}  // namespace

std::optional<RatioSample> check_gn(const SpinorField& u, double s,
                                    const PotentialSet& pot) {
    if (!(s >= 2.0 && s <= 3.0))
        throw std::invalid_argument("check_gn: s must be in [2, 3]");
    double l2 = norm_l2(u);
    if (l2 == 0.0) return std::nullopt;
    std::vector<double> m2 = modulus_sq(u);
    double lhs = quadrature_p_modulus_pow(pot.P, m2, s / 2.0, u.grid().cell_volume());
    double quarter = norm_l2(frac_laplacian_quarter(u));
    double rhs = std::pow(quarter, 3.0 * s - 6.0) * std::pow(l2, 6.0 - 2.0 * s);
    if (!(rhs > 0.0)) return std::nullopt;
    return RatioSample{0, lhs, rhs, lhs / rhs};
}

std::optional<RatioSample> check_hartree_bound(const SpinorField& u,
                                               const PotentialSet& pot,
                                               const PhysParams& p) {
    double l2 = norm_l2(u);
    if (l2 == 0.0) return std::nullopt;
    NonlinearIntegrals nl = nonlinear_integrals(u, pot, p);
    double quarter = norm_l2(frac_laplacian_quarter(u));
    double rhs = quarter * quarter * std::pow(l2, 2.0 * p.kappa - 2.0);
    if (!(rhs > 0.0)) return std::nullopt;
    return RatioSample{0, nl.hartree, rhs, nl.hartree / rhs};
}

std::optional<RatioSample> check_trilinear(const SpinorField& u, const SpinorField& v,
                                           const SpinorField& w, const PotentialSet& pot,
                                           const PhysParams& p) {
    double u2 = norm_l2(u), v2 = norm_l2(v);
    if (u2 == 0.0 || v2 == 0.0 || norm_l2(w) == 0.0) return std::nullopt;
    std::vector<double> m2 = modulus_sq(u);
    std::vector<double> rho(m2.size());
    const double hk = p.kappa / 2.0;
    for (std::size_t i = 0; i < m2.size(); ++i)
        rho[i] = pot.K[i] * std::pow(m2[i], hk);
    std::vector<double> conv = convolve_gamma(pot, rho);
    std::vector<double> mv = modulus(v), mw = modulus(w);
    const double ek = (p.kappa - 2.0) / 2.0;
    double lhs = 0.0;
    for (std::size_t i = 0; i < m2.size(); ++i) {
        double amp = (ek == 0.0) ? 1.0 : (m2[i] > 0.0 ? std::pow(m2[i], ek) : 0.0);
        lhs += conv[i] * pot.K[i] * amp * mv[i] * mw[i];
    }
    lhs *= u.grid().cell_volume();
    double rhs = std::pow(u2, 2.0 * p.kappa - 3.0) * norm_lp(u, 3.0) * v2 * norm_lp(w, 3.0);
    if (!(rhs > 0.0)) return std::nullopt;
    return RatioSample{0, lhs, rhs, lhs / rhs};
}

std::vector<double> hartree_map(const SpinorField& u, const PotentialSet& pot,
                                const PhysParams& p) {
    std::vector<double> m2 = modulus_sq(u);
    std::vector<double> rho(m2.size());
    const double hk = p.kappa / 2.0;
    for (std::size_t i = 0; i < m2.size(); ++i)
        rho[i] = pot.K[i] * std::pow(m2[i], hk);
    std::vector<double> conv = convolve_gamma(pot, rho);
    const double e1 = (p.kappa - 1.0) / 2.0;
    std::vector<double> out(m2.size());
    for (std::size_t i = 0; i < m2.size(); ++i)
        out[i] = conv[i] * pot.K[i] * (m2[i] > 0.0 ? std::pow(m2[i], e1) : 0.0);
    return out;
}

std::optional<RatioSample> check_lipschitz(const SpinorField& u1, const SpinorField& u2,
                                           double p_exp, const PotentialSet& pot,
                                           const PhysParams& p) {
    if (!(p_exp >= 2.0 && p_exp <= 3.0))
        throw std::invalid_argument("check_lipschitz: p must be in [2, 3]");
    SpinorField diff = u1;
    diff -= u2;
    double dn = norm(diff, NormKind::H12);
    if (dn == 0.0) return std::nullopt;  // 0/0
    std::vector<double> f1 = hartree_map(u1, pot, p);
    std::vector<double> f2 = hartree_map(u2, pot, p);
    double lhs = 0.0;
    for (std::size_t i = 0; i < f1.size(); ++i)
        lhs += std::pow(std::abs(f1[i] - f2[i]), p_exp);
    lhs = std::pow(lhs * u1.grid().cell_volume(), 1.0 / p_exp);
    double rhs = std::pow(norm(u1, NormKind::H12) + norm(u2, NormKind::H12),
                          2.0 * p.kappa - 2.0) *
                 dn;
    if (!(rhs > 0.0)) return std::nullopt;
    return RatioSample{0, lhs, rhs, lhs / rhs};
}

std::optional<SplittingSample> check_splitting(const SpinorField& u,
                                               const PotentialSet& pot,
                                               const PhysParams& p) {
    if (std::abs(norm_l2(u) - 1.0) > 1e-8)
        throw std::invalid_argument("check_splitting: |u|_L2 must be 1");
    SpinorField uplus = project_pm(u, p, EnergySign::plus);
    double np = norm_l2(uplus);
    if (np < 1e-12) return std::nullopt;  // w undefined on E^-
    SpinorField uminus = project_pm(u, p, EnergySign::minus);
    SpinorField w = uplus * (1.0 / np);

    const double dv = u.grid().cell_volume();
    std::vector<double> m2u = modulus_sq(u), m2w = modulus_sq(w);
    SplittingSample out;
    out.lhs = quadrature_p_modulus_pow(pot.P, m2u, p.s / 2.0, dv);
    out.rhs_main = quadrature_p_modulus_pow(pot.P, m2w, p.s / 2.0, dv);
    double w_h12 = norm(w, NormKind::H12);
    out.rhs_l2 = norm_l2_sq(uminus) * w_h12 * w_h12;
    double um_h12 = norm(uminus, NormKind::H12);
    out.rhs_h12 = um_h12 * um_h12;
    double denom = out.rhs_main - out.rhs_l2 - out.rhs_h12;
    if (denom <= 0.0) {
        out.unconstrained = true;
        out.feasible_c = std::numeric_limits<double>::infinity();
    } else {
        out.feasible_c = out.lhs / denom;
    }
    return out;
}

namespace {

struct MaxAgg {
    double max_n = 0.0;   // over the first N
    double max_2n = 0.0;  // over all 2N
    int rejected = 0;
    double min_feasible = std::numeric_limits<double>::infinity();
};

template <typename SampleFn>
MaxAgg aggregate_samples(int two_n, int n_ref, int workers, SampleFn&& fn) {
    auto run_range = [&](int lo, int hi, MaxAgg& agg) {
        for (int i = lo; i < hi; ++i) {
            auto val = fn(i);  // optional<pair<ratio, feasible>>
            if (!val) {
                ++agg.rejected;
                continue;
            }
            double ratio = val->first;
            if (i < n_ref) agg.max_n = std::max(agg.max_n, ratio);
            agg.max_2n = std::max(agg.max_2n, ratio);
            agg.min_feasible = std::min(agg.min_feasible, val->second);
        }
    };
    if (workers <= 1) {
        MaxAgg agg;
        run_range(0, two_n, agg);
        return agg;
    }
    std::vector<MaxAgg> parts(workers);
    std::vector<std::thread> threads;
    int chunk = (two_n + workers - 1) / workers;
    for (int t = 0; t < workers; ++t) {
        int lo = t * chunk, hi = std::min(two_n, lo + chunk);
        if (lo >= hi) break;
        threads.emplace_back([&, lo, hi, t] { run_range(lo, hi, parts[t]); });
    }
    for (auto& th : threads) th.join();
    MaxAgg agg;
    for (const auto& part : parts) {
        agg.max_n = std::max(agg.max_n, part.max_n);
        agg.max_2n = std::max(agg.max_2n, part.max_2n);
        agg.rejected += part.rejected;
        agg.min_feasible = std::min(agg.min_feasible, part.min_feasible);
    }
    return agg;
}

}  // namespace

std::vector<CheckReport> run_inequality_suite(const SuiteConfig& scfg,
                                              const GridSpec& grid,
                                              const PotentialSet& pot,
                                              const PhysParams& p) {
    const int N = scfg.samples;
    const int two_n = 2 * N;
    std::vector<CheckReport> reports;

    auto finish = [&](CheckReport& rep, const MaxAgg& agg) {
        rep.samples = N;
        rep.rejected = agg.rejected;
        rep.max_ratio = agg.max_n;
        rep.max_ratio_2n = agg.max_2n;
        rep.stability_ratio = agg.max_n > 0.0 ? agg.max_2n / agg.max_n
                                              : std::numeric_limits<double>::infinity();
        rep.pass = std::isfinite(rep.max_ratio_2n) && rep.max_ratio_2n > 0.0 &&
                   rep.stability_ratio <= scfg.stability_factor &&
                   rep.homogeneity_dev <= scfg.homogeneity_tol;
    };
    auto seed_at = [&](std::uint64_t base, int i) {
        return scfg.seed + base * 1000003ull + static_cast<std::uint64_t>(i);
    };

    // Gagliardo-Nirenberg with the P weight.
    {
        CheckReport rep;
        rep.name = "gagliardo_nirenberg";
        MaxAgg agg = aggregate_samples(
            two_n, N, scfg.workers,
            [&](int i) -> std::optional<std::pair<double, double>> {
                SpinorField u = random_field<4>(seed_at(1, i), grid, scfg.cutoff_fraction);
                auto s = check_gn(u, scfg.s_exp, pot);
                if (!s) return std::nullopt;
                return std::make_pair(s->ratio, std::numeric_limits<double>::infinity());
            });
        {
            SpinorField u = random_field<4>(seed_at(1, 0), grid, scfg.cutoff_fraction);
            auto s1 = check_gn(u, scfg.s_exp, pot);
            auto s2 = check_gn(u * 2.0, scfg.s_exp, pot);
            rep.homogeneity_dev =
                std::abs(s1->ratio - s2->ratio) / std::max(std::abs(s1->ratio), 1e-300);
        }
        finish(rep, agg);
        reports.push_back(rep);
    }
    // Hartree energy bound.
    {
        CheckReport rep;
        rep.name = "hartree_bound";
        MaxAgg agg = aggregate_samples(
            two_n, N, scfg.workers,
            [&](int i) -> std::optional<std::pair<double, double>> {
                SpinorField u = random_field<4>(seed_at(2, i), grid, scfg.cutoff_fraction);
                auto s = check_hartree_bound(u, pot, p);
                if (!s) return std::nullopt;
                return std::make_pair(s->ratio, std::numeric_limits<double>::infinity());
            });
        {
            SpinorField u = random_field<4>(seed_at(2, 0), grid, scfg.cutoff_fraction);
            auto s1 = check_hartree_bound(u, pot, p);
            auto s2 = check_hartree_bound(u * 2.0, pot, p);
            rep.homogeneity_dev =
                std::abs(s1->ratio - s2->ratio) / std::max(std::abs(s1->ratio), 1e-300);
        }
        finish(rep, agg);
        reports.push_back(rep);
    }
    // Trilinear Hartree bound.
    {
        CheckReport rep;
        rep.name = "trilinear";
        MaxAgg agg = aggregate_samples(
            two_n, N, scfg.workers,
            [&](int i) -> std::optional<std::pair<double, double>> {
                SpinorField u = random_field<4>(seed_at(3, i), grid, scfg.cutoff_fraction);
                SpinorField v = random_field<4>(seed_at(4, i), grid, scfg.cutoff_fraction);
                SpinorField w = random_field<4>(seed_at(5, i), grid, scfg.cutoff_fraction);
                auto s = check_trilinear(u, v, w, pot, p);
                if (!s) return std::nullopt;
                return std::make_pair(s->ratio, std::numeric_limits<double>::infinity());
            });
        {
            SpinorField u = random_field<4>(seed_at(3, 0), grid, scfg.cutoff_fraction);
            SpinorField v = random_field<4>(seed_at(4, 0), grid, scfg.cutoff_fraction);
            SpinorField w = random_field<4>(seed_at(5, 0), grid, scfg.cutoff_fraction);
            auto s1 = check_trilinear(u, v, w, pot, p);
            auto s2 = check_trilinear(u, v * 3.0, w, pot, p);
            rep.homogeneity_dev =
                std::abs(s1->ratio - s2->ratio) / std::max(std::abs(s1->ratio), 1e-300);
        }
        finish(rep, agg);
        reports.push_back(rep);
    }
    // Local Lipschitz continuity of the Hartree map.
    {
        CheckReport rep;
        rep.name = "lipschitz";
        MaxAgg agg = aggregate_samples(
            two_n, N, scfg.workers,
            [&](int i) -> std::optional<std::pair<double, double>> {
                SpinorField u1 = random_field<4>(seed_at(6, i), grid, scfg.cutoff_fraction);
                SpinorField u2 = random_field<4>(seed_at(7, i), grid, scfg.cutoff_fraction);
                auto s = check_lipschitz(u1, u2, scfg.p_exp, pot, p);
                if (!s) return std::nullopt;
                return std::make_pair(s->ratio, std::numeric_limits<double>::infinity());
            });
        {
            SpinorField u1 = random_field<4>(seed_at(6, 0), grid, scfg.cutoff_fraction);
            SpinorField u2 = random_field<4>(seed_at(7, 0), grid, scfg.cutoff_fraction);
            auto s1 = check_lipschitz(u1, u2, scfg.p_exp, pot, p);
            auto s2 = check_lipschitz(u1 * 2.0, u2 * 2.0, scfg.p_exp, pot, p);
            rep.homogeneity_dev =
                std::abs(s1->ratio - s2->ratio) / std::max(std::abs(s1->ratio), 1e-300);
        }
        finish(rep, agg);
        reports.push_back(rep);
    }
    // Splitting bound: reported via the feasible constant's infimum.
    {
        CheckReport rep;
        rep.name = "splitting";
        MaxAgg agg = aggregate_samples(
            two_n, N, scfg.workers,
            [&](int i) -> std::optional<std::pair<double, double>> {
                SpinorField u = random_field<4>(seed_at(8, i), grid, scfg.cutoff_fraction);
                double nn = norm_l2(u);
                if (nn == 0.0) return std::nullopt;
                u *= 1.0 / nn;
                auto s = check_splitting(u, pot, p);
                if (!s) return std::nullopt;
                double ratio = s->unconstrained ? 0.0 : s->rhs_main / std::max(s->lhs, 1e-300);
                return std::make_pair(ratio, s->feasible_c);
            });
        rep.min_feasible_c = agg.min_feasible;
        rep.samples = N;
        rep.rejected = agg.rejected;
        rep.max_ratio = agg.max_n;
        rep.max_ratio_2n = agg.max_2n;
        rep.stability_ratio = agg.max_n > 0.0 ? agg.max_2n / agg.max_n
                                              : std::numeric_limits<double>::infinity();
        rep.homogeneity_dev = 0.0;
        rep.pass = agg.min_feasible > 0.0 &&
                   rep.stability_ratio <= scfg.stability_factor;
        reports.push_back(rep);
    }
    return reports;
}

}  // namespace ndlimit
