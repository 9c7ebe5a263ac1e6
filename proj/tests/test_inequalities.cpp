#include <doctest.h>

#include <cmath>

#include "ndlimit/inequalities.hpp"

using namespace ndlimit;

namespace {
PhysParams default_params() { return PhysParams(1.0, 8.0, 2.0, 2.5, 0.2, 1.0, 0.5); }
}

TEST_CASE("random_field determinism and band limit") {
    GridSpec g(16, 12.0);
    SpinorField a = random_field<4>(99, g, 0.5);
    SpinorField b = random_field<4>(99, g, 0.5);
    for (std::size_t i = 0; i < a.raw().size(); ++i) CHECK(a.raw()[i] == b.raw()[i]);
    SpinorField c = random_field<4>(100, g, 0.5);
    bool differs = false;
    for (std::size_t i = 0; i < a.raw().size(); ++i)
        if (a.raw()[i] != c.raw()[i]) differs = true;
    CHECK(differs);

    SUBCASE("coefficients vanish above the cutoff") {
        const Transform& tr = transform_for(g);
        SpinorField hat = tr.forward_field(a);
        double kmax = 0.5 * g.n() / 2.0;
        for (int z = 0; z < g.n(); ++z)
            for (int y = 0; y < g.n(); ++y)
                for (int x = 0; x < g.n(); ++x) {
                    bool kept = std::abs(g.freq_index(x)) <= kmax &&
                                std::abs(g.freq_index(y)) <= kmax &&
                                std::abs(g.freq_index(z)) <= kmax;
                    if (!kept)
                        for (int comp = 0; comp < 4; ++comp)
                            CHECK(std::abs(hat.at(comp, g.index(x, y, z))) < 1e-13);
                }
    }
    SUBCASE("expected L2 mass grows with the cutoff") {
        double prev = 0.0;
        for (double cut : {0.2, 0.4, 0.6}) {
            double acc = 0.0;
            for (int s = 0; s < 12; ++s)
                acc += norm_l2_sq(random_field<4>(7000 + s, g, cut));
            CHECK(acc > prev);
            prev = acc;
        }
    }
    SUBCASE("cutoff window enforced") {
        CHECK_THROWS(random_field<4>(1, g, 0.0));
        CHECK_THROWS(random_field<4>(1, g, 0.7));
    }
}

TEST_CASE("gagliardo-nirenberg check") {
    GridSpec g(16, 12.0);
    PhysParams p = default_params();
    PotentialSet pot = build_potentials(g, p);
    SpinorField u = random_field<4>(11, g, 0.5);

    SUBCASE("scaling covariance: ratio invariant under u -> 2u") {
        auto s1 = check_gn(u, 2.5, pot);
        auto s2 = check_gn(u * 2.0, 2.5, pot);
        REQUIRE(s1);
        REQUIRE(s2);
        CHECK(std::abs(s1->ratio - s2->ratio) / s1->ratio < 1e-10);
    }
    SUBCASE("s = 2 boundary: ratio bounded by 1 since P <= 1") {
        auto s = check_gn(u, 2.0, pot);
        REQUIRE(s);
        CHECK(s->ratio <= 1.0 + 1e-12);
    }
    SUBCASE("zero field rejected") {
        SpinorField z(g);
        CHECK(!check_gn(z, 2.5, pot));
    }
    SUBCASE("exponent window") {
        CHECK_THROWS(check_gn(u, 3.5, pot));
    }
}

TEST_CASE("hartree bound check") {
    GridSpec g(16, 12.0);
    PhysParams p = default_params();
    PotentialSet pot = build_potentials(g, p);
    SpinorField u = random_field<4>(12, g, 0.5);

    SUBCASE("homogeneity of degree 2 kappa on both sides") {
        auto s1 = check_hartree_bound(u, pot, p);
        auto s2 = check_hartree_bound(u * 2.0, pot, p);
        REQUIRE(s1);
        REQUIRE(s2);
        CHECK(std::abs(s1->ratio - s2->ratio) / s1->ratio < 1e-10);
    }
    SUBCASE("K switched off gives zero lhs") {
        auto s = check_hartree_bound(u, pot.without_hartree(), p);
        REQUIRE(s);
        CHECK(s->lhs == 0.0);
        CHECK(s->ratio == 0.0);
    }
}

TEST_CASE("trilinear check") {
    GridSpec g(16, 12.0);
    PhysParams p = default_params();
    PotentialSet pot = build_potentials(g, p);
    SpinorField u = random_field<4>(13, g, 0.5);
    SpinorField v = random_field<4>(14, g, 0.5);
    SpinorField w = random_field<4>(15, g, 0.5);

    SUBCASE("substitution v = w = u recovers the Hartree integrand") {
        // lhs(u, u, u) = int Gamma*(K|u|^k) K |u|^k
        auto s = check_trilinear(u, u, u, pot, p);
        REQUIRE(s);
        NonlinearIntegrals nl = nonlinear_integrals(u, pot, p);
        CHECK(s->lhs == doctest::Approx(nl.hartree).epsilon(1e-10));
    }
    SUBCASE("homogeneity in v alone") {
        auto s1 = check_trilinear(u, v, w, pot, p);
        auto s2 = check_trilinear(u, v * 3.0, w, pot, p);
        REQUIRE(s1);
        REQUIRE(s2);
        CHECK(s2->lhs == doctest::Approx(3.0 * s1->lhs).epsilon(1e-12));
        CHECK(s2->rhs == doctest::Approx(3.0 * s1->rhs).epsilon(1e-12));
        CHECK(std::abs(s1->ratio - s2->ratio) / s1->ratio < 1e-10);
    }
}

TEST_CASE("lipschitz check") {
    GridSpec g(16, 12.0);
    PhysParams p = default_params();
    PotentialSet pot = build_potentials(g, p);
    SpinorField u1 = random_field<4>(16, g, 0.5);
    SpinorField u2 = random_field<4>(17, g, 0.5);

    SUBCASE("pure phase rotation gives zero lhs (modulus dependence)") {
        SpinorField u2p = u1 * std::polar(1.0, 0.83);
        auto s = check_lipschitz(u1, u2p, 2.0, pot, p);
        REQUIRE(s);
        CHECK(s->lhs < 1e-12 * s->rhs);
    }
    SUBCASE("identical inputs rejected (0/0)") {
        CHECK(!check_lipschitz(u1, u1, 2.0, pot, p));
    }
    SUBCASE("joint homogeneity") {
        auto s1 = check_lipschitz(u1, u2, 2.0, pot, p);
        auto s2 = check_lipschitz(u1 * 2.0, u2 * 2.0, 2.0, pot, p);
        REQUIRE(s1);
        REQUIRE(s2);
        CHECK(std::abs(s1->ratio - s2->ratio) / s1->ratio < 1e-10);
    }
    SUBCASE("ratio stays finite as the perturbation shrinks over 4 decades") {
        for (double t : {1e-1, 1e-2, 1e-3, 1e-4}) {
            SpinorField u2t = u1;
            add_scaled(u2t, cplx(t, 0.0), u2);
            auto s = check_lipschitz(u1, u2t, 2.0, pot, p);
            REQUIRE(s);
            CHECK(std::isfinite(s->ratio));
            CHECK(s->ratio > 0.0);
            CHECK(s->ratio < 1e3);
        }
    }
}

TEST_CASE("splitting check") {
    GridSpec g(16, 12.0);
    PhysParams p = default_params();
    PotentialSet pot = build_potentials(g, p);

    SUBCASE("u in E+ gives feasible C = 1") {
        SpinorField u = project_pm(random_field<4>(18, g, 0.5), p, EnergySign::plus);
        u *= 1.0 / norm_l2(u);
        auto s = check_splitting(u, pot, p);
        REQUIRE(s);
        CHECK(!s->unconstrained);
        CHECK(s->feasible_c == doctest::Approx(1.0).epsilon(1e-10));
    }
    SUBCASE("u in E- is rejected (w undefined)") {
        SpinorField u = project_pm(random_field<4>(19, g, 0.5), p, EnergySign::minus);
        u *= 1.0 / norm_l2(u);
        CHECK(!check_splitting(u, pot, p));
    }
    SUBCASE("norm precondition enforced") {
        SpinorField u = random_field<4>(20, g, 0.5);
        CHECK_THROWS(check_splitting(u, pot, p));
    }
    SUBCASE("random normalized samples have positive feasible constants") {
        double min_c = 1e300;
        for (int s = 0; s < 50; ++s) {
            SpinorField u = random_field<4>(2100 + s, g, 0.5);
            u *= 1.0 / norm_l2(u);
            auto sm = check_splitting(u, pot, p);
            REQUIRE(sm);
            if (!sm->unconstrained) min_c = std::min(min_c, sm->feasible_c);
        }
        CHECK(min_c > 0.0);
    }
}

TEST_CASE("suite runner (reduced sample count)") {
    GridSpec g(8, 12.0);
    PhysParams p = default_params();
    PotentialSet pot = build_potentials(g, p);
    SuiteConfig scfg;
    scfg.samples = 40;
    scfg.seed = 4242;
    auto reports = run_inequality_suite(scfg, g, pot, p);
    REQUIRE(reports.size() == 5);
    for (const auto& r : reports) {
        INFO(r.name);
        CHECK(r.samples == 40);
        CHECK(r.homogeneity_dev <= scfg.homogeneity_tol);
        CHECK(std::isfinite(r.max_ratio_2n));
        CHECK(r.max_ratio_2n >= r.max_ratio);
    }
    SUBCASE("deterministic in the seed") {
        auto again = run_inequality_suite(scfg, g, pot, p);
        for (std::size_t i = 0; i < reports.size(); ++i) {
            CHECK(reports[i].max_ratio == again[i].max_ratio);
            CHECK(reports[i].max_ratio_2n == again[i].max_ratio_2n);
        }
    }
    SUBCASE("worker count does not change results") {
        SuiteConfig par = scfg;
        par.workers = 4;
        auto parr = run_inequality_suite(par, g, pot, p);
        for (std::size_t i = 0; i < reports.size(); ++i) {
            CHECK(reports[i].max_ratio == parr[i].max_ratio);
            CHECK(reports[i].max_ratio_2n == parr[i].max_ratio_2n);
            CHECK(reports[i].rejected == parr[i].rejected);
        }
    }
}
