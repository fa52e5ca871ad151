#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <random>

#include "gevreylab/borel_plane.hpp"
#include "gevreylab/io.hpp"

using namespace gevreylab;

namespace {

MultiIndex mi(std::vector<int> v) { return MultiIndex(std::move(v)); }

std::string data_path(const std::string& name) {
    return std::string(GEVREYLAB_DATA_DIR) + "/" + name;
}

bool tables_identical(const NormalizationResult& a, const NormalizationResult& b) {
    if (a.g.size() != b.g.size()) return false;
    for (const auto& [Q, comps] : a.g) {
        auto it = b.g.find(Q);
        if (it == b.g.end()) return false;
        for (int i = 0; i < a.spec.n; ++i)
            for (int j = 0; j <= comps[i].trunc_order(); ++j)
                if (comps[i].coeff(j) != it->second[i].coeff(j)) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("solve_gQ_ode") {
    SECTION("Euler recursion gives alternating factorials") {
        ZSeries t = ZSeries::constant(1.0, 18);
        ZSeries g = solve_gQ_ode(cplx(1.0), cplx(0.0), t, 1, 18);
        double expect = 1.0;  // (n-1)!
        for (int nu = 1; nu <= 18; ++nu) {
            double sign = (nu % 2 == 1) ? 1.0 : -1.0;
            CHECK(g.coeff(nu).real() == sign * expect);  // exact integers in double
            CHECK(g.coeff(nu).imag() == 0.0);
            expect *= nu;
        }
        CHECK(g.coeff(0) == cplx(0.0));
    }
    SECTION("resonant division") {
        // lambda_Q = 0, alpha_Q = 1/2: unique solution of z^2 g' + (z/2) g = z t_Q
        ZSeries t1 = ZSeries::constant(1.0, 6);
        ZSeries g1 = solve_gQ_ode(cplx(0.0), cplx(0.5), t1, 1, 6);
        CHECK(g1.coeff(0) == cplx(2.0));  // g = 2 for t_Q = 1
        for (int nu = 1; nu <= 6; ++nu) CHECK(g1.coeff(nu) == cplx(0.0));

        ZSeries tz = ZSeries::monomial(1.0, 1, 6);
        ZSeries gz = solve_gQ_ode(cplx(0.0), cplx(0.5), tz, 1, 6);
        CHECK(gz.coeff(1) == cplx(2.0 / 3.0));  // direct division at n = 1
        CHECK(gz.coeff(0) == cplx(0.0));
    }
    SECTION("zero right-hand side gives the zero solution") {
        ZSeries g = solve_gQ_ode(cplx(2.0, 1.0), cplx(0.3), ZSeries::zero(8), 1, 8);
        CHECK(g.is_zero());
    }
    SECTION("zero divisor names the order") {
        ZSeries t = ZSeries::constant(1.0, 6);
        try {
            solve_gQ_ode(cplx(0.0), cplx(-3.0), t, 1, 6, Tolerances{}, 2, mi({2, 0}));
            FAIL("expected solve_error");
        } catch (const solve_error& e) {
            CHECK(e.i == 2);
            CHECK(e.n == 3);
            CHECK(e.Q == std::vector<int>{2, 0});
        }
    }
    SECTION("general k strides the recurrence") {
        // z^3 g' + g = z^2: g_2 = 1, g_4 = -2 g_2, ...
        ZSeries t = ZSeries::constant(1.0, 8);
        ZSeries g = solve_gQ_ode(cplx(1.0), cplx(0.0), t, 2, 8);
        CHECK(g.coeff(2) == cplx(1.0));
        CHECK(g.coeff(3) == cplx(0.0));
        CHECK(g.coeff(4) == cplx(-2.0));
        CHECK(g.coeff(6) == cplx(8.0));
    }
}

TEST_CASE("assemble_tQ") {
    SECTION("|Q| <= 1 vanishes") {
        VectorFieldSpec s;
        s.n = 2;
        s.k = 1;
        s.lambda = {cplx(1.0), cplx(-1.0)};
        s.alpha = {cplx(1.0), cplx(0.0)};
        s.r = mi({1, 1});
        NormalizationResult::ZTable g;
        auto t = assemble_tQ(g, s, mi({1, 0}), 6);
        for (const auto& c : t) CHECK(c.is_zero());
    }
    SECTION("scalar quadratic: single partition") {
        // f = f_(2)(z) x^2 with identity g: t_(2) = f_(2)
        VectorFieldSpec s;
        s.n = 1;
        s.k = 1;
        s.lambda = {cplx(1.0)};
        s.alpha = {cplx(0.0)};
        s.r = mi({1});
        ZSeries f2({cplx(0.5), cplx(2.0), cplx(-1.0)});
        s.f.emplace(mi({2}), std::vector<ZSeries>{f2});
        NormalizationResult::ZTable g;
        NormalizationResult::VecZ id = {ZSeries::constant(1.0, 2)};
        g.emplace(mi({1}), id);
        auto t = assemble_tQ(g, s, mi({2}), 2);
        CHECK(zs_max_diff(t[0], f2) == 0.0);

        // Q=(3): two ordered splits (1,2),(2,1) give 2 f_(2) g_(2)
        ZSeries g2({cplx(0.0), cplx(1.0), cplx(3.0)});
        g.emplace(mi({2}), NormalizationResult::VecZ{g2});
        auto t3 = assemble_tQ(g, s, mi({3}), 2);
        ZSeries expect = zs_scale(2.0, zs_mul(f2, g2));
        CHECK(zs_max_diff(t3[0], expect) < 1e-15);
    }
    SECTION("missing lower-degree entries are an error") {
        VectorFieldSpec s;
        s.n = 2;
        s.k = 1;
        s.lambda = {cplx(1.0), cplx(-1.0)};
        s.alpha = {cplx(1.0), cplx(0.0)};
        s.r = mi({1, 1});
        s.f.emplace(mi({1, 2}), std::vector<ZSeries>{ZSeries::constant(1.0, 4), ZSeries::zero(4)});
        NormalizationResult::ZTable g;  // no degree-1 or degree-2 rows at all
        CHECK_THROWS_AS(assemble_tQ(g, s, mi({2, 1}), 4), structural_error);
    }
}

TEST_CASE("formal_normalize") {
    SECTION("f == 0 gives the exact identity") {
        VectorFieldSpec s;
        s.n = 2;
        s.k = 1;
        s.lambda = {cplx(1.0), cplx(-1.0)};
        s.alpha = {cplx(1.0), cplx(0.0)};
        s.r = mi({1, 1});
        auto res = formal_normalize(s, 6, 8);
        for (const auto& [Q, comps] : res.g) {
            for (int i = 0; i < 2; ++i) {
                if (Q.degree() == 1 && Q[i] == 1) {
                    CHECK(comps[i].coeff(0) == cplx(1.0));
                    CHECK(comps[i].valuation() == 0);
                } else {
                    CHECK(comps[i].is_zero());
                }
            }
        }
        CHECK(conjugacy_residual(res) == 0.0);
        CHECK(check_monomial_preservation(res, s.r) == 0.0);
    }
    SECTION("euler2d low-order rows match the hand recurrence") {
        VectorFieldSpec s = load_spec(data_path("euler2d.json"));
        auto res = formal_normalize(s, 4, 8);
        // component 1 of Q=(1,2): lambda_Q = -2, alpha_Q = 0, t = 1
        ZSeries hand = ZSeries::zero(8);
        for (int nu = 1; nu <= 8; ++nu) {
            cplx t_prev = (nu == 1) ? cplx(1.0) : cplx(0.0);
            hand.set_coeff(nu, (t_prev - double(nu - 1) * hand.coeff(nu - 1)) / cplx(-2.0));
        }
        const ZSeries& got = res.g.at(mi({1, 2}))[0];
        CHECK(zs_max_diff(got, hand) < 1e-15);
        // resonant constants
        CHECK(res.g.at(mi({2, 1}))[0].coeff(0) == cplx(1.0));
        CHECK(res.g.at(mi({1, 2}))[1].coeff(0) == cplx(-1.0));
    }
    SECTION("small-divisor spectrum: resonant division spot check") {
        VectorFieldSpec s = load_spec(data_path("smalldiv3d.json"));
        auto res = formal_normalize(s, 4, 8);
        // component 3 of Q=(1,1,1): lambda_Q = 0 (resonant), alpha_Q = 2, t = 1
        const ZSeries& g3 = res.g.at(mi({1, 1, 1}))[2];
        CHECK(g3.coeff(0) == cplx(0.5));
        // component 1 of Q=(1,1,1) is nonresonant with zero t
        CHECK(res.g.at(mi({1, 1, 1}))[0].is_zero());
    }
    SECTION("hypothesis gate") {
        VectorFieldSpec s = load_spec(data_path("h5bad.json"));
        CHECK_THROWS_AS(formal_normalize(s, 4, 6), hypothesis_error);
        CHECK_NOTHROW(formal_normalize(s, 4, 6, /*force=*/true));
    }
    SECTION("H3 violation surfaces as solve_error naming (i, Q, n)") {
        VectorFieldSpec s = load_spec(data_path("h3violation.json"));
        try {
            formal_normalize(s, 4, 6, /*force=*/true);
            FAIL("expected solve_error");
        } catch (const solve_error& e) {
            CHECK(e.i == 2);
            CHECK(e.Q == std::vector<int>{2, 0});
            CHECK(e.n == 3);
        }
    }
}

TEST_CASE("conjugacy residual on corpus and random specs") {
    for (const char* name : {"euler2d.json", "h5ok.json"}) {
        VectorFieldSpec s = load_spec(data_path(name));
        auto res = formal_normalize(s, 8, 12);
        CHECK(conjugacy_residual(res) < 1e-9);
    }
    // random well-prepared 2D spec: f~_1 = h, f~_2 = -h with random h
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    VectorFieldSpec s;
    s.n = 2;
    s.k = 1;
    s.lambda = {cplx(1.0), cplx(-1.0)};
    s.alpha = {cplx(1.0), cplx(0.0)};
    s.r = mi({1, 1});
    for (int a = 0; a <= 2; ++a) {
        for (int b = 0; b <= 2 - a; ++b) {
            if (a + b == 0) continue;  // h vanishing at 0 keeps |j| >= 2
            cplx c(u(rng), u(rng));
            ZSeries zc({c, cplx(0.3) * c});
            MultiIndex j1({a + 1, b});
            auto i1 = s.f.emplace(j1, std::vector<ZSeries>(2, ZSeries::zero(1))).first;
            i1->second[0] = zs_add(i1->second[0], zc);
            MultiIndex j2({a, b + 1});
            auto i2 = s.f.emplace(j2, std::vector<ZSeries>(2, ZSeries::zero(1))).first;
            i2->second[1] = zs_add(i2->second[1], zs_scale(-1.0, zc));
        }
    }
    REQUIRE(check_well_prepared(s).ok);
    auto res = formal_normalize(s, 8, 12);
    CHECK(conjugacy_residual(res) < 1e-9);
    CHECK(check_monomial_preservation(res, s.r) < 1e-10);
}

TEST_CASE("monomial preservation pair") {
    VectorFieldSpec ok = load_spec(data_path("h5ok.json"));
    auto rok = formal_normalize(ok, 8, 12);
    CHECK(check_monomial_preservation(rok, ok.r) < 1e-10);

    VectorFieldSpec bad = load_spec(data_path("h5bad.json"));
    auto rbad = formal_normalize(bad, 8, 12, /*force=*/true);
    CHECK(check_monomial_preservation(rbad, bad.r) > 1e-4);
}

TEST_CASE("grading: t_Q ignores same-or-higher degree rows") {
    VectorFieldSpec s = load_spec(data_path("euler2d.json"));
    auto res = formal_normalize(s, 6, 8);
    // rebuild t_Q at degree 4 from a table whose rows of degree >= 4 are mangled
    NormalizationResult::ZTable mangled = res.g;
    for (auto& [Q, comps] : mangled)
        if (Q.degree() >= 4)
            for (auto& c : comps) c = ZSeries::constant(99.0, c.trunc_order());
    for_each_degree(2, 4, [&](const MultiIndex& Q) {
        auto ta = assemble_tQ(res.g, s, Q, 8);
        auto tb = assemble_tQ(mangled, s, Q, 8);
        for (int i = 0; i < 2; ++i) CHECK(zs_max_diff(ta[i], tb[i]) == 0.0);
    });
}

TEST_CASE("determinism across reruns and thread counts") {
    VectorFieldSpec s = load_spec(data_path("smalldiv3d.json"));
    auto r1 = formal_normalize(s, 6, 10);
    auto r2 = formal_normalize(s, 6, 10);
    CHECK(tables_identical(r1, r2));

    setenv("GEVREYLAB_THREADS", "1", 1);
    auto r3 = formal_normalize(s, 6, 10);
    setenv("GEVREYLAB_THREADS", "4", 1);
    auto r4 = formal_normalize(s, 6, 10);
    unsetenv("GEVREYLAB_THREADS");
    CHECK(tables_identical(r3, r4));
    CHECK(tables_identical(r1, r3));
}

TEST_CASE("ramify_sigma_k") {
    ZSeries z2 = ZSeries::monomial(1.0, 2, 4);
    ZSeries s2 = ramify_sigma_k(z2, 2);
    CHECK(s2.coeff(1) == cplx(1.0));
    CHECK(s2.trunc_order() == 2);

    ZSeries mix = ZSeries::zero(4);
    mix.set_coeff(2, 1.0);
    mix.set_coeff(4, 3.0);
    ZSeries sm = ramify_sigma_k(mix, 2);
    CHECK(sm.coeff(1) == cplx(1.0));
    CHECK(sm.coeff(2) == cplx(3.0));

    ZSeries w = ZSeries::monomial(2.5, 6, 9);  // valuation 6 = k|Q| with k=3, |Q|=2
    CHECK(ramify_sigma_k(w, 3).valuation() == 2);

    ZSeries badz = ZSeries::monomial(1.0, 3, 4);
    CHECK_THROWS_AS(ramify_sigma_k(badz, 2), precondition_error);
}

TEST_CASE("Borel tables: valuation, route equivalence, bounds") {
    SECTION("euler2d k=1") {
        VectorFieldSpec s = load_spec(data_path("euler2d.json"));
        auto res = formal_normalize(s, 6, 12);
        compute_borel_tables(res, 6);
        for (const auto& [Q, comps] : res.W) {
            int m = Q.degree();
            for (int i = 0; i < 2; ++i)
                for (int mu = 0; mu < m - 1; ++mu) CHECK(comps[i].coeff(mu) == cplx(0.0));
        }
        CHECK(route_equivalence_defect(res, 6) < 1e-10);

        auto bf = verify_bounds(res, 1.0, 0.0);
        CHECK(bf.K0_fit >= 1.0);
        CHECK(std::isfinite(bf.K0_fit));
        CHECK(std::isfinite(bf.K_fit));
        CHECK(bf.c0_used > 0.0);
    }
    SECTION("f == 0 gives the K0 = 1 sentinel") {
        VectorFieldSpec s;
        s.n = 2;
        s.k = 1;
        s.lambda = {cplx(1.0), cplx(-1.0)};
        s.alpha = {cplx(1.0), cplx(0.0)};
        s.r = mi({1, 1});
        auto res = formal_normalize(s, 5, 8);
        compute_borel_tables(res, 5);
        auto bf = verify_bounds(res, 1.0, 0.0);
        CHECK(bf.K0_fit == 1.0);
    }
    SECTION("k = 2 route equivalence through sigma_k") {
        VectorFieldSpec s = load_spec(data_path("h5ok.json"));
        s.k = 2;
        auto res = formal_normalize(s, 4, 12);
        compute_borel_tables(res, 4);
        CHECK(route_equivalence_defect(res, 4) < 1e-10);
        // G entries carry only stride-2 powers
        for (const auto& [Q, comps] : res.G)
            for (const auto& gs : comps)
                for (int mu = 0; mu <= gs.trunc_order(); ++mu)
                    if (mu % 2 != 0) CHECK(gs.coeff(mu) == cplx(0.0));
    }
    SECTION("borel_recurrence serves a single Q") {
        VectorFieldSpec s = load_spec(data_path("euler2d.json"));
        auto res = formal_normalize(s, 4, 10);
        auto triple = borel_recurrence(res, mi({1, 2}));
        CHECK(triple.W.size() == 2);
        CHECK(res.borel_degree >= 3);
    }
}

TEST_CASE("Euler scalar Borel closed form") {
    // B applied to sum (-1)^{n-1} (n-1)! z^n is the truncation of 1/(1+t)
    int M = 14;
    ZSeries euler = ZSeries::zero(M);
    double fact = 1.0;
    for (int nu = 1; nu <= M; ++nu) {
        euler.set_coeff(nu, cplx(((nu % 2 == 1) ? 1.0 : -1.0) * fact));
        fact *= nu;
    }
    auto elem = gevreylab::detail::borel1_elem(euler, M - 1);
    for (int mu = 0; mu <= M - 1; ++mu)
        CHECK(std::abs(elem.tail.coeff(mu) - cplx((mu % 2 == 0) ? 1.0 : -1.0)) < 1e-12);
}
