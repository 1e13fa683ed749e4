#include "doctest.h"
#include "padicfrob/analysis.hpp"
#include "padicfrob/special_functions.hpp"

#include <random>

using namespace padicfrob;

namespace {

ApproxSeries exact_series(const PrimeContext& ctx, const std::vector<mpq_class>& cs, bool polynomial) {
    std::vector<ApproxPadic> a;
    for (const auto& c : cs) a.push_back(ApproxPadic::exact(ctx, c));
    return ApproxSeries(a, ApproxPadic::zero(ctx), polynomial);
}

std::vector<std::pair<long, ExtRational>> pts(std::initializer_list<std::pair<long, long>> xs) {
    std::vector<std::pair<long, ExtRational>> out;
    for (auto [x, y] : xs) out.emplace_back(x, ExtRational(y));
    return out;
}

std::vector<std::pair<long, mpq_class>> verts(std::initializer_list<std::pair<long, long>> xs) {
    std::vector<std::pair<long, mpq_class>> out;
    for (auto [x, y] : xs) out.emplace_back(x, mpq_class(y));
    return out;
}

std::vector<mpq_class> slopes_of(const NewtonPolygon& np) {
    std::vector<mpq_class> out;
    for (const auto& s : np.slopes)
        for (long i = 0; i < s.multiplicity; ++i) out.push_back(s.slope);
    return out;
}

std::vector<mpq_class> qs(std::initializer_list<long> xs) { return {xs.begin(), xs.end()}; }

ValuationProfile synthetic_profile(std::size_t N, mpq_class rate) {
    ValuationProfile prof;
    for (std::size_t m = 0; m <= N; ++m) prof.entries.push_back({m, CertifiedVal{ExtRational(mpq_class(-rate * static_cast<long>(m)))}});
    return prof;
}

}  // namespace

TEST_CASE("valuation profiles") {
    PrimeContext ctx(3);
    auto sol = solve_frobenius(ctx, builtin("dwork(1)"), rational_identity(1), 40);
    auto prof = valuation_profile(ctx, sol.phi, 40);
    auto dc = dwork_coefficients(ctx, 40);
    REQUIRE(prof.entries.size() == 41);
    for (std::size_t m = 0; m <= 40; ++m) CHECK(*prof.entries[m].val.value == val_p(ctx, dc.d[m]));

    RationalMatrixSeries constant;
    constant.coeffs = {rational_matrix(2, 2, {9, 0, 0, 3}), RationalMatrix(2, 2), RationalMatrix(2, 2)};
    auto cp = valuation_profile(ctx, constant, 2);
    CHECK(*cp.entries[0].val.value == ExtRational(1));
    CHECK(cp.entries[1].val.value->is_infinite());
    CHECK(cp.entries[2].val.value->is_infinite());

    auto ex = run_experiment(ctx, builtin("cp1"), ExperimentOptions{60, 20, 640, false});
    REQUIRE(ex.profile.fully_certified());
    CHECK(growth_rate_fit(ex.profile, 20, 60) < mpq_class(1, 2));
    for (const auto& e : ex.profile.entries) {
        if (e.m >= 20 && e.val.value->is_finite()) CHECK(-e.val.value->value() < mpq_class(static_cast<long>(e.m), 2));
    }
}

TEST_CASE("growth rate fit") {
    CHECK(growth_rate_fit(synthetic_profile(60, mpq_class(1, 4)), 20, 60) == mpq_class(1, 4));
    auto prof = synthetic_profile(60, mpq_class(1, 3));
    prof.entries[30].val = CertifiedVal{ExtRational::infinity()};
    CHECK(growth_rate_fit(prof, 20, 60) == mpq_class(1, 3));
    prof.entries[40].val = CertifiedVal::indeterminate();
    CHECK_THROWS_AS(growth_rate_fit(prof, 20, 60), PrecisionError);
    CHECK(growth_rate_fit(prof, 0, 29) == mpq_class(1, 3));
    CHECK_THROWS_AS(growth_rate_fit(prof, 20, 61), std::invalid_argument);
    CHECK_THROWS_AS(growth_rate_fit(prof, 30, 30), std::invalid_argument);

    PrimeContext p5(5), p3(3);
    auto cp2 = run_experiment(p5, builtin("cp(3)"), ExperimentOptions{60, std::nullopt, 640, false});
    CHECK(abs(growth_rate_fit(cp2.profile, 20, 60) - mpq_class(9, 100)) <= mpq_class(3, 100));
    auto f1 = run_experiment(p3, builtin("f1"), ExperimentOptions{60, std::nullopt, 640, false});
    CHECK(abs(growth_rate_fit(f1.profile, 20, 60) - mpq_class(28, 100)) <= mpq_class(3, 100));
}

TEST_CASE("characteristic polynomial of constant matrices") {
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> d(-6, 6);
    for (std::size_t n = 1; n <= 6; ++n) {
        RationalMatrix M(n, n);
        for (auto& x : M.entries()) x = mpq_class(d(rng), 1 + (d(rng) + 6) % 3);
        for (auto& x : M.entries()) x.canonicalize();
        auto cp = char_poly(M);
        REQUIRE(cp.size() == n + 1);
        CHECK(cp[n] == 1);
        // evaluate at integers against det(zI - M)
        for (long z = -2; z <= 3; ++z) {
            mpq_class val = 0, zp = 1;
            for (const auto& c : cp) {
                val += c * zp;
                zp *= z;
            }
            CHECK(val == determinant(scaled(rational_identity(n), mpq_class(z)) - M));
        }
    }
}

TEST_CASE("characteristic polynomial of series") {
    PrimeContext ctx(5);
    const std::size_t N = 30;
    auto sol = solve_frobenius(ctx, builtin("dwork(1)"), rational_identity(1), N);
    auto cp = char_poly(ctx, sol.phi, N);
    REQUIRE(cp.degree() == 1);
    auto dc = dwork_coefficients(ctx, N);
    for (std::size_t m = 0; m <= N; ++m) {
        CHECK(cp.phi[1][m].approx() == (m == 0 ? 1 : 0));
        CHECK(cp.phi[0][m].approx() == -dc.d[m]);
    }

    RationalMatrixSeries ident;
    ident.coeffs.push_back(rational_identity(3));
    for (std::size_t m = 1; m <= 5; ++m) ident.coeffs.push_back(RationalMatrix(3, 3));
    auto ci = char_poly(ctx, ident, 5);
    // (z - 1)^3 = -1 + 3z - 3z^2 + z^3
    const std::vector<long> binom{-1, 3, -3, 1};
    for (std::size_t k = 0; k <= 3; ++k) {
        CHECK(ci.phi[k][0].approx() == binom[k]);
        for (std::size_t m = 1; m <= 5; ++m) CHECK(ci.phi[k][m].approx() == 0);
    }
}

TEST_CASE("determinant differential relation") {
    // q d/dq phi_0 + (tr A(q) - p tr A(-q^p/p)) phi_0 = 0
    for (const char* name : {"f1", "cubic-surface", "twistor-simple(2)"}) {
        for (long p : {3L, 5L}) {
            CAPTURE(name);
            CAPTURE(p);
            PrimeContext ctx(p);
            auto c = builtin(name);
            const std::size_t N = 25;
            auto gamma = gamma_coefficients(ctx, c, 10);
            RationalMatrix phi0(c.rank, c.rank);
            for (std::size_t k = 0; k < gamma.size(); ++k)
                phi0 += scaled(basis_constant_term(ctx, c, c.gamma_decomposition[k].cup), gamma[k].approx());
            auto sol = solve_frobenius(ctx, c, phi0, N);
            auto cp = char_poly(ctx, sol.phi, N);
            std::vector<mpq_class> phi(N + 1), tr(N + 1, 0), trp(N + 1, 0);
            for (std::size_t m = 0; m <= N; ++m) {
                CHECK(cp.phi[0][m].is_exact());
                phi[m] = cp.phi[0][m].approx();
            }
            for (std::size_t e = 0; e < c.A.size() && e <= N; ++e)
                for (std::size_t i = 0; i < c.rank; ++i) tr[e] += c.A[e](i, i);
            // p tr A(-q^p/p): q^{pj} coefficient p tr A_j (-1/p)^j
            for (std::size_t j = 0; j < c.A.size() && static_cast<std::size_t>(p) * j <= N; ++j) {
                mpq_class t = 0;
                for (std::size_t i = 0; i < c.rank; ++i) t += c.A[j](i, i);
                trp[static_cast<std::size_t>(p) * j] = mpq_class(p) * t * ctx.power(-static_cast<long>(j)) * (j % 2 ? -1 : 1);
            }
            for (std::size_t m = 0; m <= N; ++m) {
                mpq_class s = mpq_class(static_cast<long>(m)) * phi[m];
                for (std::size_t e = 0; e <= m; ++e) s += (tr[e] - trp[e]) * phi[m - e];
                CHECK(s == 0);
            }
            CHECK(phi[0] == (c.rank % 2 ? -1 : 1) * determinant(phi0));
        }
    }
}

TEST_CASE("valuation at pi theta") {
    for (long p : {3L, 5L, 7L}) {
        PrimeContext ctx(p);
        auto q = exact_series(ctx, qs({0, 1, 0, 0}), true);
        auto tq = val_at_pi_theta(ctx, q);
        CHECK(*tq.value.value == ExtRational(mpq_class(1, p - 1)));
        CHECK_FALSE(tq.tentative);
        auto c = val_at_pi_theta(ctx, exact_series(ctx, {mpq_class(p * p, 11)}, true));
        CHECK(*c.value.value == ExtRational(2));
        CHECK_FALSE(c.tentative);
        auto z = val_at_pi_theta(ctx, exact_series(ctx, qs({0, 0, 0}), true));
        CHECK(z.value.value->is_infinite());
        // rank-1 family q d/dq - kq: val(Phi(pi theta)) = 0
        for (long k : {-2L, -1L, 1L, 2L, 3L}) {
            auto sol = solve_frobenius(ctx, builtin("dwork(" + std::to_string(k) + ")"), rational_identity(1), 60);
            std::vector<mpq_class> cs;
            for (const auto& m : sol.phi.coeffs) cs.push_back(m(0, 0));
            auto t = val_at_pi_theta(ctx, exact_series(ctx, cs, false));
            REQUIRE(t.value.certified());
            CHECK(*t.value.value == ExtRational(0));
            CHECK(t.tentative);
            CHECK(t.order == 60);
        }
    }
    PrimeContext ctx(5);
    auto dc = dwork_coefficients(ctx, 60);
    auto d = val_at_pi_theta(ctx, exact_series(ctx, dc.d, false));
    CHECK(*d.value.value == ExtRational(0));
    CHECK(d.tentative);

    // an indeterminate class below the certified minimum blocks certification
    std::vector<ApproxPadic> a{ApproxPadic(ctx, 1, ExtRational(5)), ApproxPadic(ctx, 0, ExtRational(-1))};
    CHECK_FALSE(val_at_pi_theta(ctx, ApproxSeries(a, ApproxPadic::zero(ctx), true)).value.certified());
    // ... but not one above it
    a[1] = ApproxPadic(ctx, 0, ExtRational(3));
    CHECK(*val_at_pi_theta(ctx, ApproxSeries(a, ApproxPadic::zero(ctx), true)).value.value == ExtRational(0));
}

TEST_CASE("residue classes and multiplicativity") {
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> d(-20, 20);
    for (long p : {3L, 5L, 7L}) {
        PrimeContext ctx(p);
        for (int trial = 0; trial < 20; ++trial) {
            const std::size_t N = 24;
            std::vector<mpq_class> a(N + 1, 0), b(N + 1, 0);
            for (std::size_t i = 0; i <= 6; ++i) {
                a[i] = mpq_class(d(rng)) * ctx.power(d(rng) % 3);
                b[i] = mpq_class(d(rng)) * ctx.power(d(rng) % 3);
            }
            a[0] += 1;
            b[0] += 1;
            auto A = exact_series(ctx, a, true), B = exact_series(ctx, b, true);
            auto cls = residue_classes(ctx, A);
            REQUIRE(cls.size() == static_cast<std::size_t>(p - 1));
            for (std::size_t m = 0; m <= N; ++m) {
                CHECK(cls[m % static_cast<std::size_t>(p - 1)][m / static_cast<std::size_t>(p - 1)].approx() == a[m]);
            }
            auto va = val_at_pi_theta(ctx, A), vb = val_at_pi_theta(ctx, B), vab = val_at_pi_theta(ctx, A * B);
            REQUIRE(va.value.certified());
            REQUIRE(vb.value.certified());
            REQUIRE(vab.value.certified());
            CHECK(*vab.value.value == *va.value.value + *vb.value.value);
            CHECK_FALSE(vab.tentative);
        }
    }
}

TEST_CASE("Newton polygons") {
    auto cp2 = newton_polygon(pts({{0, -3}, {1, -3}, {2, -2}, {3, 0}}));
    CHECK(cp2.vertices == verts({{0, -3}, {1, -3}, {2, -2}, {3, 0}}));
    CHECK(slopes_of(cp2) == qs({0, 1, 2}));

    auto f1 = newton_polygon(pts({{0, -4}, {1, -4}, {2, -3}, {3, -2}, {4, 0}}));
    CHECK(f1.vertices == verts({{0, -4}, {1, -4}, {3, -2}, {4, 0}}));
    CHECK(slopes_of(f1) == qs({0, 1, 1, 2}));
    REQUIRE(f1.slopes.size() == 3);
    CHECK(f1.slopes[1].multiplicity == 2);

    auto single = newton_polygon(pts({{0, 5}}));
    CHECK(single.slopes.empty());

    // points above the hull change nothing; infinite points are ignored
    auto more = pts({{0, -4}, {1, -4}, {2, 7}, {3, -2}, {4, 0}});
    more.emplace_back(5, ExtRational::infinity());
    auto f1b = newton_polygon(more);
    CHECK(f1b.vertices == f1.vertices);

    std::mt19937 rng(9);
    std::uniform_int_distribution<int> d(-10, 10);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<std::pair<long, ExtRational>> p;
        for (long x = 0; x <= 6; ++x) p.emplace_back(x, ExtRational(d(rng)));
        auto np = newton_polygon(p);
        long total = 0;
        for (std::size_t i = 0; i < np.slopes.size(); ++i) {
            total += np.slopes[i].multiplicity;
            if (i) CHECK(np.slopes[i - 1].slope < np.slopes[i].slope);
        }
        CHECK(total == 6);
        // every input point lies on or above the polygon
        for (const auto& [x, y] : np.points) {
            for (std::size_t i = 1; i < np.vertices.size(); ++i) {
                const auto& a = np.vertices[i - 1];
                const auto& b = np.vertices[i];
                if (x < a.first || x > b.first) continue;
                mpq_class line = a.second + (b.second - a.second) * mpq_class(x - a.first, b.first - a.first);
                CHECK(y >= line);
            }
        }
        auto raised = p;
        raised[3].second = ExtRational(np.points[3].second + 100);
        if (std::find(np.vertices.begin(), np.vertices.end(), np.points[3]) == np.vertices.end()) {
            CHECK(newton_polygon(raised).vertices == np.vertices);
        }
    }
    CHECK_THROWS_AS(newton_polygon({}), std::invalid_argument);
    CHECK_THROWS_AS(newton_polygon(pts({{0, 1}, {0, 2}})), std::invalid_argument);
}

TEST_CASE("Betti comparison") {
    auto cp2 = newton_polygon(pts({{0, -3}, {1, -3}, {2, -2}, {3, 0}}));
    CHECK(betti_comparison(cp2.slopes, {{0, 1}, {2, 1}, {4, 1}}).pass);
    auto f1 = newton_polygon(pts({{0, -4}, {1, -4}, {3, -2}, {4, 0}}));
    CHECK(betti_comparison(f1.slopes, {{0, 1}, {2, 2}, {4, 1}}).pass);
    auto bad = betti_comparison(f1.slopes, {{0, 1}, {2, 1}, {4, 2}});
    CHECK_FALSE(bad.pass);
    std::vector<mpq_class> offending;
    for (const auto& c : bad.checks)
        if (!c.ok) offending.push_back(c.slope);
    CHECK(offending == qs({1, 2}));
}

TEST_CASE("full experiment, cubic surface") {
    for (long p : {3L, 5L}) {
        PrimeContext ctx(p);
        auto ex = run_experiment(ctx, builtin("cubic-surface"), ExperimentOptions{});
        REQUIRE(ex.newton.has_value());
        CHECK(ex.newton->vertices == verts({{0, -3}, {1, -3}, {2, -2}, {3, 0}}));
        CHECK(ex.betti->pass);
        for (std::size_t k = 0; k < 3; ++k) CHECK(ex.theta[k].tentative);
        auto twice = run_experiment(ctx, builtin("cubic-surface"), ExperimentOptions{60, 2 * ex.G, 640, true});
        for (std::size_t m = 0; m <= 60; ++m) CHECK(*twice.profile.entries[m].val.value == *ex.profile.entries[m].val.value);
        CHECK(twice.newton->vertices == ex.newton->vertices);
    }
}
