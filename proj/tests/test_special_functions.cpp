#include "doctest.h"
#include "padicfrob/special_functions.hpp"

#include <cmath>

using namespace padicfrob;

namespace {

// Morita's Gamma_p(n) = (-1)^n prod_{0<j<n, p not | j} j, reduced modulo p^digits.
mpz_class morita_gamma_mod(long p, long n, long digits) {
    mpz_class mod;
    mpz_ui_pow_ui(mod.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(digits));
    mpz_class acc = 1;
    for (long j = 1; j < n; ++j) {
        if (j % p == 0) continue;
        acc = (acc * j) % mod;
    }
    if (n % 2 == 1) acc = (mod - acc) % mod;
    return acc;
}

bool agree_to(const PrimeContext& ctx, const mpq_class& a, const mpq_class& b, long v) {
    return ExtRational(v) <= val_p(ctx, mpq_class(a - b));
}

}  // namespace

TEST_CASE("Dwork coefficients") {
    PrimeContext p3(3);
    auto dc = dwork_coefficients(p3, 60);
    CHECK(dc.d[0] == 1);
    CHECK(dc.d[3] == mpq_class(1, 2));
    CHECK(dwork_recursion_holds(dc));
    for (std::size_t m = 0; m <= 60; ++m) {
        CHECK(ExtRational(mpq_class(-5 * static_cast<long>(m), 18)) <= val_p(p3, dc.d[m]));
    }
    for (long p : {5L, 7L, 11L}) {
        PrimeContext ctx(p);
        auto d = dwork_coefficients(ctx, 150);
        CHECK(dwork_recursion_holds(d));
        for (std::size_t m = 0; m <= 150; ++m) CHECK(ExtRational(dwork_valuation_floor(p, m)) <= val_p(ctx, d.d[m]));
    }
}

TEST_CASE("Stirling numbers of the first kind") {
    auto s = stirling_first_kind(6, 5);
    // z(z-1)(z-2)(z-3)(z-4) = z^5 - 10 z^4 + 35 z^3 - 50 z^2 + 24 z
    CHECK(s[5][1] == 24);
    CHECK(s[5][2] == -50);
    CHECK(s[5][3] == 35);
    CHECK(s[5][4] == -10);
    CHECK(s[5][5] == 1);
    CHECK(s[0][0] == 1);
}

TEST_CASE("Mahler truncation bound satisfies both inequalities") {
    for (long p : {3L, 5L, 7L, 11L}) {
        PrimeContext ctx(p);
        for (long k = 1; k <= 8; ++k) {
            long prev = 0;
            for (long G = -5; G <= 60; G += 5) {
                long M = mahler_truncation_bound(ctx, k, G);
                double lp = std::log(static_cast<double>(p));
                CHECK(static_cast<double>(M) >= k * p / ((p - 1) * lp) + 1);
                double f = static_cast<double>(k) / (p - 1) + M * (p - 1.0) / p - std::log(k) / lp -
                           k * std::log(M - 1.0) / lp - (2.0 * p - 1) / (p - 1);
                CHECK(f > G);
                CHECK(M >= prev);
                prev = M;
            }
        }
    }
}

TEST_CASE("Mahler tail estimate holds termwise") {
    for (long p : {3L, 5L, 7L}) {
        PrimeContext ctx(p);
        auto dc = dwork_coefficients(ctx, static_cast<std::size_t>(p * 80));
        auto s = stirling_first_kind(81, 5);
        for (long k = 1; k <= 5; ++k) {
            mpz_class kf;
            mpz_fac_ui(kf.get_mpz_t(), static_cast<unsigned long>(k));
            for (long m = 2; m <= 80; ++m) {
                if (m < k * p / ((p - 1) * std::log(static_cast<double>(p))) + 1) continue;
                const mpz_class& st = s[static_cast<std::size_t>(m)][static_cast<std::size_t>(k)];
                if (st == 0) continue;
                mpz_class pm;
                mpz_ui_pow_ui(pm.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(m));
                mpq_class term = mpq_class(kf * pm * st) * dc.d[static_cast<std::size_t>(m * p)];
                CHECK(static_cast<long double>(val_p(ctx, term).value().get_d()) >= mahler_term_floor(p, k, m));
            }
        }
    }
}

TEST_CASE("truncation at M and M+10 agrees to the requested precision") {
    for (long p : {3L, 5L, 7L}) {
        PrimeContext ctx(p);
        for (long G : {1L, 10L}) {
            for (long k = 1; k <= 4; ++k) {
                long M = mahler_truncation_bound(ctx, k, G + k);
                auto dc = dwork_coefficients(ctx, static_cast<std::size_t>(p * (M + 9)));
                mpq_class a = gamma_derivative_truncated(ctx, k, M, dc);
                mpq_class b = gamma_derivative_truncated(ctx, k, M + 10, dc);
                CHECK(agree_to(ctx, a, b, G));
            }
        }
    }
}

TEST_CASE("Gamma derivatives") {
    for (long p : {3L, 5L, 7L}) {
        PrimeContext ctx(p);
        auto gd = gamma_derivatives(ctx, 6, 10);
        CHECK(gd.values[0].is_exact());
        CHECK(gd.values[0].approx() == 1);
        for (const auto& v : gd.values) CHECK(ExtRational(10) <= v.err_val());

        // Gamma'' = Gamma'^2 and Gamma^(4) = 4 Gamma' Gamma''' - 3 Gamma'^4
        const auto& G = gd.values;
        CHECK(consistent_with_zero(G[2] - G[1] * G[1]));
        CHECK(consistent_with_zero(G[4] - mpq_class(4) * G[1] * G[3] + mpq_class(3) * G[1] * G[1] * G[1] * G[1]));

        // even Taylor identity for k <= 6
        const auto& g = gd.taylor;
        for (long k = 2; k <= 6; k += 2) {
            long h = k / 2;
            ApproxPadic rhs = g[static_cast<std::size_t>(h)] * g[static_cast<std::size_t>(h)] *
                              mpq_class((h - 1) % 2 == 0 ? 1 : -1, 2);
            for (long j = 1; j < h; ++j) {
                ApproxPadic t = g[static_cast<std::size_t>(j)] * g[static_cast<std::size_t>(k - j)];
                rhs += (j - 1) % 2 == 0 ? t : -t;
            }
            CHECK(consistent_with_zero(g[static_cast<std::size_t>(k)] - rhs));
        }

        // doubled precision agrees
        auto gd2 = gamma_derivatives(ctx, 6, 20);
        for (long k = 0; k <= 6; ++k) {
            CHECK(agree_to(ctx, gd.values[static_cast<std::size_t>(k)].approx(),
                           gd2.values[static_cast<std::size_t>(k)].approx(), 10));
        }
    }
}

TEST_CASE("Gamma'(0) against Morita's product formula") {
    // Gamma_p(p^a) = 1 + Gamma'(0) p^a + O(p^{2a + val(g_2)})
    struct Case {
        long p, a;
    };
    for (Case c : {Case{3, 8}, Case{5, 5}, Case{7, 4}}) {
        PrimeContext ctx(c.p);
        long n = 1;
        for (long i = 0; i < c.a; ++i) n *= c.p;
        long digits = 3 * c.a;
        mpq_class est = mpq_class(morita_gamma_mod(c.p, n, digits) - 1) / mpq_class(n);
        auto gd = gamma_derivatives(ctx, 1, 2 * c.a);
        CHECK(agree_to(ctx, est, gd.values[1].approx(), c.a - 3));
    }
}

TEST_CASE("log Gamma coefficients") {
    for (long p : {3L, 5L, 7L}) {
        PrimeContext ctx(p);
        auto gd = gamma_derivatives(ctx, 6, 40);
        auto lg = log_gamma_coefficients(ctx, gd, 6, 10);
        const auto& G = gd.values;
        CHECK(consistent_with_zero(lg.l[1] - G[1]));
        CHECK(consistent_with_zero(lg.l[3] - (G[3] - G[1] * G[1] * G[1])));
        CHECK(consistent_with_zero(lg.l[5] - (G[5] - mpq_class(10) * G[1] * G[1] * G[3] +
                                              mpq_class(9) * G[1] * G[1] * G[1] * G[1] * G[1])));
        for (long m : {2L, 4L, 6L}) CHECK(consistent_with_zero(lg.l[static_cast<std::size_t>(m)]));

        auto auto_lg = log_gamma_coefficients(ctx, 7, 10);
        for (long m = 1; m <= 7; ++m) CHECK(ExtRational(10) <= auto_lg.l[static_cast<std::size_t>(m)].err_val());
    }
}

TEST_CASE("log Gamma refuses to certify beyond its inputs") {
    PrimeContext ctx(3);
    auto gd = gamma_derivatives(ctx, 5, 4);
    CHECK_THROWS_AS(log_gamma_coefficients(ctx, gd, 5, 30), PrecisionError);
}
