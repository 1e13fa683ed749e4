#include "doctest.h"
#include "padicfrob/connections.hpp"
#include "padicfrob/satake.hpp"

#include <random>

using namespace padicfrob;

namespace {

RationalMatrix random_matrix(std::mt19937& rng, std::size_t n) {
    std::uniform_int_distribution<int> num(-5, 5), den(1, 4);
    RationalMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            m(i, j) = mpq_class(num(rng), den(rng));
            m(i, j).canonicalize();
        }
    return m;
}

mpq_class trace(const RationalMatrix& m) {
    mpq_class t = 0;
    for (std::size_t i = 0; i < m.rows(); ++i) t += m(i, i);
    return t;
}

mpz_class binomial(long n, long k) {
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return r;
}

// Betti numbers of Gr(k,N) by degree: coefficients of the Gaussian binomial [N choose k]_t.
std::vector<long> gaussian_binomial(int k, int N) {
    // count k-subsets of {0..N-1} by sum - k(k-1)/2
    std::vector<long> out(static_cast<std::size_t>(k * (N - k) + 1), 0);
    auto basis = wedge_basis(N, k);
    for (std::size_t i = 0; i < basis.size(); ++i) ++out[static_cast<std::size_t>(basis.degree(i) / 2)];
    return out;
}

}  // namespace

TEST_CASE("wedge basis") {
    auto b = wedge_basis(4, 2);
    CHECK(b.size() == 6);
    CHECK(b.tuples.front() == std::vector<int>{1, 0});
    CHECK(b.tuples.back() == std::vector<int>{3, 2});
    CHECK(b.unit() == 0);
    CHECK(b.degree(b.index({3, 2})) == 8);
    for (int N = 2; N <= 6; ++N)
        for (int k = 1; k <= N; ++k) CHECK(wedge_basis(N, k).size() == binomial(N, k));
    CHECK_THROWS_AS(b.index({0, 1}), std::invalid_argument);
    // Gaussian binomial [4 choose 2] = 1 + t + 2t^2 + t^3 + t^4
    CHECK(gaussian_binomial(2, 4) == std::vector<long>{1, 1, 2, 1, 1});
    CHECK(gaussian_binomial(2, 5) == std::vector<long>{1, 1, 2, 2, 2, 1, 1});
}

TEST_CASE("satake context") {
    CHECK(satake_context(1, 4).epsilon == 1);
    CHECK(satake_context(2, 4).epsilon == -1);
    CHECK(satake_context(3, 5).epsilon == 1);
    CHECK(satake_context(3, 5).p_shift == 3);
}

TEST_CASE("exterior powers of matrices") {
    std::mt19937 rng(7);
    for (int N = 2; N <= 5; ++N) {
        for (int k = 1; k <= N; ++k) {
            auto basis = wedge_basis(N, k);
            const std::size_t n = basis.size();
            CHECK(lambda_lie(rational_identity(static_cast<std::size_t>(N)), basis) ==
                  scaled(rational_identity(n), mpq_class(k)));
            CHECK(lambda_group(rational_identity(static_cast<std::size_t>(N)), basis) == rational_identity(n));
            auto A = random_matrix(rng, static_cast<std::size_t>(N));
            auto B = random_matrix(rng, static_cast<std::size_t>(N));
            CHECK(lambda_group(A * B, basis) == lambda_group(A, basis) * lambda_group(B, basis));
            // derivation property
            CHECK(lambda_lie(A * B - B * A, basis) ==
                  lambda_lie(A, basis) * lambda_lie(B, basis) - lambda_lie(B, basis) * lambda_lie(A, basis));
            if (k == N) {
                CHECK(lambda_lie(A, basis)(0, 0) == trace(A));
                CHECK(lambda_group(A, basis)(0, 0) == determinant(A));
            }
            if (k == 1) {
                CHECK(lambda_lie(A, basis) == A);
                CHECK(lambda_group(A, basis) == A);
            }
        }
    }
    CHECK_THROWS_AS(lambda_lie(rational_identity(3), wedge_basis(4, 2)), std::invalid_argument);
    CHECK_THROWS_AS(lambda_group(rational_identity(3), wedge_basis(4, 2)), std::invalid_argument);
}

TEST_CASE("Lambda_Group(exp(tA)) = exp(t Lambda_Lie(A)) for nilpotent A") {
    std::mt19937 rng(11);
    for (int N = 3; N <= 5; ++N) {
        // strictly lower triangular random A
        RationalMatrix A = random_matrix(rng, static_cast<std::size_t>(N));
        for (std::size_t i = 0; i < A.rows(); ++i)
            for (std::size_t j = i; j < A.cols(); ++j) A(i, j) = 0;
        const std::size_t order = 2 * static_cast<std::size_t>(N) + 2;
        RationalMatrixSeries E;
        E.coeffs.push_back(rational_identity(static_cast<std::size_t>(N)));
        for (std::size_t m = 1; m <= order; ++m) E.coeffs.push_back(scaled(E.coeffs.back() * A, mpq_class(1, static_cast<long>(m))));
        for (int k = 1; k <= N; ++k) {
            auto basis = wedge_basis(N, k);
            auto G = lambda_group(E, basis);
            auto L = lambda_lie(A, basis);
            RationalMatrix term = rational_identity(basis.size());
            for (std::size_t m = 0; m <= order; ++m) {
                CHECK(G.coeffs[m] == term);
                term = scaled(term * L, mpq_class(1, static_cast<long>(m + 1)));
            }
            CHECK(G.coeffs[1] == L);
        }
    }
}

TEST_CASE("grassmannian connections") {
    for (int N = 2; N <= 5; ++N) {
        auto g = grassmannian_connection(1, N);
        auto cp = builtin("cp(" + std::to_string(N) + ")");
        CHECK(g.A == cp.A);
        CHECK(g.degrees == cp.degrees);
    }
    CHECK_THROWS_AS(grassmannian_connection(0, 4), std::invalid_argument);
    CHECK_THROWS_AS(grassmannian_connection(4, 4), std::invalid_argument);

    auto gr = grassmannian_connection(2, 4);
    CHECK(gr.rank == 6);
    CHECK(gr.dim_c == 4);
    CHECK(nilpotency_index(gr.A[0]) == 5);
    // Hard Lefschetz: rank A_0^j = sum_d min(b_d, b_{d+j})
    auto betti = gaussian_binomial(2, 4);
    RationalMatrix P = rational_identity(6);
    for (std::size_t j = 1; j <= 5; ++j) {
        P = P * gr.A[0];
        long expected = 0;
        for (std::size_t d = 0; d + j < betti.size(); ++d) expected += std::min(betti[d], betti[d + j]);
        CHECK(static_cast<long>(rank(P)) == expected);
    }
    std::vector<std::pair<int, int>> expected_betti{{0, 1}, {2, 1}, {4, 2}, {6, 1}, {8, 1}};
    CHECK(gr.betti == expected_betti);
}

TEST_CASE("k = N-1 is projective space") {
    // tuple missing i corresponds to x^{N-1-i}
    for (int N = 3; N <= 6; ++N) {
        auto g = grassmannian_connection(N - 1, N);
        auto cp = builtin("cp(" + std::to_string(N) + ")");
        auto basis = wedge_basis(N, N - 1);
        RationalMatrix S(static_cast<std::size_t>(N), static_cast<std::size_t>(N));  // cp coords -> wedge coords
        for (int i = 0; i < N; ++i) {
            std::vector<int> t;
            for (int d = N - 1; d >= 0; --d)
                if (d != i) t.push_back(d);
            S(basis.index(t), static_cast<std::size_t>(N - 1 - i)) = 1;
        }
        for (std::size_t m = 0; m < cp.A.size(); ++m) CHECK(g.A[m] * S == S * cp.A[m]);
        // the unit corresponds to the missing N-1
        CHECK(S(basis.unit(), 0) == 1);
    }
}

TEST_CASE("grassmannian rings") {
    for (auto [k, N] : std::vector<std::pair<int, int>>{{2, 4}, {2, 5}, {3, 5}, {3, 6}}) {
        CAPTURE(k);
        CAPTURE(N);
        auto [ring, ch] = grassmannian_ring(k, N);
        CHECK(ring_axiom_violations(ring).empty());
        auto conn = grassmannian_connection(k, N);
        CHECK(cup_matrix(ring, ch.odd.at(1)) == conn.A[0]);
        CHECK(grading_violations(conn).empty());
        CHECK_NOTHROW(validate_connection(conn));
    }
}

TEST_CASE("exterior-power Frobenius equals the direct solve") {
    PrimeContext ctx(3);
    for (auto [k, N] : std::vector<std::pair<int, int>>{{1, 3}, {2, 4}, {2, 5}}) {
        CAPTURE(k);
        CAPTURE(N);
        auto ext = grassmannian_frobenius(ctx, k, N, 10, 20);
        auto conn = grassmannian_connection(k, N);
        auto direct = solve_frobenius(ctx, conn, ext.exterior.phi.coeffs[0], 20);
        CHECK(direct.phi.coeffs == ext.exterior.phi.coeffs);
        CHECK(all_zero(frobenius_residual(ctx, conn, ext.exterior.phi)));
    }
    auto k1 = grassmannian_frobenius(ctx, 1, 4, 10, 15);
    auto cp = solve_frobenius(ctx, builtin("cp(4)"), k1.cp_constant_term, 15);
    CHECK(k1.exterior.phi.coeffs == cp.phi.coeffs);
}

TEST_CASE("exterior constant term is the Gamma class of the Grassmannian") {
    for (long p : {3L, 5L, 7L}) {
        PrimeContext ctx(p);
        for (auto [k, N] : std::vector<std::pair<int, int>>{{2, 4}, {2, 5}, {3, 5}}) {
            CAPTURE(p);
            CAPTURE(k);
            CAPTURE(N);
            const long G = 10;
            auto ext = grassmannian_frobenius(ctx, k, N, G, 0);
            auto [ring, ch] = grassmannian_ring(k, N);
            auto phi0 = constant_term_endomorphism(ctx, ring, gamma_class(ctx, ring, ch, G));
            const auto& e0 = ext.exterior.phi.coeffs[0];
            for (std::size_t i = 0; i < e0.rows(); ++i)
                for (std::size_t j = 0; j < e0.cols(); ++j) {
                    auto diff = phi0(i, j) - ApproxPadic(ctx, e0(i, j), phi0(i, j).err_val());
                    // both sides carry precision about G above the entry scale p^{-dim}
                    CHECK(consistent_with_zero(diff));
                }
        }
    }
}
