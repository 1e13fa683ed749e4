#include "padicfrob/satake.hpp"

#include "padicfrob/series.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace padicfrob {

std::size_t WedgeBasis::index(const std::vector<int>& t) const {
    auto it = std::lower_bound(tuples.begin(), tuples.end(), t);
    if (it == tuples.end() || *it != t) throw std::invalid_argument("WedgeBasis::index: tuple not in basis");
    return static_cast<std::size_t>(it - tuples.begin());
}

int WedgeBasis::degree(std::size_t i) const {
    const auto& t = tuples.at(i);
    return 2 * (std::accumulate(t.begin(), t.end(), 0) - k * (k - 1) / 2);
}

std::size_t WedgeBasis::unit() const {
    std::vector<int> t;
    for (int i = k - 1; i >= 0; --i) t.push_back(i);
    return index(t);
}

WedgeBasis wedge_basis(int N, int k) {
    if (N < 1 || k < 1 || k > N) throw std::invalid_argument("wedge_basis: need 1 <= k <= N");
    WedgeBasis b;
    b.N = N;
    b.k = k;
    std::vector<int> t(static_cast<std::size_t>(k));
    // enumerate increasing index sets, store each as a decreasing tuple
    std::vector<int> c(static_cast<std::size_t>(k));
    std::iota(c.begin(), c.end(), 0);
    while (true) {
        std::vector<int> d(c.rbegin(), c.rend());
        b.tuples.push_back(d);
        int i = k - 1;
        while (i >= 0 && c[static_cast<std::size_t>(i)] == N - k + i) --i;
        if (i < 0) break;
        ++c[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j) c[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j - 1)] + 1;
    }
    std::sort(b.tuples.begin(), b.tuples.end());
    return b;
}

SatakeContext satake_context(int k, int N) {
    SatakeContext s;
    s.N = N;
    s.k = k;
    s.epsilon = (k - 1) % 2 == 0 ? 1 : -1;
    s.p_shift = k * (k - 1) / 2;
    return s;
}

namespace {

// Sorts t into decreasing order; returns the permutation sign, or 0 on a repeated entry.
int sort_decreasing(std::vector<int>& t) {
    int sign = 1;
    for (std::size_t i = 0; i < t.size(); ++i) {
        for (std::size_t j = 0; j + 1 < t.size() - i; ++j) {
            if (t[j] == t[j + 1]) return 0;
            if (t[j] < t[j + 1]) {
                std::swap(t[j], t[j + 1]);
                sign = -sign;
            }
        }
    }
    for (std::size_t j = 0; j + 1 < t.size(); ++j) {
        if (t[j] == t[j + 1]) return 0;
    }
    return sign;
}

void require_size(const RationalMatrix& A, const WedgeBasis& basis) {
    if (!A.is_square() || A.rows() != static_cast<std::size_t>(basis.N)) {
        throw std::invalid_argument("Satake: matrix size does not match N");
    }
}

std::vector<std::vector<std::size_t>> permutations(std::size_t k, std::vector<int>& signs) {
    std::vector<std::size_t> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<std::vector<std::size_t>> out;
    do {
        int inv = 0;
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = i + 1; j < k; ++j) inv += perm[i] > perm[j];
        out.push_back(perm);
        signs.push_back(inv % 2 == 0 ? 1 : -1);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

}  // namespace

RationalMatrix lambda_lie(const RationalMatrix& A, const WedgeBasis& basis) {
    require_size(A, basis);
    const std::size_t n = basis.size();
    RationalMatrix out(n, n);
    for (std::size_t J = 0; J < n; ++J) {
        const auto& t = basis.tuples[J];
        for (std::size_t l = 0; l < t.size(); ++l) {
            const std::size_t src = static_cast<std::size_t>(t[l]);
            for (std::size_t i = 0; i < A.rows(); ++i) {
                if (A(i, src) == 0) continue;
                std::vector<int> u = t;
                u[l] = static_cast<int>(i);
                const int sign = sort_decreasing(u);
                if (sign == 0) continue;
                out(basis.index(u), J) += sign * A(i, src);
            }
        }
    }
    return out;
}

RationalMatrix lambda_group(const RationalMatrix& A, const WedgeBasis& basis) {
    require_size(A, basis);
    const std::size_t n = basis.size();
    const std::size_t k = static_cast<std::size_t>(basis.k);
    std::vector<int> signs;
    const auto perms = permutations(k, signs);
    RationalMatrix out(n, n);
    for (std::size_t I = 0; I < n; ++I) {
        for (std::size_t J = 0; J < n; ++J) {
            mpq_class det = 0;
            for (std::size_t s = 0; s < perms.size(); ++s) {
                mpq_class prod = signs[s];
                for (std::size_t a = 0; a < k && prod != 0; ++a) {
                    prod *= A(static_cast<std::size_t>(basis.tuples[I][a]),
                              static_cast<std::size_t>(basis.tuples[J][perms[s][a]]));
                }
                det += prod;
            }
            out(I, J) = det;
        }
    }
    return out;
}

RationalMatrixSeries lambda_group(const RationalMatrixSeries& A, const WedgeBasis& basis) {
    if (A.coeffs.empty()) return A;
    require_size(A.coeffs.front(), basis);
    using Series = TruncatedSeries<mpq_class>;
    const std::size_t N = A.order();
    const std::size_t n = basis.size();
    const std::size_t dim = A.dim();
    const std::size_t k = static_cast<std::size_t>(basis.k);

    std::vector<Series> entry(dim * dim, Series(N, mpq_class(0)));
    for (std::size_t m = 0; m <= N; ++m)
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j) entry[i * dim + j][m] = A.coeffs[m](i, j);

    std::vector<int> signs;
    const auto perms = permutations(k, signs);
    RationalMatrixSeries out;
    out.variable = A.variable;
    out.coeffs.assign(N + 1, RationalMatrix(n, n));
    for (std::size_t I = 0; I < n; ++I) {
        for (std::size_t J = 0; J < n; ++J) {
            Series det(N, mpq_class(0));
            for (std::size_t s = 0; s < perms.size(); ++s) {
                Series prod = Series::constant(N, mpq_class(signs[s]), mpq_class(0));
                for (std::size_t a = 0; a < k; ++a) {
                    const std::size_t r = static_cast<std::size_t>(basis.tuples[I][a]);
                    const std::size_t c = static_cast<std::size_t>(basis.tuples[J][perms[s][a]]);
                    prod = prod * entry[r * dim + c];
                    if (prod.is_zero()) break;
                }
                det += prod;
            }
            for (std::size_t m = 0; m <= N; ++m) out.coeffs[m](I, J) = det[m];
        }
    }
    return out;
}

RationalMatrix cp_classical_x(int N) {
    RationalMatrix x(static_cast<std::size_t>(N), static_cast<std::size_t>(N));
    for (int i = 1; i < N; ++i) x(static_cast<std::size_t>(i), static_cast<std::size_t>(i - 1)) = 1;
    return x;
}

namespace {

RationalMatrix corner(int N) {
    RationalMatrix e(static_cast<std::size_t>(N), static_cast<std::size_t>(N));
    e(0, static_cast<std::size_t>(N - 1)) = 1;
    return e;
}

std::vector<std::pair<int, int>> betti_from_degrees(const std::vector<int>& degrees) {
    std::map<int, int> counts;
    for (int d : degrees) ++counts[d];
    return {counts.begin(), counts.end()};
}

std::string tuple_label(const std::vector<int>& t) {
    std::string s;
    for (std::size_t i = 0; i < t.size(); ++i) s += (i ? "^x" : "x") + std::to_string(t[i]);
    return s;
}

// Greedy rank-increasing selection of vectors; returns chosen indices.
std::vector<std::size_t> spanning_subset(const std::vector<RingElement>& vs, std::size_t dim) {
    std::vector<RingElement> echelon;
    std::vector<std::size_t> pivots;
    std::vector<std::size_t> chosen;
    for (std::size_t idx = 0; idx < vs.size() && chosen.size() < dim; ++idx) {
        RingElement v = vs[idx];
        for (std::size_t e = 0; e < echelon.size(); ++e) {
            if (v[pivots[e]] == 0) continue;
            mpq_class f = v[pivots[e]] / echelon[e][pivots[e]];
            for (std::size_t c = 0; c < dim; ++c) v[c] -= f * echelon[e][c];
        }
        auto it = std::find_if(v.begin(), v.end(), [](const mpq_class& x) { return x != 0; });
        if (it == v.end()) continue;
        pivots.push_back(static_cast<std::size_t>(it - v.begin()));
        echelon.push_back(v);
        chosen.push_back(idx);
    }
    return chosen;
}

RationalMatrix inverse(const RationalMatrix& m) {
    RationalMatrixSeries s;
    s.coeffs.push_back(m);
    return series_inverse(s, 0).coeffs.front();
}

}  // namespace

Connection twisted_cp_connection(int N, int epsilon) {
    if (N < 2) throw std::invalid_argument("cp(N) needs N >= 2");
    Connection c;
    c.name = epsilon == 1 ? "cp(" + std::to_string(N) + ")" : "cp(" + std::to_string(N) + ")-twisted";
    c.rank = static_cast<std::size_t>(N);
    c.A.assign(static_cast<std::size_t>(N) + 1, RationalMatrix(c.rank, c.rank));
    c.A[0] = scaled(cp_classical_x(N), mpq_class(N));
    c.A[static_cast<std::size_t>(N)] = scaled(corner(N), mpq_class(N * epsilon));
    for (int i = 0; i < N; ++i) c.degrees.push_back(2 * i);
    c.dim_c = N - 1;
    c.betti = betti_from_degrees(c.degrees);
    auto ring = truncated_polynomial_ring(N - 1);
    ChernCharacterData ch;
    mpz_class fact = 1;
    for (int m = 1; m <= N - 1; ++m) {
        fact *= m;
        if (m % 2 == 0) continue;
        RingElement e = ring.zero();
        e[static_cast<std::size_t>(m)] = mpq_class(N) / mpq_class(fact);
        ch.odd[m] = e;
    }
    c.gamma_decomposition = gamma_basis_terms(ring, ch);
    return c;
}

std::pair<CohomologyRing, ChernCharacterData> grassmannian_ring(int k, int N) {
    if (k < 1 || k > N - 1) throw std::invalid_argument("grassmannian: need 1 <= k <= N-1");
    const WedgeBasis basis = wedge_basis(N, k);
    const std::size_t n = basis.size();
    const int dim_c = k * (N - k);
    const RationalMatrix X = cp_classical_x(N);

    std::vector<RationalMatrix> P;  // P[m] = Lambda_Lie(X^m), m >= 1
    P.emplace_back(n, n);
    RationalMatrix Xm = rational_identity(static_cast<std::size_t>(N));
    for (int m = 1; m <= std::max(k, dim_c); ++m) {
        Xm = Xm * X;
        P.push_back(lambda_lie(Xm, basis));
    }

    // monomials in P_1..P_k of weighted degree <= dim_c, as operators
    std::vector<RationalMatrix> ops{rational_identity(n)};
    std::vector<int> weight{0};
    std::vector<int> last{1};
    for (std::size_t idx = 0; idx < ops.size(); ++idx) {
        for (int m = last[idx]; m <= k; ++m) {
            if (weight[idx] + m > dim_c) break;
            ops.push_back(P[static_cast<std::size_t>(m)] * ops[idx]);
            weight.push_back(weight[idx] + m);
            last.push_back(m);
        }
    }
    const std::size_t u = basis.unit();
    std::vector<RingElement> images;
    for (const auto& op : ops) {
        RingElement v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = op(i, u);
        images.push_back(v);
    }
    const auto chosen = spanning_subset(images, n);
    if (chosen.size() != n) throw std::logic_error("grassmannian_ring: power sums do not generate the wedge space");
    RationalMatrix V(n, n);
    for (std::size_t c = 0; c < n; ++c)
        for (std::size_t i = 0; i < n; ++i) V(i, c) = images[chosen[c]][i];
    const RationalMatrix Vinv = inverse(V);

    std::vector<std::vector<RingElement>> structure(n, std::vector<RingElement>(n, RingElement(n, 0)));
    for (std::size_t i = 0; i < n; ++i) {
        // multiplication by e_i as an operator: sum_c Vinv(c, i) op_c
        RationalMatrix T(n, n);
        for (std::size_t c = 0; c < n; ++c) {
            if (Vinv(c, i) == 0) continue;
            T += scaled(ops[chosen[c]], Vinv(c, i));
        }
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t r = 0; r < n; ++r) structure[i][j][r] = T(r, j);
    }
    std::vector<std::string> labels;
    std::vector<int> degrees;
    for (std::size_t i = 0; i < n; ++i) {
        labels.push_back(tuple_label(basis.tuples[i]));
        degrees.push_back(basis.degree(i));
    }
    CohomologyRing ring = make_ring(labels, degrees, dim_c, u, structure);

    ChernCharacterData ch;
    mpz_class fact = 1;
    for (int m = 1; m <= dim_c; ++m) {
        fact *= m;
        if (m % 2 == 0) continue;
        RingElement e(n);
        for (std::size_t i = 0; i < n; ++i) e[i] = P[static_cast<std::size_t>(m)](i, u) * mpq_class(N) / mpq_class(fact);
        ch.odd[m] = e;
    }
    return {ring, ch};
}

Connection grassmannian_connection(int k, int N) {
    if (k < 1 || k > N - 1) throw std::invalid_argument("grassmannian: need 1 <= k <= N-1");
    const WedgeBasis basis = wedge_basis(N, k);
    const SatakeContext sc = satake_context(k, N);
    Connection c;
    c.name = "grassmannian(" + std::to_string(k) + "," + std::to_string(N) + ")";
    c.rank = basis.size();
    c.A.assign(static_cast<std::size_t>(N) + 1, RationalMatrix(c.rank, c.rank));
    c.A[0] = scaled(lambda_lie(cp_classical_x(N), basis), mpq_class(N));
    c.A[static_cast<std::size_t>(N)] = scaled(lambda_lie(corner(N), basis), mpq_class(N * sc.epsilon));
    for (std::size_t i = 0; i < basis.size(); ++i) c.degrees.push_back(basis.degree(i));
    c.dim_c = k * (N - k);
    c.betti = betti_from_degrees(c.degrees);
    auto [ring, ch] = grassmannian_ring(k, N);
    c.gamma_decomposition = gamma_basis_terms(ring, ch);
    return c;
}

GrassmannianFrobenius grassmannian_frobenius(const PrimeContext& ctx, int k, int N, long G, std::size_t order) {
    const SatakeContext sc = satake_context(k, N);
    const Connection cp = twisted_cp_connection(N, sc.epsilon);
    const auto gamma = gamma_coefficients(ctx, cp, G);
    GrassmannianFrobenius out;
    RationalMatrix phi0(cp.rank, cp.rank);
    for (std::size_t t = 0; t < gamma.size(); ++t) {
        out.gamma_cp.push_back(gamma[t].approx());
        phi0 += scaled(basis_constant_term(ctx, cp, cp.gamma_decomposition[t].cup), gamma[t].approx());
    }
    out.cp_constant_term = phi0;
    const auto cp_sol = solve_frobenius(ctx, cp, phi0, order);
    const WedgeBasis basis = wedge_basis(N, k);
    out.exterior.phi = lambda_group(cp_sol.phi, basis);
    const mpq_class shift = ctx.power(sc.p_shift);
    for (auto& m : out.exterior.phi.coeffs) m.scale(shift);
    out.exterior.provenance = "exterior power of twisted cp(" + std::to_string(N) + ")";
    return out;
}

}  // namespace padicfrob
