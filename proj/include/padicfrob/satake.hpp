#pragma once

#include "padicfrob/connections.hpp"
#include "padicfrob/gamma_class.hpp"
#include "padicfrob/matrix.hpp"

#include <cstddef>
#include <vector>

namespace padicfrob {

/// Strictly decreasing k-tuples d_1 > ... > d_k in [0, N-1], standing for x^{d_1} ^ ... ^ x^{d_k},
/// in ascending lexicographic order. For k = 1 this is the monomial basis 1, x, ..., x^{N-1}.
struct WedgeBasis {
    int N = 0;
    int k = 0;
    std::vector<std::vector<int>> tuples;

    std::size_t size() const { return tuples.size(); }
    /// Index of a strictly decreasing tuple; throws when absent.
    std::size_t index(const std::vector<int>& t) const;
    /// Real cohomological degree 2 (sum d_i - k(k-1)/2).
    int degree(std::size_t i) const;
    /// Index of x^{k-1} ^ ... ^ x^0, the ring unit.
    std::size_t unit() const;
};

WedgeBasis wedge_basis(int N, int k);

/// Sign epsilon = (-1)^{k-1} applied to the q^N entry, and the p-power k(k-1)/2 relating
/// the Frobenius structures in this normalization.
struct SatakeContext {
    int N = 0;
    int k = 0;
    int epsilon = 1;
    int p_shift = 0;
};

SatakeContext satake_context(int k, int N);

/// Derivation extension sum_l (A acting in slot l), with reordering signs.
RationalMatrix lambda_lie(const RationalMatrix& A, const WedgeBasis& basis);
/// Multiplicative extension: entry (I, J) is the k x k minor det A[I][J].
RationalMatrix lambda_group(const RationalMatrix& A, const WedgeBasis& basis);
/// Coefficientwise-correct Lambda_Group of a truncated matrix series (minors over the series ring).
RationalMatrixSeries lambda_group(const RationalMatrixSeries& A, const WedgeBasis& basis);

/// Multiplication-by-x matrix of CP^{N-1} in the basis 1..x^{N-1}, split as X_0 + c q^N E.
RationalMatrix cp_classical_x(int N);

/// cp(N) with the q^N entry multiplied by epsilon.
Connection twisted_cp_connection(int N, int epsilon);

/// Classical cohomology of Gr(k, N) in wedge coordinates with odd Chern character of TGr.
std::pair<CohomologyRing, ChernCharacterData> grassmannian_ring(int k, int N);

/// q d/dq + N Lambda_Lie(X_eps(q)), with metadata and Gamma decomposition.
Connection grassmannian_connection(int k, int N);

struct GrassmannianFrobenius {
    FrobeniusSolution exterior;       // p^{k(k-1)/2} Lambda_Group(Phi_eps)
    RationalMatrix cp_constant_term;  // constant term used for the twisted CP^{N-1} solve
    std::vector<mpq_class> gamma_cp;  // exact rational gamma coefficients used
};

/// Exterior-power construction from the twisted CP^{N-1} Frobenius structure whose constant
/// term is the Gamma class rounded to precision G.
GrassmannianFrobenius grassmannian_frobenius(const PrimeContext& ctx, int k, int N, long G, std::size_t order);

}  // namespace padicfrob
