#pragma once

#include "padicfrob/gamma_class.hpp"
#include "padicfrob/matrix.hpp"
#include "padicfrob/padic.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace padicfrob {

/// Monomial b^k of the Gamma-class decomposition, stored as the p-independent matrix of
/// cup product with b^k. For a prime p the constant term is cup * diag(p^{-deg_j/2}).
struct GammaBasisTerm {
    GammaPoly poly;
    RationalMatrix cup;

    friend bool operator==(const GammaBasisTerm& a, const GammaBasisTerm& b) {
        return a.poly == b.poly && a.cup == b.cup;
    }
};

/// q d/dq + A_0 + A_1 q + ... + A_D q^D with A_0 nilpotent.
struct Connection {
    std::string name;
    std::size_t rank = 0;
    std::vector<RationalMatrix> A;
    std::vector<int> degrees;  // real degrees of the basis vectors
    int dim_c = 0;
    std::vector<std::pair<int, int>> betti;  // (degree, rank)
    std::vector<GammaBasisTerm> gamma_decomposition;
    /// Whether A_m is expected to satisfy deg_i = deg_j + 2 - 2m on its support.
    bool graded = true;

    std::size_t degree() const { return A.empty() ? 0 : A.size() - 1; }
    const RationalMatrix& coefficient(std::size_t m) const;
    bool has_coefficient(std::size_t m) const;

    friend bool operator==(const Connection& a, const Connection& b);
};

class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Throws ValidationError on shape problems or a non-nilpotent A_0.
void validate_connection(const Connection& c);

/// Entries of A_m that break the grading rule, as human-readable strings.
std::vector<std::string> grading_violations(const Connection& c);

/// Decomposition terms of a ring's Gamma class, as cup matrices.
std::vector<GammaBasisTerm> gamma_basis_terms(const CohomologyRing& ring, const ChernCharacterData& chern);

/// Built-in registry. Names: cp1, cp(N), cubic-surface, f1, two-quadrics, twistor-simple(d),
/// twistor-big, grassmannian(k,N), dwork(c). Throws std::invalid_argument for unknown names.
Connection builtin(const std::string& name);
std::vector<std::string> builtin_names();
/// The ring and Chern data behind a built-in (absent for dwork(c)).
std::optional<std::pair<CohomologyRing, ChernCharacterData>> builtin_ring(const std::string& name);

/// Connection file (JSON). Parse errors carry a line and column.
Connection parse_connection(const std::string& document);
std::string serialize_connection(const Connection& c);

/// Constant term of a basis solution: cup * diag(p^{-deg_j/2}).
RationalMatrix basis_constant_term(const PrimeContext& ctx, const Connection& c, const RationalMatrix& cup);

/// Frobenius structure Phi(q) solving q dPhi/dq + A(q) Phi - p Phi A(-q^p/p) = 0.
struct FrobeniusSolution {
    RationalMatrixSeries phi;
    std::string provenance;
};

/// Recursion (m + ad) Phi_m = R_m with ad(X) = A_0 X - p X A_0. Requires Phi_0 invertible
/// and A_0 Phi_0 = p Phi_0 A_0; throws std::invalid_argument otherwise.
FrobeniusSolution solve_frobenius(const PrimeContext& ctx, const Connection& c, const RationalMatrix& phi0,
                                  std::size_t N);
/// Same recursion, only requiring the intertwining relation (used for basis monomials).
FrobeniusSolution solve_frobenius_unchecked(const PrimeContext& ctx, const Connection& c,
                                            const RationalMatrix& phi0, std::size_t N);

struct BasisSolution {
    GammaBasisTerm term;
    FrobeniusSolution solution;
};

/// One exact solution per decomposition monomial; throws std::invalid_argument without one.
std::vector<BasisSolution> solve_frobenius_basis(const PrimeContext& ctx, const Connection& c, std::size_t N);

/// Approximate Frobenius structure sum_k gamma_k Phi^k.
struct ApproxFrobeniusSolution {
    ApproxMatrixSeries phi;
    ExtRational K;                 // min err_val of the coefficients gamma_k
    ExtRational H;                 // min valuation over all exact basis coefficients
    std::vector<ExtRational> H_m;  // per-order minimum
};

ApproxFrobeniusSolution combine_basis_solutions(const PrimeContext& ctx, const std::vector<BasisSolution>& basis,
                                                const std::vector<ApproxPadic>& gamma);

/// Gamma-class coefficients gamma_k of the decomposition at precision G.
std::vector<ApproxPadic> gamma_coefficients(const PrimeContext& ctx, const Connection& c, long G);

struct GaugeSolution {
    RationalMatrixSeries pi;
};

/// Pi_0 = I, m Pi_m + [A_0, Pi_m] = -sum_{i<m} A_{m-i} Pi_i.
GaugeSolution solve_gauge(const Connection& c, std::size_t N);

/// Pi(q) Phi_0 Pi(-q^p/p)^{-1} truncated at order N.
FrobeniusSolution frobenius_from_gauge(const PrimeContext& ctx, const Connection& c, const GaugeSolution& gauge,
                                       const RationalMatrix& phi0, std::size_t N);

/// q^m coefficients of q dPhi/dq + A Phi - p Phi A(-q^p/p), m = 0..N.
std::vector<RationalMatrix> frobenius_residual(const PrimeContext& ctx, const Connection& c,
                                               const RationalMatrixSeries& phi);
/// q^m coefficients of q dPi/dq + A Pi - Pi A_0, m = 0..N.
std::vector<RationalMatrix> gauge_residual(const Connection& c, const RationalMatrixSeries& pi);

bool all_zero(const std::vector<RationalMatrix>& ms);

/// Inverse of a series with invertible constant term, to order N.
RationalMatrixSeries series_inverse(const RationalMatrixSeries& s, std::size_t N);

/// Checks val(Pi_m) + m/(p-1) >= -2n(m-1)/(p-1) for m = 1..N; returns the first failing m.
std::optional<std::size_t> gauge_valuation_floor_violation(const PrimeContext& ctx, const GaugeSolution& g,
                                                           int dim_c);

}  // namespace padicfrob
