#pragma once

#include "padicfrob/matrix.hpp"
#include "padicfrob/padic.hpp"
#include "padicfrob/special_functions.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace padicfrob {

using RingElement = std::vector<mpq_class>;

/// Even cohomology given by structure constants in a fixed basis.
struct CohomologyRing {
    std::vector<std::string> labels;
    std::vector<int> degrees;  // real degrees, all even
    /// structure[i][j] holds the coordinates of e_i e_j.
    std::vector<std::vector<RingElement>> structure;
    std::size_t unit = 0;
    int dim_c = 0;

    std::size_t rank() const { return labels.size(); }
    RingElement zero() const { return RingElement(rank(), 0); }
    RingElement basis(std::size_t i) const;
    RingElement one() const { return basis(unit); }

    RingElement multiply(const RingElement& a, const RingElement& b) const;
    std::vector<ApproxPadic> multiply(const std::vector<ApproxPadic>& a, const std::vector<ApproxPadic>& b) const;

    /// (degree, rank) pairs, ascending in degree.
    std::vector<std::pair<int, int>> betti() const;
};

/// Builds a ring from a table of products; `products(i, j)` returns coordinates of e_i e_j.
CohomologyRing make_ring(std::vector<std::string> labels, std::vector<int> degrees, int dim_c, std::size_t unit,
                         const std::vector<std::vector<RingElement>>& structure);

/// Q[x]/x^{n+1}, basis 1, x, ..., x^n.
CohomologyRing truncated_polynomial_ring(int n);

/// Violations of commutativity, associativity, grading, unit, and the rank of degree 0.
std::vector<std::string> ring_axiom_violations(const CohomologyRing& ring);

/// Odd Chern-character components ch_1, ch_3, ... of a bundle, keyed by m.
struct ChernCharacterData {
    std::map<int, RingElement> odd;

    /// Chern character of the dual bundle: odd components change sign.
    ChernCharacterData dual() const;
};

/// Newton's identities: power sums from the elementary classes c_1..c_n.
/// Returns all ch_m for m = 1..dim_c (index 0 unused).
std::vector<RingElement> chern_character_from_classes(const CohomologyRing& ring,
                                                      const std::vector<RingElement>& chern_classes);
ChernCharacterData odd_chern_character(const CohomologyRing& ring, const std::vector<RingElement>& chern_classes);

/// Monomial in the symbols G1, G3, G5, ... (order -> exponent).
using GammaMonomial = std::map<int, int>;

/// Rational polynomial in G1, G3, G5, ... standing for odd derivatives of Gamma_p at 0.
class GammaPoly {
public:
    GammaPoly() = default;
    explicit GammaPoly(const mpq_class& c);
    static GammaPoly symbol(int order);

    const std::map<GammaMonomial, mpq_class>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    void add_term(const GammaMonomial& m, const mpq_class& c);

    GammaPoly& operator+=(const GammaPoly& o);
    GammaPoly& operator-=(const GammaPoly& o);
    GammaPoly& operator*=(const mpq_class& c);
    friend GammaPoly operator+(GammaPoly a, const GammaPoly& b) { return a += b; }
    friend GammaPoly operator-(GammaPoly a, const GammaPoly& b) { return a -= b; }
    friend GammaPoly operator*(GammaPoly a, const mpq_class& c) { return a *= c; }
    friend GammaPoly operator*(const GammaPoly& a, const GammaPoly& b);
    friend bool operator==(const GammaPoly& a, const GammaPoly& b) { return a.terms_ == b.terms_; }

    /// Substitutes values[order] for G_order.
    ApproxPadic evaluate(const PrimeContext& ctx, const std::vector<ApproxPadic>& values) const;
    /// Highest symbol order that occurs (0 for constants).
    int max_order() const;

    std::string to_string() const;

private:
    std::map<GammaMonomial, mpq_class> terms_;
};

/// l_1..l_{m_max} as polynomials in odd symbols (index 0 unused).
std::vector<GammaPoly> symbolic_log_gamma(int m_max);

/// Gamma_p^{(k)}(0)/k! as polynomials in odd symbols, even orders eliminated (index 0 is 1).
std::vector<GammaPoly> symbolic_taylor(int k_max);

/// Coefficient polynomial attached to a basis element.
struct GammaTerm {
    GammaPoly poly;
    std::size_t basis_index = 0;
    RingElement element;
};
using GammaMonomialDecomposition = std::vector<GammaTerm>;

/// exp(sum_{odd m} l_m ch_m) expanded symbolically and collected by basis element.
GammaMonomialDecomposition gamma_monomial_decomposition(const CohomologyRing& ring, const ChernCharacterData& chern);

/// Coordinates of the decomposition after substituting derivative values.
std::vector<ApproxPadic> evaluate_decomposition(const PrimeContext& ctx, const GammaMonomialDecomposition& dec,
                                                std::size_t rank, const GammaDerivatives& derivs);

/// exp(sum_{odd m} l_m ch_m) in the nilpotent ring; throws PrecisionError when a coordinate
/// has err_val < G.
std::vector<ApproxPadic> gamma_class(const PrimeContext& ctx, const CohomologyRing& ring,
                                     const ChernCharacterData& chern, const GammaDerivatives& derivs, long G);

/// Same, choosing the derivative precision automatically.
std::vector<ApproxPadic> gamma_class(const PrimeContext& ctx, const CohomologyRing& ring,
                                     const ChernCharacterData& chern, long G);

/// Matrix of x -> b x in the ring basis (column j is b e_j). No invertibility check.
RationalMatrix cup_matrix(const CohomologyRing& ring, const RingElement& b);

/// Right factor diag(p^{-deg_j/2}).
RationalMatrix degree_scaling(const PrimeContext& ctx, const std::vector<int>& degrees);

/// Matrix of x -> p^{-deg(x)/2} (b x); rejects b whose degree-0 coordinate is zero.
RationalMatrix constant_term_endomorphism(const PrimeContext& ctx, const CohomologyRing& ring, const RingElement& b);
ApproxMatrix constant_term_endomorphism(const PrimeContext& ctx, const CohomologyRing& ring,
                                        const std::vector<ApproxPadic>& b);

}  // namespace padicfrob
