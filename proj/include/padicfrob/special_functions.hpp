#pragma once

#include "padicfrob/padic.hpp"

#include <cstddef>
#include <vector>

namespace padicfrob {

/// Taylor coefficients d_0..d_M of the Dwork exponential exp(z + z^p/p).
struct DworkCoefficients {
    long p = 0;
    std::vector<mpq_class> d;

    std::size_t max_index() const { return d.empty() ? 0 : d.size() - 1; }
};

/// Cauchy product of the truncated series of exp(z) and exp(z^p/p).
DworkCoefficients dwork_coefficients(const PrimeContext& ctx, std::size_t max_index);

/// Checks d_m = (m+1) d_{m+1} - d_{m-p+1} for every m < max_index.
bool dwork_recursion_holds(const DworkCoefficients& dc);

/// Lower bound m(1-2p)/(p^3-p^2) on val(d_m).
mpq_class dwork_valuation_floor(long p, std::size_t m);

/// Smallest M with M >= kp/((p-1) log p) + 1 and
///   k/(p-1) + M(p-1)/p - log_p(k) - k log_p(M-1) - (2p-1)/(p-1) > G,
/// evaluated with outward rounding so the returned M always satisfies both.
/// For k = 0 the logarithmic terms are absent.
long mahler_truncation_bound(const PrimeContext& ctx, long k, long G);

/// Lower bound of the right-hand side above (the per-term estimate f(m)),
/// rounded down. Exposed for tests.
long double mahler_term_floor(long p, long k, long m);

/// Signed Stirling numbers of the first kind s(m, k), k <= k_max, for m < rows:
/// the z^k coefficient of z(z-1)...(z-m+1).
std::vector<std::vector<mpz_class>> stirling_first_kind(std::size_t rows, std::size_t k_max);

/// Certified values of Gamma_p^{(k)}(0) and Taylor coefficients g_k = Gamma_p^{(k)}(0)/k!.
struct GammaDerivatives {
    long p = 0;
    long k_max = 0;
    long precision = 0;
    std::vector<ApproxPadic> values;  // Gamma_p^{(k)}(0)
    std::vector<ApproxPadic> taylor;  // g_k
    std::vector<long> truncation;     // M used for each k
};

/// Gamma_p^{(k)}(0) = k! (-p)^{-k} sum_{m<M} (-p)^m d_{mp} s(m,k), each with err_val >= G.
GammaDerivatives gamma_derivatives(const PrimeContext& ctx, long k_max, long G);

/// Same, reusing precomputed Dwork coefficients (must reach index p*(M-1)).
GammaDerivatives gamma_derivatives(const PrimeContext& ctx, long k_max, long G, const DworkCoefficients& dc);

/// Raw truncated Mahler sum for the k-th derivative with an explicit number of terms.
mpq_class gamma_derivative_truncated(const PrimeContext& ctx, long k, long terms, const DworkCoefficients& dc);

/// l_m in log Gamma_p(z) = sum l_m z^m / m!, for m = 1..m_max (index 0 holds 0).
struct LogGammaCoefficients {
    long p = 0;
    long m_max = 0;
    std::vector<ApproxPadic> l;
};

/// Formal logarithm of the Taylor series in `derivs`; throws PrecisionError when some l_m
/// cannot be certified to err_val >= G.
LogGammaCoefficients log_gamma_coefficients(const PrimeContext& ctx, const GammaDerivatives& derivs, long m_max,
                                            long G);

/// Raises the working precision of the derivatives until every l_m reaches err_val >= G.
LogGammaCoefficients log_gamma_coefficients(const PrimeContext& ctx, long m_max, long G);

/// True when x is compatible with the value 0 (approx is 0 or val(approx) >= err_val).
bool consistent_with_zero(const ApproxPadic& x);

}  // namespace padicfrob
