#include "padicfrob/special_functions.hpp"

#include <algorithm>
#include <cmath>

namespace padicfrob {

DworkCoefficients dwork_coefficients(const PrimeContext& ctx, std::size_t max_index) {
    const long p = ctx.p();
    DworkCoefficients dc;
    dc.p = p;
    dc.d.resize(max_index + 1);

    // d_m = e_m / m! with e_m = sum_j binom(m, pj) w_j and w_j = (pj)! / (p^j j!), an integer.
    const std::size_t jmax = max_index / static_cast<std::size_t>(p);
    std::vector<mpz_class> w(jmax + 1);
    w[0] = 1;
    for (std::size_t j = 1; j <= jmax; ++j) {
        w[j] = w[j - 1];
        for (long i = 1; i < p; ++i) w[j] *= static_cast<unsigned long>(p * static_cast<long>(j) - p + i);
    }

    mpz_class factorial = 1;
    for (std::size_t m = 0; m <= max_index; ++m) {
        if (m > 0) factorial *= static_cast<unsigned long>(m);
        mpz_class e = 0;
        mpz_class binom = 1;  // binom(m, p j)
        for (std::size_t j = 0; j * static_cast<std::size_t>(p) <= m; ++j) {
            if (j > 0) {
                const std::size_t hi = j * static_cast<std::size_t>(p);
                for (std::size_t t = hi - static_cast<std::size_t>(p) + 1; t <= hi; ++t) {
                    binom *= static_cast<unsigned long>(m - t + 1);
                    mpz_divexact_ui(binom.get_mpz_t(), binom.get_mpz_t(), static_cast<unsigned long>(t));
                }
            }
            e += binom * w[j];
        }
        dc.d[m] = mpq_class(e, factorial);
        dc.d[m].canonicalize();
    }
    return dc;
}

bool dwork_recursion_holds(const DworkCoefficients& dc) {
    const long p = dc.p;
    for (std::size_t m = 0; m + 1 < dc.d.size(); ++m) {
        mpq_class rhs = mpq_class(static_cast<long>(m + 1)) * dc.d[m + 1];
        if (static_cast<long>(m) - p + 1 >= 0) rhs -= dc.d[m - static_cast<std::size_t>(p) + 1];
        if (rhs != dc.d[m]) return false;
    }
    return true;
}

mpq_class dwork_valuation_floor(long p, std::size_t m) {
    mpq_class r(static_cast<long>(m) * (1 - 2 * p), p * p * p - p * p);
    r.canonicalize();
    return r;
}

namespace {

constexpr long double kRel = 1e-12L;

long double up(long double x) { return x + kRel * (std::fabs(x) + 1.0L); }
long double down(long double x) { return x - kRel * (std::fabs(x) + 1.0L); }

long double log_p_up(long double x, long p) {
    if (x <= 1.0L) return 0.0L;
    return up(std::log(x) / std::log(static_cast<long double>(p)));
}

long first_condition_floor(long p, long k) {
    // M >= kp / ((p-1) log p) + 1, rounded outward.
    const long double rhs = up(static_cast<long double>(k * p) / (static_cast<long double>(p - 1) *
                                                                  down(std::log(static_cast<long double>(p))))) +
                            1.0L;
    return static_cast<long>(std::ceil(up(rhs)));
}

}  // namespace

long double mahler_term_floor(long p, long k, long m) {
    const long double pl = static_cast<long double>(p);
    long double f = static_cast<long double>(k) / (pl - 1) + static_cast<long double>(m) * (pl - 1) / pl -
                    (2 * pl - 1) / (pl - 1);
    f = down(f);
    if (k > 0) {
        f -= log_p_up(static_cast<long double>(k), p);
        f -= static_cast<long double>(k) * log_p_up(static_cast<long double>(m - 1), p);
    }
    return down(f);
}

long mahler_truncation_bound(const PrimeContext& ctx, long k, long G) {
    if (k < 0) throw std::invalid_argument("mahler_truncation_bound: k must be nonnegative");
    const long p = ctx.p();
    long M = std::max<long>(1, first_condition_floor(p, k));
    if (k > 0) M = std::max<long>(M, 2);
    while (!(mahler_term_floor(p, k, M) > static_cast<long double>(G))) ++M;
    return M;
}

std::vector<std::vector<mpz_class>> stirling_first_kind(std::size_t rows, std::size_t k_max) {
    std::vector<std::vector<mpz_class>> s(rows, std::vector<mpz_class>(k_max + 1, 0));
    if (rows == 0) return s;
    s[0][0] = 1;
    // s(m+1, k) = s(m, k-1) - m s(m, k)
    for (std::size_t m = 0; m + 1 < rows; ++m) {
        for (std::size_t k = 0; k <= k_max; ++k) {
            mpz_class v = -mpz_class(static_cast<unsigned long>(m)) * s[m][k];
            if (k > 0) v += s[m][k - 1];
            s[m + 1][k] = v;
        }
    }
    return s;
}

mpq_class gamma_derivative_truncated(const PrimeContext& ctx, long k, long terms, const DworkCoefficients& dc) {
    const long p = ctx.p();
    if (static_cast<std::size_t>(p * std::max<long>(terms - 1, 0)) > dc.max_index()) {
        throw std::invalid_argument("gamma_derivative_truncated: Dwork coefficients too short");
    }
    auto s = stirling_first_kind(static_cast<std::size_t>(terms), static_cast<std::size_t>(k));
    mpq_class sum = 0;
    mpz_class minus_p_pow = 1;  // (-p)^m
    for (long m = 0; m < terms; ++m) {
        if (m > 0) minus_p_pow *= -p;
        const mpz_class& st = s[static_cast<std::size_t>(m)][static_cast<std::size_t>(k)];
        if (st == 0) continue;
        sum += mpq_class(minus_p_pow * st) * dc.d[static_cast<std::size_t>(m * p)];
    }
    mpz_class kfact;
    mpz_fac_ui(kfact.get_mpz_t(), static_cast<unsigned long>(k));
    mpz_class scale;
    mpz_pow_ui(scale.get_mpz_t(), ctx.p_mpz().get_mpz_t(), static_cast<unsigned long>(k));
    if (k % 2 == 1) scale = -scale;
    mpq_class r = sum * mpq_class(kfact) / mpq_class(scale);
    r.canonicalize();
    return r;
}

GammaDerivatives gamma_derivatives(const PrimeContext& ctx, long k_max, long G, const DworkCoefficients& dc) {
    if (k_max < 0) throw std::invalid_argument("gamma_derivatives: k_max must be nonnegative");
    GammaDerivatives gd;
    gd.p = ctx.p();
    gd.k_max = k_max;
    gd.precision = G;
    for (long k = 0; k <= k_max; ++k) {
        if (k == 0) {
            gd.values.push_back(ApproxPadic::exact(ctx, 1));
            gd.truncation.push_back(1);
            continue;
        }
        // The truncation bound controls terms of the k-th derivative of Gamma_p(-pz); dividing by (-p)^k
        // costs k digits.
        const long M = mahler_truncation_bound(ctx, k, G + k);
        gd.truncation.push_back(M);
        gd.values.emplace_back(ctx, gamma_derivative_truncated(ctx, k, M, dc), ExtRational(G));
    }
    mpz_class fact = 1;
    for (long k = 0; k <= k_max; ++k) {
        if (k > 0) fact *= static_cast<unsigned long>(k);
        gd.taylor.push_back(gd.values[static_cast<std::size_t>(k)] / mpq_class(fact));
    }
    return gd;
}

GammaDerivatives gamma_derivatives(const PrimeContext& ctx, long k_max, long G) {
    long M = 1;
    for (long k = 1; k <= k_max; ++k) M = std::max(M, mahler_truncation_bound(ctx, k, G + k));
    const DworkCoefficients dc = dwork_coefficients(ctx, static_cast<std::size_t>(ctx.p() * (M - 1)));
    return gamma_derivatives(ctx, k_max, G, dc);
}

bool consistent_with_zero(const ApproxPadic& x) { return x.approx() == 0 || !(x.approx_val() < x.err_val()); }

LogGammaCoefficients log_gamma_coefficients(const PrimeContext& ctx, const GammaDerivatives& derivs, long m_max,
                                            long G) {
    if (m_max < 1) throw std::invalid_argument("log_gamma_coefficients: m_max must be at least 1");
    if (derivs.k_max < m_max) throw std::invalid_argument("log_gamma_coefficients: not enough derivatives");
    const auto& g = derivs.taylor;
    // a_n: coefficients of log(sum g_k z^k); n a_n = n g_n - sum_{k<n} k a_k g_{n-k}.
    std::vector<ApproxPadic> a(static_cast<std::size_t>(m_max) + 1, ApproxPadic::zero(ctx));
    for (long n = 1; n <= m_max; ++n) {
        ApproxPadic acc = g[static_cast<std::size_t>(n)] * mpq_class(n);
        for (long k = 1; k < n; ++k) {
            acc -= a[static_cast<std::size_t>(k)] * g[static_cast<std::size_t>(n - k)] * mpq_class(k);
        }
        a[static_cast<std::size_t>(n)] = acc / mpq_class(n);
    }
    LogGammaCoefficients out;
    out.p = ctx.p();
    out.m_max = m_max;
    out.l.push_back(ApproxPadic::zero(ctx));
    mpz_class fact = 1;
    for (long m = 1; m <= m_max; ++m) {
        fact *= static_cast<unsigned long>(m);
        ApproxPadic lm = a[static_cast<std::size_t>(m)] * mpq_class(fact);
        if (lm.err_val() < ExtRational(G)) {
            throw PrecisionError("log_gamma_coefficients: l_" + std::to_string(m) + " only certified to err_val " +
                                 lm.err_val().to_string() + " < " + std::to_string(G) +
                                 "; raise the derivative precision");
        }
        out.l.push_back(std::move(lm));
    }
    return out;
}

LogGammaCoefficients log_gamma_coefficients(const PrimeContext& ctx, long m_max, long G) {
    long working = G + 2 * m_max + 4;
    for (int attempt = 0; attempt < 16; ++attempt) {
        try {
            return log_gamma_coefficients(ctx, gamma_derivatives(ctx, m_max, working), m_max, G);
        } catch (const PrecisionError&) {
            working += G + m_max + 4;
        }
    }
    throw PrecisionError("log_gamma_coefficients: could not reach precision " + std::to_string(G));
}

}  // namespace padicfrob
