#include "padicfrob/connections.hpp"

#include <algorithm>

namespace padicfrob {

const RationalMatrix& Connection::coefficient(std::size_t m) const { return A.at(m); }

bool Connection::has_coefficient(std::size_t m) const { return m < A.size() && !A[m].is_zero_matrix(); }

bool operator==(const Connection& a, const Connection& b) {
    return a.name == b.name && a.rank == b.rank && a.A == b.A && a.degrees == b.degrees && a.dim_c == b.dim_c &&
           a.betti == b.betti && a.gamma_decomposition == b.gamma_decomposition;
}

void validate_connection(const Connection& c) {
    if (c.rank == 0) throw ValidationError("rank must be positive");
    if (c.A.empty()) throw ValidationError("no matrix coefficients");
    for (std::size_t m = 0; m < c.A.size(); ++m) {
        if (c.A[m].rows() != c.rank || c.A[m].cols() != c.rank) {
            throw ValidationError("dimension mismatch: coefficient of q^" + std::to_string(m) + " is " +
                                  std::to_string(c.A[m].rows()) + "x" + std::to_string(c.A[m].cols()) +
                                  ", expected " + std::to_string(c.rank) + "x" + std::to_string(c.rank));
        }
    }
    if (nilpotency_index(c.A[0]) == 0) {
        throw ValidationError("constant term A_0 is not nilpotent (A_0^" + std::to_string(c.rank) +
                              " != 0); no Frobenius structure exists");
    }
    if (!c.degrees.empty() && c.degrees.size() != c.rank) {
        throw ValidationError("dimension mismatch: " + std::to_string(c.degrees.size()) + " degrees for rank " +
                              std::to_string(c.rank));
    }
    for (std::size_t k = 0; k < c.gamma_decomposition.size(); ++k) {
        const auto& cup = c.gamma_decomposition[k].cup;
        if (cup.rows() != c.rank || cup.cols() != c.rank) {
            throw ValidationError("dimension mismatch: gamma_decomposition[" + std::to_string(k) + "] matrix");
        }
    }
}

std::vector<std::string> grading_violations(const Connection& c) {
    std::vector<std::string> out;
    if (c.degrees.size() != c.rank) return out;
    for (std::size_t m = 0; m < c.A.size(); ++m) {
        for (std::size_t i = 0; i < c.rank; ++i) {
            for (std::size_t j = 0; j < c.rank; ++j) {
                if (c.A[m](i, j) == 0) continue;
                if (c.degrees[i] != c.degrees[j] + 2 - 2 * static_cast<int>(m)) {
                    out.push_back("A_" + std::to_string(m) + "(" + std::to_string(i) + "," + std::to_string(j) + ")");
                }
            }
        }
    }
    return out;
}

std::vector<GammaBasisTerm> gamma_basis_terms(const CohomologyRing& ring, const ChernCharacterData& chern) {
    std::vector<GammaBasisTerm> out;
    for (const auto& t : gamma_monomial_decomposition(ring, chern)) {
        out.push_back(GammaBasisTerm{t.poly, cup_matrix(ring, t.element)});
    }
    return out;
}

RationalMatrix basis_constant_term(const PrimeContext& ctx, const Connection& c, const RationalMatrix& cup) {
    return cup * degree_scaling(ctx, c.degrees);
}

namespace {

// Solves (m + L) X = R for a nilpotent linear map L by X = sum_j (-1)^j L^j(R) / m^{j+1}.
template <typename Op>
RationalMatrix invert_shifted(const RationalMatrix& R, long m, Op L) {
    RationalMatrix X(R.rows(), R.cols());
    RationalMatrix term = R;
    mpq_class coeff(1, m);
    for (std::size_t j = 0; !term.is_zero_matrix(); ++j) {
        if (j > 4 * R.rows() * R.rows() + 4) throw std::logic_error("invert_shifted: operator is not nilpotent");
        X += scaled(term, coeff);
        term = L(term);
        coeff = -coeff / m;
    }
    return X;
}

}  // namespace

FrobeniusSolution solve_frobenius_unchecked(const PrimeContext& ctx, const Connection& c,
                                            const RationalMatrix& phi0, std::size_t N) {
    const RationalMatrix& A0 = c.A[0];
    const mpq_class p = ctx.p();
    if (!(A0 * phi0 == scaled(phi0 * A0, p))) {
        throw std::invalid_argument("solve_frobenius: constant term does not satisfy A_0 Phi_0 = p Phi_0 A_0");
    }
    auto ad = [&](const RationalMatrix& X) { return A0 * X - scaled(X * A0, p); };

    FrobeniusSolution sol;
    sol.phi.variable = "q";
    sol.phi.coeffs.reserve(N + 1);
    sol.phi.coeffs.push_back(phi0);
    const std::size_t D = c.degree();
    for (std::size_t m = 1; m <= N; ++m) {
        RationalMatrix R(c.rank, c.rank);
        for (std::size_t e = 1; e <= std::min(D, m); ++e) {
            if (!c.has_coefficient(e)) continue;
            R -= c.A[e] * sol.phi.coeffs[m - e];
        }
        // Phi_{m-pj} A_j (-1)^j p^{1-j}
        for (std::size_t j = 1; j <= D && ctx.p() * j <= m; ++j) {
            if (!c.has_coefficient(j)) continue;
            mpq_class f = ctx.power(1 - static_cast<long>(j));
            if (j % 2 == 1) f = -f;
            R += scaled(sol.phi.coeffs[m - ctx.p() * j] * c.A[j], f);
        }
        sol.phi.coeffs.push_back(invert_shifted(R, static_cast<long>(m), ad));
    }
    return sol;
}

FrobeniusSolution solve_frobenius(const PrimeContext& ctx, const Connection& c, const RationalMatrix& phi0,
                                  std::size_t N) {
    if (determinant(phi0) == 0) throw std::invalid_argument("solve_frobenius: constant term is not invertible");
    return solve_frobenius_unchecked(ctx, c, phi0, N);
}

std::vector<BasisSolution> solve_frobenius_basis(const PrimeContext& ctx, const Connection& c, std::size_t N) {
    if (c.gamma_decomposition.empty()) {
        throw std::invalid_argument("solve_frobenius_basis: connection " + c.name + " has no gamma decomposition");
    }
    std::vector<BasisSolution> out;
    for (const auto& term : c.gamma_decomposition) {
        auto sol = solve_frobenius_unchecked(ctx, c, basis_constant_term(ctx, c, term.cup), N);
        sol.provenance = "b = " + term.poly.to_string() + " monomial";
        out.push_back(BasisSolution{term, std::move(sol)});
    }
    return out;
}

std::vector<ApproxPadic> gamma_coefficients(const PrimeContext& ctx, const Connection& c, long G) {
    int k_max = 1;
    for (const auto& t : c.gamma_decomposition) k_max = std::max(k_max, t.poly.max_order());
    long working = G + 4 * k_max + 4;
    for (int attempt = 0; attempt < 16; ++attempt) {
        auto gd = gamma_derivatives(ctx, k_max, working);
        std::vector<ApproxPadic> out;
        bool ok = true;
        for (const auto& t : c.gamma_decomposition) {
            out.push_back(t.poly.evaluate(ctx, gd.values).reduced());
            if (out.back().err_val() < ExtRational(G)) ok = false;
        }
        if (ok) return out;
        working += G + 4;
    }
    throw PrecisionError("gamma_coefficients: could not reach precision " + std::to_string(G));
}

ApproxFrobeniusSolution combine_basis_solutions(const PrimeContext& ctx, const std::vector<BasisSolution>& basis,
                                                const std::vector<ApproxPadic>& gamma) {
    if (basis.size() != gamma.size()) throw std::invalid_argument("combine_basis_solutions: length mismatch");
    if (basis.empty()) throw std::invalid_argument("combine_basis_solutions: no basis solutions");
    ApproxFrobeniusSolution out;
    out.K = ExtRational::infinity();
    for (const auto& g : gamma) out.K = min(out.K, g.err_val());
    out.H = ExtRational::infinity();
    const std::size_t N = basis.front().solution.phi.order();
    const std::size_t r = basis.front().solution.phi.dim();
    out.phi.variable = "q";
    for (std::size_t m = 0; m <= N; ++m) {
        ExtRational hm = ExtRational::infinity();
        RationalMatrix sum(r, r);
        for (std::size_t k = 0; k < basis.size(); ++k) {
            const RationalMatrix& pk = basis[k].solution.phi.coeffs.at(m);
            hm = min(hm, matrix_min_val(ctx, pk));
            sum += scaled(pk, gamma[k].approx());
        }
        out.H_m.push_back(hm);
        out.H = min(out.H, hm);
        const ExtRational err = out.K + hm;
        ApproxMatrix am(r, r, ApproxPadic::zero(ctx));
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j) am(i, j) = ApproxPadic(ctx, sum(i, j), err);
        out.phi.coeffs.push_back(std::move(am));
    }
    return out;
}

GaugeSolution solve_gauge(const Connection& c, std::size_t N) {
    if (nilpotency_index(c.A[0]) == 0) throw std::invalid_argument("solve_gauge: A_0 is not nilpotent");
    const RationalMatrix& A0 = c.A[0];
    auto ad = [&](const RationalMatrix& X) { return A0 * X - X * A0; };
    GaugeSolution g;
    g.pi.variable = "q";
    g.pi.coeffs.push_back(rational_identity(c.rank));
    const std::size_t D = c.degree();
    for (std::size_t m = 1; m <= N; ++m) {
        RationalMatrix R(c.rank, c.rank);
        for (std::size_t e = 1; e <= std::min(D, m); ++e) {
            if (!c.has_coefficient(e)) continue;
            R -= c.A[e] * g.pi.coeffs[m - e];
        }
        g.pi.coeffs.push_back(invert_shifted(R, static_cast<long>(m), ad));
    }
    return g;
}

RationalMatrixSeries series_inverse(const RationalMatrixSeries& s, std::size_t N) {
    const std::size_t r = s.dim();
    RationalMatrixSeries inv;
    inv.variable = s.variable;
    RationalMatrix c0 = s.coeffs.at(0);
    if (determinant(c0) == 0) throw std::invalid_argument("series_inverse: constant term is singular");
    // invert c0 by solving against the identity
    RationalMatrix aug(r, 2 * r);
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < r; ++j) aug(i, j) = c0(i, j);
        aug(i, r + i) = 1;
    }
    for (std::size_t col = 0; col < r; ++col) {
        std::size_t piv = col;
        while (aug(piv, col) == 0) ++piv;
        for (std::size_t j = 0; j < 2 * r; ++j) std::swap(aug(piv, j), aug(col, j));
        mpq_class d = aug(col, col);
        for (std::size_t j = 0; j < 2 * r; ++j) aug(col, j) /= d;
        for (std::size_t i = 0; i < r; ++i) {
            if (i == col || aug(i, col) == 0) continue;
            mpq_class f = aug(i, col);
            for (std::size_t j = 0; j < 2 * r; ++j) aug(i, j) -= f * aug(col, j);
        }
    }
    RationalMatrix c0inv(r, r);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) c0inv(i, j) = aug(i, r + j);

    inv.coeffs.push_back(c0inv);
    for (std::size_t m = 1; m <= N; ++m) {
        RationalMatrix acc(r, r);
        for (std::size_t i = 1; i <= m && i < s.coeffs.size(); ++i) {
            if (s.coeffs[i].is_zero_matrix()) continue;
            acc += s.coeffs[i] * inv.coeffs[m - i];
        }
        inv.coeffs.push_back(scaled(c0inv * acc, mpq_class(-1)));
    }
    return inv;
}

FrobeniusSolution frobenius_from_gauge(const PrimeContext& ctx, const Connection& c, const GaugeSolution& gauge,
                                       const RationalMatrix& phi0, std::size_t N) {
    const RationalMatrix& A0 = c.A[0];
    if (!(A0 * phi0 == scaled(phi0 * A0, mpq_class(ctx.p())))) {
        throw std::invalid_argument("frobenius_from_gauge: constant term does not satisfy A_0 Phi_0 = p Phi_0 A_0");
    }
    if (gauge.pi.order() < N) throw std::invalid_argument("frobenius_from_gauge: gauge solution too short");
    const std::size_t p = static_cast<std::size_t>(ctx.p());
    const std::size_t jmax = N / p;
    RationalMatrixSeries inv = series_inverse(gauge.pi, jmax);

    // Pi(q) Phi_0
    std::vector<RationalMatrix> left;
    for (std::size_t m = 0; m <= N; ++m) left.push_back(gauge.pi.coeffs[m] * phi0);

    FrobeniusSolution sol;
    sol.phi.variable = "q";
    sol.provenance = "gauge composition";
    for (std::size_t m = 0; m <= N; ++m) sol.phi.coeffs.emplace_back(c.rank, c.rank);
    for (std::size_t j = 0; j <= jmax; ++j) {
        // q^{pj} coefficient of Pi^{-1}(-q^p/p) is (-1/p)^j Inv_j
        mpq_class f = ctx.power(-static_cast<long>(j));
        if (j % 2 == 1) f = -f;
        RationalMatrix right = scaled(inv.coeffs[j], f);
        if (right.is_zero_matrix()) continue;
        for (std::size_t i = 0; i + p * j <= N; ++i) sol.phi.coeffs[i + p * j] += left[i] * right;
    }
    return sol;
}

std::vector<RationalMatrix> frobenius_residual(const PrimeContext& ctx, const Connection& c,
                                               const RationalMatrixSeries& phi) {
    const std::size_t N = phi.order();
    const std::size_t D = c.degree();
    const std::size_t p = static_cast<std::size_t>(ctx.p());
    std::vector<RationalMatrix> out;
    for (std::size_t m = 0; m <= N; ++m) {
        RationalMatrix r = scaled(phi.coeffs[m], mpq_class(static_cast<long>(m)));
        for (std::size_t e = 0; e <= std::min(D, m); ++e) r += c.A[e] * phi.coeffs[m - e];
        for (std::size_t j = 0; j <= D && p * j <= m; ++j) {
            // p Phi_{m-pj} A_j (-1/p)^j
            mpq_class f = ctx.power(1 - static_cast<long>(j));
            if (j % 2 == 1) f = -f;
            r -= scaled(phi.coeffs[m - p * j] * c.A[j], f);
        }
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<RationalMatrix> gauge_residual(const Connection& c, const RationalMatrixSeries& pi) {
    const std::size_t N = pi.order();
    std::vector<RationalMatrix> out;
    for (std::size_t m = 0; m <= N; ++m) {
        RationalMatrix r = scaled(pi.coeffs[m], mpq_class(static_cast<long>(m)));
        for (std::size_t e = 0; e <= std::min(c.degree(), m); ++e) r += c.A[e] * pi.coeffs[m - e];
        r -= pi.coeffs[m] * c.A[0];
        out.push_back(std::move(r));
    }
    return out;
}

bool all_zero(const std::vector<RationalMatrix>& ms) {
    return std::all_of(ms.begin(), ms.end(), [](const RationalMatrix& m) { return m.is_zero_matrix(); });
}

std::optional<std::size_t> gauge_valuation_floor_violation(const PrimeContext& ctx, const GaugeSolution& g,
                                                           int dim_c) {
    const long p = ctx.p();
    for (std::size_t m = 1; m < g.pi.coeffs.size(); ++m) {
        ExtRational v = matrix_min_val(ctx, g.pi.coeffs[m]);
        if (v.is_infinite()) continue;
        const long ml = static_cast<long>(m);
        mpq_class lhs = v.value() + mpq_class(ml, p - 1);
        mpq_class rhs(-2L * dim_c * (ml - 1), p - 1);
        lhs.canonicalize();
        rhs.canonicalize();
        if (lhs < rhs) return m;
    }
    return std::nullopt;
}

}  // namespace padicfrob
