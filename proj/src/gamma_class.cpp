#include "padicfrob/gamma_class.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace padicfrob {

namespace {

template <typename T>
std::vector<T> ring_product(const CohomologyRing& ring, const std::vector<T>& a, const std::vector<T>& b,
                            const T& zero) {
    const std::size_t n = ring.rank();
    std::vector<T> out(n, zero);
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i] == zero) continue;
        for (std::size_t j = 0; j < n; ++j) {
            if (b[j] == zero) continue;
            T ab = a[i] * b[j];
            const RingElement& s = ring.structure[i][j];
            for (std::size_t k = 0; k < n; ++k) {
                if (s[k] == 0) continue;
                out[k] += ab * s[k];
            }
        }
    }
    return out;
}

// exp(y) = sum_{j <= n} y^j / j! for nilpotent y.
template <typename T>
std::vector<T> nilpotent_exp(const CohomologyRing& ring, const std::vector<T>& y, const T& zero, const T& one) {
    const std::size_t n = ring.rank();
    std::vector<T> result(n, zero);
    result[ring.unit] = one;
    std::vector<T> power = result;
    for (int j = 1; j <= ring.dim_c; ++j) {
        power = ring_product(ring, power, y, zero);
        for (auto& c : power) c = c * mpq_class(1, j);
        for (std::size_t k = 0; k < n; ++k) result[k] += power[k];
    }
    return result;
}

int largest_odd_order(const ChernCharacterData& chern) {
    int m_max = 0;
    for (const auto& [m, ch] : chern.odd) {
        if (std::any_of(ch.begin(), ch.end(), [](const mpq_class& x) { return x != 0; })) m_max = std::max(m_max, m);
    }
    return m_max;
}

}  // namespace

RingElement CohomologyRing::basis(std::size_t i) const {
    RingElement e = zero();
    e.at(i) = 1;
    return e;
}

RingElement CohomologyRing::multiply(const RingElement& a, const RingElement& b) const {
    return ring_product<mpq_class>(*this, a, b, mpq_class(0));
}

std::vector<ApproxPadic> CohomologyRing::multiply(const std::vector<ApproxPadic>& a,
                                                  const std::vector<ApproxPadic>& b) const {
    if (a.empty()) return {};
    const PrimeContext ctx(a.front().p());
    return ring_product<ApproxPadic>(*this, a, b, ApproxPadic::zero(ctx));
}

std::vector<std::pair<int, int>> CohomologyRing::betti() const {
    std::map<int, int> counts;
    for (int d : degrees) ++counts[d];
    return {counts.begin(), counts.end()};
}

CohomologyRing make_ring(std::vector<std::string> labels, std::vector<int> degrees, int dim_c, std::size_t unit,
                         const std::vector<std::vector<RingElement>>& structure) {
    CohomologyRing r;
    const std::size_t n = labels.size();
    if (degrees.size() != n || structure.size() != n) throw std::invalid_argument("make_ring: size mismatch");
    for (const auto& row : structure) {
        if (row.size() != n) throw std::invalid_argument("make_ring: structure is not square");
        for (const auto& e : row) {
            if (e.size() != n) throw std::invalid_argument("make_ring: product has wrong length");
        }
    }
    if (unit >= n) throw std::invalid_argument("make_ring: unit index out of range");
    r.labels = std::move(labels);
    r.degrees = std::move(degrees);
    r.structure = structure;
    r.unit = unit;
    r.dim_c = dim_c;
    return r;
}

CohomologyRing truncated_polynomial_ring(int n) {
    const std::size_t r = static_cast<std::size_t>(n) + 1;
    std::vector<std::string> labels;
    std::vector<int> degrees;
    std::vector<std::vector<RingElement>> s(r, std::vector<RingElement>(r, RingElement(r, 0)));
    for (std::size_t i = 0; i < r; ++i) {
        labels.push_back(i == 0 ? "1" : i == 1 ? "x" : "x^" + std::to_string(i));
        degrees.push_back(2 * static_cast<int>(i));
        for (std::size_t j = 0; i + j < r; ++j) s[i][j][i + j] = 1;
    }
    return make_ring(labels, degrees, n, 0, s);
}

std::vector<std::string> ring_axiom_violations(const CohomologyRing& ring) {
    std::vector<std::string> out;
    const std::size_t n = ring.rank();
    auto name = [&](std::size_t i) { return ring.labels[i]; };
    int degree_zero = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (ring.degrees[i] % 2 != 0) out.push_back("odd degree for " + name(i));
        if (ring.degrees[i] == 0) ++degree_zero;
    }
    if (degree_zero != 1) out.push_back("degree-0 part has rank " + std::to_string(degree_zero));
    for (std::size_t i = 0; i < n; ++i) {
        if (ring.multiply(ring.one(), ring.basis(i)) != ring.basis(i)) out.push_back("unit fails on " + name(i));
        for (std::size_t j = 0; j < n; ++j) {
            if (ring.structure[i][j] != ring.structure[j][i]) out.push_back("not commutative: " + name(i) + "," + name(j));
            for (std::size_t k = 0; k < n; ++k) {
                if (ring.structure[i][j][k] != 0 && ring.degrees[k] != ring.degrees[i] + ring.degrees[j]) {
                    out.push_back("grading: " + name(i) + "*" + name(j) + " has a " + name(k) + " component");
                }
                RingElement left = ring.multiply(ring.structure[i][j], ring.basis(k));
                RingElement right = ring.multiply(ring.basis(i), ring.structure[j][k]);
                if (left != right) out.push_back("not associative: " + name(i) + "," + name(j) + "," + name(k));
            }
        }
    }
    return out;
}

ChernCharacterData ChernCharacterData::dual() const {
    ChernCharacterData d = *this;
    for (auto& [m, ch] : d.odd) {
        for (auto& c : ch) c = -c;
    }
    return d;
}

std::vector<RingElement> chern_character_from_classes(const CohomologyRing& ring,
                                                      const std::vector<RingElement>& chern_classes) {
    const int n = ring.dim_c;
    auto e = [&](int i) { return i <= static_cast<int>(chern_classes.size()) ? chern_classes[i - 1] : ring.zero(); };
    std::vector<RingElement> power_sums(static_cast<std::size_t>(n) + 1, ring.zero());
    std::vector<RingElement> ch(static_cast<std::size_t>(n) + 1, ring.zero());
    mpz_class fact = 1;
    for (int m = 1; m <= n; ++m) {
        RingElement pm = ring.zero();
        for (int i = 1; i < m; ++i) {
            RingElement t = ring.multiply(e(i), power_sums[static_cast<std::size_t>(m - i)]);
            const int sign = (i - 1) % 2 == 0 ? 1 : -1;
            for (std::size_t k = 0; k < pm.size(); ++k) pm[k] += sign * t[k];
        }
        const RingElement em = e(m);
        const int sign = (m - 1) % 2 == 0 ? 1 : -1;
        for (std::size_t k = 0; k < pm.size(); ++k) pm[k] += sign * m * em[k];
        power_sums[static_cast<std::size_t>(m)] = pm;
        fact *= m;
        RingElement c = pm;
        for (auto& x : c) x /= fact;
        ch[static_cast<std::size_t>(m)] = c;
    }
    return ch;
}

ChernCharacterData odd_chern_character(const CohomologyRing& ring, const std::vector<RingElement>& chern_classes) {
    auto ch = chern_character_from_classes(ring, chern_classes);
    ChernCharacterData out;
    for (std::size_t m = 1; m < ch.size(); m += 2) out.odd[static_cast<int>(m)] = ch[m];
    return out;
}

GammaPoly::GammaPoly(const mpq_class& c) {
    if (c != 0) terms_[GammaMonomial{}] = c;
}

GammaPoly GammaPoly::symbol(int order) {
    GammaPoly g;
    g.terms_[GammaMonomial{{order, 1}}] = 1;
    return g;
}

void GammaPoly::add_term(const GammaMonomial& m, const mpq_class& c) {
    if (c == 0) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_.emplace(m, c);
        return;
    }
    it->second += c;
    if (it->second == 0) terms_.erase(it);
}

GammaPoly& GammaPoly::operator+=(const GammaPoly& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

GammaPoly& GammaPoly::operator-=(const GammaPoly& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
}

GammaPoly& GammaPoly::operator*=(const mpq_class& c) {
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, v] : terms_) v *= c;
    return *this;
}

GammaPoly operator*(const GammaPoly& a, const GammaPoly& b) {
    GammaPoly r;
    for (const auto& [ma, ca] : a.terms_) {
        for (const auto& [mb, cb] : b.terms_) {
            GammaMonomial m = ma;
            for (const auto& [order, e] : mb) m[order] += e;
            r.add_term(m, ca * cb);
        }
    }
    return r;
}

ApproxPadic GammaPoly::evaluate(const PrimeContext& ctx, const std::vector<ApproxPadic>& values) const {
    ApproxPadic sum = ApproxPadic::zero(ctx);
    for (const auto& [m, c] : terms_) {
        ApproxPadic t = ApproxPadic::exact(ctx, c);
        for (const auto& [order, e] : m) {
            if (static_cast<std::size_t>(order) >= values.size()) {
                throw std::invalid_argument("GammaPoly::evaluate: missing value for G" + std::to_string(order));
            }
            for (int i = 0; i < e; ++i) t *= values[static_cast<std::size_t>(order)];
        }
        sum += t;
    }
    return sum;
}

int GammaPoly::max_order() const {
    int r = 0;
    for (const auto& [m, c] : terms_) {
        for (const auto& [order, e] : m) r = std::max(r, order);
    }
    return r;
}

std::string GammaPoly::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        mpq_class mag = abs(c);
        if (first) {
            if (c < 0) os << "-";
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        first = false;
        bool wrote = false;
        if (mag != 1 || m.empty()) {
            os << rational_to_string(mag);
            wrote = true;
        }
        for (const auto& [order, e] : m) {
            if (wrote) os << "*";
            os << "G" << order;
            if (e != 1) os << "^" << e;
            wrote = true;
        }
    }
    return os.str();
}

std::vector<GammaPoly> symbolic_taylor(int k_max) {
    std::vector<GammaPoly> g(static_cast<std::size_t>(k_max) + 1);
    g[0] = GammaPoly(mpq_class(1));
    mpz_class fact = 1;
    for (int k = 1; k <= k_max; ++k) {
        fact *= k;
        if (k % 2 == 1) {
            g[static_cast<std::size_t>(k)] = GammaPoly::symbol(k) * mpq_class(1, fact);
            continue;
        }
        // g_k = (-1)^{k/2-1} g_{k/2}^2 / 2 + sum_{0<j<k/2} (-1)^{j-1} g_j g_{k-j}
        const int h = k / 2;
        GammaPoly v = g[static_cast<std::size_t>(h)] * g[static_cast<std::size_t>(h)] *
                      mpq_class((h - 1) % 2 == 0 ? 1 : -1, 2);
        for (int j = 1; j < h; ++j) {
            GammaPoly t = g[static_cast<std::size_t>(j)] * g[static_cast<std::size_t>(k - j)];
            if ((j - 1) % 2 == 0) {
                v += t;
            } else {
                v -= t;
            }
        }
        g[static_cast<std::size_t>(k)] = v;
    }
    return g;
}

std::vector<GammaPoly> symbolic_log_gamma(int m_max) {
    const auto g = symbolic_taylor(m_max);
    std::vector<GammaPoly> a(static_cast<std::size_t>(m_max) + 1);
    for (int n = 1; n <= m_max; ++n) {
        GammaPoly acc = g[static_cast<std::size_t>(n)] * mpq_class(n);
        for (int k = 1; k < n; ++k) acc -= a[static_cast<std::size_t>(k)] * g[static_cast<std::size_t>(n - k)] * mpq_class(k);
        a[static_cast<std::size_t>(n)] = acc * mpq_class(1, n);
    }
    std::vector<GammaPoly> l(static_cast<std::size_t>(m_max) + 1);
    mpz_class fact = 1;
    for (int m = 1; m <= m_max; ++m) {
        fact *= m;
        l[static_cast<std::size_t>(m)] = a[static_cast<std::size_t>(m)] * mpq_class(fact);
    }
    return l;
}

GammaMonomialDecomposition gamma_monomial_decomposition(const CohomologyRing& ring, const ChernCharacterData& chern) {
    const int m_max = largest_odd_order(chern);
    const auto l = symbolic_log_gamma(std::max(m_max, 1));
    std::vector<GammaPoly> y(ring.rank());
    for (const auto& [m, ch] : chern.odd) {
        if (m > m_max) continue;
        for (std::size_t k = 0; k < ring.rank(); ++k) {
            if (ch[k] != 0) y[k] += l[static_cast<std::size_t>(m)] * ch[k];
        }
    }
    const auto e = nilpotent_exp<GammaPoly>(ring, y, GammaPoly(), GammaPoly(mpq_class(1)));
    GammaMonomialDecomposition dec;
    for (std::size_t k = 0; k < ring.rank(); ++k) {
        if (e[k].is_zero()) continue;
        dec.push_back(GammaTerm{e[k], k, ring.basis(k)});
    }
    return dec;
}

std::vector<ApproxPadic> evaluate_decomposition(const PrimeContext& ctx, const GammaMonomialDecomposition& dec,
                                                std::size_t rank, const GammaDerivatives& derivs) {
    std::vector<ApproxPadic> out(rank, ApproxPadic::zero(ctx));
    for (const auto& term : dec) {
        ApproxPadic c = term.poly.evaluate(ctx, derivs.values);
        for (std::size_t k = 0; k < rank; ++k) {
            if (term.element[k] != 0) out[k] += c * term.element[k];
        }
    }
    return out;
}

std::vector<ApproxPadic> gamma_class(const PrimeContext& ctx, const CohomologyRing& ring,
                                     const ChernCharacterData& chern, const GammaDerivatives& derivs, long G) {
    const ApproxPadic zero = ApproxPadic::zero(ctx);
    const int m_max = largest_odd_order(chern);
    std::vector<ApproxPadic> y(ring.rank(), zero);
    if (m_max > 0) {
        const auto lg = log_gamma_coefficients(ctx, derivs, m_max, std::numeric_limits<long>::min());
        for (const auto& [m, ch] : chern.odd) {
            if (m > m_max) continue;
            for (std::size_t k = 0; k < ring.rank(); ++k) {
                if (ch[k] != 0) y[k] += lg.l[static_cast<std::size_t>(m)] * ch[k];
            }
        }
    }
    auto result = nilpotent_exp<ApproxPadic>(ring, y, zero, ApproxPadic::exact(ctx, 1));
    for (std::size_t k = 0; k < result.size(); ++k) {
        if (result[k].err_val() < ExtRational(G)) {
            throw PrecisionError("gamma_class: coordinate " + ring.labels[k] + " has err_val " +
                                 result[k].err_val().to_string() + " < " + std::to_string(G));
        }
    }
    return result;
}

std::vector<ApproxPadic> gamma_class(const PrimeContext& ctx, const CohomologyRing& ring,
                                     const ChernCharacterData& chern, long G) {
    const long k_max = std::max(1, largest_odd_order(chern));
    long working = G + 2 * k_max + 4;
    for (int attempt = 0; attempt < 16; ++attempt) {
        try {
            return gamma_class(ctx, ring, chern, gamma_derivatives(ctx, k_max, working), G);
        } catch (const PrecisionError&) {
            working += G + k_max + 4;
        }
    }
    throw PrecisionError("gamma_class: could not reach precision " + std::to_string(G));
}

RationalMatrix cup_matrix(const CohomologyRing& ring, const RingElement& b) {
    const std::size_t n = ring.rank();
    RationalMatrix m(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        RingElement col = ring.multiply(b, ring.basis(j));
        for (std::size_t i = 0; i < n; ++i) m(i, j) = col[i];
    }
    return m;
}

RationalMatrix degree_scaling(const PrimeContext& ctx, const std::vector<int>& degrees) {
    RationalMatrix d(degrees.size(), degrees.size());
    for (std::size_t j = 0; j < degrees.size(); ++j) d(j, j) = ctx.power(-degrees[j] / 2);
    return d;
}

RationalMatrix constant_term_endomorphism(const PrimeContext& ctx, const CohomologyRing& ring, const RingElement& b) {
    if (b.at(ring.unit) == 0) {
        throw std::invalid_argument("constant_term_endomorphism: degree-0 part of b is zero (not invertible)");
    }
    return cup_matrix(ring, b) * degree_scaling(ctx, ring.degrees);
}

ApproxMatrix constant_term_endomorphism(const PrimeContext& ctx, const CohomologyRing& ring,
                                        const std::vector<ApproxPadic>& b) {
    auto unit = certified_val(ctx, b.at(ring.unit));
    if (!unit.certified() || unit.value->is_infinite()) {
        throw std::invalid_argument("constant_term_endomorphism: degree-0 part of b is not certified nonzero");
    }
    const std::size_t n = ring.rank();
    ApproxMatrix m(n, n, ApproxPadic::zero(ctx));
    for (std::size_t j = 0; j < n; ++j) {
        auto col = ring.multiply(b, to_approx(ctx, RationalMatrix(n, 1, ring.basis(j))).entries());
        const mpq_class s = ctx.power(-ring.degrees[j] / 2);
        for (std::size_t i = 0; i < n; ++i) m(i, j) = col[i] * s;
    }
    return m;
}

}  // namespace padicfrob
