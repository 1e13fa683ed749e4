#include "padicfrob/matrix.hpp"

#include <sstream>

namespace padicfrob {

RationalMatrix rational_identity(std::size_t n) { return RationalMatrix::identity(n, mpq_class(1), mpq_class(0)); }

RationalMatrix rational_matrix(std::size_t rows, std::size_t cols, std::initializer_list<long> entries) {
    std::vector<mpq_class> v;
    v.reserve(entries.size());
    for (long e : entries) v.emplace_back(e);
    return RationalMatrix(rows, cols, std::move(v));
}

RationalMatrix scaled(RationalMatrix m, const mpq_class& s) {
    m.scale(s);
    return m;
}

ApproxMatrix to_approx(const PrimeContext& ctx, const RationalMatrix& m) {
    ApproxMatrix out(m.rows(), m.cols(), ApproxPadic::zero(ctx));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = ApproxPadic::exact(ctx, m(i, j));
    return out;
}

RationalMatrix approx_part(const ApproxMatrix& m) {
    RationalMatrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).approx();
    return out;
}

std::size_t nilpotency_index(const RationalMatrix& m) {
    if (!m.is_square()) throw std::invalid_argument("nilpotency_index: matrix is not square");
    const std::size_t n = m.rows();
    if (n == 0) return 0;
    RationalMatrix power = m;
    for (std::size_t k = 1; k <= n; ++k) {
        if (power.is_zero_matrix()) return k;
        power = power * m;
    }
    return 0;
}

namespace {

// Row echelon form in place; returns the rank and the sign/scale product for determinants.
std::size_t eliminate(RationalMatrix& a, mpq_class* det) {
    const std::size_t rows = a.rows();
    const std::size_t cols = a.cols();
    std::size_t r = 0;
    mpq_class d = 1;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t piv = r;
        while (piv < rows && a(piv, c) == 0) ++piv;
        if (piv == rows) {
            d = 0;
            continue;
        }
        if (piv != r) {
            for (std::size_t j = 0; j < cols; ++j) std::swap(a(piv, j), a(r, j));
            d = -d;
        }
        d *= a(r, c);
        for (std::size_t i = r + 1; i < rows; ++i) {
            if (a(i, c) == 0) continue;
            mpq_class f = a(i, c) / a(r, c);
            for (std::size_t j = c; j < cols; ++j) a(i, j) -= f * a(r, j);
        }
        ++r;
    }
    if (det) *det = (r == rows) ? d : mpq_class(0);
    return r;
}

}  // namespace

std::size_t rank(const RationalMatrix& m) {
    RationalMatrix a = m;
    return eliminate(a, nullptr);
}

mpq_class determinant(const RationalMatrix& m) {
    if (!m.is_square()) throw std::invalid_argument("determinant: matrix is not square");
    if (m.rows() == 0) return 1;
    RationalMatrix a = m;
    mpq_class d;
    eliminate(a, &d);
    return d;
}

ExtRational matrix_min_val(const PrimeContext& ctx, const RationalMatrix& m) {
    ExtRational best = ExtRational::infinity();
    for (const auto& x : m.entries()) best = min(best, val_p(ctx, x));
    return best;
}

CertifiedVal matrix_min_val(const PrimeContext& ctx, const ApproxMatrix& m) {
    ExtRational certified_min = ExtRational::infinity();
    ExtRational undetermined_floor = ExtRational::infinity();
    for (const auto& x : m.entries()) {
        CertifiedVal v = certified_val(ctx, x);
        if (v.certified()) {
            certified_min = min(certified_min, *v.value);
        } else {
            undetermined_floor = min(undetermined_floor, x.err_val());
        }
    }
    if (undetermined_floor.is_infinite()) return CertifiedVal{certified_min};
    if (certified_min < undetermined_floor) return CertifiedVal{certified_min};
    return CertifiedVal::indeterminate();
}

std::string to_string(const RationalMatrix& m) {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < m.rows(); ++i) {
        os << (i ? ", [" : "[");
        for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? ", " : "") << rational_to_string(m(i, j));
        os << "]";
    }
    os << "]";
    return os.str();
}

}  // namespace padicfrob
