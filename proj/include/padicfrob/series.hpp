#pragma once

#include "padicfrob/padic.hpp"

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace padicfrob {

/// Power series c_0 + c_1 q + ... + c_N q^N, with all products truncated at order N.
///
/// `exact_polynomial` records that no terms beyond N exist (the series is a polynomial);
/// products of exact polynomials stay exact only while the true degree fits in N.
template <typename T>
class TruncatedSeries {
public:
    TruncatedSeries() = default;
    TruncatedSeries(std::size_t order, const T& zero) : coeffs_(order + 1, zero), zero_(zero) {}
    TruncatedSeries(std::vector<T> coeffs, const T& zero, bool exact_polynomial = false)
        : coeffs_(std::move(coeffs)), zero_(zero), exact_(exact_polynomial) {
        if (coeffs_.empty()) throw std::invalid_argument("TruncatedSeries needs at least one coefficient");
    }

    static TruncatedSeries constant(std::size_t order, const T& c, const T& zero) {
        TruncatedSeries s(order, zero);
        s.coeffs_[0] = c;
        s.exact_ = true;
        return s;
    }

    std::size_t order() const { return coeffs_.size() - 1; }
    const T& operator[](std::size_t i) const { return coeffs_[i]; }
    T& operator[](std::size_t i) { return coeffs_[i]; }
    const std::vector<T>& coeffs() const { return coeffs_; }
    const T& zero_value() const { return zero_; }

    bool exact_polynomial() const { return exact_; }
    void set_exact_polynomial(bool e) { exact_ = e; }

    bool is_zero() const {
        for (const auto& c : coeffs_) {
            if (!(c == zero_)) return false;
        }
        return true;
    }

    TruncatedSeries& operator+=(const TruncatedSeries& o) {
        require_same_order(o);
        for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
        exact_ = exact_ && o.exact_;
        return *this;
    }
    TruncatedSeries& operator-=(const TruncatedSeries& o) {
        require_same_order(o);
        for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
        exact_ = exact_ && o.exact_;
        return *this;
    }
    TruncatedSeries& operator*=(const TruncatedSeries& o) {
        *this = *this * o;
        return *this;
    }

    friend TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries& b) { return a += b; }
    friend TruncatedSeries operator-(TruncatedSeries a, const TruncatedSeries& b) { return a -= b; }
    TruncatedSeries operator-() const {
        TruncatedSeries r = *this;
        for (auto& c : r.coeffs_) c = zero_ - c;
        return r;
    }

    friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
        a.require_same_order(b);
        const std::size_t n = a.coeffs_.size();
        TruncatedSeries c(a.order(), a.zero_);
        std::size_t top_a = a.last_nonzero();
        std::size_t top_b = b.last_nonzero();
        for (std::size_t i = 0; i <= top_a && i < n; ++i) {
            if (a.coeffs_[i] == a.zero_) continue;
            for (std::size_t j = 0; j <= top_b && i + j < n; ++j) {
                if (b.coeffs_[j] == b.zero_) continue;
                c.coeffs_[i + j] += a.coeffs_[i] * b.coeffs_[j];
            }
        }
        c.exact_ = a.exact_ && b.exact_ && top_a + top_b < n;
        return c;
    }

    friend bool operator==(const TruncatedSeries& a, const TruncatedSeries& b) { return a.coeffs_ == b.coeffs_; }

private:
    void require_same_order(const TruncatedSeries& o) const {
        if (coeffs_.size() != o.coeffs_.size()) throw std::invalid_argument("TruncatedSeries: order mismatch");
    }
    std::size_t last_nonzero() const {
        std::size_t k = coeffs_.size();
        while (k > 0 && coeffs_[k - 1] == zero_) --k;
        return k == 0 ? 0 : k - 1;
    }

    std::vector<T> coeffs_;
    T zero_{};
    bool exact_ = false;
};

}  // namespace padicfrob
