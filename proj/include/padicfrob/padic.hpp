#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

namespace padicfrob {

/// Raised when approximate arithmetic cannot certify the precision a caller asked for.
class PrecisionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An odd prime together with the valuation of pi (pi^{p-1} = -p).
class PrimeContext {
public:
    explicit PrimeContext(long p);

    long p() const { return p_; }
    const mpz_class& p_mpz() const { return p_z_; }
    /// val(pi) = 1/(p-1).
    mpq_class pi_valuation() const { return mpq_class(1, p_ - 1); }

    /// p^e as an exact rational, e may be negative.
    mpq_class power(long e) const;

    static bool is_prime(long n);

private:
    long p_;
    mpz_class p_z_;
};

/// A rational number or +infinity (the valuation of zero).
class ExtRational {
public:
    ExtRational() : inf_(true) {}
    ExtRational(mpq_class v) : inf_(false), v_(std::move(v)) { v_.canonicalize(); }
    ExtRational(long v) : inf_(false), v_(v) {}

    static ExtRational infinity() { return ExtRational(); }

    bool is_infinite() const { return inf_; }
    bool is_finite() const { return !inf_; }
    /// Finite value; throws if infinite.
    const mpq_class& value() const;

    friend ExtRational operator+(const ExtRational& a, const ExtRational& b);
    friend ExtRational operator-(const ExtRational& a, const mpq_class& b);
    friend bool operator==(const ExtRational& a, const ExtRational& b);
    friend std::strong_ordering operator<=>(const ExtRational& a, const ExtRational& b);

    std::string to_string() const;

private:
    bool inf_;
    mpq_class v_;
};

ExtRational min(const ExtRational& a, const ExtRational& b);
std::ostream& operator<<(std::ostream& os, const ExtRational& x);

/// Exponent of p in x; +inf for x = 0.
ExtRational val_p(const PrimeContext& ctx, const mpq_class& x);
ExtRational val_p(const PrimeContext& ctx, const mpz_class& x);
/// Integer valuation of a nonzero rational, without the ExtRational wrapper.
long val_p_int(const mpz_class& p, const mpq_class& x);

/// A rational approximation `approx` of a p-adic number whose error has valuation >= err_val.
///
/// err_val = +inf means the value is exact. The valuation of approx is cached, so the
/// object carries the prime it was built for.
class ApproxPadic {
public:
    ApproxPadic() = default;
    ApproxPadic(const PrimeContext& ctx, mpq_class approx, ExtRational err_val = ExtRational::infinity());

    static ApproxPadic exact(const PrimeContext& ctx, mpq_class v) { return ApproxPadic(ctx, std::move(v)); }
    static ApproxPadic zero(const PrimeContext& ctx) { return ApproxPadic(ctx, mpq_class(0)); }

    const mpq_class& approx() const { return approx_; }
    const ExtRational& err_val() const { return err_; }
    /// val_p of the approximation (not necessarily of the true value).
    const ExtRational& approx_val() const { return val_; }
    long p() const { return p_; }
    bool is_exact() const { return err_.is_infinite(); }

    /// Guaranteed lower bound on the valuation of the true value.
    ExtRational val_lower_bound() const { return min(val_, err_); }

    /// Replace approx by an integer multiple of p^v congruent to it modulo p^err_val.
    /// Keeps the same err_val; exact values and values with non-finite bounds are unchanged.
    ApproxPadic reduced() const;

    ApproxPadic& operator+=(const ApproxPadic& o);
    ApproxPadic& operator-=(const ApproxPadic& o);
    ApproxPadic& operator*=(const ApproxPadic& o);
    ApproxPadic& operator*=(const mpq_class& c);

    friend ApproxPadic operator+(ApproxPadic a, const ApproxPadic& b) { return a += b; }
    friend ApproxPadic operator-(ApproxPadic a, const ApproxPadic& b) { return a -= b; }
    friend ApproxPadic operator*(ApproxPadic a, const ApproxPadic& b) { return a *= b; }
    friend ApproxPadic operator*(ApproxPadic a, const mpq_class& c) { return a *= c; }
    friend ApproxPadic operator*(const mpq_class& c, ApproxPadic a) { return a *= c; }
    ApproxPadic operator-() const;

    /// Division; the divisor's valuation must be certified, otherwise PrecisionError.
    friend ApproxPadic operator/(const ApproxPadic& a, const ApproxPadic& b);
    friend ApproxPadic operator/(const ApproxPadic& a, const mpq_class& c);

    /// Same approximation and the same error bound.
    bool identical(const ApproxPadic& o) const { return approx_ == o.approx_ && err_ == o.err_; }
    friend bool operator==(const ApproxPadic& a, const ApproxPadic& b) { return a.identical(b); }

private:
    mpq_class approx_{0};
    ExtRational err_{};
    ExtRational val_{};
    long p_ = 0;
    mpz_class pz_{0};
};

/// Product with the non-archimedean error bound
/// min(a.err + val(b), b.err + val(a), a.err + b.err).
ApproxPadic approx_mul(const ApproxPadic& a, const ApproxPadic& b);

/// Outcome of certifying a valuation. `value` is empty when indeterminate.
struct CertifiedVal {
    std::optional<ExtRational> value;

    bool certified() const { return value.has_value(); }
    static CertifiedVal indeterminate() { return {}; }
};

/// val(approx) when it is strictly below err_val (then it is the true valuation);
/// exact values certify their own valuation, including +inf for an exact zero.
CertifiedVal certified_val(const PrimeContext& ctx, const ApproxPadic& x);

std::ostream& operator<<(std::ostream& os, const ApproxPadic& x);

/// "a/b" in lowest terms, or "a" for integers.
std::string rational_to_string(const mpq_class& q);
/// Parses "a", "-a", "a/b"; throws std::invalid_argument on malformed input or zero denominator.
mpq_class parse_rational(const std::string& s);

}  // namespace padicfrob
