#include "padicfrob/padic.hpp"

#include <ostream>
#include <sstream>

namespace padicfrob {

PrimeContext::PrimeContext(long p) : p_(p), p_z_(p) {
    if (p < 3 || !is_prime(p)) {
        throw std::invalid_argument("prime must be an odd prime, got " + std::to_string(p));
    }
}

bool PrimeContext::is_prime(long n) {
    if (n < 2) return false;
    for (long d = 2; d * d <= n; ++d) {
        if (n % d == 0) return false;
    }
    return true;
}

mpq_class PrimeContext::power(long e) const {
    mpz_class pw;
    mpz_pow_ui(pw.get_mpz_t(), p_z_.get_mpz_t(), static_cast<unsigned long>(e < 0 ? -e : e));
    if (e >= 0) return mpq_class(pw);
    mpq_class r(1, 1);
    r /= pw;
    return r;
}

const mpq_class& ExtRational::value() const {
    if (inf_) throw std::logic_error("ExtRational: value() of +infinity");
    return v_;
}

ExtRational operator+(const ExtRational& a, const ExtRational& b) {
    if (a.inf_ || b.inf_) return ExtRational::infinity();
    return ExtRational(mpq_class(a.v_ + b.v_));
}

ExtRational operator-(const ExtRational& a, const mpq_class& b) {
    if (a.inf_) return a;
    return ExtRational(mpq_class(a.v_ - b));
}

bool operator==(const ExtRational& a, const ExtRational& b) {
    if (a.inf_ || b.inf_) return a.inf_ == b.inf_;
    return a.v_ == b.v_;
}

std::strong_ordering operator<=>(const ExtRational& a, const ExtRational& b) {
    if (a.inf_ && b.inf_) return std::strong_ordering::equal;
    if (a.inf_) return std::strong_ordering::greater;
    if (b.inf_) return std::strong_ordering::less;
    int c = cmp(a.v_, b.v_);
    if (c < 0) return std::strong_ordering::less;
    if (c > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

std::string ExtRational::to_string() const { return inf_ ? std::string("inf") : rational_to_string(v_); }

ExtRational min(const ExtRational& a, const ExtRational& b) { return (b < a) ? b : a; }

std::ostream& operator<<(std::ostream& os, const ExtRational& x) { return os << x.to_string(); }

namespace {

long remove_factor(mpz_class& n, const mpz_class& p) {
    if (n == 0) return 0;
    return static_cast<long>(mpz_remove(n.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t()));
}

long val_int(const mpz_class& p, const mpz_class& z) {
    if (!mpz_divisible_p(z.get_mpz_t(), p.get_mpz_t())) return 0;
    mpz_class t = z;
    return remove_factor(t, p);
}

}  // namespace

long val_p_int(const mpz_class& p, const mpq_class& x) {
    return val_int(p, x.get_num()) - val_int(p, x.get_den());
}

ExtRational val_p(const PrimeContext& ctx, const mpq_class& x) {
    if (x == 0) return ExtRational::infinity();
    return ExtRational(val_p_int(ctx.p_mpz(), x));
}

ExtRational val_p(const PrimeContext& ctx, const mpz_class& x) { return val_p(ctx, mpq_class(x)); }

ApproxPadic::ApproxPadic(const PrimeContext& ctx, mpq_class approx, ExtRational err_val)
    : approx_(std::move(approx)), err_(std::move(err_val)), p_(ctx.p()), pz_(ctx.p()) {
    approx_.canonicalize();
    val_ = approx_ == 0 ? ExtRational::infinity() : ExtRational(val_p_int(pz_, approx_));
}

namespace {

ExtRational ext_val_of(const mpz_class& pz, const mpq_class& q) {
    if (q == 0) return ExtRational::infinity();
    return ExtRational(val_p_int(pz, q));
}

void check_same_prime(long a, long b) {
    if (a != 0 && b != 0 && a != b) throw std::invalid_argument("ApproxPadic: mixing different primes");
}

}  // namespace

ApproxPadic& ApproxPadic::operator+=(const ApproxPadic& o) {
    check_same_prime(p_, o.p_);
    if (p_ == 0) {
        p_ = o.p_;
        pz_ = o.pz_;
    }
    approx_ += o.approx_;
    err_ = min(err_, o.err_);
    val_ = ext_val_of(pz_, approx_);
    return *this;
}

ApproxPadic& ApproxPadic::operator-=(const ApproxPadic& o) {
    check_same_prime(p_, o.p_);
    if (p_ == 0) {
        p_ = o.p_;
        pz_ = o.pz_;
    }
    approx_ -= o.approx_;
    err_ = min(err_, o.err_);
    val_ = ext_val_of(pz_, approx_);
    return *this;
}

ApproxPadic& ApproxPadic::operator*=(const ApproxPadic& o) {
    check_same_prime(p_, o.p_);
    if (p_ == 0) {
        p_ = o.p_;
        pz_ = o.pz_;
    }
    ExtRational e = min(min(err_ + o.val_, o.err_ + val_), err_ + o.err_);
    approx_ *= o.approx_;
    err_ = e;
    val_ = val_ + o.val_;
    return *this;
}

ApproxPadic& ApproxPadic::operator*=(const mpq_class& c) {
    if (c == 0 || p_ == 0) {
        approx_ = 0;
        err_ = ExtRational::infinity();
        val_ = ExtRational::infinity();
        return *this;
    }
    ExtRational vc = ext_val_of(pz_, c);
    approx_ *= c;
    err_ = err_ + vc;
    val_ = val_ + vc;
    return *this;
}

ApproxPadic ApproxPadic::operator-() const {
    ApproxPadic r = *this;
    r.approx_ = -r.approx_;
    return r;
}

ApproxPadic operator/(const ApproxPadic& a, const ApproxPadic& b) {
    check_same_prime(a.p_, b.p_);
    if (b.approx_ == 0 || !(b.val_ < b.err_)) {
        throw PrecisionError("ApproxPadic division by a value whose valuation is not certified");
    }
    // (x+e1)/(y+e2) - x/y = (y e1 - x e2) / (y (y + e2)), val(y + e2) = val(y).
    const mpq_class& vy = b.val_.value();
    ExtRational e = min(a.err_ - vy, a.val_ + b.err_ - mpq_class(2 * vy));
    ApproxPadic r = a;
    r.p_ = b.p_;
    r.pz_ = b.pz_;
    r.approx_ /= b.approx_;
    r.err_ = e;
    r.val_ = ext_val_of(r.pz_, r.approx_);
    return r;
}

ApproxPadic operator/(const ApproxPadic& a, const mpq_class& c) {
    if (c == 0) throw std::domain_error("ApproxPadic division by zero");
    mpq_class inv = 1 / c;
    return a * inv;
}

ApproxPadic approx_mul(const ApproxPadic& a, const ApproxPadic& b) { return a * b; }

ApproxPadic ApproxPadic::reduced() const {
    if (err_.is_infinite() || approx_ == 0) return *this;
    if (!(val_ < err_)) {
        // Approximation is indistinguishable from zero at this precision.
        ApproxPadic r = *this;
        r.approx_ = 0;
        r.val_ = ExtRational::infinity();
        return r;
    }
    // Valuations of rationals are integers, so val >= err_val means val >= ceil(err_val).
    mpz_class e_floor;
    mpz_cdiv_q(e_floor.get_mpz_t(), err_.value().get_num_mpz_t(), err_.value().get_den_mpz_t());
    long v = val_p_int(pz_, approx_);
    long digits = e_floor.get_si() - v;
    if (digits <= 0) return *this;
    // approx = p^v * n / d with p coprime to n, d.
    mpq_class unit = approx_;
    mpz_class num = unit.get_num();
    mpz_class den = unit.get_den();
    if (v > 0) {
        mpz_class pv;
        mpz_pow_ui(pv.get_mpz_t(), pz_.get_mpz_t(), static_cast<unsigned long>(v));
        num /= pv;
    } else if (v < 0) {
        mpz_class pv;
        mpz_pow_ui(pv.get_mpz_t(), pz_.get_mpz_t(), static_cast<unsigned long>(-v));
        den /= pv;
    }
    mpz_class mod;
    mpz_pow_ui(mod.get_mpz_t(), pz_.get_mpz_t(), static_cast<unsigned long>(digits));
    mpz_class inv;
    mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), mod.get_mpz_t());
    mpz_class u = num * inv;
    mpz_mod(u.get_mpz_t(), u.get_mpz_t(), mod.get_mpz_t());
    // Prefer the balanced representative to keep signs readable.
    mpz_class half = mod / 2;
    if (u > half) u -= mod;
    mpq_class out(u);
    PrimeContext ctx(p_);
    out *= ctx.power(v);
    return ApproxPadic(ctx, out, err_);
}

CertifiedVal certified_val(const PrimeContext& ctx, const ApproxPadic& x) {
    (void)ctx;
    if (x.is_exact()) return CertifiedVal{x.approx_val()};
    if (x.approx_val() < x.err_val()) return CertifiedVal{x.approx_val()};
    return CertifiedVal::indeterminate();
}

std::ostream& operator<<(std::ostream& os, const ApproxPadic& x) {
    return os << "(" << rational_to_string(x.approx()) << ", err_val " << x.err_val() << ")";
}

std::string rational_to_string(const mpq_class& q) {
    mpq_class c = q;
    c.canonicalize();
    if (c.get_den() == 1) return c.get_num().get_str();
    return c.get_num().get_str() + "/" + c.get_den().get_str();
}

mpq_class parse_rational(const std::string& s) {
    auto bad = [&] { return std::invalid_argument("malformed rational '" + s + "'"); };
    if (s.empty()) throw bad();
    auto slash = s.find('/');
    std::string num = s.substr(0, slash);
    std::string den = slash == std::string::npos ? std::string("1") : s.substr(slash + 1);
    auto valid_int = [](const std::string& t, bool allow_sign) {
        if (t.empty()) return false;
        std::size_t i = 0;
        if (allow_sign && (t[0] == '-' || t[0] == '+')) i = 1;
        if (i == t.size()) return false;
        for (; i < t.size(); ++i) {
            if (t[i] < '0' || t[i] > '9') return false;
        }
        return true;
    };
    if (!valid_int(num, true) || !valid_int(den, false)) throw bad();
    mpz_class n(num[0] == '+' ? num.substr(1) : num, 10);
    mpz_class d(den, 10);
    if (d == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
    mpq_class r(n, d);
    r.canonicalize();
    return r;
}

}  // namespace padicfrob
