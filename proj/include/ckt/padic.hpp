#pragma once

// Capped-precision arithmetic in Q_p: numbers carry an exact valuation, a
// unit part known to a tracked number of base-p digits, and never report
// more absolute precision than the ultrametric rules justify.

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace ckt {

class PadicContext {
  public:
    PadicContext(long p, int prec, int pow_cap = 0)
        : p_(p), prec_(prec) {
        if (p < 3 || !is_prime(p))
            throw std::invalid_argument("PadicContext: p must be an odd prime >= 3");
        if (prec < 1)
            throw std::invalid_argument("PadicContext: precision must be >= 1");
        int cap = pow_cap > 0 ? pow_cap : 2 * prec + 160;
        pow_.reserve(cap + 1);
        mpz_class x = 1;
        for (int i = 0; i <= cap; ++i) {
            pow_.push_back(x);
            x *= p;
        }
    }

    PadicContext(const PadicContext&) = delete;
    PadicContext& operator=(const PadicContext&) = delete;

    long p() const { return p_; }
    int prec() const { return prec_; }
    int pow_cap() const { return static_cast<int>(pow_.size()) - 1; }

    // p^k, precomputed so the table is immutable after construction
    const mpz_class& pow(long k) const {
        if (k < 0 || k >= static_cast<long>(pow_.size()))
            throw std::out_of_range("PadicContext::pow: exponent " + std::to_string(k) +
                                    " outside precomputed range");
        return pow_[static_cast<size_t>(k)];
    }

    static bool is_prime(long n) {
        if (n < 2) return false;
        for (long d = 2; d * d <= n; ++d)
            if (n % d == 0) return false;
        return true;
    }

  private:
    long p_;
    int prec_;
    std::vector<mpz_class> pow_;
};

// floor(log_p(n)) for n >= 1
inline long log_floor(long p, long n) {
    long k = 0, x = p;
    while (x <= n) { x *= p; ++k; }
    return k;
}

inline long val_of_long(long p, long n) {
    if (n == 0) throw std::invalid_argument("val_of_long: zero");
    long v = 0;
    while (n % p == 0) { n /= p; ++v; }
    return v;
}

class PadicNumber {
  public:
    enum class Kind : uint8_t { ExactZero, ZeroToPrec, Unit };

    PadicNumber() : ctx_(nullptr), v_(0), r_(0), kind_(Kind::ExactZero) {}

    static PadicNumber zero(const PadicContext& ctx) {
        PadicNumber x;
        x.ctx_ = &ctx;
        return x;
    }

    // |x| <= p^-M, nothing more known
    static PadicNumber zero_to(const PadicContext& ctx, long M) {
        PadicNumber x;
        x.ctx_ = &ctx;
        x.kind_ = Kind::ZeroToPrec;
        x.v_ = M;
        return x;
    }

    static PadicNumber from_integer(const PadicContext& ctx, const mpz_class& n, int rel_prec = 0) {
        PadicNumber x;
        x.ctx_ = &ctx;
        if (n == 0) return x;
        int r = rel_prec > 0 ? rel_prec : ctx.prec();
        mpz_class u = n;
        long v = 0;
        while (mpz_divisible_ui_p(u.get_mpz_t(), ctx.p())) {
            mpz_divexact_ui(u.get_mpz_t(), u.get_mpz_t(), ctx.p());
            ++v;
        }
        x.kind_ = Kind::Unit;
        x.v_ = v;
        x.r_ = r;
        mpz_mod(x.u_.get_mpz_t(), u.get_mpz_t(), ctx.pow(r).get_mpz_t());
        return x;
    }

    static PadicNumber from_long(const PadicContext& ctx, long n, int rel_prec = 0) {
        return from_integer(ctx, mpz_class(n), rel_prec);
    }

    // p-unit or p-power denominators both allowed
    static PadicNumber from_rational(const PadicContext& ctx, const mpq_class& q, int rel_prec = 0) {
        PadicNumber x;
        x.ctx_ = &ctx;
        if (q == 0) return x;
        int r = rel_prec > 0 ? rel_prec : ctx.prec();
        mpz_class num = q.get_num(), den = q.get_den();
        long v = 0;
        while (mpz_divisible_ui_p(num.get_mpz_t(), ctx.p())) {
            mpz_divexact_ui(num.get_mpz_t(), num.get_mpz_t(), ctx.p());
            ++v;
        }
        while (mpz_divisible_ui_p(den.get_mpz_t(), ctx.p())) {
            mpz_divexact_ui(den.get_mpz_t(), den.get_mpz_t(), ctx.p());
            --v;
        }
        const mpz_class& mod = ctx.pow(r);
        mpz_class den_inv;
        if (mpz_invert(den_inv.get_mpz_t(), den.get_mpz_t(), mod.get_mpz_t()) == 0)
            throw std::runtime_error("from_rational: denominator not invertible");
        x.kind_ = Kind::Unit;
        x.v_ = v;
        x.r_ = r;
        x.u_ = num * den_inv;
        mpz_mod(x.u_.get_mpz_t(), x.u_.get_mpz_t(), mod.get_mpz_t());
        return x;
    }

    static PadicNumber from_rational(const PadicContext& ctx, long num, long den, int rel_prec = 0) {
        return from_rational(ctx, mpq_class(num, den), rel_prec);
    }

    // raw constructor: x = p^v * u known mod p^r; normalizes
    static PadicNumber from_unit(const PadicContext& ctx, long v, mpz_class u, int r) {
        PadicNumber x;
        x.ctx_ = &ctx;
        if (r <= 0) return zero_to(ctx, v);
        mpz_mod(u.get_mpz_t(), u.get_mpz_t(), ctx.pow(r).get_mpz_t());
        if (u == 0) return zero_to(ctx, v + r);
        long s = 0;
        while (mpz_divisible_ui_p(u.get_mpz_t(), ctx.p())) {
            mpz_divexact_ui(u.get_mpz_t(), u.get_mpz_t(), ctx.p());
            ++s;
        }
        x.kind_ = Kind::Unit;
        x.v_ = v + s;
        x.r_ = r - static_cast<int>(s);
        x.u_ = std::move(u);
        return x;
    }

    const PadicContext& ctx() const {
        if (!ctx_) throw std::logic_error("PadicNumber: no context");
        return *ctx_;
    }

    bool is_exact_zero() const { return kind_ == Kind::ExactZero; }
    bool is_zero() const { return kind_ != Kind::Unit; }   // zero as far as we know
    bool is_unit_form() const { return kind_ == Kind::Unit; }

    // |x| <= p^-digits as far as the stored precision can tell
    bool is_zero_to(long digits) const {
        if (kind_ == Kind::ExactZero) return true;
        return v_ >= digits;
    }

    // exact valuation for unit-form numbers; lower bound for approximate zeros
    long valuation() const {
        if (kind_ == Kind::ExactZero)
            throw std::logic_error("valuation of exact zero");
        return v_;
    }

    long val_lower_bound() const {
        if (kind_ == Kind::ExactZero) return std::numeric_limits<long>::max() / 2;
        return v_;
    }

    long abs_prec() const {
        switch (kind_) {
            case Kind::ExactZero: return std::numeric_limits<long>::max() / 2;
            case Kind::ZeroToPrec: return v_;
            default: return v_ + r_;
        }
    }

    int rel_prec() const { return kind_ == Kind::Unit ? r_ : 0; }
    const mpz_class& unit() const { return u_; }

    long residue() const {
        if (kind_ != Kind::Unit || v_ != 0)
            throw std::logic_error("residue: not a unit");
        return mpz_fdiv_ui(u_.get_mpz_t(), ctx_->p());
    }

    // value mod p^M as a nonnegative integer; requires v >= 0 and abs_prec >= M
    mpz_class lift_mod(long M) const {
        if (abs_prec() < M)
            throw std::runtime_error("lift_mod: insufficient precision");
        if (is_zero()) return 0;
        if (v_ < 0) throw std::runtime_error("lift_mod: negative valuation");
        mpz_class x = u_ * ctx_->pow(v_);
        mpz_mod(x.get_mpz_t(), x.get_mpz_t(), ctx_->pow(M).get_mpz_t());
        return x;
    }

    PadicNumber operator-() const {
        if (kind_ != Kind::Unit) return *this;
        PadicNumber x = *this;
        x.u_ = ctx_->pow(r_) - u_;
        return x;
    }

    friend PadicNumber operator+(const PadicNumber& a, const PadicNumber& b) {
        if (a.kind_ == Kind::ExactZero) return b;
        if (b.kind_ == Kind::ExactZero) return a;
        const PadicContext& ctx = a.same_ctx(b);
        long M = std::min(a.abs_prec(), b.abs_prec());
        if (a.kind_ != Kind::Unit && b.kind_ != Kind::Unit)
            return zero_to(ctx, M);
        if (a.kind_ != Kind::Unit) return b.truncated_to(M);
        if (b.kind_ != Kind::Unit) return a.truncated_to(M);
        long v = std::min(a.v_, b.v_);
        if (M <= v) return zero_to(ctx, M);
        int r = static_cast<int>(M - v);
        mpz_class u = 0;
        if (a.v_ - v < r) u += a.u_ * ctx.pow(a.v_ - v);
        if (b.v_ - v < r) u += b.u_ * ctx.pow(b.v_ - v);
        return from_unit(ctx, v, std::move(u), r);
    }

    friend PadicNumber operator-(const PadicNumber& a, const PadicNumber& b) { return a + (-b); }

    friend PadicNumber operator*(const PadicNumber& a, const PadicNumber& b) {
        if (a.kind_ == Kind::ExactZero) return a;
        if (b.kind_ == Kind::ExactZero) return b;
        const PadicContext& ctx = a.same_ctx(b);
        if (a.kind_ != Kind::Unit || b.kind_ != Kind::Unit) {
            // |x*y| <= p^-(M + v(other))
            const PadicNumber& z = a.kind_ != Kind::Unit ? a : b;
            const PadicNumber& x = a.kind_ != Kind::Unit ? b : a;
            return zero_to(ctx, z.v_ + x.v_);
        }
        int r = std::min(a.r_, b.r_);
        mpz_class u = a.u_ * b.u_;
        mpz_mod(u.get_mpz_t(), u.get_mpz_t(), ctx.pow(r).get_mpz_t());
        PadicNumber x;
        x.ctx_ = &ctx;
        x.kind_ = Kind::Unit;
        x.v_ = a.v_ + b.v_;
        x.r_ = r;
        x.u_ = std::move(u);
        return x;
    }

    PadicNumber inverse() const {
        if (kind_ != Kind::Unit)
            throw std::runtime_error(kind_ == Kind::ExactZero
                ? "division by exact zero"
                : "division by a value indistinguishable from zero at this precision");
        PadicNumber x;
        x.ctx_ = ctx_;
        x.kind_ = Kind::Unit;
        x.v_ = -v_;
        x.r_ = r_;
        if (mpz_invert(x.u_.get_mpz_t(), u_.get_mpz_t(), ctx_->pow(r_).get_mpz_t()) == 0)
            throw std::runtime_error("inverse: unit not invertible (corrupt state)");
        return x;
    }

    friend PadicNumber operator/(const PadicNumber& a, const PadicNumber& b) { return a * b.inverse(); }

    // multiply by p^k (exact, no precision change in relative digits)
    PadicNumber shifted(long k) const {
        if (kind_ == Kind::ExactZero) return *this;
        PadicNumber x = *this;
        x.v_ += k;
        return x;
    }

    PadicNumber pow_ui(unsigned long e) const {
        PadicNumber r = from_long(ctx(), 1, kind_ == Kind::Unit ? r_ : ctx().prec());
        PadicNumber b = *this;
        while (e) {
            if (e & 1) r = r * b;
            b = b * b;
            e >>= 1;
        }
        return r;
    }

    // drop stated absolute precision to at most M
    PadicNumber truncated_to(long M) const {
        if (kind_ == Kind::ExactZero) return *this;
        if (kind_ == Kind::ZeroToPrec) return zero_to(*ctx_, std::min(v_, M));
        if (M >= v_ + r_) return *this;
        if (M <= v_) return zero_to(*ctx_, M);
        mpz_class u;
        mpz_mod(u.get_mpz_t(), u_.get_mpz_t(), ctx_->pow(M - v_).get_mpz_t());
        return from_unit(*ctx_, v_, std::move(u), static_cast<int>(M - v_));
    }

    // base-p digits of the unit part, least significant first
    std::string digits_string() const {
        if (kind_ != Kind::Unit) return "";
        std::string out;
        mpz_class x = u_, digit;
        for (int i = 0; i < r_; ++i) {
            digit = x % ctx_->p();
            out += digit.get_str();
            if (i + 1 < r_) out += '.';
            x /= ctx_->p();
        }
        return out;
    }

    std::string str() const {
        if (kind_ == Kind::ExactZero) return "0";
        if (kind_ == Kind::ZeroToPrec) return "O(" + std::to_string(ctx_->p()) + "^" + std::to_string(v_) + ")";
        return u_.get_str() + "*" + std::to_string(ctx_->p()) + "^" + std::to_string(v_) +
               " + O(" + std::to_string(ctx_->p()) + "^" + std::to_string(v_ + r_) + ")";
    }

    const PadicContext& same_ctx(const PadicNumber& b) const {
        if (!ctx_ || !b.ctx_) throw std::logic_error("PadicNumber: missing context");
        if (ctx_ != b.ctx_)
            throw std::invalid_argument("PadicNumber: mixing values from different contexts");
        return *ctx_;
    }

  private:
    const PadicContext* ctx_;
    long v_;
    int r_ = 0;
    mpz_class u_;
    Kind kind_;
};

// Teichmuller lift: the (p-1)-st root of unity congruent to a mod p,
// computed by iterating x -> x^p to its fixed point.
inline PadicNumber teichmuller(const PadicContext& ctx, long a, int rel_prec = 0) {
    int r = rel_prec > 0 ? rel_prec : ctx.prec();
    long a0 = ((a % ctx.p()) + ctx.p()) % ctx.p();
    if (a0 == 0)
        throw std::invalid_argument("teichmuller: residue divisible by p");
    const mpz_class& mod = ctx.pow(r);
    mpz_class x = a0, prev;
    for (int i = 0; i <= r + 1; ++i) {
        prev = x;
        mpz_powm_ui(x.get_mpz_t(), x.get_mpz_t(), ctx.p(), mod.get_mpz_t());
        if (x == prev) break;
    }
    return PadicNumber::from_unit(ctx, 0, std::move(x), r);
}

// log(1+t) = sum (-1)^(j+1) t^j / j for v(t) >= 1; series length chosen from
// the bound v(t^j/j) >= j*v(t) - log_p(j), not hard-coded.
inline PadicNumber log_one_plus(const PadicNumber& t) {
    const PadicContext& ctx = t.ctx();
    if (t.is_zero()) return t.is_exact_zero() ? PadicNumber::zero(ctx) : t;
    long vt = t.valuation();
    if (vt < 1) throw std::invalid_argument("log_one_plus: argument needs valuation >= 1");
    long target = t.abs_prec() + 2;
    long jmax = 1;
    while (jmax * vt - log_floor(ctx.p(), jmax) < target) ++jmax;
    PadicNumber acc = PadicNumber::zero(ctx);
    PadicNumber tp = t;
    int wr = ctx.prec();
    for (long j = 1; j <= jmax; ++j) {
        PadicNumber c = PadicNumber::from_rational(ctx, mpq_class(j % 2 ? 1 : -1, j), wr + 4);
        acc = acc + c * tp;
        tp = tp * t;
    }
    return acc;
}

// Iwasawa-branch logarithm restricted to units: log(u) = log(u / w(u mod p)).
// On units every branch agrees, so the restriction makes the branch question moot.
inline PadicNumber padic_log(const PadicNumber& u) {
    const PadicContext& ctx = u.ctx();
    if (!u.is_unit_form() || u.valuation() != 0)
        throw std::invalid_argument("padic_log: argument must be a unit (valuation 0)");
    PadicNumber w = teichmuller(ctx, u.residue(), u.rel_prec());
    PadicNumber t = u / w - PadicNumber::from_long(ctx, 1, u.rel_prec());
    if (t.is_zero())
        return t.is_exact_zero() ? PadicNumber::zero(ctx) : PadicNumber::zero_to(ctx, t.abs_prec());
    return log_one_plus(t);
}

struct ReconstructedRational {
    mpz_class num;
    mpz_class den;

    std::string str() const {
        return den == 1 ? num.get_str() : num.get_str() + "/" + den.get_str();
    }
    mpq_class to_mpq() const { return mpq_class(num, den); }
};

// Unique num/den with |num|, |den| <= floor(sqrt(p^M / 2)) congruent to x mod
// p^M, by the extended-Euclid lattice step; nullopt when no candidate exists.
inline std::optional<ReconstructedRational> rational_reconstruction(const PadicNumber& x, long M) {
    const PadicContext& ctx = x.ctx();
    if (x.abs_prec() < M)
        throw std::runtime_error("rational_reconstruction: value not known to the requested precision");
    if (x.is_zero()) return ReconstructedRational{0, 1};
    if (x.valuation() < 0) return std::nullopt;   // not a p-integer
    const mpz_class& m = ctx.pow(M);
    mpz_class a = x.lift_mod(M);
    mpz_class bound, tmp = m / 2;
    mpz_sqrt(bound.get_mpz_t(), tmp.get_mpz_t());

    mpz_class r0 = m, r1 = a, t0 = 0, t1 = 1, q, t;
    while (r1 > bound) {
        q = r0 / r1;
        t = r0 - q * r1; r0 = r1; r1 = t;
        t = t0 - q * t1; t0 = t1; t1 = t;
    }
    mpz_class num = r1, den = t1;
    if (den < 0) { num = -num; den = -den; }
    if (den == 0 || den > bound) return std::nullopt;
    if (mpz_divisible_ui_p(den.get_mpz_t(), ctx.p())) return std::nullopt;
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    if (g > 1) { num /= g; den /= g; }
    // verify num/den = a mod p^M
    mpz_class chk = num - a * den;
    mpz_mod(chk.get_mpz_t(), chk.get_mpz_t(), m.get_mpz_t());
    if (chk != 0) return std::nullopt;
    return ReconstructedRational{std::move(num), std::move(den)};
}

}  // namespace ckt
