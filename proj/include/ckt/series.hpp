#pragma once

// Truncated power series over Q_p on a residue disk {z : v(z - c) >= 1},
// in the local coordinate t = z - c, with valuation-tracked coefficients,
// plus Strassman zero counting and digit-descent/Newton root location.
//
// Tail accounting: every series carries a certificate (log_loss K, offset C)
// asserting v(a_j) + j >= j - K*floor(log_p j) + C for all j, including the
// omitted j > T.  The shape is stable under the operations below (adding
// losses under multiplication and integration), so evaluation at v(t) >= 1
// carries truncation error of valuation >= tail_eval_bound().

#include <algorithm>
#include <limits>
#include <vector>

#include "ckt/padic.hpp"

namespace ckt {

struct DiskSeries {
    PadicNumber center;                 // a unit, typically a Teichmuller lift
    std::vector<PadicNumber> coeff;     // a_0 .. a_T in t = z - center
    int log_loss = 0;                   // K in the tail certificate
    long offset = 0;                    // C in the tail certificate

    int trunc() const { return static_cast<int>(coeff.size()) - 1; }
    const PadicContext& ctx() const { return center.ctx(); }

    static DiskSeries constant(const PadicNumber& center, const PadicNumber& value, int T) {
        DiskSeries f;
        f.center = center;
        f.coeff.assign(static_cast<size_t>(T) + 1, PadicNumber::zero(center.ctx()));
        f.coeff[0] = value;
        f.offset = value.is_exact_zero() ? 0 : std::min<long>(0, value.val_lower_bound());
        return f;
    }

    static DiskSeries zero(const PadicNumber& center, int T) {
        return constant(center, PadicNumber::zero(center.ctx()), T);
    }

    // set (K, C) from the kept coefficients; the caller asserts the omitted
    // tail follows the same shape (true for the closed-form expansions built
    // in the polylog module)
    void set_primitive_bounds(int K) {
        log_loss = K;
        offset = 0;
        for (int j = 0; j <= trunc(); ++j) {
            if (coeff[j].is_exact_zero()) continue;
            offset = std::min(offset,
                              coeff[j].val_lower_bound() + K * log_floor(ctx().p(), std::max(j, 1)));
        }
    }

    // lower bound for v(a_j) + j over the omitted indices j > T; since
    // j - K*log_p(j) increases once j > K, the infimum sits near j = T+1
    long tail_eval_bound() const {
        long j = trunc() + 1;
        long horizon = 4 * (j + log_loss + 2);
        return j - static_cast<long>(log_loss) * log_floor(ctx().p(), horizon) + offset;
    }

    PadicNumber eval(const PadicNumber& t) const {
        if (!t.is_zero() && t.valuation() < 1)
            throw std::invalid_argument("DiskSeries::eval: point outside disk (v(t) < 1)");
        PadicNumber acc = coeff.back();
        for (int j = trunc() - 1; j >= 0; --j)
            acc = acc * t + coeff[j];
        long err = tail_eval_bound();
        if (t.is_zero() || err >= acc.abs_prec()) return acc;
        return acc + PadicNumber::zero_to(ctx(), err);
    }

    PadicNumber eval_at_z(const PadicNumber& z) const { return eval(z - center); }

    void require_same_disk(const DiskSeries& g) const {
        PadicNumber d = center - g.center;
        if (!d.is_zero())
            throw std::invalid_argument("DiskSeries: center mismatch");
    }
};

inline DiskSeries series_add(const DiskSeries& f, const DiskSeries& g) {
    f.require_same_disk(g);
    DiskSeries h;
    h.center = f.center;
    int T = std::min(f.trunc(), g.trunc());
    h.coeff.reserve(T + 1);
    for (int j = 0; j <= T; ++j) h.coeff.push_back(f.coeff[j] + g.coeff[j]);
    h.log_loss = std::max(f.log_loss, g.log_loss);
    h.offset = std::min(f.offset, g.offset);
    return h;
}

inline DiskSeries series_neg(const DiskSeries& f) {
    DiskSeries h = f;
    for (auto& c : h.coeff) c = -c;
    return h;
}

inline DiskSeries series_sub(const DiskSeries& f, const DiskSeries& g) {
    return series_add(f, series_neg(g));
}

inline DiskSeries series_scale(const DiskSeries& f, const PadicNumber& c) {
    DiskSeries h;
    h.center = f.center;
    h.coeff.reserve(f.coeff.size());
    for (const auto& a : f.coeff) h.coeff.push_back(a * c);
    if (c.is_exact_zero()) {
        h.log_loss = 0;
        h.offset = 0;
    } else {
        h.log_loss = f.log_loss;
        h.offset = f.offset + c.val_lower_bound();
    }
    return h;
}

inline DiskSeries series_mul(const DiskSeries& f, const DiskSeries& g) {
    f.require_same_disk(g);
    const PadicContext& ctx = f.ctx();
    DiskSeries h;
    h.center = f.center;
    int T = std::min(f.trunc(), g.trunc());
    h.coeff.assign(static_cast<size_t>(T) + 1, PadicNumber::zero(ctx));
    for (int i = 0; i <= T; ++i) {
        if (f.coeff[i].is_exact_zero()) continue;
        for (int j = 0; i + j <= T; ++j) {
            if (g.coeff[j].is_exact_zero()) continue;
            h.coeff[i + j] = h.coeff[i + j] + f.coeff[i] * g.coeff[j];
        }
    }
    h.log_loss = f.log_loss + g.log_loss;
    h.offset = f.offset + g.offset;
    return h;
}

inline DiskSeries series_pow(const DiskSeries& f, unsigned e) {
    DiskSeries r = DiskSeries::constant(f.center, PadicNumber::from_long(f.ctx(), 1), f.trunc());
    DiskSeries b = f;
    while (e) {
        if (e & 1) r = series_mul(r, b);
        if (e >>= 1) b = series_mul(b, b);
    }
    return r;
}

inline DiskSeries series_derivative(const DiskSeries& f) {
    const PadicContext& ctx = f.ctx();
    int T = f.trunc();
    DiskSeries h = DiskSeries::zero(f.center, T);
    for (int j = 0; j + 1 <= T; ++j)
        h.coeff[j] = PadicNumber::from_long(ctx, j + 1) * f.coeff[j + 1];
    h.log_loss = f.log_loss;
    h.offset = f.offset - std::max(1, f.log_loss);   // index shift may cross a power of p
    return h;
}

// (c+t) * f'(t) -- the logarithmic-derivative companion of integrate_dlog
inline DiskSeries series_dlog_derivative(const DiskSeries& f) {
    DiskSeries d = series_derivative(f);
    DiskSeries h = series_scale(d, f.center);
    for (int j = 1; j <= h.trunc(); ++j)
        h.coeff[j] = h.coeff[j] + d.coeff[j - 1];
    return h;
}

// F with F(center) = constant and F'(t) = f(t) / (c + t): multiply by the
// geometric expansion of 1/(c+t) and integrate termwise; the division by
// j+1 loses v(j+1) digits at index j+1, recorded by bumping log_loss.
inline DiskSeries integrate_dlog(const DiskSeries& f, const PadicNumber& constant) {
    const PadicContext& ctx = f.ctx();
    const PadicNumber& c = f.center;
    if (!c.is_unit_form() || c.valuation() != 0)
        throw std::invalid_argument("integrate_dlog: center must be a unit");
    int T = f.trunc();
    PadicNumber cinv = c.inverse();
    DiskSeries geo = DiskSeries::zero(c, T);   // 1/(1 + t/c)
    PadicNumber cur = PadicNumber::from_long(ctx, 1);
    PadicNumber mc = -cinv;
    for (int j = 0; j <= T; ++j) {
        geo.coeff[j] = cur;
        cur = cur * mc;
    }
    DiskSeries h = series_scale(series_mul(f, geo), cinv);
    DiskSeries out = DiskSeries::zero(c, T);
    out.coeff[0] = constant;
    for (int j = 0; j + 1 <= T; ++j)
        out.coeff[j + 1] = h.coeff[j] / PadicNumber::from_long(ctx, j + 1);
    out.log_loss = h.log_loss + 1;
    out.offset = std::min<long>(h.offset + 1,
                                constant.is_exact_zero() ? 0 : constant.val_lower_bound());
    return out;
}

// f at center c' composed with q : z -> z^p, re-expanded about c with
// c^p = c' in the disk of c'.  Uses that (c+t)^p - c^p has every coefficient
// of t^j, j < p, divisible by p.
inline DiskSeries compose_poly_zp(const DiskSeries& f, const PadicNumber& c) {
    const PadicContext& ctx = f.ctx();
    long p = ctx.p();
    int T = f.trunc();
    PadicNumber img = c.pow_ui(static_cast<unsigned long>(p)) - f.center;
    if (!img.is_zero() && img.valuation() < 1)
        throw std::invalid_argument("compose_poly_zp: image disk mismatch (v(c^p - c') < 1)");

    // q(t) = (c+t)^p - c', exact binomial expansion
    DiskSeries q = DiskSeries::zero(c, T);
    mpz_class binom = 1;
    PadicNumber cpow = c.pow_ui(static_cast<unsigned long>(p));
    q.coeff[0] = cpow - f.center;
    PadicNumber cinv = c.inverse();
    for (long i = 1; i <= std::min<long>(p, T); ++i) {
        binom = binom * (p - i + 1) / i;
        cpow = cpow * cinv;
        q.coeff[static_cast<size_t>(i)] = PadicNumber::from_integer(ctx, binom) * cpow;
    }
    q.set_primitive_bounds(0);

    DiskSeries out = DiskSeries::zero(c, T);
    out.coeff[0] = f.coeff[0];
    DiskSeries qm = DiskSeries::constant(c, PadicNumber::from_long(ctx, 1), T);
    for (int m = 1; m <= T; ++m) {
        qm = series_mul(qm, q);
        if (f.coeff[m].is_exact_zero()) continue;
        out = series_add(out, series_scale(qm, f.coeff[m]));
    }
    out.log_loss = f.log_loss;
    out.offset = f.offset;
    return out;
}

// h(s) = f(t0 + p^level * s): recenter for the digit-descent root search
inline DiskSeries shift_scale(const DiskSeries& f, const PadicNumber& t0, long level) {
    const PadicContext& ctx = f.ctx();
    int T = f.trunc();
    PadicNumber P = PadicNumber::from_long(ctx, 1).shifted(level);
    DiskSeries acc = DiskSeries::zero(f.center, T);
    for (int n = T; n >= 0; --n) {
        // acc = acc * (t0 + P s) + a_n
        DiskSeries next = DiskSeries::zero(f.center, T);
        for (int j = 0; j <= T; ++j) {
            PadicNumber v = acc.coeff[j] * t0;
            if (j > 0) v = v + acc.coeff[j - 1] * P;
            next.coeff[j] = v;
        }
        next.coeff[0] = next.coeff[0] + f.coeff[n];
        acc = std::move(next);
    }
    // v(h_n) >= n*level + (n - K log n + C) - n >= tail shape at level >= 1
    acc.log_loss = f.log_loss;
    acc.offset = f.offset;
    return acc;
}

struct RootRecord {
    PadicNumber root;          // in the z-coordinate (center + t)
    int multiplicity = 1;
    bool certified = false;
    long residual_valuation = 0;
};

// Strassman bound for roots with v(t) >= radius_val: the largest index n
// minimizing v(a_n) + n * radius_val.  Throws when coefficients known only
// below that level make the count inconclusive.
inline int strassman_count_at(const DiskSeries& f, long radius_val) {
    long mu = std::numeric_limits<long>::max();
    for (int n = 0; n <= f.trunc(); ++n)
        if (f.coeff[n].is_unit_form())
            mu = std::min(mu, f.coeff[n].valuation() + n * radius_val);
    if (mu == std::numeric_limits<long>::max())
        throw std::runtime_error("strassman: all coefficients below precision, inconclusive");
    int arg = 0;
    for (int n = 0; n <= f.trunc(); ++n)
        if (f.coeff[n].is_unit_form() && f.coeff[n].valuation() + n * radius_val == mu)
            arg = n;
    // a coefficient known only to a precision at or below the minimum could
    // change the count; so could an undominated truncation tail
    for (int n = 0; n <= f.trunc(); ++n) {
        if (f.coeff[n].is_unit_form() || f.coeff[n].is_exact_zero()) continue;
        if (f.coeff[n].abs_prec() + n * radius_val <= mu)
            throw std::runtime_error("strassman: coefficient known only below the minimum, inconclusive");
    }
    if (f.tail_eval_bound() <= mu)
        throw std::runtime_error("strassman: truncation tail not dominated, increase truncation");
    return arg;
}

// Exact number of roots (with multiplicity) in the disk v(t) >= 1.
inline int strassman_count(const DiskSeries& f) { return strassman_count_at(f, 1); }

namespace detail {

inline PadicNumber newton_refine(const DiskSeries& f, const DiskSeries& fp,
                                 PadicNumber t, long target) {
    for (int it = 0; it < 256; ++it) {
        PadicNumber ft = f.eval(t);
        if (ft.is_zero_to(target)) return t;
        PadicNumber fpt = fp.eval(t);
        if (!fpt.is_unit_form()) return t;   // nondegeneracy lost; caller flags
        PadicNumber step = ft / fpt;
        t = t - step;
        if (step.is_zero_to(target)) return t;
    }
    return t;
}

// cnt roots (counted in the algebraic closure) sit in t0 + p^level Z_p; emit
// the unresolved cluster whenever the subdisk counts stop being conclusive
inline void descend(const DiskSeries& f, const DiskSeries& fp, const PadicNumber& t0,
                    long level, int cnt, long target, long cert_threshold,
                    std::vector<RootRecord>& out) {
    const PadicContext& ctx = f.ctx();
    long p = ctx.p();
    if (cnt == 0) return;
    auto cluster = [&]() {
        RootRecord rec;
        rec.root = f.center + t0;
        rec.multiplicity = cnt;
        rec.certified = false;
        rec.residual_valuation = f.eval(t0).val_lower_bound();
        out.push_back(std::move(rec));
    };
    if (level >= target) {   // precision exhausted before separation
        cluster();
        return;
    }
    for (long dig = 0; dig < p; ++dig) {
        PadicNumber tc = t0 + PadicNumber::from_long(ctx, dig).shifted(level);
        int child;
        try {
            child = strassman_count_at(shift_scale(f, tc, level + 1), 0);
        } catch (const std::runtime_error&) {
            cluster();
            return;
        }
        if (child == 0) continue;
        if (child == 1) {
            PadicNumber r = newton_refine(f, fp, tc, target);
            PadicNumber res = f.eval(r);
            if (!res.is_zero_to(cert_threshold) && level + 1 < target) {
                // Newton nondegeneracy failed; keep separating digits
                descend(f, fp, tc, level + 1, 1, target, cert_threshold, out);
                continue;
            }
            RootRecord rec;
            rec.root = f.center + r;
            rec.multiplicity = 1;
            rec.residual_valuation = res.val_lower_bound();
            rec.certified = res.is_zero_to(cert_threshold);
            out.push_back(std::move(rec));
            continue;
        }
        descend(f, fp, tc, level + 1, child, target, cert_threshold, out);
    }
}

}  // namespace detail

// All roots of f in its disk: Strassman count first, then digit-by-digit
// subdisk descent with Newton acceleration once a subdisk holds one simple
// root.  Roots failing the residual certification are flagged, never dropped.
inline std::vector<RootRecord> find_roots(const DiskSeries& f, long target, long cert_threshold) {
    int cnt = strassman_count(f);
    std::vector<RootRecord> out;
    if (cnt == 0) return out;
    DiskSeries fp = series_derivative(f);
    detail::descend(f, fp, PadicNumber::zero(f.ctx()), 1, cnt, target, cert_threshold, out);
    return out;
}

}  // namespace ckt
