#pragma once

// Coleman polylogarithms on the thrice-punctured line over Z_p.
//
// The family log z, log(1-z), Li_1..Li_kmax lives on the residue disks with
// center a Teichmuller lift w(a), a = 2..p-1 (both z and 1-z units).  The
// construction per weight k:
//   * g_k(z) = Li_k(z) - p^{-k} Li_k(z^p) is analytic away from the disk at 1
//     and vanishes at 0 and infinity; its expansion sum_j d_j (z-1)^{-j} is
//     fitted against the Taylor coefficients sum_{p!|m} z^m / m^k at 0.
//   * Since z -> z^p fixes every residue disk (w(a)^p = w(a)), the constant
//     term of Li_k on disk a solves (1 - p^{-k}) Li_k(w) = g_k(w).
//   * The remaining coefficients come from d Li_k = Li_{k-1} dz/z.
// Both defining identities are then re-checked coefficientwise as residuals.

#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "ckt/padic.hpp"
#include "ckt/series.hpp"

namespace ckt {

// Taylor coefficients of g_k at 0: e_m = 1/m^k when p does not divide m, else 0.
inline std::vector<PadicNumber> g_taylor_at_zero(const PadicContext& ctx, int k, int M) {
    if (k < 1 || M < 1) throw std::invalid_argument("g_taylor_at_zero: need k >= 1, M >= 1");
    std::vector<PadicNumber> e;
    e.reserve(M + 1);
    e.push_back(PadicNumber::zero(ctx));
    for (long m = 1; m <= M; ++m) {
        if (m % ctx.p() == 0)
            e.push_back(PadicNumber::zero(ctx));
        else
            e.push_back(PadicNumber::from_rational(ctx, mpq_class(1), ctx.prec())
                        / PadicNumber::from_long(ctx, m).pow_ui(k));
    }
    return e;
}

struct GFunction {
    int k = 0;
    long J = 0;
    std::vector<PadicNumber> ml;      // d_0 .. d_J, coefficients of sum d_j (z-1)^{-j}
    long d0_valuation = 0;            // validated ~ working precision
    long tail_min_valuation = 0;      // min valuation over the last coefficients
    long heldout_agreement = 0;       // min agreement on held-out Taylor coefficients

    PadicNumber eval(const PadicNumber& z) const {
        const PadicContext& ctx = z.ctx();
        PadicNumber w = (z - PadicNumber::from_long(ctx, 1)).inverse();
        PadicNumber acc = ml.back();
        for (long j = J - 1; j >= 0; --j)
            acc = acc * w + ml[static_cast<size_t>(j)];
        return acc;
    }
};

namespace detail {

// e_m = 1/m^k (p !| m) as residues mod p^R, m = 0..M
inline std::vector<mpz_class> g_taylor_residues(const PadicContext& ctx, int k, long M, int R) {
    const mpz_class& mod = ctx.pow(R);
    std::vector<mpz_class> e(static_cast<size_t>(M) + 1, mpz_class(0));
    mpz_class mk, inv;
    for (long m = 1; m <= M; ++m) {
        if (m % ctx.p() == 0) continue;
        mpz_ui_pow_ui(mk.get_mpz_t(), static_cast<unsigned long>(m), static_cast<unsigned long>(k));
        mpz_mod(mk.get_mpz_t(), mk.get_mpz_t(), mod.get_mpz_t());
        mpz_invert(inv.get_mpz_t(), mk.get_mpz_t(), mod.get_mpz_t());
        e[static_cast<size_t>(m)] = inv;
    }
    return e;
}

inline long val_residue(const PadicContext& ctx, const mpz_class& x, int R) {
    if (x == 0) return R;
    mpz_class u = x;
    long v = 0;
    while (mpz_divisible_ui_p(u.get_mpz_t(), ctx.p())) {
        mpz_divexact_ui(u.get_mpz_t(), u.get_mpz_t(), ctx.p());
        ++v;
    }
    return v;
}

}  // namespace detail

// Fit d_0..d_J against e_m = sum_j d_j (-1)^j C(m+j-1, m), m = 0..J.  The
// binomial system is unimodular over Z, so reducing mod p^R solves it
// exactly there: multiplying the truncated Taylor series by (1-z)^J turns
// the unknown expansion into a polynomial, which a Taylor shift to z = 1
// re-expands in the (1-z)-basis.  Validation: d_0 close to 0, tail decay,
// and held-out Taylor coefficients beyond m = J reproduced.
inline GFunction ml_fit(const PadicContext& ctx, int k, long J, long heldout_window,
                        long validation_threshold) {
    const int R = ctx.prec();
    const mpz_class& mod = ctx.pow(R);
    long M = J + heldout_window;
    std::vector<mpz_class> e = detail::g_taylor_residues(ctx, k, M, R);

    // c(z) = e(z) * (1-z)^J  mod z^(J+1)
    std::vector<mpz_class> c(e.begin(), e.begin() + J + 1);
    for (long pass = 0; pass < J; ++pass) {
        for (long m = J; m >= 1; --m) {
            c[m] -= c[m - 1];
            if (c[m] < 0) c[m] += mod;
        }
    }
    // b(z) = c(z+1) via Horner; then c(1-y) = b(-y)
    std::vector<mpz_class> b(static_cast<size_t>(J) + 1, mpz_class(0));
    for (long n = J; n >= 0; --n) {
        for (long i = J; i >= 1; --i) {
            b[i] += b[i - 1];
            if (b[i] >= mod) b[i] -= mod;
        }
        b[0] += c[n];
        if (b[0] >= mod) b[0] -= mod;
    }
    // d_j = (-1)^j * (-1)^(J-j) * b[J-j] = (-1)^J b[J-j]
    std::vector<mpz_class> d(static_cast<size_t>(J) + 1);
    for (long j = 0; j <= J; ++j) {
        d[j] = b[J - j];
        if (J % 2 != 0 && d[j] != 0) d[j] = mod - d[j];
    }

    GFunction g;
    g.k = k;
    g.J = J;
    g.d0_valuation = detail::val_residue(ctx, d[0], R);
    g.tail_min_valuation = R;
    for (long j = std::max<long>(0, J - 8); j <= J; ++j)
        g.tail_min_valuation = std::min(g.tail_min_valuation, detail::val_residue(ctx, d[j], R));

    // held-out check: predицted e_m for m in (J, M] via the Pascal row
    // P[m][j] = C(m+j-1, m), advanced in place over m
    std::vector<mpz_class> row(static_cast<size_t>(J) + 1, mpz_class(1));  // m = 0 row
    mpz_class acc;
    g.heldout_agreement = R;
    for (long m = 1; m <= M; ++m) {
        row[0] = 0;   // C(m-1, m) = 0 once m >= 1
        for (long j = 1; j <= J; ++j) {
            row[j] += row[j - 1];
            if (row[j] >= mod) row[j] -= mod;
        }
        if (m <= J) continue;
        acc = 0;
        for (long j = 1; j <= J; ++j) {
            if (d[j] == 0) continue;
            if (j % 2 == 0) acc += d[j] * row[j];
            else acc -= d[j] * row[j];
        }
        mpz_mod(acc.get_mpz_t(), acc.get_mpz_t(), mod.get_mpz_t());
        acc -= e[static_cast<size_t>(m)];
        mpz_mod(acc.get_mpz_t(), acc.get_mpz_t(), mod.get_mpz_t());
        g.heldout_agreement = std::min(g.heldout_agreement, detail::val_residue(ctx, acc, R));
    }

    if (g.d0_valuation < validation_threshold || g.tail_min_valuation < validation_threshold ||
        g.heldout_agreement < validation_threshold)
        throw std::runtime_error(
            "ml_fit: validation failed at k=" + std::to_string(k) + " J=" + std::to_string(J) +
            " (d0 v=" + std::to_string(g.d0_valuation) +
            ", tail v=" + std::to_string(g.tail_min_valuation) +
            ", held-out v=" + std::to_string(g.heldout_agreement) +
            "); escalate truncation/precision");

    g.ml.reserve(d.size());
    for (auto& x : d) g.ml.push_back(PadicNumber::from_unit(ctx, 0, std::move(x), R));
    return g;
}

struct ColemanFunction {
    std::map<long, DiskSeries> pieces;   // residue -> series at w(residue)

    const PadicContext& ctx() const {
        if (pieces.empty()) throw std::logic_error("ColemanFunction: empty");
        return pieces.begin()->second.ctx();
    }

    void require_same_domain(const ColemanFunction& other) const {
        if (pieces.size() != other.pieces.size())
            throw std::invalid_argument("ColemanFunction: domain mismatch");
        auto it = other.pieces.begin();
        for (const auto& [a, piece] : pieces) {
            (void)piece;
            if (it->first != a) throw std::invalid_argument("ColemanFunction: domain mismatch");
            ++it;
        }
    }
};

inline ColemanFunction coleman_add(const ColemanFunction& f, const ColemanFunction& g) {
    f.require_same_domain(g);
    ColemanFunction h;
    for (const auto& [a, piece] : f.pieces) h.pieces.emplace(a, series_add(piece, g.pieces.at(a)));
    return h;
}

inline ColemanFunction coleman_sub(const ColemanFunction& f, const ColemanFunction& g) {
    f.require_same_domain(g);
    ColemanFunction h;
    for (const auto& [a, piece] : f.pieces) h.pieces.emplace(a, series_sub(piece, g.pieces.at(a)));
    return h;
}

inline ColemanFunction coleman_mul(const ColemanFunction& f, const ColemanFunction& g) {
    f.require_same_domain(g);
    ColemanFunction h;
    for (const auto& [a, piece] : f.pieces) h.pieces.emplace(a, series_mul(piece, g.pieces.at(a)));
    return h;
}

inline ColemanFunction coleman_scale(const ColemanFunction& f, const PadicNumber& c) {
    ColemanFunction h;
    for (const auto& [a, piece] : f.pieces) h.pieces.emplace(a, series_scale(piece, c));
    return h;
}

inline ColemanFunction coleman_pow(const ColemanFunction& f, unsigned e) {
    ColemanFunction h;
    for (const auto& [a, piece] : f.pieces) h.pieces.emplace(a, series_pow(piece, e));
    return h;
}

// residue of a p-adic unit given as a rational
inline long residue_of(const PadicContext& ctx, const mpq_class& z) {
    mpz_class num = z.get_num(), den = z.get_den();
    if (mpz_divisible_ui_p(num.get_mpz_t(), ctx.p()) || mpz_divisible_ui_p(den.get_mpz_t(), ctx.p()))
        throw std::invalid_argument("point is not a p-adic unit");
    mpz_class deninv, r;
    mpz_invert(deninv.get_mpz_t(), den.get_mpz_t(), ctx.pow(1).get_mpz_t());
    r = num * deninv;
    return mpz_fdiv_ui(r.get_mpz_t(), ctx.p());
}

struct CommonZeros {
    std::vector<RootRecord> zeros;          // certified common zeros of all inputs
    std::vector<std::string> warnings;      // uncertified roots, match failures
    std::vector<std::string> notes;         // informational, e.g. zeros outside Z_p
};

struct FamilyAudit {
    long ode_residual_eval_bound = 0;        // min over disks/weights of v(coef)+index
    long frobenius_residual_eval_bound = 0;
    bool residual_nonzero = false;           // any residual coefficient provably nonzero
    long ml_heldout_min = 0;
    long ml_d0_min = 0;
};

struct PolylogParams {
    long p = 11;
    int n_target = 30;
    int kmax = 4;
    // derived when left at 0
    int n_work = 0;
    int rel_digits = 0;
    int trunc = 0;
    long ml_J = 0;
    long ml_heldout = 32;

    void derive() {
        if (!PadicContext::is_prime(p) || p < 3)
            throw std::invalid_argument("PolylogParams: p must be an odd prime >= 3");
        if (n_target < 1 || kmax < 1) throw std::invalid_argument("PolylogParams: bad precision/kmax");
        if (n_work == 0) n_work = n_target + kmax + 12;
        if (rel_digits == 0) rel_digits = n_work + 4;
        if (trunc == 0) trunc = n_work + 18;
        if (ml_J == 0) ml_J = static_cast<long>(n_work + 6) * (p - 1) + 24;
    }
};

class PolylogFamily {
  public:
    PolylogParams params;
    std::vector<long> residues;               // 2 .. p-1
    std::map<long, PadicNumber> omega;        // Teichmuller centers
    ColemanFunction logz, log1mz;
    std::vector<ColemanFunction> li;          // index 1..kmax ([0] unused)
    std::vector<GFunction> g;                 // index 1..kmax ([0] unused)
    std::vector<ColemanFunction> g_disks;     // per-disk expansions of g_k
    std::map<int, PadicNumber> zeta;          // 2..kmax
    FamilyAudit audit;

    const PadicContext& ctx() const { return *ctx_; }

    explicit PolylogFamily(PolylogParams prm) : params(prm) {
        params.derive();
        ctx_ = std::make_unique<PadicContext>(params.p, params.rel_digits,
                                              params.rel_digits + params.trunc + 96);
    }

    // moving is fine: the context lives behind a unique_ptr, so the address
    // every PadicNumber refers to is stable
    PolylogFamily(const PolylogFamily&) = delete;
    PolylogFamily& operator=(const PolylogFamily&) = delete;
    PolylogFamily(PolylogFamily&&) = default;
    PolylogFamily& operator=(PolylogFamily&&) = default;

  private:
    std::unique_ptr<const PadicContext> ctx_;
};

namespace detail {

// Per-disk expansion of g_k from its ml coefficients: with w = 1/(z-1) and
// u_j = d_j (omega-1)^{-j},
//   [t^m] g_k|disk = (-1)^m (omega-1)^{-m} sum_j u_j C(m+j-1, m),
// the binomial column sums running over one in-place Pascal row.
inline void g_disk_expansions(const PolylogFamily& fam, const GFunction& g,
                              std::map<long, DiskSeries>& out) {
    const PadicContext& ctx = fam.ctx();
    const int R = ctx.prec();
    const mpz_class& mod = ctx.pow(R);
    const long J = g.J;
    const int T = fam.params.trunc;

    // residues u_j per disk (valuation shifted into the unit: d_j are p-integers,
    // (omega-1) is a unit, so everything stays in Z/p^R)
    std::vector<long> disks;
    std::vector<std::vector<mpz_class>> u;
    std::vector<mpz_class> winv_pow;  // (omega-1)^{-m} accumulators
    for (long a : fam.residues) disks.push_back(a);
    u.resize(disks.size());
    winv_pow.assign(disks.size(), mpz_class(1));
    std::vector<mpz_class> winv(disks.size());
    for (size_t i = 0; i < disks.size(); ++i) {
        PadicNumber w = fam.omega.at(disks[i]) - PadicNumber::from_long(ctx, 1);
        PadicNumber wi = w.inverse();
        mpz_class wiu = wi.unit();
        mpz_mod(wiu.get_mpz_t(), wiu.get_mpz_t(), mod.get_mpz_t());
        winv[i] = wiu;
        u[i].resize(static_cast<size_t>(J) + 1);
        mpz_class cur = 1;
        for (long j = 0; j <= J; ++j) {
            u[i][j] = g.ml[j].is_zero() ? mpz_class(0) : g.ml[j].unit() * ctx.pow(g.ml[j].valuation());
            u[i][j] *= cur;
            mpz_mod(u[i][j].get_mpz_t(), u[i][j].get_mpz_t(), mod.get_mpz_t());
            cur *= wiu;
            mpz_mod(cur.get_mpz_t(), cur.get_mpz_t(), mod.get_mpz_t());
        }
    }

    std::vector<std::vector<mpz_class>> coeffs(disks.size(),
        std::vector<mpz_class>(static_cast<size_t>(T) + 1));
    std::vector<mpz_class> row(static_cast<size_t>(J) + 1, mpz_class(1));  // C(j-1, 0) = 1 row (m=0)
    mpz_class acc;
    for (int m = 0; m <= T; ++m) {
        if (m > 0) {
            row[0] = 0;   // C(m-1, m) = 0 once m >= 1
            for (long j = 1; j <= J; ++j) {
                row[j] += row[j - 1];
                if (row[j] >= mod) row[j] -= mod;
            }
        }
        for (size_t i = 0; i < disks.size(); ++i) {
            acc = (m == 0) ? u[i][0] : mpz_class(0);
            for (long j = 1; j <= J; ++j) {
                if (u[i][j] == 0) continue;
                mpz_addmul(acc.get_mpz_t(), u[i][j].get_mpz_t(), row[j].get_mpz_t());
            }
            mpz_mod(acc.get_mpz_t(), acc.get_mpz_t(), mod.get_mpz_t());
            acc *= winv_pow[i];
            if (m % 2 != 0 && acc != 0) acc = -acc;
            mpz_mod(acc.get_mpz_t(), acc.get_mpz_t(), mod.get_mpz_t());
            coeffs[i][static_cast<size_t>(m)] = acc;
            winv_pow[i] *= winv[i];
            mpz_mod(winv_pow[i].get_mpz_t(), winv_pow[i].get_mpz_t(), mod.get_mpz_t());
        }
    }
    for (size_t i = 0; i < disks.size(); ++i) {
        DiskSeries s;
        s.center = fam.omega.at(disks[i]);
        s.coeff.reserve(coeffs[i].size());
        for (auto& x : coeffs[i])
            s.coeff.push_back(PadicNumber::from_unit(ctx, 0, std::move(x), R));
        // true expansion coefficients of g_k stay p-integral on the disk
        s.set_primitive_bounds(0);
        out.emplace(disks[i], std::move(s));
    }
}

}  // namespace detail

// k = 1 is the bypass Li_1 = -log(1-z); for k >= 2 the constant term on each
// disk solves the Frobenius equation at the Teichmuller center (which z -> z^p
// fixes), and the rest of the expansion integrates the ODE from Li_{k-1}.
inline ColemanFunction frobenius_solve(const PolylogFamily& fam, int k, const GFunction& g,
                                       const ColemanFunction& li_lower) {
    const PadicContext& ctx = fam.ctx();
    if (k < 2) throw std::invalid_argument("frobenius_solve: k >= 2 (k = 1 is the log bypass)");
    PadicNumber one = PadicNumber::from_long(ctx, 1);
    PadicNumber denom = one - PadicNumber::from_rational(ctx, mpq_class(1), ctx.prec()).shifted(-k);
    ColemanFunction out;
    for (const auto& [a, lower] : li_lower.pieces) {
        PadicNumber b0 = g.eval(fam.omega.at(a)) / denom;
        out.pieces.emplace(a, integrate_dlog(lower, b0));
    }
    return out;
}

inline PolylogFamily build_family(PolylogParams prm) {
    PolylogFamily fam(prm);
    const PadicContext& ctx = fam.ctx();
    const long p = fam.params.p;
    const int T = fam.params.trunc;
    const int R = ctx.prec();
    PadicNumber one = PadicNumber::from_long(ctx, 1);

    for (long a = 2; a <= p - 1; ++a) fam.residues.push_back(a);
    for (long a : fam.residues) fam.omega.emplace(a, teichmuller(ctx, a));

    for (long a : fam.residues) {
        const PadicNumber& w = fam.omega.at(a);
        // log z = log(1 + t/w): log of the Teichmuller center is exactly 0
        DiskSeries lz = DiskSeries::zero(w, T);
        PadicNumber winv = w.inverse();
        PadicNumber cur = one;
        for (int j = 1; j <= T; ++j) {
            cur = cur * winv;
            lz.coeff[j] = cur * PadicNumber::from_rational(ctx, mpq_class(j % 2 ? 1 : -1, j));
        }
        lz.set_primitive_bounds(1);
        fam.logz.pieces.emplace(a, std::move(lz));

        // log(1-z) = log(1-w) + log(1 - t/(1-w))
        DiskSeries l1 = DiskSeries::zero(w, T);
        PadicNumber u = one - w;
        l1.coeff[0] = padic_log(u);
        PadicNumber uinv = u.inverse();
        cur = one;
        for (int j = 1; j <= T; ++j) {
            cur = cur * uinv;
            l1.coeff[j] = cur * PadicNumber::from_rational(ctx, mpq_class(-1, j));
        }
        l1.set_primitive_bounds(1);
        fam.log1mz.pieces.emplace(a, std::move(l1));
    }

    fam.li.resize(fam.params.kmax + 1);
    fam.g.resize(fam.params.kmax + 1);
    fam.g_disks.resize(fam.params.kmax + 1);
    fam.li[1] = coleman_scale(fam.log1mz, -one);

    long validation = fam.params.n_work - 4;
    fam.audit.ml_heldout_min = R;
    fam.audit.ml_d0_min = R;
    for (int k = 1; k <= fam.params.kmax; ++k) {
        long J = fam.params.ml_J;
        for (int attempt = 0;; ++attempt) {
            try {
                fam.g[k] = ml_fit(ctx, k, J, fam.params.ml_heldout, validation);
                break;
            } catch (const std::runtime_error&) {
                if (attempt >= 2) throw;
                J += J / 2;   // escalate truncation, never return silently
            }
        }
        fam.audit.ml_heldout_min = std::min(fam.audit.ml_heldout_min, fam.g[k].heldout_agreement);
        fam.audit.ml_d0_min = std::min(fam.audit.ml_d0_min, fam.g[k].d0_valuation);
        detail::g_disk_expansions(fam, fam.g[k], fam.g_disks[k].pieces);
        if (k >= 2)
            fam.li[k] = frobenius_solve(fam, k, fam.g[k], fam.li[k - 1]);
    }

    // defining-identity residuals, coefficientwise on every disk
    fam.audit.ode_residual_eval_bound = std::numeric_limits<long>::max() / 4;
    fam.audit.frobenius_residual_eval_bound = std::numeric_limits<long>::max() / 4;
    for (int k = 1; k <= fam.params.kmax; ++k) {
        PadicNumber pk = PadicNumber::from_rational(ctx, mpq_class(1), R).shifted(-k);
        for (long a : fam.residues) {
            const DiskSeries& lk = fam.li[k].pieces.at(a);
            if (k >= 2) {
                DiskSeries ode = series_sub(series_dlog_derivative(lk), fam.li[k - 1].pieces.at(a));
                // the derivative cannot see the top coefficient, so stop one short
                for (int j = 0; j < ode.trunc(); ++j) {
                    if (ode.coeff[j].is_unit_form()) fam.audit.residual_nonzero = true;
                    fam.audit.ode_residual_eval_bound = std::min(
                        fam.audit.ode_residual_eval_bound, ode.coeff[j].val_lower_bound() + j);
                }
            }
            DiskSeries frob = series_sub(
                series_sub(lk, series_scale(compose_poly_zp(lk, lk.center), pk)),
                fam.g_disks[k].pieces.at(a));
            for (int j = 0; j <= frob.trunc(); ++j) {
                if (frob.coeff[j].is_unit_form()) fam.audit.residual_nonzero = true;
                fam.audit.frobenius_residual_eval_bound = std::min(
                    fam.audit.frobenius_residual_eval_bound, frob.coeff[j].val_lower_bound() + j);
            }
        }
    }
    if (fam.audit.residual_nonzero)
        throw std::runtime_error("build_family: a defining-identity residual is provably nonzero");

    // zeta_p(k) = Li_k(-1) / (2^{1-k} - 1), the distribution relation at z = 1;
    // -1 is the Teichmuller center of the disk p-1, so Li_k(-1) is a constant term.
    for (int k = 2; k <= fam.params.kmax; ++k) {
        PadicNumber li_m1 = fam.li[k].pieces.at(p - 1).coeff[0];
        mpq_class factor = mpq_class(1, mpz_class(1) << (k - 1)) - 1;
        fam.zeta.emplace(k, li_m1 / PadicNumber::from_rational(ctx, factor, R));
    }
    return fam;
}

inline PadicNumber zeta_value(const PolylogFamily& fam, int k) {
    if (k < 2) throw std::invalid_argument("zeta_value: undefined for k = 1");
    return fam.zeta.at(k);
}

inline PadicNumber coleman_eval(const ColemanFunction& f, const PadicNumber& z) {
    if (!z.is_unit_form() || z.valuation() != 0)
        throw std::invalid_argument("coleman_eval: point must be a unit");
    long a = z.residue();
    auto it = f.pieces.find(a);
    if (it == f.pieces.end())
        throw std::invalid_argument("coleman_eval: residue " + std::to_string(a) +
                                    " outside the domain (z or 1-z not a unit)");
    return it->second.eval_at_z(z);
}

inline PadicNumber coleman_eval(const ColemanFunction& f, const mpq_class& z) {
    return coleman_eval(f, PadicNumber::from_rational(f.ctx(), z, f.ctx().prec()));
}

namespace detail {

inline std::vector<long> root_sort_key(const PadicNumber& root, const PadicNumber& center, long L) {
    PadicNumber t = root - center;
    std::vector<long> digits;
    if (t.is_zero()) return digits;
    mpz_class x = t.unit() * t.ctx().pow(std::max<long>(t.valuation() - 1, 0));
    for (long i = 0; i < L; ++i) {
        digits.push_back(mpz_fdiv_ui(x.get_mpz_t(), t.ctx().p()));
        x /= t.ctx().p();
    }
    return digits;
}

}  // namespace detail

// Certified common zeros: roots of fs[0] at which every other function both
// evaluates to 0 within p^-match_digits and owns a root within p^-match_digits.
// Ordering is (residue, lexicographic base-p digits of (root - center)/p).
inline CommonZeros common_zeroes(const std::vector<const ColemanFunction*>& fs,
                                 long match_digits, long root_target, long cert_threshold) {
    if (fs.empty()) throw std::invalid_argument("common_zeroes: no functions");
    for (size_t i = 1; i < fs.size(); ++i) fs[0]->require_same_domain(*fs[i]);
    CommonZeros out;

    std::vector<std::vector<std::vector<RootRecord>>> all_roots(fs.size());
    std::vector<long> residues;
    for (const auto& [a, piece] : fs[0]->pieces) { (void)piece; residues.push_back(a); }
    for (size_t i = 0; i < fs.size(); ++i) {
        for (long a : residues) {
            const DiskSeries& piece = fs[i]->pieces.at(a);
            auto roots = find_roots(piece, root_target, cert_threshold);
            int located = 0;
            for (const auto& r : roots) {
                located += r.multiplicity;
                if (!r.certified)
                    out.warnings.push_back("uncertified root of input " + std::to_string(i) +
                                           " on residue disk " + std::to_string(a) +
                                           " (residual valuation " +
                                           std::to_string(r.residual_valuation) + ")");
            }
            // Strassman counts zeros in the algebraic closure; any excess over
            // the located Z_p roots lives in an extension field
            int bound = strassman_count(piece);
            if (located < bound)
                out.notes.push_back(std::to_string(bound - located) + " zero(s) of input " +
                                       std::to_string(i) + " on residue disk " +
                                       std::to_string(a) + " lie outside Z_p");
            all_roots[i].push_back(std::move(roots));
        }
    }

    for (size_t ai = 0; ai < residues.size(); ++ai) {
        long a = residues[ai];
        // deterministic order within the disk
        std::vector<RootRecord> roots = all_roots[0][ai];
        std::sort(roots.begin(), roots.end(), [&](const RootRecord& x, const RootRecord& y) {
            return detail::root_sort_key(x.root, fs[0]->pieces.at(a).center, match_digits + 2) <
                   detail::root_sort_key(y.root, fs[0]->pieces.at(a).center, match_digits + 2);
        });
        for (const auto& rec : roots) {
            if (!rec.certified) continue;
            bool ok = true;
            for (size_t i = 1; i < fs.size() && ok; ++i) {
                PadicNumber val = fs[i]->pieces.at(a).eval_at_z(rec.root);
                if (!val.is_zero_to(match_digits)) { ok = false; break; }
                bool matched = false;
                for (const auto& other : all_roots[i][ai])
                    if ((other.root - rec.root).is_zero_to(match_digits)) { matched = true; break; }
                if (!matched) {
                    ok = false;
                    out.warnings.push_back("zero of input 0 on disk " + std::to_string(a) +
                                           " vanishes under input " + std::to_string(i) +
                                           " but matches none of its located roots");
                }
            }
            if (ok) out.zeros.push_back(rec);
        }
    }
    return out;
}

}  // namespace ckt
