#pragma once

// Deligne's unipotent matrix model of the polylogarithmic quotient and the
// weight <= 4 computations built on it: matrix log/exp, reduced coproducts of
// framed matrix entries, the A_4 basis coproduct matrix, the lambda-image
// equations, and synthesis of the F_2/F_4 coefficient set.

#include <array>
#include <functional>
#include <vector>

#include "ckt/padic.hpp"
#include "ckt/symbolic.hpp"
#include "ckt/words.hpp"

namespace ckt {

template <class R>
struct CoeffOps {
    static R from_mpq(const R&, const mpq_class& q) { return R(q); }
    static bool is_zero(const R& x) { return x == R(mpq_class(0)); }
};

template <>
struct CoeffOps<mpq_class> {
    static mpq_class from_mpq(const mpq_class&, const mpq_class& q) { return q; }
    static bool is_zero(const mpq_class& x) { return x == 0; }
};

template <>
struct CoeffOps<Sym> {
    static Sym from_mpq(const Sym&, const mpq_class& q) { return Sym(q); }
    static bool is_zero(const Sym& x) { return x.is_zero(); }
};

template <>
struct CoeffOps<PadicNumber> {
    static PadicNumber from_mpq(const PadicNumber& sample, const mpq_class& q) {
        return PadicNumber::from_rational(sample.ctx(), q, sample.ctx().prec());
    }
    static bool is_zero(const PadicNumber& x) { return x.is_zero(); }
};

// Dense n x n matrix over an exact or p-adic coefficient ring; the callers
// below keep them unitriangular, so logs terminate and need no convergence.
template <class R>
struct UniMatrix {
    int n = 0;
    std::vector<R> a;

    UniMatrix() = default;
    explicit UniMatrix(int size) : n(size), a(static_cast<size_t>(size) * size) {}

    R& at(int i, int j) { return a[static_cast<size_t>(i) * n + j]; }
    const R& at(int i, int j) const { return a[static_cast<size_t>(i) * n + j]; }

    static UniMatrix identity(int size, const R& one) {
        UniMatrix m(size);
        for (int i = 0; i < size; ++i) m.at(i, i) = one;
        return m;
    }

    friend UniMatrix operator*(const UniMatrix& x, const UniMatrix& y) {
        if (x.n != y.n) throw std::invalid_argument("UniMatrix: size mismatch");
        UniMatrix z(x.n);
        for (int i = 0; i < x.n; ++i)
            for (int k = 0; k < x.n; ++k) {
                if (CoeffOps<R>::is_zero(x.at(i, k))) continue;
                for (int j = 0; j < x.n; ++j) {
                    if (CoeffOps<R>::is_zero(y.at(k, j))) continue;
                    z.at(i, j) = z.at(i, j) + x.at(i, k) * y.at(k, j);
                }
            }
        return z;
    }

    friend UniMatrix operator+(const UniMatrix& x, const UniMatrix& y) {
        if (x.n != y.n) throw std::invalid_argument("UniMatrix: size mismatch");
        UniMatrix z(x.n);
        for (size_t i = 0; i < x.a.size(); ++i) z.a[i] = x.a[i] + y.a[i];
        return z;
    }

    UniMatrix scaled(const mpq_class& q, const R& one) const {
        UniMatrix z(n);
        R factor = CoeffOps<R>::from_mpq(one, q);
        for (size_t i = 0; i < a.size(); ++i) z.a[i] = a[i] * factor;
        return z;
    }

    bool strictly_upper() const {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j <= i; ++j)
                if (!CoeffOps<R>::is_zero(at(i, j))) return false;
        return true;
    }
};

// log(1 + N) = sum (-1)^(j+1) N^j / j, terminating since N is nilpotent
template <class R>
UniMatrix<R> mat_log(const UniMatrix<R>& m, const R& one) {
    UniMatrix<R> nilp = m;
    for (int i = 0; i < m.n; ++i) nilp.at(i, i) = nilp.at(i, i) - one;
    UniMatrix<R> acc(m.n), power = nilp;
    for (int j = 1; j < m.n; ++j) {
        acc = acc + power.scaled(mpq_class(j % 2 ? 1 : -1, j), one);
        if (j + 1 < m.n) power = power * nilp;
    }
    return acc;
}

template <class R>
UniMatrix<R> mat_exp(const UniMatrix<R>& nilp, const R& one) {
    UniMatrix<R> acc = UniMatrix<R>::identity(nilp.n, one);
    UniMatrix<R> power = nilp;
    mpz_class fact = 1;
    for (int j = 1; j < nilp.n; ++j) {
        fact *= j;
        acc = acc + power.scaled(mpq_class(mpz_class(1), fact), one);
        if (j + 1 < nilp.n) power = power * nilp;
    }
    return acc;
}

namespace detail {

inline Word word_x(int j) {
    Word w;
    for (int i = 0; i < j; ++i) w.push_back(Letter{"x", 1});
    return w;
}

inline Word word_xy(int j) {
    Word w = word_x(j);
    w.push_back(Letter{"y", 1});
    return w;
}

}  // namespace detail

// The (n+1) x (n+1) matrix of a grouplike series sum L_w w on the alphabet
// {x, y}: superdiagonal blocks L_x^j / j!, last column -L_{x^j y}.  The
// grouplike property is spot-checked through the shuffle relations.
template <class R>
UniMatrix<R> group_matrix(const std::function<R(const Word&)>& L, int n, const R& one) {
    using Ops = CoeffOps<R>;
    // shuffle spot checks: L(w') L(w'') = sum over shuffles
    const Word wx = detail::word_x(1);
    const Word wy = detail::word_xy(0);
    std::vector<std::pair<Word, Word>> pairs = {
        {wx, wx}, {wx, wy}, {wy, wy}, {wx, detail::word_xy(1)}};
    if (!Ops::is_zero(L(Word{}) - one))
        throw std::invalid_argument("group_matrix: L(empty) != 1, not grouplike");
    for (const auto& [w1, w2] : pairs) {
        R lhs = L(w1) * L(w2);
        R rhs = lhs - lhs;  // zero of the right shape
        for (const auto& [w, c] : shuffle(w1, w2))
            rhs = rhs + Ops::from_mpq(one, c) * L(w);
        if (!Ops::is_zero(lhs - rhs))
            throw std::invalid_argument("group_matrix: shuffle relation fails on (" +
                                        word_str(w1) + ", " + word_str(w2) + "), not grouplike");
    }

    UniMatrix<R> m = UniMatrix<R>::identity(n + 1, one);
    R lx = L(wx);
    R power = one;
    mpz_class fact = 1;
    for (int j = 1; j < n; ++j) {
        power = power * lx;
        fact *= j;
        R entry = power * Ops::from_mpq(one, mpq_class(mpz_class(1), fact));
        for (int i = 0; i + j < n; ++i) m.at(i, i + j) = entry;
    }
    for (int i = 0; i <= n - 1; ++i)
        m.at(i, n) = Ops::from_mpq(one, -1) * L(detail::word_xy(n - 1 - i));
    return m;
}

// The alpha-matrix of the unipotent Albanese map: plugging L_x = log z and
// L_{x^(j-1)y} = -Li_j(z) into the group matrix.  li[j] holds Li_{j+1}.
template <class R>
UniMatrix<R> alpha_matrix(int n, const R& logb, const R& log1mb,
                          const std::vector<R>& li_values, const R& one) {
    using Ops = CoeffOps<R>;
    UniMatrix<R> m = UniMatrix<R>::identity(n + 1, one);
    R power = one;
    mpz_class fact = 1;
    for (int j = 1; j < n; ++j) {
        power = power * logb;
        fact *= j;
        R entry = power * Ops::from_mpq(one, mpq_class(mpz_class(1), fact));
        for (int i = 0; i + j < n; ++i) m.at(i, i + j) = entry;
    }
    m.at(n - 1, n) = Ops::from_mpq(one, -1) * log1mb;
    for (int i = 0; i <= n - 2; ++i) {
        size_t idx = static_cast<size_t>(n - i - 2);   // row i holds Li_{n-i}
        if (idx >= li_values.size())
            throw std::invalid_argument("alpha_matrix: missing Li value");
        m.at(i, n) = li_values[idx];
    }
    return m;
}

// log of a unitriangular matrix, returned one superdiagonal at a time:
// result[i-1] lists the entries at distance i (the actions v_{-i}).
template <class R>
std::vector<std::vector<R>> superdiagonals(const UniMatrix<R>& m, const R& one) {
    UniMatrix<R> lg = mat_log(m, one);
    std::vector<std::vector<R>> out;
    for (int dist = 1; dist < m.n; ++dist) {
        std::vector<R> diag;
        for (int i = 0; i + dist < m.n; ++i) diag.push_back(lg.at(i, i + dist));
        out.push_back(std::move(diag));
    }
    return out;
}

// Li_3-level word values: the north-eastern corner of w(V_{4,b}) for the four
// degree-3 words, from the 4x4 alpha block at b.
template <class R>
struct Li3WordValues {
    R v111, v12, v21, v3;   // words v_{-1}^3, v_{-1}v_{-2}, v_{-2}v_{-1}, v_{-3}
};

template <class R>
Li3WordValues<R> li3_word_values(const R& logb, const R& log1mb, const R& li2b, const R& li3b,
                                 const R& one) {
    UniMatrix<R> m = alpha_matrix(3, logb, log1mb, {li2b, li3b}, one);
    auto diags = superdiagonals(m, one);
    // embed each superdiagonal back as a 4x4 matrix
    auto embed = [&](int dist) {
        UniMatrix<R> v(4);
        for (int i = 0; i + dist < 4; ++i) v.at(i, i + dist) = diags[dist - 1][i];
        return v;
    };
    UniMatrix<R> v1 = embed(1), v2 = embed(2), v3 = embed(3);
    Li3WordValues<R> out;
    out.v111 = (v1 * v1 * v1).at(0, 3);
    out.v12 = (v1 * v2).at(0, 3);
    out.v21 = (v2 * v1).at(0, 3);
    out.v3 = v3.at(0, 3);
    return out;
}

// ---- reduced coproducts on the kappa-matrix -------------------------------

// d(kappa_{i,j}) = sum_{i < l < j} kappa_{i,l} (x) kappa_{l,j}
inline TensorPoly reduced_coproduct_entry(const UniMatrix<Sym>& m, int i, int j) {
    TensorPoly out;
    for (int l = i + 1; l < j; ++l)
        out = out + TensorPoly::tensor(m.at(i, l), m.at(l, j));
    return out.reduced();
}

// Multiplicative extension: generators not in the table are primitive.
class Coproduct {
  public:
    void set_reduced(const std::string& name, TensorPoly d) { table_[name] = std::move(d); }

    TensorPoly full(const Sym& x) const {
        TensorPoly out;
        Sym one(mpq_class(1));
        for (const auto& [mono, c] : x.terms()) {
            TensorPoly term = TensorPoly::tensor(Sym(c), one);
            for (const auto& [sym, e] : mono) {
                TensorPoly dg;
                Sym g = Sym::monomial(Mono{{sym, 1}}, 1);
                if (sym.weight == 0) {
                    dg = TensorPoly::tensor(g, one);   // scalar generator
                } else {
                    dg = TensorPoly::tensor(one, g) + TensorPoly::tensor(g, one);
                    auto it = table_.find(sym.name);
                    if (it != table_.end()) dg = dg + it->second;
                }
                for (int k = 0; k < e; ++k) term = term * dg;
            }
            out = out + term;
        }
        return out;
    }

    TensorPoly reduced(const Sym& x) const { return full(x).reduced(); }

  private:
    std::map<std::string, TensorPoly> table_;
};

// ---- section 7 fixtures ----------------------------------------------------

inline Sym sym_log2() { return Sym::generator("log2", 1); }
inline Sym sym_zeta3() { return Sym::generator("zeta3", 3); }
inline Sym sym_li4half() { return Sym::generator("Li4half", 4); }
inline Sym sym_c1() { return Sym::generator("c1", 0); }

// kappa-matrix at b = 1/2 with Li_3(1/2) expanded against the A_3 basis
// (the c1 coordinate kept symbolic) and Li_2(1/2) = -1/2 (log 2)^2.
inline UniMatrix<Sym> kappa_matrix_half() {
    Sym one(mpq_class(1)), l2 = sym_log2(), z3 = sym_zeta3(), li4 = sym_li4half(), c1 = sym_c1();
    UniMatrix<Sym> m(5);
    for (int i = 0; i < 5; ++i) m.at(i, i) = one;
    // log b = log(1-b) = -log 2 at b = 1/2
    Sym logb = -l2;
    for (int dist = 1; dist <= 3; ++dist) {
        mpz_class fact = 1;
        for (int j = 2; j <= dist; ++j) fact *= j;
        Sym entry = mpq_class(mpz_class(1), fact) * logb.pow(dist);
        for (int i = 0; i + dist < 4; ++i) m.at(i, i + dist) = entry;
    }
    m.at(0, 4) = li4;
    m.at(1, 4) = c1 * z3 + mpq_class(1, 6) * l2.pow(3);       // Li_3(1/2)
    m.at(2, 4) = mpq_class(-1, 2) * l2.pow(2);                // Li_2(1/2)
    m.at(3, 4) = l2;                                          // -log(1 - 1/2)
    return m;
}

// kappa-matrix at a generic point b, entries in the generators
// logb, log1mb, Li2b, .., Li{n}b.
inline UniMatrix<Sym> kappa_matrix_generic(int n) {
    Sym one(mpq_class(1));
    Sym logb = Sym::generator("logb", 1);
    UniMatrix<Sym> m(n + 1);
    for (int i = 0; i <= n; ++i) m.at(i, i) = one;
    for (int dist = 1; dist < n; ++dist) {
        mpz_class fact = 1;
        for (int j = 2; j <= dist; ++j) fact *= j;
        Sym entry = mpq_class(mpz_class(1), fact) * logb.pow(dist);
        for (int i = 0; i + dist < n; ++i) m.at(i, i + dist) = entry;
    }
    m.at(n - 1, n) = -Sym::generator("log1mb", 1);
    for (int i = 0; i <= n - 2; ++i)
        m.at(i, n) = Sym::generator("Li" + std::to_string(n - i) + "b", n - i);
    return m;
}

// tangential kappa-matrix: zeta column only, even zetas and zeta(1) vanish
inline UniMatrix<Sym> kappa_matrix_tangential(int n) {
    Sym one(mpq_class(1));
    UniMatrix<Sym> m(n + 1);
    for (int i = 0; i <= n; ++i) m.at(i, i) = one;
    for (int i = 0; i <= n - 2; ++i) {
        int wt = n - i;
        if (wt >= 3 && wt % 2 == 1)
            m.at(i, n) = Sym::generator("zeta" + std::to_string(wt), wt);
    }
    return m;
}

// d on the A_4 basis B = {(log2)^4, (log2) zeta3, Li4(1/2)}, written in the
// tensor basis {log2 (x) zeta3, log2 (x) log2^3, log2^2 (x) log2^2,
// log2^3 (x) log2, zeta3 (x) log2}; entries are polynomials in c1.
inline std::array<std::array<Sym, 3>, 5> dB_matrix() {
    Sym l2 = sym_log2(), z3 = sym_zeta3();
    Coproduct cop;   // log2 and zeta3 primitive (zeta3: no intermediate entries
                     // in the tangential matrix; checked in the test suite)
    cop.set_reduced("Li4half", reduced_coproduct_entry(kappa_matrix_half(), 0, 4));

    std::array<TensorPoly, 3> cols = {
        cop.reduced(l2.pow(4)),
        cop.reduced(l2 * z3),
        cop.reduced(sym_li4half()),
    };

    const Mono m_l2 = {{Symbol{"log2", 1}, 1}};
    const Mono m_l2_2 = {{Symbol{"log2", 1}, 2}};
    const Mono m_l2_3 = {{Symbol{"log2", 1}, 3}};
    const Mono m_z3 = {{Symbol{"zeta3", 3}, 1}};
    std::array<std::pair<Mono, Mono>, 5> basis = {{
        {m_l2, m_z3}, {m_l2, m_l2_3}, {m_l2_2, m_l2_2}, {m_l2_3, m_l2}, {m_z3, m_l2},
    }};

    std::array<std::array<Sym, 3>, 5> out;
    for (int c = 0; c < 3; ++c) {
        TensorPoly leftover = cols[c];
        for (int r = 0; r < 5; ++r) {
            out[r][c] = cols[c].coeff(basis[r].first, basis[r].second);
            TensorPoly piece = TensorPoly::tensor(
                Sym::monomial(basis[r].first, 1) * out[r][c], Sym::monomial(basis[r].second, 1));
            leftover = leftover - piece;
        }
        if (!leftover.is_zero())
            throw std::logic_error("dB_matrix: coproduct has terms outside the tensor basis: " +
                                   leftover.str());
    }
    return out;
}

// ---- lambda image ----------------------------------------------------------

struct LambdaImage {
    // coordinates (x_1', x_1, x_{1.2}, x_{1.3}, x_3, x_{1.4}, x_{1.3'}, x_{3.1})
    std::array<mpq_class, 8> coords;
    // residuals of the五 image equations; all zero on the nose
    std::array<mpq_class, 5> residuals;
};

// Image of the homomorphism with r^D r(v_{-1}) superdiagonal (a,a,a,-b) and
// r^D r(v_{-3}) carrying -d, written against the dual basis
// {phi_1', phi_1, phi_{1.2}, phi_{1.3}, phi_3, phi_{1.4}, phi_{1.3}, phi_{3.1}}.
inline LambdaImage lambda_image(const mpq_class& a, const mpq_class& b, const mpq_class& d) {
    UniMatrix<mpq_class> m1(5), m3(5);
    m1.at(0, 1) = a; m1.at(1, 2) = a; m1.at(2, 3) = a; m1.at(3, 4) = -b;
    m3.at(1, 4) = -d;
    UniMatrix<mpq_class> m1_2 = m1 * m1, m1_3 = m1_2 * m1, m1_4 = m1_3 * m1;

    LambdaImage out;
    out.coords = {
        m1.at(0, 1),          // x_1' = a
        m1.at(3, 4),          // x_1 = -b
        m1_2.at(2, 4),        // x_{1.2}
        m1_3.at(1, 4),        // x_{1.3}
        m3.at(1, 4),          // x_3 = -d
        m1_4.at(0, 4),        // x_{1.4}
        (m1 * m3).at(0, 4),   // x_{1.3} mixed word
        (m3 * m1).at(0, 4),   // x_{3.1}
    };
    const auto& x = out.coords;
    out.residuals = {
        x[2] - x[1] * x[0],
        x[3] - x[1] * x[0] * x[0],
        x[5] - x[1] * x[0] * x[0] * x[0],
        x[6] - x[0] * x[4],
        x[7],
    };
    return out;
}

// ---- p-adic constants: c1 and the F coefficients ---------------------------

struct Li3HalfExpansion {
    PadicNumber s;   // the zeta3 coordinate: the constant c1
    PadicNumber t;   // the (log2)^3 coordinate: 1/6 exactly
    std::optional<ReconstructedRational> s_rational;   // stable reconstruction or nullopt
    std::optional<ReconstructedRational> t_rational;
    bool s_stable = false;
};

// Expand Li_3(1/2) = s zeta3 + t (log2)^3 from p-adic values.  The rational
// reconstruction of s must agree across two precision levels before it is
// reported; the expected value 7/8 is never assumed.
inline Li3HalfExpansion expand_li3_half(const PadicNumber& log2, const PadicNumber& li3half,
                                        const PadicNumber& zeta3, long recon_digits) {
    const PadicContext& ctx = log2.ctx();
    if (zeta3.is_zero())
        throw std::runtime_error(
            "expand_li3_half: zeta_p(3) is indistinguishable from zero at this precision; "
            "the nonvanishing hypothesis fails and the expansion is undefined");
    Li3HalfExpansion out;
    PadicNumber sixth = PadicNumber::from_rational(ctx, mpq_class(1, 6));
    // t = -(log b)^2 log(1-b) / (6 (log2)^3) with log b = log(1-b) = -log2
    PadicNumber logb = -log2;
    out.t = -(logb * logb * logb) / (PadicNumber::from_long(ctx, 6) * log2 * log2 * log2);
    // s = ((1/6)(log b)^2 log(1-b) + Li_3(b)) / zeta3 at b = 1/2
    out.s = (sixth * logb * logb * logb + li3half) / zeta3;
    out.t_rational = rational_reconstruction(out.t, recon_digits);
    auto s1 = rational_reconstruction(out.s, recon_digits);
    auto s2 = rational_reconstruction(out.s, recon_digits - 4);
    if (s1 && s2 && s1->num == s2->num && s1->den == s2->den) {
        out.s_rational = s1;
        out.s_stable = true;
    } else if (s1) {
        out.s_rational = s1;   // reported, but flagged unstable
    }
    return out;
}

struct FCoefficients {
    PadicNumber Cp;                  // (log2)^3/(24 zeta3) + Li4(1/2)/(log2 zeta3)
    PadicNumber c2;                  // Cp / c1: the coefficient of (log z) Li_3
    PadicNumber f4_log3_log1mz;      // c2/6 + 1/24: coefficient of (log z)^3 log(1-z)
    mpq_class f2_logz_log1mz{1, 2};  // F_2's only nontrivial coefficient
};

inline FCoefficients f_coefficients(const PadicNumber& log2, const PadicNumber& zeta3,
                                    const PadicNumber& li4half, const PadicNumber& c1) {
    const PadicContext& ctx = log2.ctx();
    if (log2.is_zero() || zeta3.is_zero())
        throw std::runtime_error("f_coefficients: log2 or zeta3 indistinguishable from zero");
    FCoefficients out;
    out.Cp = log2 * log2 * log2 / (PadicNumber::from_long(ctx, 24) * zeta3)
             + li4half / (log2 * zeta3);
    out.c2 = out.Cp / c1;
    out.f4_log3_log1mz = out.c2 / PadicNumber::from_long(ctx, 6)
                         + PadicNumber::from_rational(ctx, mpq_class(1, 24));
    return out;
}

// The F-phi matrices of levels 1..3 against the bases {f_w}: level 1 (log2),
// level 2 (2 log2^2, 0)^T via the shuffle square, level 3 the 4x2 display.
inline std::vector<std::vector<PadicNumber>> fphi_matrix(int level, const PadicNumber& log2,
                                                         const PadicNumber& zeta3) {
    const PadicContext& ctx = log2.ctx();
    PadicNumber zero = PadicNumber::zero(ctx);
    if (level == 1) return {{log2}};
    if (level == 2) {
        Letter nu1{"nu1", 1};
        mpq_class two = coeff_of(shuffle(Word{nu1}, Word{nu1}), Word{nu1, nu1});
        return {{PadicNumber::from_rational(ctx, two) * log2 * log2}, {zero}};
    }
    if (level == 3)
        return {{log2 * log2 * log2, zero}, {zero, zero}, {zero, zero}, {zero, zeta3}};
    throw std::invalid_argument("fphi_matrix: level must be 1, 2 or 3");
}

}  // namespace ckt
