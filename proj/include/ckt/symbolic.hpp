#pragma once

// Exact symbolic scalars: sparse polynomials over Q in named, weight-graded
// generators (log2, zeta3, Li4half, c1, ...), with tensor-square elements and
// reduced coproducts.  Weight-0 generators (the rational constant c1) act as
// scalars and are normalized out of tensor factors.

#include <algorithm>
#include <functional>
#include <map>
#include <string>
#include <utility>

#include <gmpxx.h>

#include "ckt/padic.hpp"

namespace ckt {

struct Symbol {
    std::string name;
    int weight = 1;

    bool operator==(const Symbol& o) const { return name == o.name; }
    bool operator<(const Symbol& o) const { return name < o.name; }
};

using Mono = std::map<Symbol, int>;   // generator -> exponent

inline int mono_weight(const Mono& m) {
    int w = 0;
    for (const auto& [s, e] : m) w += s.weight * e;
    return w;
}

inline Mono mono_mul(const Mono& a, const Mono& b) {
    Mono out = a;
    for (const auto& [s, e] : b) out[s] += e;
    return out;
}

inline std::string mono_str(const Mono& m) {
    if (m.empty()) return "1";
    std::string s;
    for (const auto& [sym, e] : m) {
        if (!s.empty()) s += "*";
        s += sym.name;
        if (e != 1) s += "^" + std::to_string(e);
    }
    return s;
}

class Sym {
  public:
    Sym() = default;
    explicit Sym(const mpq_class& c) {
        if (c != 0) terms_.emplace(Mono{}, c);
    }
    Sym(long n) : Sym(mpq_class(n)) {}

    static Sym generator(const std::string& name, int weight = 1) {
        Sym x;
        x.terms_.emplace(Mono{{Symbol{name, weight}, 1}}, mpq_class(1));
        return x;
    }

    static Sym monomial(Mono m, const mpq_class& c) {
        Sym x;
        if (c != 0) x.terms_.emplace(std::move(m), c);
        return x;
    }

    const std::map<Mono, mpq_class>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    mpq_class coeff(const Mono& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? mpq_class(0) : it->second;
    }

    friend Sym operator+(const Sym& a, const Sym& b) {
        Sym out = a;
        for (const auto& [m, c] : b.terms_) out.add(m, c);
        return out;
    }

    friend Sym operator-(const Sym& a, const Sym& b) {
        Sym out = a;
        for (const auto& [m, c] : b.terms_) out.add(m, -c);
        return out;
    }

    Sym operator-() const {
        Sym out;
        for (const auto& [m, c] : terms_) out.terms_.emplace(m, -c);
        return out;
    }

    friend Sym operator*(const Sym& a, const Sym& b) {
        Sym out;
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) out.add(mono_mul(ma, mb), ca * cb);
        return out;
    }

    friend Sym operator*(const mpq_class& c, const Sym& a) { return Sym(c) * a; }

    Sym pow(unsigned e) const {
        Sym r(mpq_class(1)), b = *this;
        while (e) {
            if (e & 1) r = r * b;
            if (e >>= 1) b = b * b;
        }
        return r;
    }

    bool operator==(const Sym& o) const { return terms_ == o.terms_; }
    bool operator!=(const Sym& o) const { return !(*this == o); }

    // substitute rational values for a subset of generators
    Sym substitute(const std::map<std::string, mpq_class>& env) const {
        Sym out;
        for (const auto& [m, c] : terms_) {
            mpq_class cc = c;
            Mono rest;
            for (const auto& [s, e] : m) {
                auto it = env.find(s.name);
                if (it == env.end()) {
                    rest.emplace(s, e);
                } else {
                    mpq_class p = 1;
                    for (int i = 0; i < e; ++i) p *= it->second;
                    cc *= p;
                }
            }
            out.add(rest, cc);
        }
        return out;
    }

    mpq_class as_rational() const {
        if (terms_.empty()) return 0;
        if (terms_.size() != 1 || !terms_.begin()->first.empty())
            throw std::logic_error("Sym::as_rational: not a constant: " + str());
        return terms_.begin()->second;
    }

    // p-adic evaluation through named hooks
    PadicNumber eval(const PadicContext& ctx,
                     const std::map<std::string, PadicNumber>& env) const {
        PadicNumber acc = PadicNumber::zero(ctx);
        for (const auto& [m, c] : terms_) {
            PadicNumber term = PadicNumber::from_rational(ctx, c, ctx.prec());
            for (const auto& [s, e] : m) {
                auto it = env.find(s.name);
                if (it == env.end())
                    throw std::invalid_argument("Sym::eval: no value for generator " + s.name);
                term = term * it->second.pow_ui(static_cast<unsigned>(e));
            }
            acc = acc + term;
        }
        return acc;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::string s;
        for (const auto& [m, c] : terms_) {
            if (!s.empty()) s += " + ";
            s += c.get_str();
            if (!m.empty()) s += "*" + mono_str(m);
        }
        return s;
    }

  private:
    void add(const Mono& m, const mpq_class& c) {
        if (c == 0) return;
        auto [it, inserted] = terms_.emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    std::map<Mono, mpq_class> terms_;
};

// Element of A (x) A with an explicit scalar slot: weight-0 generators are
// pulled out of both factors so that c1*(x (x) y), (c1*x) (x) y and
// x (x) (c1*y) normalize to the same key.
struct TensorKey {
    Mono scalar;   // weight-0 part
    Mono left;
    Mono right;

    bool operator<(const TensorKey& o) const {
        if (scalar != o.scalar) return scalar < o.scalar;
        if (left != o.left) return left < o.left;
        return right < o.right;
    }
    bool operator==(const TensorKey& o) const {
        return scalar == o.scalar && left == o.left && right == o.right;
    }
};

class TensorPoly {
  public:
    TensorPoly() = default;

    static TensorPoly tensor(const Sym& a, const Sym& b) {
        TensorPoly out;
        for (const auto& [ma, ca] : a.terms())
            for (const auto& [mb, cb] : b.terms()) {
                TensorKey k;
                for (const auto& [s, e] : ma) (s.weight == 0 ? k.scalar[s] : k.left[s]) += e;
                for (const auto& [s, e] : mb) (s.weight == 0 ? k.scalar[s] : k.right[s]) += e;
                out.add(k, ca * cb);
            }
        return out;
    }

    const std::map<TensorKey, mpq_class>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    friend TensorPoly operator+(const TensorPoly& a, const TensorPoly& b) {
        TensorPoly out = a;
        for (const auto& [k, c] : b.terms_) out.add(k, c);
        return out;
    }

    friend TensorPoly operator-(const TensorPoly& a, const TensorPoly& b) {
        TensorPoly out = a;
        for (const auto& [k, c] : b.terms_) out.add(k, -c);
        return out;
    }

    // componentwise product, used to extend the coproduct multiplicatively
    friend TensorPoly operator*(const TensorPoly& a, const TensorPoly& b) {
        TensorPoly out;
        for (const auto& [ka, ca] : a.terms_)
            for (const auto& [kb, cb] : b.terms_) {
                TensorKey k{mono_mul(ka.scalar, kb.scalar), mono_mul(ka.left, kb.left),
                            mono_mul(ka.right, kb.right)};
                out.add(k, ca * cb);
            }
        return out;
    }

    bool operator==(const TensorPoly& o) const { return terms_ == o.terms_; }
    bool operator!=(const TensorPoly& o) const { return !(*this == o); }

    // drop the A_0 (x) A_n and A_n (x) A_0 edge terms
    TensorPoly reduced() const {
        TensorPoly out;
        for (const auto& [k, c] : terms_)
            if (!k.left.empty() && !k.right.empty()) out.add(k, c);
        return out;
    }

    // coefficient of left (x) right as a polynomial in the weight-0 generators
    Sym coeff(const Mono& left, const Mono& right) const {
        Sym out;
        for (const auto& [k, c] : terms_)
            if (k.left == left && k.right == right) out = out + Sym::monomial(k.scalar, c);
        return out;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::string s;
        for (const auto& [k, c] : terms_) {
            if (!s.empty()) s += " + ";
            s += c.get_str();
            if (!k.scalar.empty()) s += "*" + mono_str(k.scalar);
            s += "*(" + mono_str(k.left) + " (x) " + mono_str(k.right) + ")";
        }
        return s;
    }

  private:
    void add(const TensorKey& k, const mpq_class& c) {
        if (c == 0) return;
        auto [it, inserted] = terms_.emplace(k, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    std::map<TensorKey, mpq_class> terms_;
};

}  // namespace ckt
