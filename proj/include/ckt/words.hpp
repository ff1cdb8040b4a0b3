#pragma once

// Words over a weighted alphabet and the shuffle product on their duals:
// f_{w'} f_{w''} = sum over shuffles w of w', w'' of f_w.

#include <map>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace ckt {

struct Letter {
    std::string name;
    int degree = 1;

    bool operator==(const Letter& o) const { return name == o.name && degree == o.degree; }
    bool operator<(const Letter& o) const {
        return name != o.name ? name < o.name : degree < o.degree;
    }
};

using Word = std::vector<Letter>;

inline int word_degree(const Word& w) {
    int d = 0;
    for (const auto& l : w) d += l.degree;
    return d;
}

inline std::string word_str(const Word& w) {
    if (w.empty()) return "1";
    std::string s;
    for (const auto& l : w) {
        if (!s.empty()) s += ".";
        s += l.name;
    }
    return s;
}

// exact-rational linear combination of words, graded by total degree
using ShufflePoly = std::map<Word, mpq_class>;

inline void add_term(ShufflePoly& p, const Word& w, const mpq_class& c) {
    auto [it, inserted] = p.emplace(w, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) p.erase(it);
    }
}

namespace detail {

inline void shuffle_rec(const Word& w1, size_t i1, const Word& w2, size_t i2,
                        Word& current, ShufflePoly& out) {
    if (i1 == w1.size() && i2 == w2.size()) {
        add_term(out, current, 1);
        return;
    }
    if (i1 < w1.size()) {
        current.push_back(w1[i1]);
        shuffle_rec(w1, i1 + 1, w2, i2, current, out);
        current.pop_back();
    }
    if (i2 < w2.size()) {
        current.push_back(w2[i2]);
        shuffle_rec(w1, i1, w2, i2 + 1, current, out);
        current.pop_back();
    }
}

}  // namespace detail

// sum over all interleavings of w1 and w2 preserving internal order
inline ShufflePoly shuffle(const Word& w1, const Word& w2) {
    ShufflePoly out;
    Word current;
    current.reserve(w1.size() + w2.size());
    detail::shuffle_rec(w1, 0, w2, 0, current, out);
    return out;
}

inline ShufflePoly shuffle(const ShufflePoly& p, const ShufflePoly& q) {
    ShufflePoly out;
    for (const auto& [w1, c1] : p)
        for (const auto& [w2, c2] : q) {
            ShufflePoly s = shuffle(w1, w2);
            for (const auto& [w, c] : s) add_term(out, w, c * c1 * c2);
        }
    return out;
}

inline mpq_class coeff_of(const ShufflePoly& p, const Word& w) {
    auto it = p.find(w);
    return it == p.end() ? mpq_class(0) : it->second;
}

}  // namespace ckt
