#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "ckt/series.hpp"

using namespace ckt;

namespace {

// series with rational coefficients around a unit center
DiskSeries make_series(const PadicContext& ctx, const PadicNumber& center,
                       const std::vector<mpq_class>& coeffs, int T) {
    DiskSeries f = DiskSeries::zero(center, T);
    for (size_t i = 0; i < coeffs.size(); ++i)
        f.coeff[i] = PadicNumber::from_rational(ctx, coeffs[i]);
    f.set_primitive_bounds(0);
    return f;
}

PadicNumber random_disk_point(const PadicContext& ctx, std::mt19937_64& rng, int digits) {
    mpz_class u = 0;
    for (int i = 0; i < digits; ++i) {
        u *= ctx.p();
        u += static_cast<long>(rng() % static_cast<unsigned long>(ctx.p()));
    }
    return PadicNumber::from_integer(ctx, u * ctx.p(), ctx.prec());
}

}  // namespace

TEST_CASE("series arithmetic") {
    PadicContext ctx(11, 30);
    PadicNumber c = teichmuller(ctx, 2);
    const int T = 24;

    SECTION("f + 0 = f") {
        DiskSeries f = make_series(ctx, c, {1, 2, 3}, T);
        DiskSeries s = series_add(f, DiskSeries::zero(c, T));
        for (int j = 0; j <= T; ++j) REQUIRE((s.coeff[j] - f.coeff[j]).is_zero());
    }
    SECTION("(1 + t)(1 - t) = 1 - t^2") {
        DiskSeries a = make_series(ctx, c, {1, 1}, T);
        DiskSeries b = make_series(ctx, c, {1, -1}, T);
        DiskSeries prod = series_mul(a, b);
        REQUIRE((prod.coeff[0] - PadicNumber::from_long(ctx, 1)).is_zero());
        REQUIRE(prod.coeff[1].is_zero());
        REQUIRE((prod.coeff[2] + PadicNumber::from_long(ctx, 1)).is_zero());
        for (int j = 3; j <= T; ++j) REQUIRE(prod.coeff[j].is_zero());
    }
    SECTION("scale by exact zero gives the zero series") {
        DiskSeries f = make_series(ctx, c, {5, 7, 1}, T);
        DiskSeries z = series_scale(f, PadicNumber::zero(ctx));
        for (int j = 0; j <= T; ++j) REQUIRE(z.coeff[j].is_exact_zero());
    }
    SECTION("center mismatch is an error") {
        DiskSeries f = make_series(ctx, c, {1}, T);
        DiskSeries g = make_series(ctx, teichmuller(ctx, 3), {1}, T);
        REQUIRE_THROWS_AS(series_add(f, g), std::invalid_argument);
    }
    SECTION("arithmetic commutes with evaluation") {
        std::mt19937_64 rng(5);
        DiskSeries f = make_series(ctx, c, {2, mpq_class(1, 3), 5, 7}, T);
        DiskSeries g = make_series(ctx, c, {1, 4, mpq_class(2, 7)}, T);
        DiskSeries sum = series_add(f, g), prod = series_mul(f, g);
        for (int trial = 0; trial < 10; ++trial) {
            PadicNumber t = random_disk_point(ctx, rng, 10);
            REQUIRE((sum.eval(t) - (f.eval(t) + g.eval(t))).is_zero_to(24));
            REQUIRE((prod.eval(t) - f.eval(t) * g.eval(t)).is_zero_to(24));
        }
    }
}

TEST_CASE("composition with z -> z^p") {
    PadicContext ctx(5, 30);
    PadicNumber c = teichmuller(ctx, 2);
    const int T = 30;

    SECTION("identity series composes to the expansion of z^p") {
        // f(t') = c' + t' pulled back along z -> z^p equals (c+t)^p about c
        DiskSeries f = DiskSeries::zero(c, T);
        f.coeff[0] = c;   // c' = c^p = c for a Teichmuller center
        f.coeff[1] = PadicNumber::from_long(ctx, 1);
        f.set_primitive_bounds(0);
        DiskSeries comp = compose_poly_zp(f, c);
        std::mt19937_64 rng(11);
        for (int trial = 0; trial < 5; ++trial) {
            PadicNumber t = random_disk_point(ctx, rng, 12);
            PadicNumber z = c + t;
            REQUIRE((comp.eval(t) - z.pow_ui(5)).is_zero_to(26));
        }
    }
    SECTION("constants compose to themselves") {
        DiskSeries f = DiskSeries::constant(c, PadicNumber::from_long(ctx, 9), T);
        DiskSeries comp = compose_poly_zp(f, c);
        REQUIRE((comp.coeff[0] - PadicNumber::from_long(ctx, 9)).is_zero());
        for (int j = 1; j <= T; ++j) REQUIRE(comp.coeff[j].is_zero());
    }
    SECTION("binomial structure of (c+t)^5 at p = 5") {
        // the inner coefficients are divisible by p, the t^p coefficient is a unit
        mpz_class mod = 1;
        for (int i = 0; i < 30; ++i) mod *= 5;
        for (long i = 1; i < 5; ++i) {
            mpz_class binom;
            mpz_bin_uiui(binom.get_mpz_t(), 5, i);
            PadicNumber coeff = PadicNumber::from_integer(ctx, binom) * c.pow_ui(5 - i);
            REQUIRE(coeff.valuation() >= 1);
        }
        REQUIRE(c.pow_ui(0).valuation() == 0);   // t^5 coefficient is binom(5,5) c^0 = 1
    }
    SECTION("evaluation property: compose(f, q)(t) = f(q(t))") {
        std::mt19937_64 rng(17);
        DiskSeries f = make_series(ctx, c, {3, 1, mpq_class(5, 7), 2, mpq_class(1, 2)}, T);
        DiskSeries comp = compose_poly_zp(f, c);
        for (int trial = 0; trial < 10; ++trial) {
            PadicNumber t = random_disk_point(ctx, rng, 12);
            PadicNumber z = c + t;
            PadicNumber tprime = z.pow_ui(5) - c;
            REQUIRE((comp.eval(t) - f.eval(tprime)).is_zero_to(24));
        }
    }
}

TEST_CASE("logarithmic antidifferentiation") {
    PadicContext ctx(11, 30);
    PadicNumber c = teichmuller(ctx, 3);
    const int T = 40;

    SECTION("f = 0 gives the constant series") {
        PadicNumber k = PadicNumber::from_long(ctx, 13);
        DiskSeries F = integrate_dlog(DiskSeries::zero(c, T), k);
        REQUIRE((F.coeff[0] - k).is_zero());
        for (int j = 1; j <= T; ++j) REQUIRE(F.coeff[j].is_zero());
    }
    SECTION("f = 1 integrates to log(1 + t/c), checked against padic_log") {
        DiskSeries one = DiskSeries::constant(c, PadicNumber::from_long(ctx, 1), T);
        DiskSeries F = integrate_dlog(one, PadicNumber::zero(ctx));
        std::mt19937_64 rng(23);
        for (int trial = 0; trial < 8; ++trial) {
            PadicNumber t = random_disk_point(ctx, rng, 12);
            PadicNumber z = c + t;
            PadicNumber expected = padic_log(z) - padic_log(c);
            REQUIRE((F.eval(t) - expected).is_zero_to(25));
        }
    }
    SECTION("(c+t) d/dt integrate_dlog(f) returns f coefficientwise") {
        DiskSeries f = make_series(ctx, c, {2, 3, mpq_class(1, 5), 7, 1, 4}, T);
        DiskSeries F = integrate_dlog(f, PadicNumber::from_long(ctx, 42));
        DiskSeries back = series_dlog_derivative(F);
        for (int j = 0; j < T; ++j) REQUIRE((back.coeff[j] - f.coeff[j]).is_zero_to(25));
    }
}

TEST_CASE("strassman counting") {
    PadicContext ctx(11, 30);
    PadicNumber c = teichmuller(ctx, 2);
    const int T = 20;
    const long p = 11;

    SECTION("unit constant has no roots") {
        REQUIRE(strassman_count(make_series(ctx, c, {3, 1, 1}, T)) == 0);
    }
    SECTION("f = t has one root") {
        REQUIRE(strassman_count(make_series(ctx, c, {0, 1}, T)) == 1);
    }
    SECTION("(t - p)(t - 2p) has two roots, by construct-and-count") {
        DiskSeries f = make_series(ctx, c, {mpq_class(2 * p * p), mpq_class(-3 * p), 1}, T);
        REQUIRE(strassman_count(f) == 2);
    }
    SECTION("all-below-precision input is inconclusive") {
        DiskSeries f = DiskSeries::zero(c, T);
        for (int j = 0; j <= T; ++j) f.coeff[j] = PadicNumber::zero_to(ctx, 4);
        REQUIRE_THROWS_AS(strassman_count(f), std::runtime_error);
    }
}

TEST_CASE("root finding") {
    PadicContext ctx(11, 30);
    PadicNumber c = teichmuller(ctx, 2);
    const int T = 40;   // tail bound must dominate the certification target
    const long p = 11;
    const long target = 30, cert = 26;

    SECTION("f = t - p has the single root t = p") {
        DiskSeries f = make_series(ctx, c, {mpq_class(-p), 1}, T);
        auto roots = find_roots(f, target, cert);
        REQUIRE(roots.size() == 1);
        REQUIRE(roots[0].certified);
        REQUIRE(roots[0].multiplicity == 1);
        PadicNumber t = roots[0].root - c;
        REQUIRE((t - PadicNumber::from_long(ctx, p)).is_zero_to(26));
    }
    SECTION("no vanishing, empty result") {
        DiskSeries f = make_series(ctx, c, {7, 1, 3}, T);
        REQUIRE(find_roots(f, target, cert).empty());
    }
    SECTION("planted quadratics recovered to N - 2 digits") {
        std::mt19937_64 rng(31);
        for (int trial = 0; trial < 12; ++trial) {
            // distinct first digits guarantee separation
            long d1 = 1 + static_cast<long>(rng() % (p - 1));
            long d2 = 1 + static_cast<long>(rng() % (p - 1));
            if (d1 == d2) d2 = d2 % (p - 1) + 1;
            mpz_class alpha = d1, beta = d2;
            for (int i = 0; i < 8; ++i) {
                alpha = alpha * p + static_cast<long>(rng() % p);
                beta = beta * p + static_cast<long>(rng() % p);
            }
            // roots t = p*alpha', with alpha' = digits reversed; any p-adic integers do
            mpq_class r1 = mpq_class(alpha) * p, r2 = mpq_class(beta) * p;
            DiskSeries f = make_series(ctx, c, {r1 * r2, -(r1 + r2), 1}, T);
            auto roots = find_roots(f, target, cert);
            REQUIRE(roots.size() == 2);
            int matched = 0;
            for (const auto& rec : roots) {
                REQUIRE(rec.certified);
                PadicNumber t = rec.root - c;
                if ((t - PadicNumber::from_rational(ctx, r1)).is_zero_to(28)) ++matched;
                if ((t - PadicNumber::from_rational(ctx, r2)).is_zero_to(28)) ++matched;
            }
            REQUIRE(matched == 2);
        }
    }
    SECTION("root count equals the Strassman count (with multiplicity)") {
        std::mt19937_64 rng(37);
        for (int trial = 0; trial < 10; ++trial) {
            long d1 = 1 + static_cast<long>(rng() % (p - 1));
            long d2 = 1 + static_cast<long>(rng() % (p - 1));
            if (d1 == d2) d2 = d2 % (p - 1) + 1;   // separated roots stay in Z_p
            mpq_class r1 = mpq_class(d1) * p, r2 = mpq_class(d2) * p;
            DiskSeries f = make_series(ctx, c, {r1 * r2, -(r1 + r2), 1, 0, 1}, T);
            int expected = strassman_count(f);
            auto roots = find_roots(f, target, cert);
            int found = 0;
            for (const auto& rec : roots) found += rec.multiplicity;
            REQUIRE(found == expected);
        }
    }
    SECTION("a genuine double root is flagged, never dropped") {
        // (t - p)^2: Newton cannot separate, descent exhausts precision
        DiskSeries f = make_series(ctx, c, {mpq_class(p) * p, mpq_class(-2 * p), 1}, T);
        auto roots = find_roots(f, 20, 18);
        int total = 0;
        bool any_uncertified = false;
        for (const auto& rec : roots) {
            total += rec.multiplicity;
            any_uncertified = any_uncertified || !rec.certified;
        }
        REQUIRE(total == 2);
        REQUIRE(any_uncertified);
    }
}
