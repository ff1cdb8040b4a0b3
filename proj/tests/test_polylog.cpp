#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "ckt/polylog.hpp"

using namespace ckt;

namespace {

PolylogFamily& family7() {
    static PolylogFamily fam = [] {
        PolylogParams prm;
        prm.p = 7;
        prm.n_target = 30;
        return build_family(prm);
    }();
    return fam;
}

// random unit with residue in [2, p-1] (a point of X(Z_p)) as an exact rational
mpq_class random_point_rational(std::mt19937_64& rng, long p, int digits) {
    mpz_class val = static_cast<long>(2 + rng() % (p - 2));
    mpz_class pw = p;
    for (int i = 0; i < digits; ++i) {
        val += pw * static_cast<long>(rng() % p);
        pw *= p;
    }
    return mpq_class(val);
}

}  // namespace

TEST_CASE("g Taylor coefficients at zero") {
    PadicContext ctx(7, 30);

    SECTION("k = 1: coefficients 1/m skipping multiples of p") {
        auto e = g_taylor_at_zero(ctx, 1, 16);
        REQUIRE(e[0].is_exact_zero());
        for (long m = 1; m <= 16; ++m) {
            if (m % 7 == 0) {
                REQUIRE(e[m].is_exact_zero());
            } else {
                PadicNumber d = e[m] - PadicNumber::from_rational(ctx, mpq_class(1, m));
                REQUIRE(d.is_zero());
            }
        }
    }
    SECTION("e_p vanishes") {
        auto e = g_taylor_at_zero(ctx, 3, 8);
        REQUIRE(e[7].is_exact_zero());
    }
    SECTION("partial sums at z = p against the padic_log closed form (k = 1)") {
        // g_1(z) = -log(1-z) + (1/p) log(1-z^p) inside the unit disk
        const int M = 24;
        auto e = g_taylor_at_zero(ctx, 1, M);
        PadicNumber z = PadicNumber::from_long(ctx, 7);
        PadicNumber acc = PadicNumber::zero(ctx);
        for (long m = M; m >= 1; --m) acc = (acc + e[m]) * z;
        PadicNumber one = PadicNumber::from_long(ctx, 1);
        PadicNumber closed = -padic_log(one - z) +
                             padic_log(one - z.pow_ui(7)) / PadicNumber::from_long(ctx, 7);
        // the tail of the sum is O(p^(M+1))
        REQUIRE((acc - closed).is_zero_to(M));
    }
}

TEST_CASE("ml fit validation against closed forms") {
    const PolylogFamily& fam = family7();
    const PadicContext& ctx = fam.ctx();
    PadicNumber one = PadicNumber::from_long(ctx, 1);

    SECTION("k = 1 agrees with -log(1-z) + (1/p) log(1-z^p) at 20 random unit points") {
        std::mt19937_64 rng(101);
        for (int trial = 0; trial < 20; ++trial) {
            mpq_class zq = random_point_rational(rng, 7, 20);
            PadicNumber z = PadicNumber::from_rational(ctx, zq);
            PadicNumber via_ml = fam.g[1].eval(z);
            PadicNumber closed = -padic_log(one - z) +
                                 padic_log(one - z.pow_ui(7)) / PadicNumber::from_long(ctx, 7);
            REQUIRE((via_ml - closed).is_zero_to(fam.params.n_target));
        }
    }
    SECTION("inversion antisymmetry g_k(1/z) = (-1)^(k+1) g_k(z)") {
        std::mt19937_64 rng(103);
        for (int k = 1; k <= 3; ++k) {
            for (int trial = 0; trial < 6; ++trial) {
                mpq_class zq = random_point_rational(rng, 7, 18);
                PadicNumber z = PadicNumber::from_rational(ctx, zq);
                PadicNumber lhs = fam.g[k].eval(z.inverse());
                PadicNumber rhs = fam.g[k].eval(z);
                if (k % 2 == 0) rhs = -rhs;
                REQUIRE((lhs - rhs).is_zero_to(fam.params.n_target));
            }
        }
    }
    SECTION("d_0 vanishes to working precision and held-out coefficients match") {
        for (int k = 1; k <= 4; ++k) {
            REQUIRE(fam.g[k].d0_valuation >= fam.params.n_work - 4);
            REQUIRE(fam.g[k].heldout_agreement >= fam.params.n_work - 4);
            REQUIRE(fam.g[k].tail_min_valuation >= fam.params.n_work - 4);
        }
    }
}

TEST_CASE("polylog family construction") {
    const PolylogFamily& fam = family7();
    const PadicContext& ctx = fam.ctx();
    const int N = fam.params.n_target;

    SECTION("Li_1 is the bypass -log(1-z), piecewise and exactly") {
        for (long a : fam.residues) {
            const DiskSeries& li1 = fam.li[1].pieces.at(a);
            const DiskSeries& l1 = fam.log1mz.pieces.at(a);
            for (int j = 0; j <= li1.trunc(); ++j)
                REQUIRE((li1.coeff[j] + l1.coeff[j]).is_zero());
        }
    }
    SECTION("ODE and Frobenius residuals vanish coefficientwise to the budget") {
        REQUIRE_FALSE(fam.audit.residual_nonzero);
        REQUIRE(fam.audit.ode_residual_eval_bound >= fam.params.n_work - 4);
        REQUIRE(fam.audit.frobenius_residual_eval_bound >= fam.params.n_work - 4);
    }
    SECTION("reflection: Li2(z) + Li2(1-z) + log(z) log(1-z) = 0") {
        std::mt19937_64 rng(107);
        for (int trial = 0; trial < 12; ++trial) {
            mpq_class zq = random_point_rational(rng, 7, 20);
            PadicNumber z = PadicNumber::from_rational(ctx, zq);
            PadicNumber omz = PadicNumber::from_long(ctx, 1) - z;
            PadicNumber r = coleman_eval(fam.li[2], z) + coleman_eval(fam.li[2], omz) +
                            coleman_eval(fam.logz, z) * coleman_eval(fam.log1mz, z);
            REQUIRE(r.is_zero_to(N - 2));
        }
    }
    SECTION("Landen: Li2(z) + Li2(z/(z-1)) + (1/2) log(1-z)^2 = 0") {
        std::mt19937_64 rng(109);
        PadicNumber half = PadicNumber::from_rational(ctx, mpq_class(1, 2));
        for (int trial = 0; trial < 12; ++trial) {
            mpq_class zq = random_point_rational(rng, 7, 20);
            PadicNumber z = PadicNumber::from_rational(ctx, zq);
            PadicNumber zom = z / (z - PadicNumber::from_long(ctx, 1));
            PadicNumber l1 = coleman_eval(fam.log1mz, z);
            PadicNumber r = coleman_eval(fam.li[2], z) + coleman_eval(fam.li[2], zom) +
                            half * l1 * l1;
            REQUIRE(r.is_zero_to(N - 2));
        }
    }
    SECTION("inversion: Li_k(z) + (-1)^k Li_k(1/z) + (1/k!) log(z)^k = 0") {
        std::mt19937_64 rng(113);
        for (int k = 1; k <= 4; ++k) {
            mpz_class fact = 1;
            for (int j = 2; j <= k; ++j) fact *= j;
            PadicNumber inv_fact = PadicNumber::from_rational(ctx, mpq_class(mpz_class(1), fact));
            for (int trial = 0; trial < 6; ++trial) {
                mpq_class zq = random_point_rational(rng, 7, 20);
                PadicNumber z = PadicNumber::from_rational(ctx, zq);
                PadicNumber term = coleman_eval(fam.li[k], z.inverse());
                if (k % 2 != 0) term = -term;
                PadicNumber r = coleman_eval(fam.li[k], z) + term +
                                inv_fact * coleman_eval(fam.logz, z).pow_ui(k);
                REQUIRE(r.is_zero_to(N - 2));
            }
        }
    }
}

TEST_CASE("zeta values") {
    const PolylogFamily& fam = family7();
    const int N = fam.params.n_target;

    SECTION("even zeta values vanish") {
        REQUIRE(zeta_value(fam, 2).is_zero_to(N));
        REQUIRE(zeta_value(fam, 4).is_zero_to(N));
    }
    SECTION("zeta_3 = -(4/3) Li_3(-1) and is nonzero") {
        const PadicContext& ctx = fam.ctx();
        PadicNumber li3_m1 = coleman_eval(fam.li[3], mpq_class(-1));
        PadicNumber d = zeta_value(fam, 3) +
                        PadicNumber::from_rational(ctx, mpq_class(4, 3)) * li3_m1;
        REQUIRE(d.is_zero_to(N));
        REQUIRE_FALSE(zeta_value(fam, 3).is_zero());
    }
    SECTION("k = 1 is undefined") { REQUIRE_THROWS_AS(zeta_value(fam, 1), std::invalid_argument); }
}

TEST_CASE("coleman algebra and evaluation") {
    const PolylogFamily& fam = family7();
    const PadicContext& ctx = fam.ctx();
    const int N = fam.params.n_target;

    SECTION("f - f is the zero function") {
        ColemanFunction z = coleman_sub(fam.li[2], fam.li[2]);
        for (const auto& [a, piece] : z.pieces) {
            (void)a;
            for (const auto& c : piece.coeff) REQUIRE(c.is_zero());
        }
    }
    SECTION("powering equals repeated multiplication at sample points") {
        std::mt19937_64 rng(127);
        ColemanFunction cube = coleman_pow(fam.logz, 3);
        ColemanFunction cube2 = coleman_mul(coleman_mul(fam.logz, fam.logz), fam.logz);
        for (int trial = 0; trial < 8; ++trial) {
            mpq_class zq = random_point_rational(rng, 7, 16);
            REQUIRE((coleman_eval(cube, zq) - coleman_eval(cube2, zq)).is_zero_to(N - 2));
        }
    }
    SECTION("Li_1 + log(1-z) is the zero function") {
        ColemanFunction s = coleman_add(fam.li[1], fam.log1mz);
        for (const auto& [a, piece] : s.pieces) {
            (void)a;
            for (const auto& c : piece.coeff) REQUIRE(c.is_zero());
        }
    }
    SECTION("Li_2(1/2) = -(1/2) (log 2)^2") {
        PadicNumber log2 = padic_log(PadicNumber::from_long(ctx, 2));
        PadicNumber r = coleman_eval(fam.li[2], mpq_class(1, 2)) +
                        PadicNumber::from_rational(ctx, mpq_class(1, 2)) * log2 * log2;
        REQUIRE(r.is_zero_to(N - 2));
    }
    SECTION("Li_3(1/2) = (7/8) zeta_3 + (1/6) (log 2)^3") {
        PadicNumber log2 = padic_log(PadicNumber::from_long(ctx, 2));
        PadicNumber r = coleman_eval(fam.li[3], mpq_class(1, 2)) -
                        PadicNumber::from_rational(ctx, mpq_class(7, 8)) * fam.zeta.at(3) -
                        PadicNumber::from_rational(ctx, mpq_class(1, 6)) * log2 * log2 * log2;
        REQUIRE(r.is_zero_to(N - 2));
    }
    SECTION("log z vanishes at every Teichmuller point") {
        for (long a : fam.residues)
            REQUIRE(coleman_eval(fam.logz, fam.omega.at(a)).is_zero_to(N));
    }
    SECTION("points with residue 0 or 1 are outside the domain") {
        REQUIRE_THROWS_AS(coleman_eval(fam.logz, mpq_class(7)), std::invalid_argument);
        REQUIRE_THROWS_AS(coleman_eval(fam.logz, mpq_class(8)), std::invalid_argument);
    }
}

TEST_CASE("common zeros") {
    const PolylogFamily& fam = family7();

    SECTION("the zero set of log z alone is all p - 2 Teichmuller points") {
        auto cz = common_zeroes({&fam.logz}, 20, fam.params.n_work - 4, fam.params.n_work - 10);
        REQUIRE(cz.zeros.size() == static_cast<size_t>(7 - 2));
        for (const auto& rec : cz.zeros) {
            long a = rec.root.residue();
            REQUIRE((rec.root - fam.omega.at(a)).is_zero_to(26));
        }
    }
    SECTION("{f, f} gives the zeros of f") {
        auto single = common_zeroes({&fam.logz}, 20, fam.params.n_work - 4, fam.params.n_work - 10);
        auto doubled = common_zeroes({&fam.logz, &fam.logz}, 20, fam.params.n_work - 4,
                                     fam.params.n_work - 10);
        REQUIRE(single.zeros.size() == doubled.zeros.size());
        for (size_t i = 0; i < single.zeros.size(); ++i)
            REQUIRE((single.zeros[i].root - doubled.zeros[i].root).is_zero_to(20));
    }
}

TEST_CASE("F2 and F4 at p = 11 have common zeros {2, 1/2, -1}") {
    PolylogParams prm;
    prm.p = 11;
    prm.n_target = 30;
    PolylogFamily fam = build_family(prm);
    const PadicContext& ctx = fam.ctx();
    PadicNumber log2 = padic_log(PadicNumber::from_long(ctx, 2));
    PadicNumber z3 = fam.zeta.at(3);
    PadicNumber li3h = coleman_eval(fam.li[3], mpq_class(1, 2));
    PadicNumber li4h = coleman_eval(fam.li[4], mpq_class(1, 2));
    PadicNumber c1 = (li3h - PadicNumber::from_rational(ctx, mpq_class(1, 6)) * log2 * log2 * log2) / z3;
    PadicNumber Cp = log2 * log2 * log2 / (PadicNumber::from_long(ctx, 24) * z3) + li4h / (log2 * z3);
    PadicNumber c2 = Cp / c1;

    ColemanFunction F2 = coleman_add(
        fam.li[2], coleman_scale(coleman_mul(fam.logz, fam.log1mz),
                                 PadicNumber::from_rational(ctx, mpq_class(1, 2))));
    ColemanFunction F4 = coleman_add(
        fam.li[4],
        coleman_add(coleman_scale(coleman_mul(fam.logz, fam.li[3]), c2),
                    coleman_scale(coleman_mul(coleman_pow(fam.logz, 3), fam.log1mz),
                                  c2 / PadicNumber::from_long(ctx, 6) +
                                      PadicNumber::from_rational(ctx, mpq_class(1, 24)))));

    auto cz = common_zeroes({&F2, &F4}, 20, fam.params.n_work - 4, fam.params.n_work - 10);
    REQUIRE(cz.zeros.size() == 3);
    REQUIRE(cz.warnings.empty());
    std::vector<mpq_class> expected = {mpq_class(2), mpq_class(1, 2), mpq_class(-1)};
    std::vector<bool> found(3, false);
    for (const auto& rec : cz.zeros) {
        auto rr = rational_reconstruction(rec.root, 20);
        REQUIRE(rr.has_value());
        for (int i = 0; i < 3; ++i)
            if (rr->to_mpq() == expected[i]) found[i] = true;
    }
    REQUIRE((found[0] && found[1] && found[2]));
}
