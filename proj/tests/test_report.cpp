#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>

#include "ckt/report.hpp"
#include "ckt/verify.hpp"

using namespace ckt;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir(const std::string& tag) {
        path = std::filesystem::temp_directory_path() /
               ("ckt-test-" + tag + "-" + std::to_string(::getpid()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("p-adic JSON round trip") {
    PadicContext ctx(11, 30);
    std::vector<PadicNumber> values = {
        PadicNumber::from_rational(ctx, mpq_class(7, 3)),
        PadicNumber::from_rational(ctx, mpq_class(5, 11)),   // negative valuation
        PadicNumber::from_long(ctx, -1),
        PadicNumber::from_long(ctx, 242),                     // positive valuation
        PadicNumber::zero(ctx),
        PadicNumber::zero_to(ctx, 17),
    };
    for (const auto& x : values) {
        PadicNumber y = padic_from_json(ctx, padic_to_json(x));
        REQUIRE(padic_to_json(y) == padic_to_json(x));
        if (x.is_unit_form()) {
            REQUIRE((x - y).is_zero());
            REQUIRE(x.abs_prec() == y.abs_prec());
        }
    }
}

TEST_CASE("config validation") {
    RunConfig cfg;
    cfg.p = 4;
    REQUIRE_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.p = 11;
    cfg.match_digits = 29;
    REQUIRE_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.match_digits = 20;
    cfg.site = "elsewhere";
    REQUIRE_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.site = "z";
    REQUIRE_NOTHROW(cfg.validate());
}

TEST_CASE("verify-s2 report at p = 5") {
    RunConfig cfg;
    cfg.p = 5;
    VerificationReport rep = cmd_verify_s2(cfg);

    SECTION("all checks pass") {
        for (const auto& c : rep.doc.at("checks"))
            INFO(c.dump());
        REQUIRE(rep.all_pass());
    }
    SECTION("the S-integral points embed into the zero locus by direct evaluation") {
        REQUIRE(rep.doc.at("expected_points").size() == 3);
        for (const auto& pt : rep.doc.at("expected_points")) {
            REQUIRE(pt.at("f2_valuation").get<long>() >= cfg.n - 8);
            REQUIRE(pt.at("f4_valuation").get<long>() >= cfg.n - 8);
        }
    }
    SECTION("reported common zeros are certified zeros of every input to match_digits") {
        for (const auto& z : rep.doc.at("common_zeros")) {
            REQUIRE(z.at("residuals").at("F2").get<long>() >= cfg.match_digits);
            REQUIRE(z.at("residuals").at("F4").get<long>() >= cfg.match_digits);
        }
    }
    SECTION("common zeros carry reconstructions in the fixed order 2, 1/2, -1") {
        const json& cz = rep.doc.at("common_zeros");
        REQUIRE(cz.size() == 3);
        REQUIRE(cz[0].at("reconstruction").get<std::string>() == "2");
        REQUIRE(cz[1].at("reconstruction").get<std::string>() == "1/2");
        REQUIRE(cz[2].at("reconstruction").get<std::string>() == "-1");
        std::string text = rep.to_text();
        size_t p2 = text.find("  2  ");
        size_t ph = text.find("  1/2  ");
        size_t pm = text.find("  -1  ");
        REQUIRE(p2 != std::string::npos);
        REQUIRE(ph != std::string::npos);
        REQUIRE(pm != std::string::npos);
        REQUIRE(p2 < ph);
        REQUIRE(ph < pm);
    }
    SECTION("report file round trip is lossless and version checked") {
        TempDir dir("report");
        std::string path = (dir.path / "r.json").string();
        write_report_file(rep, path, "json");
        VerificationReport back = read_report_file(path);
        REQUIRE(back.doc == rep.doc);

        json bad = rep.doc;
        bad["schema_version"] = 999;
        std::ofstream os(path);
        os << bad.dump();
        os.close();
        REQUIRE_THROWS_AS(read_report_file(path), std::runtime_error);
    }
    SECTION("identical configs produce identical payloads") {
        VerificationReport again = cmd_verify_s2(cfg);
        REQUIRE(again.payload_without_timing() == rep.payload_without_timing());
    }
}

TEST_CASE("expansion cache") {
    TempDir dir("cache");
    RunConfig cfg;
    cfg.p = 5;
    cfg.cache_dir = dir.path.string();

    // cold run writes the cache; warm run must reproduce the report bit for bit
    VerificationReport cold = cmd_verify_s2(cfg);
    REQUIRE(std::filesystem::exists(dir.path / cache_file_name(cfg)));
    VerificationReport warm = cmd_verify_s2(cfg);
    REQUIRE(warm.payload_without_timing() == cold.payload_without_timing());

    // save(load(cache)) is the identity on the cache document
    std::ifstream is(dir.path / cache_file_name(cfg));
    json doc;
    is >> doc;
    PolylogFamily fam = family_from_cache_json(doc);
    REQUIRE(family_to_cache_json(fam) == doc);

    // recomputation agrees with the cached family
    PolylogParams prm;
    prm.p = cfg.p;
    prm.n_target = cfg.n;
    prm.kmax = cfg.kmax;
    PolylogFamily fresh = build_family(prm);
    REQUIRE(family_to_cache_json(fresh) == doc);
}

TEST_CASE("sweep") {
    RunConfig cfg;
    cfg.p = 11;

    SECTION("sweep {11} equals the single run in report payload") {
        VerificationReport single = cmd_verify_s2(cfg);
        VerificationReport swept = cmd_sweep({11}, cfg);
        REQUIRE(swept.all_pass());
        json embedded = swept.doc.at("reports").at(0);
        VerificationReport::scrub_timing(embedded);
        REQUIRE(embedded == single.payload_without_timing());
        REQUIRE(swept.doc.at("summary").at(0).at("c1_reconstruction").get<std::string>() == "7/8");
    }
    SECTION("the empty sweep has an empty summary") {
        VerificationReport rep = cmd_sweep({}, cfg);
        REQUIRE(rep.doc.at("summary").empty());
        REQUIRE(rep.all_pass());
    }
}

TEST_CASE("verify-z") {
    SECTION("p = 5: no residue pair gives Teichmuller points summing to 1") {
        RunConfig cfg;
        cfg.p = 5;
        VerificationReport rep = cmd_verify_z(cfg);
        REQUIRE(rep.all_pass());
        REQUIRE(rep.doc.at("candidates").empty());
        // enumeration oracle: check omega(a) + omega(b) != 1 for all pairs
        PadicContext ctx(5, 30);
        PadicNumber one = PadicNumber::from_long(ctx, 1);
        for (long a = 2; a <= 4; ++a)
            for (long b = 2; b <= 4; ++b) {
                PadicNumber s = teichmuller(ctx, a) + teichmuller(ctx, b) - one;
                REQUIRE_FALSE(s.is_zero_to(28));
            }
    }
    SECTION("p = 7: sixth roots of unity give candidates, Li_3 does not vanish there") {
        RunConfig cfg;
        cfg.p = 7;
        VerificationReport rep = cmd_verify_z(cfg);
        REQUIRE(rep.all_pass());
        const json& cands = rep.doc.at("candidates");
        REQUIRE(cands.size() == 2);
        for (const auto& c : cands) {
            REQUIRE_FALSE(c.at("in_final_locus").get<bool>());
            long a = c.at("residue").get<long>();
            REQUIRE((a == 3 || a == 5));
        }
        // enumeration oracle at p = 7: exactly the pair {3, 5}
        PadicContext ctx(7, 30);
        PadicNumber one = PadicNumber::from_long(ctx, 1);
        int pairs = 0;
        for (long a = 2; a <= 6; ++a)
            for (long b = 2; b <= 6; ++b)
                if ((teichmuller(ctx, a) + teichmuller(ctx, b) - one).is_zero_to(28)) ++pairs;
        REQUIRE(pairs == 2);
        REQUIRE(rep.doc.at("findings").empty());
    }
    SECTION("every candidate satisfies z^(p-1) = 1") {
        RunConfig cfg;
        cfg.p = 13;
        VerificationReport rep = cmd_verify_z(cfg);
        PadicContext ctx(13, 30);
        for (const auto& c : rep.doc.at("candidates")) {
            long a = c.at("residue").get<long>();
            PadicNumber w = teichmuller(ctx, a);
            REQUIRE((w.pow_ui(12) - PadicNumber::from_long(ctx, 1)).is_zero_to(28));
        }
    }
}
