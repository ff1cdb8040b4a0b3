#pragma once

// Run configuration, machine-readable verification reports, and the
// expansion cache.  Reports serialize losslessly: p-adic values travel as
// base-p digit strings with explicit valuation and precision, and document
// payloads are deterministic (keys sorted, arrays canonically ordered) so
// identical configurations produce identical bytes outside the timing block.

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ckt/padic.hpp"
#include "ckt/polylog.hpp"

namespace ckt {

using nlohmann::json;

constexpr int kReportSchemaVersion = 1;
constexpr int kCacheFormatVersion = 1;

struct RunConfig {
    long p = 11;
    int n = 30;                      // target relative precision
    int kmax = 4;
    std::string site = "z-minus-2";  // or "z"
    long match_digits = 20;
    std::string cache_dir;           // empty: no cache
    std::string format = "json";     // or "text"

    void validate() const {
        if (!PadicContext::is_prime(p) || p < 3)
            throw std::invalid_argument("config: p must be an odd prime >= 3");
        if (n < 8) throw std::invalid_argument("config: precision too small");
        if (kmax < 2 || kmax > 8) throw std::invalid_argument("config: kmax out of range");
        if (site != "z-minus-2" && site != "z")
            throw std::invalid_argument("config: site must be 'z-minus-2' or 'z'");
        if (match_digits < 1 || match_digits > n - 6)
            throw std::invalid_argument("config: match_digits must stay within n minus the loss budget");
        if (format != "json" && format != "text")
            throw std::invalid_argument("config: format must be 'json' or 'text'");
    }

    json to_json() const {
        return json{{"p", p},
                    {"n", n},
                    {"kmax", kmax},
                    {"site", site},
                    {"match_digits", match_digits}};
    }
};

inline json padic_to_json(const PadicNumber& x) {
    if (x.is_exact_zero()) return json{{"zero", true}};
    if (!x.is_unit_form()) return json{{"O", x.abs_prec()}};
    return json{{"v", x.valuation()}, {"prec", x.rel_prec()}, {"digits", x.digits_string()}};
}

inline PadicNumber padic_from_json(const PadicContext& ctx, const json& j) {
    if (j.contains("zero")) return PadicNumber::zero(ctx);
    if (j.contains("O")) return PadicNumber::zero_to(ctx, j.at("O").get<long>());
    long v = j.at("v").get<long>();
    int r = j.at("prec").get<int>();
    std::string digits = j.at("digits").get<std::string>();
    mpz_class u = 0;
    std::istringstream ss(digits);
    std::string tok;
    std::vector<long> ds;
    while (std::getline(ss, tok, '.')) ds.push_back(std::stol(tok));
    for (auto it = ds.rbegin(); it != ds.rend(); ++it) u = u * ctx.p() + *it;
    return PadicNumber::from_unit(ctx, v, std::move(u), r);
}

// human-readable p-adic display built from base-p digits
inline std::string padic_display(const PadicNumber& x) {
    if (x.is_exact_zero()) return "0";
    std::string p = std::to_string(x.ctx().p());
    if (!x.is_unit_form()) return "O(" + p + "^" + std::to_string(x.abs_prec()) + ")";
    return p + "^" + std::to_string(x.valuation()) + " * [" + x.digits_string() + "] + O(" +
           p + "^" + std::to_string(x.abs_prec()) + ")";
}

struct VerificationReport {
    json doc;

    bool all_pass() const {
        if (!doc.contains("checks")) return false;
        for (const auto& c : doc.at("checks"))
            if (!c.at("pass").get<bool>()) return false;
        return true;
    }

    // payload with volatile fields removed (recursively), for determinism
    // comparisons and the cache-equivalence contract
    static void scrub_timing(json& j) {
        if (j.is_object()) {
            j.erase("timing_ms");
            j.erase("ms");
            for (auto& [k, v] : j.items()) { (void)k; scrub_timing(v); }
        } else if (j.is_array()) {
            for (auto& v : j) scrub_timing(v);
        }
    }

    json payload_without_timing() const {
        json j = doc;
        scrub_timing(j);
        return j;
    }

    std::string to_text() const;
};

inline void write_report(const VerificationReport& rep, std::ostream& os,
                         const std::string& format) {
    if (format == "json")
        os << rep.doc.dump(2) << "\n";
    else
        os << rep.to_text();
}

inline void write_report_file(const VerificationReport& rep, const std::string& path,
                              const std::string& format) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open report file for writing: " + path);
    write_report(rep, os, format);
    if (!os.good()) throw std::runtime_error("failed while writing report file: " + path);
}

inline VerificationReport read_report_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open report file: " + path);
    VerificationReport rep;
    is >> rep.doc;
    if (!rep.doc.contains("schema_version"))
        throw std::runtime_error("report file has no schema_version: " + path);
    int v = rep.doc.at("schema_version").get<int>();
    if (v != kReportSchemaVersion)
        throw std::runtime_error("report schema version mismatch: file has " + std::to_string(v) +
                                 ", expected " + std::to_string(kReportSchemaVersion));
    return rep;
}

inline std::string VerificationReport::to_text() const {
    std::ostringstream os;
    const json& d = doc;
    const json& cfg = d.at("config");
    os << "kim-verify " << d.value("kind", "?") << ": ";
    if (d.contains("primes"))
        os << "primes = " << d.at("primes").dump();
    else
        os << "p = " << cfg.at("p").get<long>();
    os << ", N = " << cfg.at("n").get<int>() << ", kmax = " << cfg.at("kmax").get<int>()
       << ", site = " << cfg.at("site").get<std::string>() << "\n";
    if (d.contains("constants")) {
        os << "constants:\n";
        for (const auto& [k, v] : d.at("constants").items()) {
            os << "  " << k << " = ";
            if (v.is_object() && (v.contains("digits") || v.contains("O") || v.contains("zero"))) {
                if (v.contains("digits"))
                    os << cfg.at("p").get<long>() << "^" << v.at("v").get<long>() << " * ["
                       << v.at("digits").get<std::string>() << "]";
                else if (v.contains("O"))
                    os << "O(p^" << v.at("O").get<long>() << ")";
                else
                    os << "0";
            } else {
                os << v.dump();
            }
            os << "\n";
        }
    }
    if (d.contains("functions"))
        for (const auto& f : d.at("functions"))
            os << f.at("name").get<std::string>() << " zero count: "
               << f.at("zero_count").get<int>() << "\n";
    if (d.contains("common_zeros")) {
        os << "common zeros (match_digits = " << cfg.at("match_digits").get<long>() << "):\n";
        for (const auto& z : d.at("common_zeros"))
            os << "  " << z.value("reconstruction", std::string("(no small rational)"))
               << "  [residue " << z.at("residue").get<long>() << "]\n";
    }
    if (d.contains("candidates")) {
        os << "depth-1 candidate locus (Teichmuller pairs summing to 1):\n";
        if (d.at("candidates").empty()) os << "  (empty)\n";
        for (const auto& c : d.at("candidates"))
            os << "  residue " << c.at("residue").get<long>() << ", partner residue "
               << c.at("partner_residue").get<long>() << "\n";
    }
    if (d.contains("findings"))
        for (const auto& f : d.at("findings"))
            os << "FINDING: " << f.get<std::string>() << "\n";
    if (d.contains("warnings"))
        for (const auto& w : d.at("warnings")) os << "warning: " << w.get<std::string>() << "\n";
    if (d.contains("checks")) {
        os << "checks:\n";
        for (const auto& c : d.at("checks"))
            os << "  " << (c.at("pass").get<bool>() ? "PASS" : "FAIL") << " "
               << c.at("name").get<std::string>() << ": " << c.at("detail").get<std::string>()
               << "\n";
    }
    if (d.contains("summary")) {
        os << "sweep summary:\n";
        for (const auto& row : d.at("summary"))
            os << "  p = " << row.at("p").get<long>() << ": "
               << (row.at("pass").get<bool>() ? "PASS" : "FAIL") << ", c1 -> "
               << row.value("c1_reconstruction", std::string("?")) << "\n";
    }
    os << "overall: " << (all_pass() ? "PASS" : "FAIL") << "\n";
    return os.str();
}

// ---- expansion cache --------------------------------------------------------

namespace detail {

inline json series_to_json(const DiskSeries& s) {
    json coeffs = json::array();
    for (const auto& c : s.coeff) coeffs.push_back(padic_to_json(c));
    return json{{"coeff", std::move(coeffs)}, {"log_loss", s.log_loss}, {"offset", s.offset}};
}

inline DiskSeries series_from_json(const PadicContext& ctx, const PadicNumber& center,
                                   const json& j) {
    DiskSeries s;
    s.center = center;
    for (const auto& c : j.at("coeff")) s.coeff.push_back(padic_from_json(ctx, c));
    s.log_loss = j.at("log_loss").get<int>();
    s.offset = j.at("offset").get<long>();
    return s;
}

}  // namespace detail

inline json family_to_cache_json(const PolylogFamily& fam) {
    json doc;
    doc["format_version"] = kCacheFormatVersion;
    doc["p"] = fam.params.p;
    doc["n_target"] = fam.params.n_target;
    doc["n_work"] = fam.params.n_work;
    doc["kmax"] = fam.params.kmax;
    doc["trunc"] = fam.params.trunc;
    json ml;
    for (int k = 1; k <= fam.params.kmax; ++k) {
        json d = json::array();
        for (const auto& c : fam.g[k].ml) d.push_back(padic_to_json(c));
        ml[std::to_string(k)] = json{{"J", fam.g[k].J},
                                     {"d", std::move(d)},
                                     {"d0_valuation", fam.g[k].d0_valuation},
                                     {"tail_min_valuation", fam.g[k].tail_min_valuation},
                                     {"heldout_agreement", fam.g[k].heldout_agreement}};
    }
    doc["ml"] = std::move(ml);
    json zeta;
    for (const auto& [k, z] : fam.zeta) zeta[std::to_string(k)] = padic_to_json(z);
    doc["zeta"] = std::move(zeta);
    json disks;
    for (long a : fam.residues) {
        json d;
        d["omega"] = padic_to_json(fam.omega.at(a));
        d["logz"] = detail::series_to_json(fam.logz.pieces.at(a));
        d["log1mz"] = detail::series_to_json(fam.log1mz.pieces.at(a));
        for (int k = 1; k <= fam.params.kmax; ++k) {
            d["li" + std::to_string(k)] = detail::series_to_json(fam.li[k].pieces.at(a));
            d["g" + std::to_string(k)] = detail::series_to_json(fam.g_disks[k].pieces.at(a));
        }
        disks[std::to_string(a)] = std::move(d);
    }
    doc["disks"] = std::move(disks);
    doc["audit"] = json{{"ode_residual_eval_bound", fam.audit.ode_residual_eval_bound},
                        {"frobenius_residual_eval_bound", fam.audit.frobenius_residual_eval_bound},
                        {"ml_heldout_min", fam.audit.ml_heldout_min},
                        {"ml_d0_min", fam.audit.ml_d0_min}};
    return doc;
}

inline PolylogFamily family_from_cache_json(const json& doc) {
    if (!doc.contains("format_version") ||
        doc.at("format_version").get<int>() != kCacheFormatVersion)
        throw std::runtime_error("expansion cache format version mismatch");
    PolylogParams prm;
    prm.p = doc.at("p").get<long>();
    prm.n_target = doc.at("n_target").get<int>();
    prm.n_work = doc.at("n_work").get<int>();
    prm.kmax = doc.at("kmax").get<int>();
    prm.trunc = doc.at("trunc").get<int>();
    PolylogFamily fam(prm);
    const PadicContext& ctx = fam.ctx();
    fam.li.resize(prm.kmax + 1);
    fam.g.resize(prm.kmax + 1);
    fam.g_disks.resize(prm.kmax + 1);
    for (int k = 1; k <= prm.kmax; ++k) {
        const json& m = doc.at("ml").at(std::to_string(k));
        fam.g[k].k = k;
        fam.g[k].J = m.at("J").get<long>();
        for (const auto& c : m.at("d")) fam.g[k].ml.push_back(padic_from_json(ctx, c));
        fam.g[k].d0_valuation = m.at("d0_valuation").get<long>();
        fam.g[k].tail_min_valuation = m.at("tail_min_valuation").get<long>();
        fam.g[k].heldout_agreement = m.at("heldout_agreement").get<long>();
    }
    for (const auto& [key, d] : doc.at("disks").items()) {
        long a = std::stol(key);
        fam.residues.push_back(a);
        PadicNumber w = padic_from_json(ctx, d.at("omega"));
        fam.omega.emplace(a, w);
        fam.logz.pieces.emplace(a, detail::series_from_json(ctx, w, d.at("logz")));
        fam.log1mz.pieces.emplace(a, detail::series_from_json(ctx, w, d.at("log1mz")));
        for (int k = 1; k <= prm.kmax; ++k) {
            fam.li[k].pieces.emplace(a, detail::series_from_json(ctx, w, d.at("li" + std::to_string(k))));
            fam.g_disks[k].pieces.emplace(a, detail::series_from_json(ctx, w, d.at("g" + std::to_string(k))));
        }
    }
    std::sort(fam.residues.begin(), fam.residues.end());
    for (const auto& [key, z] : doc.at("zeta").items())
        fam.zeta.emplace(std::stoi(key), padic_from_json(ctx, z));
    const json& audit = doc.at("audit");
    fam.audit.ode_residual_eval_bound = audit.at("ode_residual_eval_bound").get<long>();
    fam.audit.frobenius_residual_eval_bound = audit.at("frobenius_residual_eval_bound").get<long>();
    fam.audit.ml_heldout_min = audit.at("ml_heldout_min").get<long>();
    fam.audit.ml_d0_min = audit.at("ml_d0_min").get<long>();
    return fam;
}

inline std::string cache_file_name(const RunConfig& cfg) {
    return "family-p" + std::to_string(cfg.p) + "-n" + std::to_string(cfg.n) + "-k" +
           std::to_string(cfg.kmax) + ".json";
}

}  // namespace ckt
