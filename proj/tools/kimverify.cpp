// kimverify: construct p-adic polylogarithms on the thrice-punctured line,
// assemble the Chabauty-Kim functions F_2/F_4 for S = Spec Z \ {2}, and check
// their common zero locus against the S-integral points {2, 1/2, -1}.
//
// Subcommands: build, constants, verify-s2, verify-z, sweep.
// Exit codes: 0 all checks pass, 1 any check fails, 2 configuration error.

#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "ckt/verify.hpp"

namespace {

struct CommonOpts {
    ckt::RunConfig cfg;
    std::string out;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_p = true) {
    if (with_p) cmd->add_option("--p", opts.cfg.p, "odd prime >= 3");
    cmd->add_option("--prec", opts.cfg.n, "target relative precision in p-adic digits");
    cmd->add_option("--kmax", opts.cfg.kmax, "highest polylogarithm weight");
    cmd->add_option("--match-digits", opts.cfg.match_digits,
                    "digits to which common zeros must agree");
    cmd->add_option("--cache", opts.cfg.cache_dir, "expansion cache directory");
    cmd->add_option("--format", opts.cfg.format, "report format: json or text");
    cmd->add_option("--out", opts.out, "write the report to a file instead of stdout");
}

int emit(const ckt::VerificationReport& rep, const CommonOpts& opts) {
    if (opts.out.empty())
        ckt::write_report(rep, std::cout, opts.cfg.format);
    else
        ckt::write_report_file(rep, opts.out, opts.cfg.format);
    return rep.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"p-adic polylogarithms and the unit equation on the thrice-punctured line"};
    app.require_subcommand(1);

    CommonOpts opts;
    if (const char* env = std::getenv("KIMVERIFY_CACHE")) opts.cfg.cache_dir = env;

    auto* c_build = app.add_subcommand("build", "construct the polylog family and fill the cache");
    add_common(c_build, opts);

    auto* c_constants = app.add_subcommand("constants", "print log2, zeta values, c1, C^p");
    add_common(c_constants, opts);

    auto* c_s2 = app.add_subcommand("verify-s2", "verify the S = Z \\ {2} common-zero locus");
    add_common(c_s2, opts);

    auto* c_z = app.add_subcommand("verify-z", "run the Spec Z depth-1 locus check");
    add_common(c_z, opts);

    std::vector<long> sweep_primes = {3, 5, 7, 11, 13, 17, 19, 23, 29};
    bool sweep_with_z = false;
    auto* c_sweep = app.add_subcommand("sweep", "run verify-s2 over a list of primes");
    add_common(c_sweep, opts, false);
    c_sweep->add_option("--p", sweep_primes, "comma-separated primes to sweep")->delimiter(',');
    c_sweep->add_flag("--with-z", sweep_with_z, "also run verify-z per prime");

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_build->parsed()) {
            opts.cfg.validate();
            if (opts.cfg.cache_dir.empty())
                throw std::invalid_argument("build: --cache (or KIMVERIFY_CACHE) is required");
            ckt::PolylogFamily fam = ckt::build_or_load_family(opts.cfg);
            std::cout << "family ready: p = " << fam.params.p << ", kmax = " << fam.params.kmax
                      << ", n_work = " << fam.params.n_work << ", disks = "
                      << fam.residues.size() << "\n";
            return 0;
        }
        if (c_constants->parsed()) return emit(ckt::cmd_constants(opts.cfg), opts);
        if (c_s2->parsed()) {
            opts.cfg.site = "z-minus-2";
            return emit(ckt::cmd_verify_s2(opts.cfg), opts);
        }
        if (c_z->parsed()) {
            opts.cfg.site = "z";
            return emit(ckt::cmd_verify_z(opts.cfg), opts);
        }
        if (c_sweep->parsed()) {
            opts.cfg.validate();
            for (long p : sweep_primes)
                if (!ckt::PadicContext::is_prime(p) || p < 3)
                    throw std::invalid_argument("sweep: " + std::to_string(p) +
                                                " is not an odd prime");
            return emit(ckt::cmd_sweep(sweep_primes, opts.cfg, sweep_with_z), opts);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
