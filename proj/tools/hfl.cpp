#include <cstdlib>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "hfl/cache.hpp"
#include "hfl/cli.hpp"

namespace {

// Exit codes: 0 every check passed, 1 some check failed, 2 bad arguments, 3 budget exceeded,
// 4 certification or cache failure.
int run_command(const hfl::RunConfig& cfg, const std::string& out, bool no_timing, bool quiet) {
    hfl::RunConfig resolved;
    try {
        resolved = hfl::resolve(cfg);
    } catch (const std::invalid_argument& e) {
        std::cerr << "hfl: " << e.what() << "\n";
        return 2;
    }
    hfl::Report rep;
    try {
        rep = hfl::run(resolved);
    } catch (const hfl::BudgetExceeded& e) {
        std::cerr << "hfl: budget exceeded: " << e.what() << "\n";
        return 3;
    } catch (const hfl::CertificationError& e) {
        std::cerr << "hfl: certification failed: " << e.what() << "\n";
        return 4;
    } catch (const hfl::CacheError& e) {
        std::cerr << "hfl: cache error: " << e.what() << "\n";
        return 4;
    } catch (const std::invalid_argument& e) {
        std::cerr << "hfl: " << e.what() << "\n";
        return 2;
    }
    if (!out.empty()) {
        std::ofstream f(out);
        if (!f) {
            std::cerr << "hfl: cannot write " << out << "\n";
            return 4;
        }
        f << hfl::run_document(resolved, rep, !no_timing).dump(2) << "\n";
    }
    if (!quiet) {
        if (resolved.target == "iwahori") std::cout << hfl::factorization_table(rep);
        for (const auto& r : rep.records)
            if (!r.pass) std::cout << "FAIL " << r.id << ": " << r.witness << "\n";
    }
    std::cout << hfl::summary(rep) << "\n";
    return rep.ok() ? 0 : 1;
}

std::filesystem::path cache_dir_or_env(const std::string& dir) {
    if (!dir.empty()) return dir;
    if (const char* env = std::getenv("HFL_CACHE_DIR"); env && *env) return env;
    throw CLI::ValidationError("--cache-dir", "no cache directory given and HFL_CACHE_DIR is unset");
}

void print_entries(const std::vector<hfl::CacheEntry>& es) {
    for (const auto& e : es)
        std::cout << (e.ok ? "ok   " : "BAD  ") << e.kind << "  " << e.bytes << "  " << e.file
                  << (e.detail.empty() ? "" : "  " + e.detail) << "\n";
    std::cout << es.size() << " entries\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Harish-Chandra functor verification toolkit"};
    app.require_subcommand(1);

    hfl::RunConfig cfg;
    std::string out, cache_dir;
    bool no_timing = false, quiet = false;
    std::uint32_t p = 0;
    int ell = 0, n = 0;

    auto* run = app.add_subcommand("run", "run a verification target and report every check");
    run->add_option("--target", cfg.target, "sp4 | iwahori | functors | clifford | orbit | dat")
        ->check(CLI::IsMember(hfl::kTargets))
        ->required();
    auto* op = run->add_option("--p", p, "residue characteristic");
    auto* oell = run->add_option("--ell", ell, "exponent of the coefficient ring Z/p^ell");
    auto* on = run->add_option("--n", n, "matrix size for iwahori and functors");
    run->add_option("--budget-elems", cfg.budget_elems, "largest group enumerated")->capture_default_str();
    run->add_option("--budget-dim", cfg.budget_dim, "largest induced space built by pind")->capture_default_str();
    run->add_flag("--audit", cfg.audit, "test primitivity against every proper composition");
    run->add_option("--seed", cfg.seed, "seed for randomized orders")->capture_default_str();
    run->add_option("--cache-dir", cache_dir, "cache for groups and character tables (default $HFL_CACHE_DIR)");
    run->add_option("--out", out, "write the JSON report here");
    run->add_flag("--no-timing", no_timing, "omit timings from the JSON report");
    run->add_flag("-q,--quiet", quiet, "print only the summary");

    auto* cache = app.add_subcommand("cache", "inspect the group and table cache");
    cache->require_subcommand(1);
    cache->fallthrough();
    cache->add_option("--cache-dir", cache_dir, "cache directory (default $HFL_CACHE_DIR)");
    auto* list = cache->add_subcommand("list", "list cached files");
    auto* verify = cache->add_subcommand("verify", "check digests and quarantine corrupt files");
    auto* purge = cache->add_subcommand("purge", "delete every cached file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            if (*op) cfg.p = p;
            if (*oell) cfg.ell = ell;
            if (*on) cfg.n = n;
            if (!cache_dir.empty()) cfg.cache_dir = cache_dir;
            return run_command(cfg, out, no_timing, quiet);
        }
        auto dir = cache_dir_or_env(cache_dir);
        if (*list) print_entries(hfl::cache_list(dir));
        if (*verify) {
            auto es = hfl::cache_verify(dir);
            print_entries(es);
            for (const auto& e : es)
                if (!e.ok) return 1;
        }
        if (*purge) std::cout << hfl::cache_purge(dir) << " files removed\n";
        return 0;
    } catch (const CLI::Error& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "hfl: " << e.what() << "\n";
        return 4;
    }
}
