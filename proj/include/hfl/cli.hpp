#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hfl/hcfun.hpp"
#include "hfl/report.hpp"

namespace hfl {

inline const std::vector<std::string> kTargets = {"sp4", "iwahori", "functors", "clifford", "orbit", "dat"};

struct RunConfig {
    std::string target = "iwahori";
    /// Unset fields take the target defaults in resolve().
    std::optional<std::uint32_t> p;
    std::optional<int> ell, n;
    std::size_t budget_elems = kDefaultElementBudget;
    std::size_t budget_dim = kPindBudget;
    bool audit = false;
    std::uint64_t seed = 1;
    std::optional<std::filesystem::path> cache_dir;
};

/// Fills in target defaults and validates; throws std::invalid_argument.
RunConfig resolve(RunConfig c);
nlohmann::json config_json(const RunConfig& c);

/// H(GL2(Z/p^2)/B) constituents, and pind of the trivial torus character against the inflated
/// residue-field permutation character.
Report principal_series_report(std::uint32_t p);
/// Siegel triple of Sp4(F_p) with the Levi's own triple as the inner stage and the swapped pair.
FunctorSuiteInput sp4_siegel_suite(std::uint32_t p);
/// First congruence kernel of GL2(Z/p^2) with its unipotent and diagonal parts.
IwahoriTriple gl2_congruence_triple(std::uint32_t p);
/// Functor property suites on the I_n(Z/2^ell) block triples, the Sp4(F_p) Siegel triple and the
/// GL2(Z/p^2) kernel triple, plus the principal-series checks.
Report functors_report(int n, int ell, std::uint32_t p);

/// Runs the target with the configured budgets and cache directory.  Budget and cache errors
/// propagate before any report is produced.
Report run(const RunConfig& c);

/// {"schema", "config", "report"}; byte-identical for equal inputs when timing is excluded.
nlohmann::json run_document(const RunConfig& c, const Report& r, bool with_timing = true);

/// One row per irreducible from an Iwahori report: dimension, composition, factor dimensions, flags.
std::string factorization_table(const Report& r);

}  // namespace hfl
