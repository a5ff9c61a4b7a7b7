#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hfl/hcfun.hpp"

namespace hfl {

/// Ordered tuple of positive integers; its blocks are consecutive intervals of {0, ..., n-1}.
using Composition = std::vector<int>;

/// All 2^{n-1} compositions of n in lexicographic order.
std::vector<Composition> compositions(int n);
int total(const Composition& a);
/// Block number of each position.
std::vector<int> block_of(const Composition& a);
/// Refinement order: every block of b is a union of blocks of a.
bool leq(const Composition& a, const Composition& b);
Composition meet(const Composition& a, const Composition& b);
Composition concat(const Composition& a, const Composition& b);
std::string to_string(const Composition& a);
/// Lattice laws of meet and leq on P_n and associativity/monotonicity of concat up to n.
Report lattice_report(int n);

struct IwahoriGroup;
using IwahoriPtr = std::shared_ptr<const IwahoriGroup>;
using CompositionPair = std::pair<Composition, Composition>;

/// I_n in GL_n(Z/p^ell) with its block subgroups, their triples and character tables.
struct IwahoriGroup {
    int n = 0, ell = 0;
    std::uint32_t p = 0, modulus = 0;
    GroupPtr I;
    std::vector<Composition> comps;
    /// I_alpha, U_alpha, V_alpha.
    std::map<Composition, GroupPtr> block, upper, lower;
    std::map<Composition, TablePtr> tables;
    std::map<Composition, std::vector<ModulePtr>> irreducibles;
    /// (U_alpha^beta, I_alpha, V_alpha^beta) inside I_beta for alpha <= beta.
    std::map<CompositionPair, IwahoriTriple> triples;
    std::map<CompositionPair, ContextPtr> contexts;
    /// I_alpha = I_{alpha_1} x I_{rest} for alpha with at least two blocks.
    std::map<Composition, ProductEmbedding> splits;
    /// Families of sizes 1 .. n-1.
    std::vector<IwahoriPtr> smaller;
    Report certificate;

    const IwahoriGroup& family(int m) const;
    const CharacterTable& table(const Composition& a) const { return *tables.at(a); }
    const FunctorContext& context(const Composition& a, const Composition& b) const { return *contexts.at({a, b}); }
    std::size_t irr_count() const { return tables.at({n})->size(); }
};

/// Throws BudgetExceeded when I_n has more than `budget` elements and CertificationError when a block
/// triple or a structural identity fails.
IwahoriPtr build_iwahori(int n, std::uint32_t p, int ell, std::optional<std::size_t> budget = std::nullopt);

/// |I_n| = (p-1)^n p^{n(n-1)/2} p^{n^2(ell-1)}.
std::uint64_t iwahori_order(int n, std::uint32_t p, int ell);

/// pres^b_a of a module of I_b and pind^b_a of a module of I_a; null output when the result is zero.
ModulePtr pres_module(const IwahoriGroup& g, const Composition& a, const Composition& b, const ModulePtr& m);
ModulePtr pind_module(const IwahoriGroup& g, const Composition& a, const Composition& b, const ModulePtr& m);
/// Exact character in the table of I_a (zero function for a null module).
Character character_of(const IwahoriGroup& g, const Composition& a, const ModulePtr& m);

/// {alpha : pres^n_alpha M_k != 0}; throws CertificationError if not closed under meet.
std::vector<Composition> support_set(const IwahoriGroup& g, std::size_t k);

/// pres^n_alpha M_k = 0 for the two-block compositions; `audit` tests every proper composition and
/// throws CertificationError if the two tests disagree.
bool is_primitive(const IwahoriGroup& g, std::size_t k, bool audit = false);
std::vector<std::size_t> primitive_irreducibles(const IwahoriGroup& g, bool audit = false);

/// Character of M_1 (x) ... (x) M_m on I_a, factors indexed in Irr(I_{a_i}).
Character tensor_product_character(const IwahoriGroup& g, const Composition& a, const std::vector<std::size_t>& factors);
/// Inverse of tensor_product_character for an irreducible of I_a.
std::vector<std::size_t> tensor_factors(const IwahoriGroup& g, const Composition& a, const Character& chi);

struct Factorization {
    std::size_t irreducible = 0;
    std::int64_t dim = 0;
    Composition alpha;
    /// Indices into Irr(I_{alpha_i}).
    std::vector<std::size_t> factors;
    std::vector<std::int64_t> factor_dims;
    std::vector<bool> primitive;
    std::vector<Composition> support;
    bool round_trip = false;

    bool operator==(const Factorization&) const = default;
};

/// alpha = min of the support set, pres^n_alpha M_k split into tensor factors, each certified primitive,
/// and pind^n_alpha of the product compared with M_k.  Throws CertificationError on any failure.
Factorization primitive_factorize(const IwahoriGroup& g, std::size_t k, bool audit = false);

struct RiResult {
    bool pass = false;
    bool vanishes = false;
    /// pres^n_b pind^n_a M and pind^b_{a^b} pres^a_{a^b} M on I_b.
    Character lhs, rhs;
};
/// Restriction-induction identity for the k-th irreducible of I_a.
RiResult verify_ri(const IwahoriGroup& g, const Composition& a, const Composition& b, std::size_t k);

/// Support sets, factorization of every irreducible (with uniqueness and bijectivity) and the
/// factorization table in the "factorization" record.
Report factorization_report(const IwahoriGroup& g, bool audit = false);
/// Every (a, b, M).
Report ri_report(const IwahoriGroup& g);
/// |Irr(I_n)| = sum over compositions of prod |Prim(I_{a_i})| and injectivity of the product map.
Report grothendieck_check(const IwahoriGroup& g, bool audit = false);
/// pind preserves irreducibility, transitivity in stages, and compatibility with concatenation.
Report product_report(const IwahoriGroup& g);
/// verify_functor_properties and verify_actual_decomposition_properties on every triple with a < b.
Report functor_suite_report(const IwahoriGroup& g);

/// Certificate, lattice, factorization, restriction-induction, counting and product checks.
Report iwahori_report(int n, std::uint32_t p, int ell, bool audit = false,
                      std::optional<std::size_t> budget = std::nullopt);

}  // namespace hfl
