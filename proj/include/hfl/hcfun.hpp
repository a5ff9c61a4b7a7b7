#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hfl/chartab.hpp"
#include "hfl/repmod.hpp"
#include "hfl/report.hpp"
#include "hfl/triple.hpp"

namespace hfl {

/// Largest [G:LU] * dim M accepted by pind.
inline constexpr std::size_t kPindBudget = 200'000;

/// pind budget used when a caller passes none; starts at kPindBudget.
std::size_t default_pind_budget();
void set_default_pind_budget(std::size_t budget);

/// Precomputed data for one pair (U, V) normalized by L inside G.
struct FunctorContext {
    GroupPtr G, U, L, V;
    std::string name;
    GroupPtr LU, LV;
    /// Positions in L of the L-part of each element of LU (resp. LV).
    std::vector<Index> lu_to_l, lv_to_l;
};
using ContextPtr = std::shared_ptr<const FunctorContext>;

ContextPtr functor_context(const IwahoriTriple& t);
/// Any pair normalized by L with L meeting U and V trivially (the asymmetric parahoric case included).
ContextPtr functor_context(GroupPtr G, GroupPtr U, GroupPtr L, GroupPtr V, std::string name = {});
/// Same data with U and V exchanged.
ContextPtr swapped(const FunctorContext& c);

struct FunctorResult {
    ModulePtr input;
    ModulePtr output;
    std::optional<Character> character;
    std::string triple;
    std::string direction;
    /// Dimension of the ambient space the output was cut from.
    Eigen::Index ambient_dim = 0;
};

/// Ind_{LU}^G M with M inflated along LU -> L.
std::shared_ptr<const InducedModule> induced_from_lu(const FunctorContext& c, const ModulePtr& m);
std::shared_ptr<const InducedModule> induced_from_lv(const FunctorContext& c, const ModulePtr& m);
/// Matrix of J_V: Ind_{LU} M -> Ind_{LV} M, (J f)(g) = (1/|V|) sum_v f(vg).
Mat intertwiner(const FunctorContext& c, const InducedModule& from_lu, const InducedModule& to_lv);

FunctorResult pind(const FunctorContext& c, const ModulePtr& m, std::optional<std::size_t> budget = std::nullopt);
FunctorResult pind(const IwahoriTriple& t, const ModulePtr& m, std::optional<std::size_t> budget = std::nullopt);
FunctorResult pres(const FunctorContext& c, const ModulePtr& n);
FunctorResult pres(const IwahoriTriple& t, const ModulePtr& n);
/// pind_{U0,V}: the same intertwiner built from the pair (U0, V).
FunctorResult parahoric_pind(const GroupPtr& G, const GroupPtr& U0, const GroupPtr& L, const GroupPtr& V,
                             const ModulePtr& m, std::optional<std::size_t> budget = std::nullopt);

/// Fills in the exact character of the output.
FunctorResult& attach_character(FunctorResult& r, const CharacterTable& t);

/// rank(e_sigma e_U e_V on N) / deg sigma.
std::int64_t pres_multiplicity(const FunctorContext& c, const Character& sigma, const ModulePtr& n);

struct ZSpectrum {
    /// Nonzero eigenvalues of e_U e_V e_U, ascending.
    std::vector<double> eigenvalues;
    double max_excess = 0;
    double idempotent_defect = 0;
    bool ok() const { return max_excess <= 1e-8 && idempotent_defect <= 1e-8; }
    /// All eigenvalues equal to num/den within 1e-8.
    bool scalar(std::int64_t num, std::int64_t den) const;
};
ZSpectrum z_spectrum(const ModuleRep& n, const FiniteGroup& u, const FiniteGroup& v);

/// Dense group algebra arithmetic on C^|G| (counting measure).
using GAVector = std::vector<cplx>;
GAVector ga_dense(const GAElement& e, const GroupPtr& ambient);
GAVector ga_average(const GroupPtr& g, const FiniteGroup& h);
GAVector ga_isotypic(const Character& chi, const GroupPtr& ambient);
GAVector ga_product(const GroupPtr& g, const GAVector& a, const GAVector& b);

/// Module of G isomorphic to tau^multiplicity, or null when tau has neither U- nor V-fixed vectors.
/// Small groups use the regular module; large ones an isotypic block of some Ind_{LU}^G sigma or
/// Ind_{LV}^G sigma chosen at the character level.
struct Realization {
    ModulePtr module;
    std::int64_t multiplicity = 0;
};

class Realizer {
public:
    Realizer(ContextPtr c, TablePtr tG, TablePtr tL, std::size_t regular_limit = 5000);
    Realization operator()(std::size_t k) const;

private:
    ContextPtr c_;
    TablePtr tG_, tL_;
    bool regular_;
    /// Induced characters from LU then LV, one per irreducible of L.
    std::vector<Character> ind_u_, ind_v_;
};

struct QuotientData {
    IwahoriTriple quotient;
    std::shared_ptr<GroupHom> to_quotient;
};

struct FunctorSuiteInput {
    IwahoriTriple triple;
    TablePtr tG, tL;
    /// Second triples (U', L, V') with the same L, checked for equal outputs.
    std::vector<IwahoriTriple> compatible;
    std::optional<QuotientData> quotient;
    /// (X, H, Y) inside L for the stages property.
    std::optional<IwahoriTriple> inner;
    std::optional<std::size_t> budget;
};

Report verify_functor_properties(const FunctorSuiteInput& in);
Report verify_actual_decomposition_properties(const IwahoriTriple& t, const TablePtr& tG, const TablePtr& tL);

/// Runs f(i) for i in [0, n) on worker threads; the first exception is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f);

}  // namespace hfl
