#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hfl/zmod.hpp"

namespace hfl {

inline constexpr std::size_t kDefaultElementBudget = 10'000'000;

/// Element budget used when a caller passes none; starts at kDefaultElementBudget.
std::size_t default_element_budget();
void set_default_element_budget(std::size_t budget);

class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class FiniteGroup;
using GroupPtr = std::shared_ptr<const FiniteGroup>;

/// Fully enumerated matrix group over Z/p^ell.
///
/// Elements are stored by canonical key; the identity sits at index 0 and the
/// remaining elements follow in increasing key order.  Element i equals
/// element(parent(i)) * generator(step(i)) for a BFS tree of minimal depth.
class FiniteGroup {
public:
    using Index = std::uint32_t;

    static GroupPtr generate(const std::vector<ZmodMatrix>& gens, int n, std::uint32_t modulus,
                             std::optional<std::size_t> budget = std::nullopt);

    /// Rebuild from stored data (cache loader); validates closure under generators.
    static GroupPtr from_table(int n, std::uint32_t modulus, std::vector<ZmodMatrix> gens,
                               std::vector<std::uint64_t> keys, std::vector<Index> parent,
                               std::vector<std::uint8_t> step);

    int degree() const { return n_; }
    std::uint32_t modulus() const { return modulus_; }
    std::uint32_t prime() const { return p_; }
    int level() const { return ell_; }
    std::size_t order() const { return keys_.size(); }

    ZmodMatrix element(Index i) const;
    std::uint64_t key(Index i) const { return keys_[i]; }
    std::optional<Index> find_key(std::uint64_t k) const;
    std::optional<Index> find(const ZmodMatrix& m) const;
    Index index_of(const ZmodMatrix& m) const;
    bool contains(const ZmodMatrix& m) const { return find(m).has_value(); }

    Index mul(Index a, Index b) const;
    Index inv(Index a) const { return inverse_[a]; }
    /// g x g^{-1}
    Index conj(Index g, Index x) const { return mul(mul(g, x), inverse_[g]); }
    std::uint64_t element_order(Index a) const;

    const std::vector<ZmodMatrix>& generators() const { return gens_; }
    const std::vector<Index>& generator_indices() const { return gen_idx_; }
    Index parent(Index i) const { return parent_[i]; }
    int step(Index i) const { return step_[i]; }
    /// Generator indices w with element(i) = gens[w[0]] * gens[w[1]] * ...
    std::vector<int> word(Index i) const;

    std::uint64_t digest() const;
    const std::vector<std::uint64_t>& keys() const { return keys_; }
    const std::vector<Index>& parents() const { return parent_; }
    const std::vector<std::uint8_t>& steps() const { return step_; }

    /// Optional ambient group this one was built inside, with positions in it.
    GroupPtr ambient() const { return ambient_; }
    const std::vector<Index>& embedding() const { return embedding_; }

private:
    friend GroupPtr attach_ambient(GroupPtr h, GroupPtr g);
    FiniteGroup() = default;
    void finish();

    int n_ = 0;
    std::uint32_t modulus_ = 0;
    std::uint32_t p_ = 0;
    int ell_ = 0;
    std::vector<ZmodMatrix> gens_;
    std::vector<Index> gen_idx_;
    std::vector<std::uint64_t> keys_;
    std::vector<std::uint8_t> entries_;
    std::vector<Index> parent_;
    std::vector<std::uint8_t> step_;
    std::vector<Index> inverse_;
    GroupPtr ambient_;
    std::vector<Index> embedding_;
};

using Index = FiniteGroup::Index;

/// Positions of the elements of h inside g; throws if h is not contained in g.
std::vector<Index> embed(const FiniteGroup& h, const FiniteGroup& g);
/// Copy of h remembering g as ambient group.
GroupPtr attach_ambient(GroupPtr h, GroupPtr g);

GroupPtr subgroup_generated(const GroupPtr& g, const std::vector<ZmodMatrix>& gens);
GroupPtr subgroup_where(const GroupPtr& g, const std::function<bool(const ZmodMatrix&)>& pred);
GroupPtr subgroup_of_elements(const GroupPtr& g, const std::vector<Index>& elems);
GroupPtr intersect(const GroupPtr& a, const GroupPtr& b);
/// Subgroup generated by the union of two subgroups of g.
GroupPtr join(const GroupPtr& g, const GroupPtr& a, const GroupPtr& b);
/// x a x^{-1} for every a (x a matrix of matching size; result need not lie in a known group).
GroupPtr conjugate_group(const GroupPtr& a, const ZmodMatrix& x);

bool is_subgroup(const FiniteGroup& h, const FiniteGroup& g);
bool normalizes(const FiniteGroup& n, const FiniteGroup& h);
bool is_normal(const FiniteGroup& h, const FiniteGroup& g);
/// Number of distinct products a*b with a in A, b in B (all matrices).
std::size_t product_set_size(const FiniteGroup& a, const FiniteGroup& b);
bool elementwise_commute(const FiniteGroup& a, const FiniteGroup& b);

enum class Side { Left, Right };

/// Coset decomposition of g by a subgroup h.
/// Right cosets: x = h_part(x) * rep(coset_of(x)); left cosets: x = rep * h_part.
struct CosetTable {
    Side side = Side::Right;
    std::vector<Index> reps;
    std::vector<Index> coset_of;
    std::vector<Index> h_part;
    std::size_t index() const { return reps.size(); }
};

CosetTable coset_table(const FiniteGroup& g, const FiniteGroup& h, Side side = Side::Right);
std::vector<Index> coset_transversal(const FiniteGroup& g, const FiniteGroup& h, Side side = Side::Right);

struct DoubleCoset {
    Index rep;
    std::size_t size;
};
/// A \ G / B, representatives of least key (identity first).
std::vector<DoubleCoset> double_cosets(const FiniteGroup& a, const FiniteGroup& g, const FiniteGroup& b);
/// Double coset representatives of x inside the A,B-stable subset given by a mask on g.
std::vector<DoubleCoset> double_cosets_in(const FiniteGroup& a, const FiniteGroup& g, const FiniteGroup& b,
                                          const std::vector<bool>& subset);

struct ConjugacyClasses {
    std::vector<Index> reps;
    std::vector<std::size_t> sizes;
    std::vector<std::uint32_t> class_of;
    std::size_t count() const { return reps.size(); }
};
ConjugacyClasses conjugacy_classes(const FiniteGroup& g);

GroupPtr centralizer(const GroupPtr& g, const ZmodMatrix& x);
GroupPtr normalizer(const GroupPtr& g, const FiniteGroup& h);
/// Stabilizer of a point under an action given as a function (element, point) -> point.
GroupPtr stabilizer(const GroupPtr& g, const std::function<bool(const ZmodMatrix&)>& fixes);
/// Transporter {x in g : pred(x)} as a list of positions.
std::vector<Index> transporter(const FiniteGroup& g, const std::function<bool(const ZmodMatrix&)>& pred);

/// Homomorphism given by images of generators, tabulated over the whole source.
class GroupHom {
public:
    GroupHom(GroupPtr source, GroupPtr target, std::vector<Index> generator_images);
    /// Entrywise reduction of matrices; target modulus must divide the source modulus.
    static GroupHom reduction(GroupPtr source, GroupPtr target);

    const GroupPtr& source() const { return src_; }
    const GroupPtr& target() const { return tgt_; }
    Index operator()(Index x) const { return table_[x]; }
    GroupPtr kernel() const;
    bool surjective() const;

private:
    GroupPtr src_, tgt_;
    std::vector<Index> table_;
};

}  // namespace hfl
