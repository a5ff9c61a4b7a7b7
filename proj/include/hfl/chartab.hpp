#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hfl/cyclotomic.hpp"
#include "hfl/group.hpp"

namespace hfl {

/// Conjugacy classes plus the derived data character theory needs.
struct ClassData {
    GroupPtr group;
    ConjugacyClasses cc;
    std::vector<std::uint32_t> inverse_class;
    std::vector<std::uint64_t> rep_order;
    int exponent = 1;

    std::size_t count() const { return cc.count(); }
    std::size_t order() const { return group->order(); }
    std::uint32_t class_of(Index g) const { return cc.class_of[g]; }
    /// Class of g_k^j for the representative g_k.
    std::uint32_t power_class(std::uint32_t k, std::int64_t j) const;
    std::size_t centralizer_order(std::uint32_t k) const { return order() / cc.sizes[k]; }
};
using ClassDataPtr = std::shared_ptr<const ClassData>;

ClassDataPtr class_data(const GroupPtr& g);

/// Exact class function: one cyclotomic value per class.
struct ClassFunction {
    ClassDataPtr classes;
    std::vector<Cyclotomic> values;

    Cyclotomic degree() const { return values.at(0); }
    std::int64_t degree_int() const { return values.at(0).to_integer(); }
    Cyclotomic at(Index g) const { return values[classes->class_of(g)]; }
    ClassFunction operator+(const ClassFunction& o) const;
    ClassFunction operator-(const ClassFunction& o) const;
    ClassFunction operator*(const ClassFunction& o) const;
    ClassFunction scaled(std::int64_t k) const;
    ClassFunction conj() const;
    bool operator==(const ClassFunction& o) const;
    bool is_zero() const;
};
using Character = ClassFunction;

ClassFunction zero_function(const ClassDataPtr& c);
ClassFunction trivial_character(const ClassDataPtr& c);

/// Complete table of irreducible characters, ordered by degree then values.
struct CharacterTable {
    ClassDataPtr classes;
    std::vector<Character> irr;
    std::uint64_t auxiliary_prime = 0;

    std::size_t size() const { return irr.size(); }
    const Character& operator[](std::size_t i) const { return irr[i]; }
    std::size_t trivial_index() const;
    /// Index of an irreducible equal to chi, if any.
    std::optional<std::size_t> find(const ClassFunction& chi) const;
    /// Complex values as an (irr x classes) matrix, row-major.
    std::vector<std::complex<double>> numeric() const;
};
using TablePtr = std::shared_ptr<const CharacterTable>;

class CharacterTableError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Dixon-Schneider: class-multiplication eigenvectors modulo a prime q = 1 mod exponent,
/// q > 2 sqrt|G|, lifted to cyclotomic values.  Consults the cache directory when given.
TablePtr character_table(const GroupPtr& g, const std::optional<std::filesystem::path>& cache_dir = std::nullopt);
TablePtr character_table(const ClassDataPtr& c, const std::optional<std::filesystem::path>& cache_dir = std::nullopt);

/// (1/|G|) sum chi1(g) conj(chi2(g)), exact.
Cyclotomic inner_product_exact(const ClassFunction& a, const ClassFunction& b);
/// Same, required to be a rational integer.
std::int64_t inner_product(const ClassFunction& a, const ClassFunction& b);

/// Restriction to a subgroup h (matrices of h must lie in the group of chi).
ClassFunction restrict_to(const ClassFunction& chi, const ClassDataPtr& h);
/// Frobenius induction from a subgroup to g.
ClassFunction induce(const ClassFunction& chi, const ClassDataPtr& g);
/// Pullback along a homomorphism hom: source -> group of chi.
ClassFunction inflate(const ClassFunction& chi, const GroupHom& hom, const ClassDataPtr& source);
/// chi(x^{-1} h x) as a class function of x h x^{-1}-conjugate group `target`.
ClassFunction conjugate_function(const ClassFunction& chi, const ZmodMatrix& x, const ClassDataPtr& target);

std::vector<std::int64_t> decompose(const ClassFunction& chi, const CharacterTable& t);
ClassFunction from_multiplicities(const CharacterTable& t, const std::vector<std::int64_t>& m);

/// Permutation character of g on cosets of h.
ClassFunction permutation_character(const ClassDataPtr& g, const FiniteGroup& h);
ClassFunction regular_character(const ClassDataPtr& g);

/// Exact decomposition of numeric class values (traces at class representatives).
/// Throws if multiplicities are not integral within `tol` or reconstruction fails.
std::vector<std::int64_t> decompose_numeric(const std::vector<std::complex<double>>& traces, const CharacterTable& t,
                                            double tol = 1e-6);

/// Exact first and second orthogonality relations.
bool verify_orthogonality(const CharacterTable& t, std::string* why = nullptr);

}  // namespace hfl
