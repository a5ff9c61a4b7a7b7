#pragma once

#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "hfl/chartab.hpp"
#include "hfl/group.hpp"

namespace hfl {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

class RankAmbiguity : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Relative threshold and minimum singular-value gap used for every rank decision.
inline constexpr double kRankThreshold = 1e-9;
inline constexpr double kRankGap = 1e2;

/// Orthonormal basis of the column space of t (BDCSVD); throws RankAmbiguity on a small gap.
Mat image_basis(const Mat& t, double threshold = kRankThreshold, double gap = kRankGap);
Eigen::Index gap_checked_rank(const Mat& t, double threshold = kRankThreshold, double gap = kRankGap);
/// Orthonormal basis of the common kernel of the given matrices.
Mat common_kernel(const std::vector<Mat>& ms, Eigen::Index dim);

/// Unitary complex representation of an enumerated group.
class ModuleRep {
public:
    explicit ModuleRep(GroupPtr g) : group_(std::move(g)) {}
    virtual ~ModuleRep() = default;

    const GroupPtr& group() const { return group_; }
    virtual Eigen::Index dim() const = 0;
    /// out = rho(g) x
    virtual void apply(Index g, const Mat& x, Mat& out) const = 0;
    virtual Mat matrix(Index g) const;
    virtual cplx trace(Index g) const;
    /// acc += c rho(g)
    virtual void accumulate(Index g, cplx c, Mat& acc) const;

    Mat generator_matrix(std::size_t k) const { return matrix(group_->generator_indices()[k]); }

private:
    GroupPtr group_;
};
using ModulePtr = std::shared_ptr<const ModuleRep>;

/// Module given by one matrix per generator; element matrices evaluated along BFS words.
class MatrixModule : public ModuleRep {
public:
    MatrixModule(GroupPtr g, std::vector<Mat> generator_matrices);
    Eigen::Index dim() const override { return d_; }
    void apply(Index g, const Mat& x, Mat& out) const override;
    Mat matrix(Index g) const override;

private:
    Eigen::Index d_;
    std::vector<Mat> gens_;
    std::vector<Mat> table_;
};

/// Ind_H^G M in the function model f(hx) = h f(x), (g f)(x) = f(xg).
/// Blocks are indexed by right cosets H r_i; `to_m` maps H positions to positions in M's group
/// (the projection LU -> L for inflated inputs).
class InducedModule : public ModuleRep {
public:
    InducedModule(GroupPtr g, GroupPtr h, ModulePtr m, std::vector<Index> to_m);
    Eigen::Index dim() const override { return static_cast<Eigen::Index>(table_.index()) * dm_; }
    void apply(Index g, const Mat& x, Mat& out) const override;
    cplx trace(Index g) const override;
    void accumulate(Index g, cplx c, Mat& acc) const override;

    const CosetTable& cosets() const { return table_; }
    const GroupPtr& subgroup() const { return h_; }
    const ModulePtr& inducing() const { return m_; }
    Index project(Index h) const { return to_m_[h]; }
    /// For coset i and g: r_i g = h r_j; returns (j, position of h in the subgroup).
    std::pair<Index, Index> move(Index i, Index g) const;

private:
    GroupPtr h_;
    ModulePtr m_;
    std::vector<Index> to_m_;
    CosetTable table_;
    Eigen::Index dm_;
};

/// rho'(x) = rho(table[x]) for a map from a new group into M's group (restriction, inflation, conjugation).
class PullbackModule : public ModuleRep {
public:
    PullbackModule(GroupPtr g, ModulePtr m, std::vector<Index> table);
    Eigen::Index dim() const override { return m_->dim(); }
    void apply(Index g, const Mat& x, Mat& out) const override { m_->apply(table_[g], x, out); }
    cplx trace(Index g) const override { return m_->trace(table_[g]); }
    void accumulate(Index g, cplx c, Mat& acc) const override { m_->accumulate(table_[g], c, acc); }

private:
    ModulePtr m_;
    std::vector<Index> table_;
};

/// Q^* rho(g) Q on an invariant subspace with orthonormal basis Q.
class CompressedModule : public ModuleRep {
public:
    CompressedModule(ModulePtr parent, Mat q);
    Eigen::Index dim() const override { return q_.cols(); }
    void apply(Index g, const Mat& x, Mat& out) const override;
    const Mat& basis() const { return q_; }
    const ModulePtr& parent() const { return parent_; }

private:
    ModulePtr parent_;
    Mat q_;
};

/// Left regular module: g delta_x = delta_{gx}.
class RegularModule : public ModuleRep {
public:
    explicit RegularModule(GroupPtr g) : ModuleRep(std::move(g)) {}
    Eigen::Index dim() const override { return static_cast<Eigen::Index>(group()->order()); }
    void apply(Index g, const Mat& x, Mat& out) const override;
    cplx trace(Index g) const override { return g == 0 ? cplx(double(group()->order())) : cplx(0); }
    void accumulate(Index g, cplx c, Mat& acc) const override;
};

/// Permutation action on the right cosets H\G (columns indexed by cosets).
ModulePtr permutation_module(const GroupPtr& g, const GroupPtr& h);
ModulePtr trivial_module(const GroupPtr& g);
/// 1-dimensional module of a linear character.
ModulePtr linear_module(const Character& chi);
ModulePtr restrict_module(const ModulePtr& m, const GroupPtr& h);
/// Ad_x: module of `target` = x H x^{-1} with rho'(y) = rho(x^{-1} y x).
ModulePtr conjugate_module(const ModulePtr& m, const ZmodMatrix& x, const GroupPtr& target);
ModulePtr inflate_module(const ModulePtr& m, const GroupHom& hom);

/// Sparse element of the group algebra (counting measure).
struct GAElement {
    GroupPtr group;
    std::map<Index, cplx> coeff;

    static GAElement delta(const GroupPtr& g, Index x);
    /// e_H = (1/|H|) sum_{h in H} h for a subgroup given with its ambient embedding or by matrices.
    static GAElement average(const GroupPtr& g, const FiniteGroup& h);
    /// e_chi(x) = (deg chi / |G|) chi(x^{-1}).
    static GAElement isotypic(const Character& chi);

    GAElement operator*(const GAElement& o) const;
    GAElement operator+(const GAElement& o) const;
    GAElement scaled(cplx c) const;
    /// Largest coefficient difference.
    double distance(const GAElement& o) const;
};

Mat apply_element(const ModuleRep& m, Index g);
Mat apply_element(const ModuleRep& m, const GAElement& f);
/// e_H on M by direct summation over H (elements located in M's group).
Mat averaging_projector(const ModuleRep& m, const FiniteGroup& h);
/// Orthonormal basis of the H-fixed vectors, from the generators of H.
Mat fixed_space(const ModuleRep& m, const FiniteGroup& h);
Mat isotypic_projector(const ModuleRep& m, const Character& chi);

/// Traces at class representatives of the table's classes.
std::vector<cplx> class_traces(const ModuleRep& m, const ClassData& c);
/// Exact multiplicities of every irreducible.
std::vector<std::int64_t> decompose_module(const ModuleRep& m, const CharacterTable& t);
std::int64_t multiplicity(const ModuleRep& m, const CharacterTable& t, std::size_t k);
/// Exact character of the module.
Character module_character(const ModuleRep& m, const CharacterTable& t);

/// Compressed H-module on the image of t; t must commute with the H-action to 1e-8.
ModulePtr image_module(const ModulePtr& m, const Mat& t, const GroupPtr& h);

/// Realization of the k-th irreducible inside the regular module.
ModulePtr irreducible_module(const CharacterTable& t, std::size_t k);

/// Max deviation of the generator matrices from unitarity and of random word pairs from multiplicativity.
double representation_defect(const ModuleRep& m, int samples = 20, std::uint64_t seed = 1);

/// G = G1 x G2 embedded block-diagonally (sizes n1 + n2 = n).
struct ProductEmbedding {
    GroupPtr whole, left, right;
    int n1 = 0;
    Index combine(Index a, Index b) const;
    std::pair<Index, Index> split(Index g) const;
};
ProductEmbedding product_embedding(const GroupPtr& whole, const GroupPtr& left, const GroupPtr& right, int n1);
/// Character of the external tensor product.
Character tensor_character(const ProductEmbedding& e, const Character& a, const Character& b,
                           const ClassDataPtr& whole);
/// Irreducible factors (indices into the factor tables) with exact identity chi = a (x) b.
std::pair<std::size_t, std::size_t> tensor_factor(const ProductEmbedding& e, const Character& chi,
                                                  const CharacterTable& left, const CharacterTable& right);

}  // namespace hfl
