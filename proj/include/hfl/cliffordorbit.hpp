#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hfl/hcfun.hpp"

namespace hfl {

/// F_p-subspace of M_n(F_p) given by a basis; element i has base-p digits of i as coordinates.
struct LieSpace {
    std::string name;
    int n = 0;
    std::uint32_t p = 0;
    std::vector<ZmodMatrix> basis;

    std::size_t dim() const { return basis.size(); }
    std::size_t size() const;
    ZmodMatrix element(std::size_t i) const;
    bool contains(const ZmodMatrix& y) const;
};

/// Rank of the trace form (z, y) -> tr(zy) restricted to the space.
std::size_t pairing_rank(const LieSpace& s);

/// sp4(F_p) = {[[A, B], [C, -A^t]] : B, C symmetric} with its Siegel pieces.
LieSpace sp4_lie(std::uint32_t p);
/// diag(x, -x^t).
LieSpace siegel_levi_lie(std::uint32_t p);
LieSpace siegel_upper_lie(std::uint32_t p);
LieSpace siegel_lower_lie(std::uint32_t p);
/// diag(a, b, -a, -b).
LieSpace siegel_torus_lie(std::uint32_t p);
/// diag(x, -x^t) with x strictly upper (resp. lower) triangular.
LieSpace levi_upper_lie(std::uint32_t p);
LieSpace levi_lower_lie(std::uint32_t p);
LieSpace gl_lie(int n, std::uint32_t p);
LieSpace diagonal_lie(int n, std::uint32_t p);
LieSpace strict_triangular_lie(int n, std::uint32_t p, bool upper);

/// whole = upper + levi + lower as vector spaces.
struct KernelTriple {
    std::string name;
    LieSpace whole, upper, levi, lower;
};
KernelTriple sp4_kernel_triple(std::uint32_t p);
KernelTriple levi_kernel_triple(std::uint32_t p);
KernelTriple gl2_kernel_triple(std::uint32_t p);

/// 1 + p y with y lifted canonically; `modulus` must be p^2.
ZmodMatrix exp_congruence(const ZmodMatrix& y, std::uint32_t modulus);
/// (k - 1)/p reduced mod p for k in the first congruence kernel.
ZmodMatrix log_congruence(const ZmodMatrix& k);
/// exp of the space, generated by the exponentials of the basis (in basis order).
GroupPtr congruence_group(const LieSpace& s, std::uint32_t modulus);

/// zeta(a) = exp(2 pi i a / p), a read through its canonical lift.
cplx additive_character(std::uint32_t a, std::uint32_t p);

/// phi_y(exp z) = zeta(tr(z y)).
struct DualCharacter {
    ZmodMatrix y;
    std::uint32_t exponent(const ZmodMatrix& k) const;
    cplx operator()(const ZmodMatrix& k) const;
};
DualCharacter dual_character(const ZmodMatrix& y);
/// phi_y as a 1-dimensional module of a congruence group.
ModulePtr dual_module(const DualCharacter& phi, const GroupPtr& g0);

/// Exp bijectivity, additivity and equivariance under `action` (matrices mod p^2), pairing
/// nondegeneracy and injectivity plus equivariance of y -> phi_y, exhaustively over the space.
Report dual_bijectivity_check(const LieSpace& s, const std::vector<ZmodMatrix>& action, std::uint64_t seed = 1);

/// pind_0(phi_y) = phi_y on exp(whole) for every y in levi.
Report verify_orbit_diagram(const KernelTriple& k, std::uint32_t modulus);

/// Duality on g, l, d, gl2 and t, plus the three diagrams, at the given prime.
Report orbit_report(std::uint32_t p, std::uint64_t seed = 1);

/// Solutions of a m = b over Z/N with the free part set to zero, or nothing when inconsistent.
std::optional<std::vector<std::int64_t>> solve_mod(const std::vector<std::vector<std::int64_t>>& a,
                                                   const std::vector<std::int64_t>& b, std::int64_t N);

/// Every x in M_n(F_p) with x y = y x.
std::vector<ZmodMatrix> commutant_elements(const ZmodMatrix& y, std::size_t budget = 5'000'000);
/// Enumerated group whose element set is exactly `elems` (generators drawn in a seeded order).
GroupPtr group_from_elements(std::vector<ZmodMatrix> elems, int n, std::uint32_t modulus, std::uint64_t seed = 1);

/// Linear character of H(y) = {h in GL_n(Z/p^2) : h y = y h mod p} extending phi_y, with values
/// exp(2 pi i lambda / order).
struct LinearExtension {
    ZmodMatrix y;
    std::uint32_t modulus = 0;
    std::int64_t order = 1;
    /// Centralizer of y in GL_n(F_p); null for y = 0 (trivial extension).
    GroupPtr residue;
    /// lambda at the canonical lift of each element of `residue`.
    std::vector<std::int64_t> mu;
    /// lambda at the canonical lifts of the generators of `residue`.
    std::vector<std::int64_t> generator_values;

    std::int64_t exponent(const ZmodMatrix& h) const;
    cplx operator()(const ZmodMatrix& h) const;
};
LinearExtension linear_extension(const ZmodMatrix& y, std::uint32_t modulus, std::uint64_t seed = 1);

/// Symplectic lift to Z/modulus of a symplectic matrix mod p (one Hensel step, modulus = p^2).
ZmodMatrix symplectic_lift(const ZmodMatrix& g, std::uint32_t modulus);

/// Properties of phi'_y on G(y) inside Sp4(Z/p^2): extension of phi_y, triviality on U(y), V(y)
/// (and U'(y), V'(y) for y in d), and the same for Ad_g(phi'_y) at g.y for each g (mod p).
Report check_linear_extension(const LinearExtension& ext, const std::vector<ZmodMatrix>& transporters);

/// Linear character of an enumerated group with prescribed exponents mod base on some elements.
struct GroupCharacterSolution {
    std::int64_t order = 1;
    std::vector<std::int64_t> exponent;
};
std::optional<GroupCharacterSolution> extend_linear_character(
    const FiniteGroup& h, const std::vector<std::pair<Index, std::int64_t>>& prescribed, std::int64_t base);

/// G-orbit of a character of a normal subgroup.
std::vector<Character> character_orbit(const Character& phi, const FiniteGroup& g);

/// Image of the sum of e_phi' over the G-orbit of phi on N.
ModulePtr isotypic_block(const ModulePtr& n, const Character& phi);

/// Triple (U, L, V) of G with a normal subgroup G0 whose intersections decompose it; G/G0 is
/// realised by reduction mod p.
struct CliffordSetting {
    IwahoriTriple triple;
    GroupPtr G0;
    std::string name;
};
CliffordSetting gl2_torus_kernel_setting();

/// Compatibility of pind with the three Clifford statements, for every psi in Irr(L0).
Report verify_clifford_compat(const CliffordSetting& s);

}  // namespace hfl
