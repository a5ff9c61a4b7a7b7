#pragma once

#include <cstdint>
#include <vector>

#include "hfl/zmod.hpp"

namespace hfl {

/// Units of Z/m in increasing order.
std::vector<std::uint32_t> units(std::uint32_t modulus);

/// I + a E_ij.
ZmodMatrix elementary(int n, std::uint32_t modulus, int i, int j, std::int64_t a);
ZmodMatrix diagonal(std::uint32_t modulus, const std::vector<std::int64_t>& d);
/// Matrix with a single nonzero entry.
ZmodMatrix unit_matrix(int n, std::uint32_t modulus, int i, int j, std::int64_t a = 1);

std::vector<ZmodMatrix> gl_generators(int n, std::uint32_t modulus);
std::vector<ZmodMatrix> borel_generators(int n, std::uint32_t modulus);
std::vector<ZmodMatrix> torus_generators(int n, std::uint32_t modulus);
/// Upper (or lower) unitriangular matrices.
std::vector<ZmodMatrix> unipotent_generators(int n, std::uint32_t modulus, bool upper = true);
/// Kernel of reduction to the residue field: I + p E_ij.
std::vector<ZmodMatrix> congruence_kernel_generators(int n, std::uint32_t modulus);
/// Upper triangular modulo p: diagonal units, E_ij(1) above and E_ij(p) below the diagonal.
std::vector<ZmodMatrix> iwahori_generators(int n, std::uint32_t modulus);

/// j = [[0, -1], [1, 0]] in 2x2 blocks.
ZmodMatrix sp4_j(std::uint32_t modulus);
bool is_symplectic(const ZmodMatrix& g);
/// diag(a, a^{-t}).
ZmodMatrix siegel_levi(const ZmodMatrix& a);
/// [[1, m], [0, 1]] for symmetric m.
ZmodMatrix siegel_unipotent(const ZmodMatrix& m);

struct Sp4Generators {
    std::vector<ZmodMatrix> G, L, U, V, D, Uprime, Vprime;
    ZmodMatrix sigma, s, t, w, j;
};
Sp4Generators sp4_generators(std::uint32_t modulus);

}  // namespace hfl
