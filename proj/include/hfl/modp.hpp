#pragma once

#include <cstdint>
#include <vector>

namespace hfl::modp {

using u64 = std::uint64_t;

u64 powmod(u64 a, u64 e, u64 q);
u64 invmod(u64 a, u64 q);
bool is_prime(u64 n);
u64 primitive_root(u64 q);

/// Dense matrix over F_q, row-major.
struct Mat {
    int rows = 0, cols = 0;
    std::vector<u64> a;
    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0) {}
    u64& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
    u64 operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }
};

/// Reduced row echelon form in place; returns pivot columns.
std::vector<int> rref(Mat& m, u64 q);
int rank(Mat m, u64 q);
/// Basis of {x : m x = 0}, one vector per free column.
std::vector<std::vector<u64>> nullspace(Mat m, u64 q);
/// Characteristic polynomial det(x I - m), low degree first.
std::vector<u64> charpoly(Mat m, u64 q);
/// Distinct roots in F_q of a polynomial (exhaustive evaluation).
std::vector<u64> roots(const std::vector<u64>& poly, u64 q);

}  // namespace hfl::modp
