#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace hfl {

/// Residue class modulo p^ell.
class Zmod {
public:
    Zmod() = default;
    Zmod(std::int64_t v, std::uint32_t modulus);

    std::uint32_t value() const { return value_; }
    std::uint32_t modulus() const { return modulus_; }

    Zmod operator+(const Zmod& o) const;
    Zmod operator-(const Zmod& o) const;
    Zmod operator*(const Zmod& o) const;
    Zmod operator-() const;
    bool operator==(const Zmod& o) const = default;

    bool is_unit(std::uint32_t p) const { return value_ % p != 0; }
    Zmod inverse() const;

private:
    std::uint32_t value_ = 0;
    std::uint32_t modulus_ = 1;
};

/// Inverse of a unit modulo m (extended Euclid); throws if not a unit.
std::uint32_t inverse_mod(std::uint32_t a, std::uint32_t m);

/// Smallest prime dividing m (m a prime power in practice).
std::uint32_t prime_of(std::uint32_t modulus);

inline constexpr int kMaxMatrixSize = 4;

/// Square matrix over Z/m, n <= 4, row-major.
class ZmodMatrix {
public:
    ZmodMatrix() = default;
    ZmodMatrix(int n, std::uint32_t modulus);

    static ZmodMatrix identity(int n, std::uint32_t modulus);
    static ZmodMatrix from_rows(std::uint32_t modulus, std::initializer_list<std::initializer_list<std::int64_t>> rows);
    static ZmodMatrix from_entries(int n, std::uint32_t modulus, const std::vector<std::int64_t>& entries);

    int size() const { return n_; }
    std::uint32_t modulus() const { return m_; }

    std::uint32_t operator()(int i, int j) const { return a_[i * n_ + j]; }
    void set(int i, int j, std::int64_t v);

    ZmodMatrix operator*(const ZmodMatrix& o) const;
    ZmodMatrix operator+(const ZmodMatrix& o) const;
    ZmodMatrix operator-(const ZmodMatrix& o) const;
    ZmodMatrix operator-() const;
    ZmodMatrix scaled(std::int64_t c) const;
    bool operator==(const ZmodMatrix& o) const;
    bool operator!=(const ZmodMatrix& o) const { return !(*this == o); }
    bool operator<(const ZmodMatrix& o) const;

    ZmodMatrix transpose() const;
    std::uint32_t det() const;
    bool is_invertible() const;
    ZmodMatrix inverse() const;
    std::uint32_t trace() const;
    bool is_identity() const;
    bool is_zero() const;

    /// Entrywise reduction to a modulus dividing the current one.
    ZmodMatrix reduce(std::uint32_t new_modulus) const;
    /// Canonical lift of entries (0 <= a < m) read modulo a larger modulus.
    ZmodMatrix lift(std::uint32_t new_modulus) const;

    /// Mixed-radix key; integer order equals lexicographic order on entries.
    std::uint64_t key() const;
    static ZmodMatrix from_key(std::uint64_t key, int n, std::uint32_t modulus);
    /// Fixed-width little-endian byte string of entries.
    std::vector<std::uint8_t> encode() const;

    std::string to_string() const;

private:
    int n_ = 0;
    std::uint32_t m_ = 1;
    std::array<std::uint32_t, kMaxMatrixSize * kMaxMatrixSize> a_{};
};

/// Throws unless modulus^(n*n) fits a 64-bit key.
void check_key_width(int n, std::uint32_t modulus);

/// Block-diagonal matrix from two square blocks.
ZmodMatrix block_diag(const ZmodMatrix& a, const ZmodMatrix& b);
/// 2x2 block matrix [[a, b], [c, d]].
ZmodMatrix block_matrix(const ZmodMatrix& a, const ZmodMatrix& b, const ZmodMatrix& c, const ZmodMatrix& d);

}  // namespace hfl
