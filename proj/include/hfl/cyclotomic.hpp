#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace hfl {

/// Element of Z[zeta_m], stored as coefficients of 1, zeta, ..., zeta^{phi(m)-1}
/// (canonical remainder modulo the m-th cyclotomic polynomial).
class Cyclotomic {
public:
    Cyclotomic() : m_(1), c_{0} {}
    explicit Cyclotomic(std::int64_t v, int m = 1);

    static Cyclotomic zeta_power(int m, std::int64_t k);
    /// Sum_j a[j] zeta_m^j for a vector of length m (any representative).
    static Cyclotomic from_powers(int m, const std::vector<std::int64_t>& a);

    int conductor() const { return m_; }
    const std::vector<std::int64_t>& coeffs() const { return c_; }

    Cyclotomic lifted(int M) const;
    Cyclotomic conj() const;
    /// zeta -> zeta^k for k coprime to m.
    Cyclotomic galois(std::int64_t k) const;

    Cyclotomic operator+(const Cyclotomic& o) const;
    Cyclotomic operator-(const Cyclotomic& o) const;
    Cyclotomic operator*(const Cyclotomic& o) const;
    Cyclotomic operator-() const;
    Cyclotomic& operator+=(const Cyclotomic& o) { return *this = *this + o; }
    Cyclotomic scaled(std::int64_t k) const;
    /// Exact division by an integer; throws if some coefficient is not divisible.
    Cyclotomic divided(std::int64_t d) const;
    bool divisible_by(std::int64_t d) const;

    bool operator==(const Cyclotomic& o) const;
    bool operator!=(const Cyclotomic& o) const { return !(*this == o); }
    /// Lexicographic comparison on coefficients after lifting to a common conductor.
    bool lex_less(const Cyclotomic& o) const;

    bool is_zero() const;
    bool is_integer() const;
    std::int64_t to_integer() const;
    std::complex<double> to_complex() const;
    std::string to_string() const;

private:
    Cyclotomic(int m, std::vector<std::int64_t> c) : m_(m), c_(std::move(c)) {}
    static std::vector<std::int64_t> reduce(int m, std::vector<std::int64_t> poly);

    int m_;
    std::vector<std::int64_t> c_;
};

/// Integer coefficients of the m-th cyclotomic polynomial (monic, low degree first).
const std::vector<std::int64_t>& cyclotomic_polynomial(int m);
int euler_phi(int m);
int lcm_int(int a, int b);

}  // namespace hfl
