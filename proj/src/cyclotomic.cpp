#include "hfl/cyclotomic.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace hfl {

namespace {

std::vector<std::int64_t> poly_divide_exact(std::vector<std::int64_t> num, const std::vector<std::int64_t>& den) {
    // den monic
    int dn = static_cast<int>(den.size()) - 1;
    int nn = static_cast<int>(num.size()) - 1;
    std::vector<std::int64_t> q(nn - dn + 1, 0);
    for (int i = nn; i >= dn; --i) {
        std::int64_t c = num[i];
        q[i - dn] = c;
        if (c == 0) continue;
        for (int t = 0; t <= dn; ++t) num[i - dn + t] -= c * den[t];
    }
    for (int i = 0; i < dn; ++i)
        if (num[i] != 0) throw std::logic_error("cyclotomic polynomial division not exact");
    return q;
}

}  // namespace

int lcm_int(int a, int b) { return a / std::gcd(a, b) * b; }

int euler_phi(int m) {
    int r = m, x = m;
    for (int d = 2; d * d <= x; ++d)
        if (x % d == 0) {
            while (x % d == 0) x /= d;
            r -= r / d;
        }
    if (x > 1) r -= r / x;
    return r;
}

const std::vector<std::int64_t>& cyclotomic_polynomial(int m) {
    static std::mutex mu;
    static std::map<int, std::vector<std::int64_t>> cache;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(m);
        if (it != cache.end()) return it->second;
    }
    std::vector<std::int64_t> p(m + 1, 0);
    p[0] = -1;
    p[m] = 1;
    for (int d = 1; d < m; ++d)
        if (m % d == 0) p = poly_divide_exact(p, cyclotomic_polynomial(d));
    std::lock_guard<std::mutex> lock(mu);
    return cache.emplace(m, std::move(p)).first->second;
}

std::vector<std::int64_t> Cyclotomic::reduce(int m, std::vector<std::int64_t> poly) {
    const auto& phi = cyclotomic_polynomial(m);
    int d = static_cast<int>(phi.size()) - 1;
    for (int i = static_cast<int>(poly.size()) - 1; i >= d; --i) {
        std::int64_t c = poly[i];
        if (c == 0) continue;
        for (int t = 0; t <= d; ++t) poly[i - d + t] -= c * phi[t];
    }
    poly.resize(d, 0);
    return poly;
}

Cyclotomic::Cyclotomic(std::int64_t v, int m) : m_(m), c_(euler_phi(m), 0) { c_[0] = v; }

Cyclotomic Cyclotomic::zeta_power(int m, std::int64_t k) {
    std::int64_t e = ((k % m) + m) % m;
    std::vector<std::int64_t> p(e + 1, 0);
    p[e] = 1;
    return Cyclotomic(m, reduce(m, std::move(p)));
}

Cyclotomic Cyclotomic::from_powers(int m, const std::vector<std::int64_t>& a) {
    return Cyclotomic(m, reduce(m, a));
}

Cyclotomic Cyclotomic::lifted(int M) const {
    if (M == m_) return *this;
    if (M % m_ != 0) throw std::invalid_argument("Cyclotomic::lifted: conductor does not divide");
    int f = M / m_;
    std::vector<std::int64_t> p(static_cast<std::size_t>(c_.size() > 0 ? (c_.size() - 1) * f + 1 : 1), 0);
    for (std::size_t j = 0; j < c_.size(); ++j) p[j * f] = c_[j];
    return Cyclotomic(M, reduce(M, std::move(p)));
}

Cyclotomic Cyclotomic::galois(std::int64_t k) const {
    std::vector<std::int64_t> p(m_, 0);
    for (std::size_t j = 0; j < c_.size(); ++j) {
        std::int64_t e = ((static_cast<std::int64_t>(j) * k) % m_ + m_) % m_;
        p[e] += c_[j];
    }
    return Cyclotomic(m_, reduce(m_, std::move(p)));
}

Cyclotomic Cyclotomic::conj() const { return galois(-1); }

Cyclotomic Cyclotomic::operator+(const Cyclotomic& o) const {
    if (m_ != o.m_) {
        int M = lcm_int(m_, o.m_);
        return lifted(M) + o.lifted(M);
    }
    Cyclotomic r = *this;
    for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] += o.c_[i];
    return r;
}

Cyclotomic Cyclotomic::operator-(const Cyclotomic& o) const { return *this + (-o); }

Cyclotomic Cyclotomic::operator-() const {
    Cyclotomic r = *this;
    for (auto& v : r.c_) v = -v;
    return r;
}

Cyclotomic Cyclotomic::operator*(const Cyclotomic& o) const {
    if (m_ != o.m_) {
        int M = lcm_int(m_, o.m_);
        return lifted(M) * o.lifted(M);
    }
    std::vector<std::int64_t> p(c_.size() + o.c_.size(), 0);
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        for (std::size_t j = 0; j < o.c_.size(); ++j) p[i + j] += c_[i] * o.c_[j];
    }
    return Cyclotomic(m_, reduce(m_, std::move(p)));
}

Cyclotomic Cyclotomic::scaled(std::int64_t k) const {
    Cyclotomic r = *this;
    for (auto& v : r.c_) v *= k;
    return r;
}

bool Cyclotomic::divisible_by(std::int64_t d) const {
    for (auto v : c_)
        if (v % d != 0) return false;
    return true;
}

Cyclotomic Cyclotomic::divided(std::int64_t d) const {
    if (!divisible_by(d)) throw std::domain_error("Cyclotomic::divided: not divisible by " + std::to_string(d));
    Cyclotomic r = *this;
    for (auto& v : r.c_) v /= d;
    return r;
}

bool Cyclotomic::operator==(const Cyclotomic& o) const {
    if (m_ != o.m_) {
        int M = lcm_int(m_, o.m_);
        return lifted(M).c_ == o.lifted(M).c_;
    }
    return c_ == o.c_;
}

bool Cyclotomic::lex_less(const Cyclotomic& o) const {
    if (m_ != o.m_) {
        int M = lcm_int(m_, o.m_);
        return lifted(M).lex_less(o.lifted(M));
    }
    return c_ < o.c_;
}

bool Cyclotomic::is_zero() const {
    for (auto v : c_)
        if (v) return false;
    return true;
}

bool Cyclotomic::is_integer() const {
    for (std::size_t i = 1; i < c_.size(); ++i)
        if (c_[i]) return false;
    return true;
}

std::int64_t Cyclotomic::to_integer() const {
    if (!is_integer()) throw std::domain_error("Cyclotomic::to_integer: not a rational integer: " + to_string());
    return c_.empty() ? 0 : c_[0];
}

std::complex<double> Cyclotomic::to_complex() const {
    long double re = 0, im = 0;
    const long double two_pi = 6.283185307179586476925286766559L;
    for (std::size_t j = 0; j < c_.size(); ++j) {
        if (!c_[j]) continue;
        long double a = two_pi * static_cast<long double>(j) / m_;
        re += c_[j] * std::cos(a);
        im += c_[j] * std::sin(a);
    }
    return {static_cast<double>(re), static_cast<double>(im)};
}

std::string Cyclotomic::to_string() const {
    std::ostringstream os;
    bool first = true;
    for (std::size_t j = 0; j < c_.size(); ++j) {
        if (!c_[j]) continue;
        if (!first) os << (c_[j] > 0 ? "+" : "");
        first = false;
        if (j == 0)
            os << c_[j];
        else {
            if (c_[j] == -1)
                os << "-";
            else if (c_[j] != 1)
                os << c_[j] << "*";
            os << "z" << m_ << "^" << j;
        }
    }
    if (first) os << "0";
    return os.str();
}

}  // namespace hfl
