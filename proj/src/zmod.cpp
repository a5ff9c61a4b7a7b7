#include "hfl/zmod.hpp"

#include <sstream>

namespace hfl {

namespace {

std::uint32_t norm(std::int64_t v, std::uint32_t m) {
    std::int64_t r = v % static_cast<std::int64_t>(m);
    if (r < 0) r += m;
    return static_cast<std::uint32_t>(r);
}

std::int64_t det_int(const std::int64_t* a, int n) {
    if (n == 1) return a[0];
    if (n == 2) return a[0] * a[3] - a[1] * a[2];
    std::int64_t sub[16];
    std::int64_t d = 0;
    for (int c = 0; c < n; ++c) {
        int k = 0;
        for (int i = 1; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (j != c) sub[k++] = a[i * n + j];
        std::int64_t m = det_int(sub, n - 1);
        d += ((c % 2) ? -1 : 1) * a[c] * m;
    }
    return d;
}

}  // namespace

Zmod::Zmod(std::int64_t v, std::uint32_t modulus) : value_(norm(v, modulus)), modulus_(modulus) {}

Zmod Zmod::operator+(const Zmod& o) const { return Zmod(std::int64_t(value_) + o.value_, modulus_); }
Zmod Zmod::operator-(const Zmod& o) const { return Zmod(std::int64_t(value_) - o.value_, modulus_); }
Zmod Zmod::operator*(const Zmod& o) const { return Zmod(std::int64_t(value_) * o.value_, modulus_); }
Zmod Zmod::operator-() const { return Zmod(-std::int64_t(value_), modulus_); }
Zmod Zmod::inverse() const { return Zmod(inverse_mod(value_, modulus_), modulus_); }

std::uint32_t inverse_mod(std::uint32_t a, std::uint32_t m) {
    std::int64_t t = 0, nt = 1, r = m, nr = a % m;
    while (nr != 0) {
        std::int64_t q = r / nr;
        std::int64_t tmp = t - q * nt;
        t = nt;
        nt = tmp;
        tmp = r - q * nr;
        r = nr;
        nr = tmp;
    }
    if (r != 1) throw std::domain_error("inverse_mod: not a unit");
    return norm(t, m);
}

std::uint32_t prime_of(std::uint32_t modulus) {
    if (modulus < 2) throw std::invalid_argument("prime_of: modulus < 2");
    for (std::uint32_t d = 2; d * d <= modulus; ++d)
        if (modulus % d == 0) return d;
    return modulus;
}

void check_key_width(int n, std::uint32_t modulus) {
    long double cap = 1;
    for (int i = 0; i < n * n; ++i) cap *= modulus;
    if (cap >= 18446744073709551615.0L)
        throw std::invalid_argument("matrix too large for 64-bit canonical key");
}

ZmodMatrix::ZmodMatrix(int n, std::uint32_t modulus) : n_(n), m_(modulus) {
    if (n < 1 || n > kMaxMatrixSize) throw std::invalid_argument("ZmodMatrix: size out of range");
    if (modulus < 2) throw std::invalid_argument("ZmodMatrix: modulus < 2");
}

ZmodMatrix ZmodMatrix::identity(int n, std::uint32_t modulus) {
    ZmodMatrix r(n, modulus);
    for (int i = 0; i < n; ++i) r.a_[i * n + i] = 1;
    return r;
}

ZmodMatrix ZmodMatrix::from_rows(std::uint32_t modulus,
                                 std::initializer_list<std::initializer_list<std::int64_t>> rows) {
    int n = static_cast<int>(rows.size());
    ZmodMatrix r(n, modulus);
    int i = 0;
    for (const auto& row : rows) {
        if (static_cast<int>(row.size()) != n) throw std::invalid_argument("from_rows: not square");
        int j = 0;
        for (auto v : row) r.set(i, j++, v);
        ++i;
    }
    return r;
}

ZmodMatrix ZmodMatrix::from_entries(int n, std::uint32_t modulus, const std::vector<std::int64_t>& e) {
    if (static_cast<int>(e.size()) != n * n) throw std::invalid_argument("from_entries: size");
    ZmodMatrix r(n, modulus);
    for (int i = 0; i < n * n; ++i) r.a_[i] = norm(e[i], modulus);
    return r;
}

void ZmodMatrix::set(int i, int j, std::int64_t v) { a_[i * n_ + j] = norm(v, m_); }

ZmodMatrix ZmodMatrix::operator*(const ZmodMatrix& o) const {
    ZmodMatrix r(n_, m_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) {
            std::uint64_t s = 0;
            for (int k = 0; k < n_; ++k) s += std::uint64_t(a_[i * n_ + k]) * o.a_[k * n_ + j];
            r.a_[i * n_ + j] = static_cast<std::uint32_t>(s % m_);
        }
    return r;
}

ZmodMatrix ZmodMatrix::operator+(const ZmodMatrix& o) const {
    ZmodMatrix r(n_, m_);
    for (int i = 0; i < n_ * n_; ++i) r.a_[i] = (a_[i] + o.a_[i]) % m_;
    return r;
}

ZmodMatrix ZmodMatrix::operator-(const ZmodMatrix& o) const {
    ZmodMatrix r(n_, m_);
    for (int i = 0; i < n_ * n_; ++i) r.a_[i] = (a_[i] + m_ - o.a_[i]) % m_;
    return r;
}

ZmodMatrix ZmodMatrix::operator-() const {
    ZmodMatrix r(n_, m_);
    for (int i = 0; i < n_ * n_; ++i) r.a_[i] = (m_ - a_[i]) % m_;
    return r;
}

ZmodMatrix ZmodMatrix::scaled(std::int64_t c) const {
    ZmodMatrix r(n_, m_);
    std::uint32_t cc = norm(c, m_);
    for (int i = 0; i < n_ * n_; ++i) r.a_[i] = static_cast<std::uint32_t>(std::uint64_t(a_[i]) * cc % m_);
    return r;
}

bool ZmodMatrix::operator==(const ZmodMatrix& o) const {
    if (n_ != o.n_ || m_ != o.m_) return false;
    for (int i = 0; i < n_ * n_; ++i)
        if (a_[i] != o.a_[i]) return false;
    return true;
}

bool ZmodMatrix::operator<(const ZmodMatrix& o) const {
    for (int i = 0; i < n_ * n_; ++i)
        if (a_[i] != o.a_[i]) return a_[i] < o.a_[i];
    return false;
}

ZmodMatrix ZmodMatrix::transpose() const {
    ZmodMatrix r(n_, m_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) r.a_[j * n_ + i] = a_[i * n_ + j];
    return r;
}

std::uint32_t ZmodMatrix::det() const {
    std::int64_t e[16];
    for (int i = 0; i < n_ * n_; ++i) e[i] = a_[i];
    return norm(det_int(e, n_), m_);
}

bool ZmodMatrix::is_invertible() const { return det() % prime_of(m_) != 0; }

ZmodMatrix ZmodMatrix::inverse() const {
    std::uint32_t d = det();
    if (d % prime_of(m_) == 0) throw std::domain_error("ZmodMatrix::inverse: singular");
    std::uint32_t dinv = inverse_mod(d, m_);
    ZmodMatrix r(n_, m_);
    if (n_ == 1) {
        r.a_[0] = dinv;
        return r;
    }
    std::int64_t sub[16];
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) {
            int k = 0;
            for (int a = 0; a < n_; ++a)
                for (int b = 0; b < n_; ++b)
                    if (a != i && b != j) sub[k++] = a_[a * n_ + b];
            std::int64_t c = det_int(sub, n_ - 1) * (((i + j) % 2) ? -1 : 1);
            // adjugate is the transposed cofactor matrix
            r.a_[j * n_ + i] = static_cast<std::uint32_t>(std::uint64_t(norm(c, m_)) * dinv % m_);
        }
    return r;
}

std::uint32_t ZmodMatrix::trace() const {
    std::uint64_t s = 0;
    for (int i = 0; i < n_; ++i) s += a_[i * n_ + i];
    return static_cast<std::uint32_t>(s % m_);
}

bool ZmodMatrix::is_identity() const { return *this == identity(n_, m_); }

bool ZmodMatrix::is_zero() const {
    for (int i = 0; i < n_ * n_; ++i)
        if (a_[i]) return false;
    return true;
}

ZmodMatrix ZmodMatrix::reduce(std::uint32_t new_modulus) const {
    if (m_ % new_modulus != 0) throw std::invalid_argument("reduce: modulus does not divide");
    ZmodMatrix r(n_, new_modulus);
    for (int i = 0; i < n_ * n_; ++i) r.a_[i] = a_[i] % new_modulus;
    return r;
}

ZmodMatrix ZmodMatrix::lift(std::uint32_t new_modulus) const {
    if (new_modulus % m_ != 0) throw std::invalid_argument("lift: modulus does not divide");
    ZmodMatrix r(n_, new_modulus);
    for (int i = 0; i < n_ * n_; ++i) r.a_[i] = a_[i];
    return r;
}

std::uint64_t ZmodMatrix::key() const {
    std::uint64_t k = 0;
    for (int i = 0; i < n_ * n_; ++i) k = k * m_ + a_[i];
    return k;
}

ZmodMatrix ZmodMatrix::from_key(std::uint64_t key, int n, std::uint32_t modulus) {
    ZmodMatrix r(n, modulus);
    for (int i = n * n - 1; i >= 0; --i) {
        r.a_[i] = static_cast<std::uint32_t>(key % modulus);
        key /= modulus;
    }
    return r;
}

std::vector<std::uint8_t> ZmodMatrix::encode() const {
    int width = 1;
    while ((std::uint64_t(1) << (8 * width)) < m_) ++width;
    std::vector<std::uint8_t> out;
    out.reserve(n_ * n_ * width);
    for (int i = 0; i < n_ * n_; ++i)
        for (int b = 0; b < width; ++b) out.push_back(static_cast<std::uint8_t>((a_[i] >> (8 * b)) & 0xff));
    return out;
}

std::string ZmodMatrix::to_string() const {
    std::ostringstream os;
    os << '[';
    for (int i = 0; i < n_; ++i) {
        os << (i ? ",[" : "[");
        for (int j = 0; j < n_; ++j) os << (j ? "," : "") << a_[i * n_ + j];
        os << ']';
    }
    os << ']';
    return os.str();
}

ZmodMatrix block_diag(const ZmodMatrix& a, const ZmodMatrix& b) {
    int n = a.size() + b.size();
    ZmodMatrix r(n, a.modulus());
    for (int i = 0; i < a.size(); ++i)
        for (int j = 0; j < a.size(); ++j) r.set(i, j, a(i, j));
    for (int i = 0; i < b.size(); ++i)
        for (int j = 0; j < b.size(); ++j) r.set(a.size() + i, a.size() + j, b(i, j));
    return r;
}

ZmodMatrix block_matrix(const ZmodMatrix& a, const ZmodMatrix& b, const ZmodMatrix& c, const ZmodMatrix& d) {
    int h = a.size();
    ZmodMatrix r(2 * h, a.modulus());
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < h; ++j) {
            r.set(i, j, a(i, j));
            r.set(i, h + j, b(i, j));
            r.set(h + i, j, c(i, j));
            r.set(h + i, h + j, d(i, j));
        }
    return r;
}

}  // namespace hfl
