#include "hfl/modp.hpp"

#include <stdexcept>
#include <utility>

namespace hfl::modp {

u64 powmod(u64 a, u64 e, u64 q) {
    u64 r = 1 % q;
    a %= q;
    while (e) {
        if (e & 1) r = r * a % q;
        a = a * a % q;
        e >>= 1;
    }
    return r;
}

u64 invmod(u64 a, u64 q) {
    if (a % q == 0) throw std::domain_error("modp::invmod of zero");
    return powmod(a, q - 2, q);
}

bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

u64 primitive_root(u64 q) {
    std::vector<u64> factors;
    u64 x = q - 1;
    for (u64 d = 2; d * d <= x; ++d)
        if (x % d == 0) {
            factors.push_back(d);
            while (x % d == 0) x /= d;
        }
    if (x > 1) factors.push_back(x);
    for (u64 g = 2; g < q; ++g) {
        bool ok = true;
        for (u64 f : factors)
            if (powmod(g, (q - 1) / f, q) == 1) {
                ok = false;
                break;
            }
        if (ok) return g;
    }
    return 1;
}

std::vector<int> rref(Mat& m, u64 q) {
    std::vector<int> piv;
    int r = 0;
    for (int c = 0; c < m.cols && r < m.rows; ++c) {
        int p = -1;
        for (int i = r; i < m.rows; ++i)
            if (m(i, c)) {
                p = i;
                break;
            }
        if (p < 0) continue;
        if (p != r)
            for (int j = 0; j < m.cols; ++j) std::swap(m(p, j), m(r, j));
        u64 inv = invmod(m(r, c), q);
        for (int j = c; j < m.cols; ++j) m(r, j) = m(r, j) * inv % q;
        for (int i = 0; i < m.rows; ++i) {
            if (i == r || !m(i, c)) continue;
            u64 f = m(i, c);
            for (int j = c; j < m.cols; ++j) m(i, j) = (m(i, j) + (q - f) * m(r, j)) % q;
        }
        piv.push_back(c);
        ++r;
    }
    return piv;
}

int rank(Mat m, u64 q) { return static_cast<int>(rref(m, q).size()); }

std::vector<std::vector<u64>> nullspace(Mat m, u64 q) {
    std::vector<int> piv = rref(m, q);
    std::vector<bool> is_piv(m.cols, false);
    for (int c : piv) is_piv[c] = true;
    std::vector<std::vector<u64>> basis;
    for (int f = 0; f < m.cols; ++f) {
        if (is_piv[f]) continue;
        std::vector<u64> v(m.cols, 0);
        v[f] = 1;
        for (std::size_t i = 0; i < piv.size(); ++i) v[piv[i]] = (q - m(static_cast<int>(i), f)) % q;
        basis.push_back(std::move(v));
    }
    return basis;
}

std::vector<u64> charpoly(Mat h, u64 q) {
    int n = h.rows;
    // reduce to upper Hessenberg form by similarity
    for (int j = 0; j + 2 < n; ++j) {
        int p = -1;
        for (int i = j + 1; i < n; ++i)
            if (h(i, j)) {
                p = i;
                break;
            }
        if (p < 0) continue;
        if (p != j + 1) {
            for (int c = 0; c < n; ++c) std::swap(h(p, c), h(j + 1, c));
            for (int r = 0; r < n; ++r) std::swap(h(r, p), h(r, j + 1));
        }
        u64 inv = invmod(h(j + 1, j), q);
        for (int r = j + 2; r < n; ++r) {
            u64 u = h(r, j) * inv % q;
            if (!u) continue;
            for (int c = 0; c < n; ++c) h(r, c) = (h(r, c) + (q - u) * h(j + 1, c)) % q;
            for (int rr = 0; rr < n; ++rr) h(rr, j + 1) = (h(rr, j + 1) + u * h(rr, r)) % q;
        }
    }
    std::vector<std::vector<u64>> p(n + 1);
    p[0] = {1};
    for (int k = 0; k < n; ++k) {
        std::vector<u64> next(k + 2, 0);
        for (int i = 0; i <= k; ++i) {
            next[i + 1] = (next[i + 1] + p[k][i]) % q;
            next[i] = (next[i] + (q - h(k, k)) * p[k][i]) % q;
        }
        u64 prod = 1;
        for (int i = k - 1; i >= 0; --i) {
            prod = prod * h(i + 1, i) % q;
            u64 coef = prod * h(i, k) % q;
            if (!coef) continue;
            for (std::size_t t = 0; t < p[i].size(); ++t) next[t] = (next[t] + (q - coef) * p[i][t]) % q;
        }
        p[k + 1] = std::move(next);
    }
    return p[n];
}

std::vector<u64> roots(const std::vector<u64>& poly, u64 q) {
    std::vector<u64> out;
    for (u64 x = 0; x < q; ++x) {
        u64 v = 0;
        for (std::size_t i = poly.size(); i-- > 0;) v = (v * x + poly[i]) % q;
        if (v == 0) out.push_back(x);
    }
    return out;
}

}  // namespace hfl::modp
