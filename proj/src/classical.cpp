#include "hfl/classical.hpp"

#include <stdexcept>

namespace hfl {

std::vector<std::uint32_t> units(std::uint32_t modulus) {
    std::uint32_t p = prime_of(modulus);
    std::vector<std::uint32_t> out;
    for (std::uint32_t a = 1; a < modulus; ++a)
        if (a % p) out.push_back(a);
    return out;
}

ZmodMatrix elementary(int n, std::uint32_t modulus, int i, int j, std::int64_t a) {
    ZmodMatrix m = ZmodMatrix::identity(n, modulus);
    m.set(i, j, m(i, j) + a);
    return m;
}

ZmodMatrix diagonal(std::uint32_t modulus, const std::vector<std::int64_t>& d) {
    ZmodMatrix m(static_cast<int>(d.size()), modulus);
    for (std::size_t i = 0; i < d.size(); ++i) m.set(int(i), int(i), d[i]);
    return m;
}

ZmodMatrix unit_matrix(int n, std::uint32_t modulus, int i, int j, std::int64_t a) {
    ZmodMatrix m(n, modulus);
    m.set(i, j, a);
    return m;
}

namespace {

std::vector<std::uint32_t> unit_generators(std::uint32_t modulus) {
    // greedy: add units until they generate the whole unit group
    std::vector<std::uint32_t> all = units(modulus), gens;
    std::vector<bool> reached(modulus, false);
    reached[1] = true;
    std::size_t count = 1;
    for (std::uint32_t u : all) {
        if (reached[u]) continue;
        gens.push_back(u);
        std::vector<std::uint32_t> frontier;
        for (std::uint32_t x = 0; x < modulus; ++x)
            if (reached[x]) frontier.push_back(x);
        for (std::size_t i = 0; i < frontier.size(); ++i)
            for (std::uint32_t g : gens) {
                std::uint32_t y = static_cast<std::uint32_t>(std::uint64_t(frontier[i]) * g % modulus);
                if (!reached[y]) {
                    reached[y] = true;
                    frontier.push_back(y);
                    ++count;
                }
            }
        if (count == all.size()) break;
    }
    return gens;
}

void add_torus(std::vector<ZmodMatrix>& out, int n, std::uint32_t modulus) {
    for (std::uint32_t u : unit_generators(modulus))
        for (int i = 0; i < n; ++i) {
            std::vector<std::int64_t> d(n, 1);
            d[i] = u;
            out.push_back(diagonal(modulus, d));
        }
}

}  // namespace

std::vector<ZmodMatrix> gl_generators(int n, std::uint32_t modulus) {
    std::vector<ZmodMatrix> out;
    for (std::uint32_t u : unit_generators(modulus)) {
        std::vector<std::int64_t> d(n, 1);
        d[0] = u;
        out.push_back(diagonal(modulus, d));
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) out.push_back(elementary(n, modulus, i, j, 1));
    return out;
}

std::vector<ZmodMatrix> borel_generators(int n, std::uint32_t modulus) {
    std::vector<ZmodMatrix> out;
    add_torus(out, n, modulus);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) out.push_back(elementary(n, modulus, i, j, 1));
    return out;
}

std::vector<ZmodMatrix> torus_generators(int n, std::uint32_t modulus) {
    std::vector<ZmodMatrix> out;
    add_torus(out, n, modulus);
    return out;
}

std::vector<ZmodMatrix> unipotent_generators(int n, std::uint32_t modulus, bool upper) {
    std::vector<ZmodMatrix> out;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            out.push_back(upper ? elementary(n, modulus, i, j, 1) : elementary(n, modulus, j, i, 1));
    return out;
}

std::vector<ZmodMatrix> congruence_kernel_generators(int n, std::uint32_t modulus) {
    std::uint32_t p = prime_of(modulus);
    std::vector<ZmodMatrix> out;
    if (p == modulus) return out;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out.push_back(elementary(n, modulus, i, j, p));
    return out;
}

std::vector<ZmodMatrix> iwahori_generators(int n, std::uint32_t modulus) {
    std::uint32_t p = prime_of(modulus);
    std::vector<ZmodMatrix> out;
    add_torus(out, n, modulus);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i < j) out.push_back(elementary(n, modulus, i, j, 1));
            if (i > j && p != modulus) out.push_back(elementary(n, modulus, i, j, p));
        }
    return out;
}

ZmodMatrix sp4_j(std::uint32_t modulus) {
    return ZmodMatrix::from_rows(modulus, {{0, 0, -1, 0}, {0, 0, 0, -1}, {1, 0, 0, 0}, {0, 1, 0, 0}});
}

bool is_symplectic(const ZmodMatrix& g) {
    if (g.size() != 4) return false;
    ZmodMatrix j = sp4_j(g.modulus());
    return g.transpose() * j * g == j;
}

ZmodMatrix siegel_levi(const ZmodMatrix& a) { return block_diag(a, a.inverse().transpose()); }

ZmodMatrix siegel_unipotent(const ZmodMatrix& m) {
    if (m != m.transpose()) throw std::invalid_argument("siegel_unipotent: block must be symmetric");
    std::uint32_t q = m.modulus();
    return block_matrix(ZmodMatrix::identity(2, q), m, ZmodMatrix(2, q), ZmodMatrix::identity(2, q));
}

Sp4Generators sp4_generators(std::uint32_t modulus) {
    std::uint32_t q = modulus;
    Sp4Generators s;
    for (const auto& a : gl_generators(2, q)) s.L.push_back(siegel_levi(a));
    for (const auto& m : {unit_matrix(2, q, 0, 0), unit_matrix(2, q, 1, 1),
                          unit_matrix(2, q, 0, 1) + unit_matrix(2, q, 1, 0)}) {
        s.U.push_back(siegel_unipotent(m));
        s.V.push_back(siegel_unipotent(m).transpose());
    }
    for (const auto& d : torus_generators(2, q)) s.D.push_back(siegel_levi(d));
    ZmodMatrix b = elementary(2, q, 0, 1, 1);
    s.Uprime.push_back(siegel_levi(b));
    s.Vprime.push_back(siegel_levi(b).transpose());
    s.G = s.L;
    s.G.insert(s.G.end(), s.U.begin(), s.U.end());
    s.G.insert(s.G.end(), s.V.begin(), s.V.end());
    s.sigma = ZmodMatrix::from_rows(q, {{0, -1}, {1, 0}});
    s.t = block_diag(s.sigma, s.sigma);
    s.s = block_matrix(ZmodMatrix(2, q), s.sigma, s.sigma.inverse(), ZmodMatrix(2, q));
    s.w = ZmodMatrix::from_rows(q, {{0, 0, -1, 0}, {0, 1, 0, 0}, {1, 0, 0, 0}, {0, 0, 0, 1}});
    s.j = sp4_j(q);
    return s;
}

}  // namespace hfl
