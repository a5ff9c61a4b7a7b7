#include "hfl/cliffordorbit.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <unordered_set>

#include "hfl/classical.hpp"
#include "hfl/modp.hpp"

namespace hfl {

namespace {

std::int64_t pmod(std::int64_t a, std::int64_t m) {
    a %= m;
    return a < 0 ? a + m : a;
}

std::int64_t ipow(std::int64_t b, int e) {
    std::int64_t r = 1;
    while (e-- > 0) r *= b;
    return r;
}

std::int64_t inv_mod(std::int64_t a, std::int64_t m) { return std::int64_t(inverse_mod(std::uint32_t(pmod(a, m)), std::uint32_t(m))); }

modp::Mat flatten_rows(const std::vector<ZmodMatrix>& ms, int n) {
    modp::Mat m(int(ms.size()), n * n);
    for (std::size_t r = 0; r < ms.size(); ++r)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m(int(r), i * n + j) = ms[r](i, j);
    return m;
}

std::uint64_t element_order(const ZmodMatrix& g) {
    ZmodMatrix x = g;
    for (std::uint64_t k = 1; k <= 1'000'000; ++k) {
        if (x.is_identity()) return k;
        x = x * g;
    }
    throw std::logic_error("element_order: order too large");
}

std::string show(const ZmodMatrix& m) { return m.to_string(); }

// Number of times each generator occurs in the BFS word of every element.
std::vector<std::vector<std::int64_t>> word_counts(const FiniteGroup& h) {
    std::size_t c = h.generators().size();
    std::vector<std::vector<std::int64_t>> w(h.order());
    w[0].assign(c, 0);
    std::vector<Index> stack;
    for (Index i = 0; i < h.order(); ++i) {
        Index x = i;
        while (w[x].empty()) {
            stack.push_back(x);
            x = h.parent(x);
        }
        while (!stack.empty()) {
            Index y = stack.back();
            stack.pop_back();
            w[y] = w[h.parent(y)];
            ++w[y][std::size_t(h.step(y))];
        }
    }
    return w;
}

// Smith form over Z/p^k by full pivoting; m = Q z.
std::optional<std::vector<std::int64_t>> solve_prime_power(std::vector<std::vector<std::int64_t>> a,
                                                           std::vector<std::int64_t> b, std::int64_t p, int k,
                                                           std::size_t cols) {
    std::int64_t q = ipow(p, k);
    std::size_t rows = a.size();
    for (auto& r : a)
        for (auto& x : r) x = pmod(x, q);
    for (auto& x : b) x = pmod(x, q);
    auto val = [&](std::int64_t x) {
        if (x == 0) return k;
        int v = 0;
        while (x % p == 0) x /= p, ++v;
        return v;
    };
    std::vector<std::vector<std::int64_t>> Q(cols, std::vector<std::int64_t>(cols, 0));
    for (std::size_t i = 0; i < cols; ++i) Q[i][i] = 1;
    std::vector<int> pv;
    std::size_t rank = 0;
    for (; rank < std::min(rows, cols); ++rank) {
        int best = k;
        std::size_t bi = 0, bj = 0;
        for (std::size_t i = rank; i < rows && best > 0; ++i)
            for (std::size_t j = rank; j < cols; ++j) {
                int v = val(a[i][j]);
                if (v < best) best = v, bi = i, bj = j;
                if (best == 0) break;
            }
        if (best == k) break;
        std::swap(a[rank], a[bi]);
        std::swap(b[rank], b[bi]);
        if (bj != rank) {
            for (auto& r : a) std::swap(r[rank], r[bj]);
            for (auto& r : Q) std::swap(r[rank], r[bj]);
        }
        std::int64_t piv = ipow(p, best);
        std::int64_t u = inv_mod(a[rank][rank] / piv, q);
        for (auto& x : a[rank]) x = pmod(x * u, q);
        b[rank] = pmod(b[rank] * u, q);
        for (std::size_t i = rank + 1; i < rows; ++i) {
            std::int64_t f = a[i][rank] / piv;
            if (!f) continue;
            for (std::size_t j = rank; j < cols; ++j) a[i][j] = pmod(a[i][j] - f * a[rank][j], q);
            b[i] = pmod(b[i] - f * b[rank], q);
        }
        for (std::size_t j = rank + 1; j < cols; ++j) {
            std::int64_t f = a[rank][j] / piv;
            if (!f) continue;
            a[rank][j] = 0;
            for (auto& r : Q) r[j] = pmod(r[j] - f * r[rank], q);
        }
        pv.push_back(best);
    }
    for (std::size_t i = rank; i < rows; ++i)
        if (b[i] != 0) return std::nullopt;
    std::vector<std::int64_t> z(cols, 0);
    for (std::size_t i = 0; i < rank; ++i) {
        std::int64_t piv = ipow(p, pv[i]);
        if (b[i] % piv) return std::nullopt;
        z[i] = b[i] / piv;
    }
    std::vector<std::int64_t> m(cols, 0);
    for (std::size_t i = 0; i < cols; ++i) {
        std::int64_t s = 0;
        for (std::size_t j = 0; j < cols; ++j) s = pmod(s + Q[i][j] * z[j], q);
        m[i] = s;
    }
    return m;
}

ZmodMatrix unit(int n, std::uint32_t p, int i, int j) { return unit_matrix(n, p, i, j, 1); }

LieSpace make_space(std::string name, int n, std::uint32_t p, std::vector<ZmodMatrix> basis) {
    LieSpace s;
    s.name = std::move(name);
    s.n = n;
    s.p = p;
    s.basis = std::move(basis);
    return s;
}

ZmodMatrix siegel_block(const ZmodMatrix& x) {
    std::uint32_t p = x.modulus();
    return block_matrix(x, ZmodMatrix(2, p), ZmodMatrix(2, p), -x.transpose());
}

std::vector<ZmodMatrix> symmetric_basis(std::uint32_t p) {
    return {unit(2, p, 0, 0), unit(2, p, 1, 1), unit(2, p, 0, 1) + unit(2, p, 1, 0)};
}

// All symmetric 2x2 matrices mod q.
std::vector<ZmodMatrix> symmetric_all(std::uint32_t q) {
    std::vector<ZmodMatrix> out;
    for (std::int64_t a = 0; a < q; ++a)
        for (std::int64_t b = 0; b < q; ++b)
            for (std::int64_t c = 0; c < q; ++c)
                out.push_back(ZmodMatrix::from_entries(2, q, {a, b, b, c}));
    return out;
}

bool commutes_mod_p(const ZmodMatrix& g, const ZmodMatrix& y) {
    ZmodMatrix gb = g.reduce(y.modulus());
    return gb * y == y * gb;
}

}  // namespace

std::size_t LieSpace::size() const { return std::size_t(ipow(p, int(dim()))); }

ZmodMatrix LieSpace::element(std::size_t i) const {
    ZmodMatrix y(n, p);
    for (const auto& b : basis) {
        y = y + b.scaled(std::int64_t(i % p));
        i /= p;
    }
    return y;
}

bool LieSpace::contains(const ZmodMatrix& y) const {
    if (y.size() != n || y.modulus() != p) return false;
    auto rows = basis;
    int r0 = modp::rank(flatten_rows(rows, n), p);
    rows.push_back(y);
    return modp::rank(flatten_rows(rows, n), p) == r0;
}

std::size_t pairing_rank(const LieSpace& s) {
    modp::Mat g(int(s.dim()), int(s.dim()));
    for (std::size_t i = 0; i < s.dim(); ++i)
        for (std::size_t j = 0; j < s.dim(); ++j) g(int(i), int(j)) = (s.basis[i] * s.basis[j]).trace();
    return std::size_t(modp::rank(g, s.p));
}

LieSpace sp4_lie(std::uint32_t p) {
    std::vector<ZmodMatrix> b;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) b.push_back(siegel_block(unit(2, p, i, j)));
    ZmodMatrix z(2, p);
    for (const auto& s : symmetric_basis(p)) b.push_back(block_matrix(z, s, z, z));
    for (const auto& s : symmetric_basis(p)) b.push_back(block_matrix(z, z, s, z));
    return make_space("sp4", 4, p, std::move(b));
}

LieSpace siegel_levi_lie(std::uint32_t p) {
    std::vector<ZmodMatrix> b;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) b.push_back(siegel_block(unit(2, p, i, j)));
    return make_space("l", 4, p, std::move(b));
}

LieSpace siegel_upper_lie(std::uint32_t p) {
    std::vector<ZmodMatrix> b;
    ZmodMatrix z(2, p);
    for (const auto& s : symmetric_basis(p)) b.push_back(block_matrix(z, s, z, z));
    return make_space("u", 4, p, std::move(b));
}

LieSpace siegel_lower_lie(std::uint32_t p) {
    std::vector<ZmodMatrix> b;
    ZmodMatrix z(2, p);
    for (const auto& s : symmetric_basis(p)) b.push_back(block_matrix(z, z, s, z));
    return make_space("v", 4, p, std::move(b));
}

LieSpace siegel_torus_lie(std::uint32_t p) {
    return make_space("d", 4, p, {siegel_block(unit(2, p, 0, 0)), siegel_block(unit(2, p, 1, 1))});
}

LieSpace levi_upper_lie(std::uint32_t p) { return make_space("u'", 4, p, {siegel_block(unit(2, p, 0, 1))}); }
LieSpace levi_lower_lie(std::uint32_t p) { return make_space("v'", 4, p, {siegel_block(unit(2, p, 1, 0))}); }

LieSpace gl_lie(int n, std::uint32_t p) {
    std::vector<ZmodMatrix> b;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) b.push_back(unit(n, p, i, j));
    return make_space("gl" + std::to_string(n), n, p, std::move(b));
}

LieSpace diagonal_lie(int n, std::uint32_t p) {
    std::vector<ZmodMatrix> b;
    for (int i = 0; i < n; ++i) b.push_back(unit(n, p, i, i));
    return make_space("t", n, p, std::move(b));
}

LieSpace strict_triangular_lie(int n, std::uint32_t p, bool upper) {
    std::vector<ZmodMatrix> b;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) b.push_back(upper ? unit(n, p, i, j) : unit(n, p, j, i));
    return make_space(upper ? "n+" : "n-", n, p, std::move(b));
}

KernelTriple sp4_kernel_triple(std::uint32_t p) {
    return {"g>l", sp4_lie(p), siegel_upper_lie(p), siegel_levi_lie(p), siegel_lower_lie(p)};
}

KernelTriple levi_kernel_triple(std::uint32_t p) {
    return {"l>d", siegel_levi_lie(p), levi_upper_lie(p), siegel_torus_lie(p), levi_lower_lie(p)};
}

KernelTriple gl2_kernel_triple(std::uint32_t p) {
    return {"gl2>t", gl_lie(2, p), strict_triangular_lie(2, p, true), diagonal_lie(2, p),
            strict_triangular_lie(2, p, false)};
}

ZmodMatrix exp_congruence(const ZmodMatrix& y, std::uint32_t modulus) {
    std::uint32_t p = y.modulus();
    if (std::uint64_t(p) * p != modulus)
        throw std::invalid_argument("exp_congruence: only level 2 (modulus p^2) is supported");
    return ZmodMatrix::identity(y.size(), modulus) + y.lift(modulus).scaled(p);
}

ZmodMatrix log_congruence(const ZmodMatrix& k) {
    std::uint32_t q = k.modulus(), p = prime_of(q);
    ZmodMatrix x(k.size(), p);
    for (int i = 0; i < k.size(); ++i)
        for (int j = 0; j < k.size(); ++j) {
            std::int64_t v = std::int64_t(k(i, j)) - (i == j ? 1 : 0);
            v = pmod(v, q);
            if (v % p) throw std::invalid_argument("log_congruence: not in the congruence kernel");
            x.set(i, j, v / p);
        }
    return x;
}

GroupPtr congruence_group(const LieSpace& s, std::uint32_t modulus) {
    std::vector<ZmodMatrix> gens;
    for (const auto& b : s.basis) gens.push_back(exp_congruence(b, modulus));
    return FiniteGroup::generate(gens, s.n, modulus);
}

cplx additive_character(std::uint32_t a, std::uint32_t p) {
    return std::polar(1.0, 2.0 * std::numbers::pi * double(a % p) / double(p));
}

std::uint32_t DualCharacter::exponent(const ZmodMatrix& k) const { return (log_congruence(k) * y).trace(); }

cplx DualCharacter::operator()(const ZmodMatrix& k) const { return additive_character(exponent(k), y.modulus()); }

DualCharacter dual_character(const ZmodMatrix& y) { return DualCharacter{y}; }

ModulePtr dual_module(const DualCharacter& phi, const GroupPtr& g0) {
    std::vector<Mat> gens;
    for (const auto& g : g0->generators()) gens.push_back(Mat::Constant(1, 1, phi(g)));
    return std::make_shared<MatrixModule>(g0, std::move(gens));
}

Report dual_bijectivity_check(const LieSpace& s, const std::vector<ZmodMatrix>& action, std::uint64_t seed) {
    Report rep;
    std::uint32_t p = s.p, q = p * p;
    std::size_t size = s.size();
    std::vector<ZmodMatrix> pts(size);
    for (std::size_t i = 0; i < size; ++i) pts[i] = s.element(i);

    {
        Tally t(rep, "exp-bijective", "exp is a bijection onto the congruence kernel of the space");
        std::unordered_set<std::uint64_t> seen;
        for (const auto& y : pts) {
            ZmodMatrix k = exp_congruence(y, q);
            bool ok = k.reduce(p).is_identity() && log_congruence(k) == y && seen.insert(k.key()).second;
            t.check(ok, "y=" + show(y));
        }
        t.record().data = {{"space", s.name}, {"points", size}};
    }
    {
        Tally t(rep, "exp-additive", "exp(y + y') = exp(y) exp(y')");
        auto check = [&](const ZmodMatrix& a, const ZmodMatrix& b) {
            bool ok = exp_congruence(a + b, q) == exp_congruence(a, q) * exp_congruence(b, q) &&
                      (exp_congruence(a, q) * exp_congruence(-a, q)).is_identity();
            t.check(ok, "y=" + show(a) + " y'=" + show(b));
        };
        for (const auto& a : s.basis)
            for (const auto& b : s.basis) check(a, b);
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<std::size_t> pick(0, size - 1);
        for (int r = 0; r < 50; ++r) check(pts[pick(rng)], pts[pick(rng)]);
    }
    {
        Tally st(rep, "space-stable", "the space is stable under the conjugation action");
        Tally t(rep, "exp-equivariant", "g exp(y) g^-1 = exp(g.y)");
        for (const auto& g : action) {
            ZmodMatrix gb = g.reduce(p), gbi = gb.inverse(), gi = g.inverse();
            for (const auto& b : s.basis) st.check(s.contains(gb * b * gbi), "g=" + show(g));
            for (const auto& y : pts)
                t.check(g * exp_congruence(y, q) * gi == exp_congruence(gb * y * gbi, q), "g=" + show(g) + " y=" + show(y));
        }
    }
    {
        Tally t(rep, "pairing-nondegenerate", "the trace pairing is nondegenerate on the space");
        std::size_t r = pairing_rank(s);
        t.check(r == s.dim(), "rank " + std::to_string(r) + " of " + std::to_string(s.dim()));
        t.record().data = {{"zeta", "exp(2 pi i a / p)"}, {"p", p}};
    }
    std::vector<ZmodMatrix> kernel_gens;
    for (const auto& b : s.basis) kernel_gens.push_back(exp_congruence(b, q));
    {
        Tally t(rep, "dual-injective", "y -> phi_y is injective; with |space| = |Irr(kernel)| it is bijective");
        std::unordered_set<std::uint64_t> seen;
        for (const auto& y : pts) {
            auto phi = dual_character(y);
            std::uint64_t code = 0;
            for (const auto& k : kernel_gens) code = code * p + phi.exponent(k);
            t.check(seen.insert(code).second, "collision at y=" + show(y));
        }
        t.check(seen.size() == size, "image size");
        t.record().data = {{"points", size}, {"characters", size}};
    }
    {
        Tally t(rep, "dual-equivariant", "phi_{g.y} = Ad_g phi_y");
        for (const auto& g : action) {
            ZmodMatrix gb = g.reduce(p), gbi = gb.inverse(), gi = g.inverse();
            for (const auto& y : pts) {
                auto lhs = dual_character(gb * y * gbi);
                auto rhs = dual_character(y);
                bool ok = true;
                for (const auto& k : kernel_gens) ok = ok && lhs.exponent(k) == rhs.exponent(gi * k * g);
                t.check(ok, "g=" + show(g) + " y=" + show(y));
            }
        }
    }
    return rep;
}

Report verify_orbit_diagram(const KernelTriple& kt, std::uint32_t modulus) {
    Report rep;
    auto g0 = congruence_group(kt.whole, modulus);
    auto sub = [&](const LieSpace& s) {
        std::vector<ZmodMatrix> gens;
        for (const auto& b : s.basis) gens.push_back(exp_congruence(b, modulus));
        return subgroup_generated(g0, gens);
    };
    auto tri = certify_iwahori(sub(kt.upper), sub(kt.levi), sub(kt.lower), g0, nullptr, kt.name);
    {
        Tally t(rep, "kernel-actual", "the congruence kernels decompose as U0 L0 V0");
        t.check(tri.actual, "product map not onto");
        t.record().data = {{"kernel_order", g0->order()}};
    }
    auto ctx = functor_context(tri);
    std::size_t n = kt.levi.size();
    std::vector<std::string> fail(n);
    std::vector<std::uint64_t> code(n);
    parallel_for(n, [&](std::size_t i) {
        ZmodMatrix y = kt.levi.element(i);
        auto phi = dual_character(y);
        auto r = pind(*ctx, dual_module(phi, tri.L));
        if (r.output->dim() != 1) {
            fail[i] = "dim " + std::to_string(r.output->dim()) + " at y=" + show(y);
            return;
        }
        std::uint64_t c = 0;
        for (std::size_t k = 0; k < g0->generators().size(); ++k) {
            cplx v = r.output->matrix(g0->generator_indices()[k])(0, 0);
            cplx w = phi(g0->generators()[k]);
            if (std::abs(v - w) > 1e-9) {
                fail[i] = "value mismatch at y=" + show(y);
                return;
            }
            c = c * kt.whole.p + phi.exponent(g0->generators()[k]);
        }
        code[i] = c;
    });
    {
        Tally t(rep, "pind0-diagram", "pind_0(phi_y) = phi_y on the larger kernel");
        for (std::size_t i = 0; i < n; ++i) t.check(fail[i].empty(), fail[i]);
        t.record().data = {{"points", n}, {"from", kt.levi.name}, {"to", kt.whole.name}};
    }
    {
        Tally t(rep, "pind0-injective", "pind_0 is injective on characters of L0");
        std::set<std::uint64_t> s(code.begin(), code.end());
        t.check(s.size() == n, "only " + std::to_string(s.size()) + " distinct images");
    }
    return rep;
}

Report orbit_report(std::uint32_t p, std::uint64_t seed) {
    Report rep;
    std::uint32_t q = p * p;
    auto sp = sp4_generators(q);
    rep.merge(dual_bijectivity_check(sp4_lie(p), sp.G, seed), "dual/g");
    rep.merge(dual_bijectivity_check(siegel_levi_lie(p), sp.L, seed), "dual/l");
    rep.merge(dual_bijectivity_check(siegel_torus_lie(p), sp.D, seed), "dual/d");
    rep.merge(dual_bijectivity_check(gl_lie(2, p), gl_generators(2, q), seed), "dual/gl2");
    rep.merge(dual_bijectivity_check(diagonal_lie(2, p), torus_generators(2, q), seed), "dual/t");
    rep.merge(verify_orbit_diagram(sp4_kernel_triple(p), q), "diagram/g>l");
    rep.merge(verify_orbit_diagram(levi_kernel_triple(p), q), "diagram/l>d");
    rep.merge(verify_orbit_diagram(gl2_kernel_triple(p), q), "diagram/gl2>t");
    return rep;
}

std::optional<std::vector<std::int64_t>> solve_mod(const std::vector<std::vector<std::int64_t>>& a,
                                                   const std::vector<std::int64_t>& b, std::int64_t N) {
    if (N < 1) throw std::invalid_argument("solve_mod: modulus must be positive");
    if (a.size() != b.size()) throw std::invalid_argument("solve_mod: row count mismatch");
    std::size_t cols = a.empty() ? 0 : a[0].size();
    for (const auto& r : a)
        if (r.size() != cols) throw std::invalid_argument("solve_mod: ragged matrix");
    std::vector<std::int64_t> m(cols, 0);
    std::int64_t done = 1, rest = N;
    for (std::int64_t p = 2; rest > 1; ++p) {
        if (rest % p) continue;
        int k = 0;
        while (rest % p == 0) rest /= p, ++k;
        auto part = solve_prime_power(a, b, p, k, cols);
        if (!part) return std::nullopt;
        std::int64_t q = ipow(p, k);
        std::int64_t inv = done == 1 ? 0 : inv_mod(done % q, q);
        for (std::size_t i = 0; i < cols; ++i) {
            std::int64_t t = done == 1 ? (*part)[i] : pmod(((*part)[i] - m[i]) % q * inv, q);
            m[i] = done == 1 ? t : m[i] + done * t;
        }
        done *= q;
    }
    for (auto& x : m) x = pmod(x, N);
    return m;
}

namespace {

std::int64_t psi_exponent(const ZmodMatrix& k, const ZmodMatrix& y, std::int64_t order) {
    std::int64_t p = y.modulus();
    return pmod(std::int64_t((log_congruence(k) * y).trace()) * (order / p), order);
}

}  // namespace

std::int64_t LinearExtension::exponent(const ZmodMatrix& h) const {
    if (!residue) return 0;
    std::uint32_t p = y.modulus();
    auto idx = residue->find(h.reduce(p));
    if (!idx) throw std::invalid_argument("LinearExtension: element does not centralize y mod p");
    ZmodMatrix k = residue->element(*idx).lift(modulus).inverse() * h;
    return pmod(mu[*idx] + psi_exponent(k, y, order), order);
}

cplx LinearExtension::operator()(const ZmodMatrix& h) const {
    return std::polar(1.0, 2.0 * std::numbers::pi * double(exponent(h)) / double(order));
}

std::vector<ZmodMatrix> commutant_elements(const ZmodMatrix& y, std::size_t budget) {
    std::uint32_t p = y.modulus();
    int n = y.size();
    modp::Mat comm(n * n, n * n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            ZmodMatrix e = unit(n, p, a, b);
            ZmodMatrix c = e * y - y * e;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) comm(i * n + j, a * n + b) = c(i, j);
        }
    auto null = modp::nullspace(comm, p);
    std::size_t count = std::size_t(ipow(p, int(null.size())));
    if (count > budget) throw BudgetExceeded("commutant_elements: commutant too large to enumerate");
    std::vector<ZmodMatrix> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        std::vector<std::int64_t> e(std::size_t(n * n), 0);
        std::size_t r = i;
        for (const auto& v : null) {
            std::int64_t c = std::int64_t(r % p);
            r /= p;
            for (std::size_t k = 0; k < e.size(); ++k) e[k] += c * std::int64_t(v[k]);
        }
        out.push_back(ZmodMatrix::from_entries(n, p, e));
    }
    return out;
}

GroupPtr group_from_elements(std::vector<ZmodMatrix> elems, int n, std::uint32_t modulus, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::shuffle(elems.begin(), elems.end(), rng);
    std::vector<ZmodMatrix> gens;
    GroupPtr h = FiniteGroup::generate({}, n, modulus);
    for (const auto& x : elems) {
        if (h->order() == elems.size()) break;
        if (h->contains(x)) continue;
        gens.push_back(x);
        h = FiniteGroup::generate(gens, n, modulus);
    }
    if (h->order() != elems.size()) throw std::invalid_argument("group_from_elements: the elements do not form a group");
    return h;
}

LinearExtension linear_extension(const ZmodMatrix& y0, std::uint32_t modulus, std::uint64_t seed) {
    std::uint32_t p = prime_of(modulus);
    if (std::uint64_t(p) * p != modulus) throw std::invalid_argument("linear_extension: level must be 2");
    LinearExtension ext;
    ext.y = y0.reduce(p);
    ext.modulus = modulus;
    const ZmodMatrix& y = ext.y;
    int n = y.size();
    if (y.is_zero()) return ext;

    std::vector<ZmodMatrix> units;
    for (auto& x : commutant_elements(y, 5'000'000))
        if (x.is_invertible()) units.push_back(std::move(x));
    GroupPtr h = group_from_elements(units, n, p, seed);
    std::vector<ZmodMatrix> gens = h->generators();
    ext.residue = h;

    std::size_t c = gens.size();
    std::vector<ZmodMatrix> lifts;
    std::int64_t order = p;
    for (const auto& g : gens) {
        lifts.push_back(g.lift(modulus));
        order = std::lcm(order, std::int64_t(element_order(lifts.back())));
    }
    ext.order = order;

    std::vector<ZmodMatrix> s(h->order()), sinv(h->order());
    for (Index i = 0; i < h->order(); ++i) {
        s[i] = h->element(i).lift(modulus);
        sinv[i] = s[i].inverse();
    }
    // lambda(s(x)) = w(x).m + cst(x)
    auto w = word_counts(*h);
    std::vector<std::int64_t> cst(h->order(), 0);
    std::vector<bool> have(h->order(), false);
    have[0] = true;
    std::vector<Index> stack;
    for (Index i = 0; i < h->order(); ++i) {
        Index x = i;
        while (!have[x]) stack.push_back(x), x = h->parent(x);
        while (!stack.empty()) {
            Index z = stack.back();
            stack.pop_back();
            Index par = h->parent(z);
            ZmodMatrix k = sinv[z] * s[par] * lifts[std::size_t(h->step(z))];
            cst[z] = pmod(cst[par] - psi_exponent(k, y, order), order);
            have[z] = true;
        }
    }
    std::vector<std::vector<std::int64_t>> rows;
    std::vector<std::int64_t> rhs;
    const auto& gi = h->generator_indices();
    for (Index x = 0; x < h->order(); ++x)
        for (std::size_t i = 0; i < c; ++i) {
            Index j = h->mul(x, gi[i]);
            ZmodMatrix k = sinv[j] * s[x] * lifts[i];
            std::vector<std::int64_t> row(c);
            bool zero = true;
            for (std::size_t t = 0; t < c; ++t) {
                row[t] = w[x][t] + (t == i ? 1 : 0) - w[j][t];
                zero = zero && pmod(row[t], order) == 0;
            }
            std::int64_t r = pmod(cst[j] + psi_exponent(k, y, order) - cst[x], order);
            if (zero && r == 0) continue;
            rows.push_back(std::move(row));
            rhs.push_back(r);
        }
    auto m = solve_mod(rows, rhs, order);
    if (!m) throw std::runtime_error("linear_extension: phi_y has no linear extension to H(y)");
    ext.generator_values = *m;
    ext.mu.assign(h->order(), 0);
    for (Index x = 0; x < h->order(); ++x) {
        std::int64_t v = cst[x];
        for (std::size_t t = 0; t < c; ++t) v += w[x][t] * (*m)[t];
        ext.mu[x] = pmod(v, order);
    }
    for (Index x = 0; x < h->order(); ++x)
        for (std::size_t i = 0; i < c; ++i) {
            Index j = h->mul(x, gi[i]);
            ZmodMatrix k = sinv[j] * s[x] * lifts[i];
            if (pmod(ext.mu[x] + (*m)[i] - ext.mu[j] - psi_exponent(k, y, order), order) != 0)
                throw std::logic_error("linear_extension: solution violates a relation");
        }
    return ext;
}

ZmodMatrix symplectic_lift(const ZmodMatrix& g, std::uint32_t modulus) {
    std::uint32_t p = g.modulus();
    if (!is_symplectic(g)) throw std::invalid_argument("symplectic_lift: matrix is not symplectic mod p");
    if (std::uint64_t(p) * p != modulus) throw std::invalid_argument("symplectic_lift: modulus must be p^2");
    ZmodMatrix gl = g.lift(modulus);
    ZmodMatrix j = sp4_j(modulus);
    ZmodMatrix d = gl.transpose() * j * gl - j;
    ZmodMatrix e(4, p);
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) e.set(a, b, d(a, b) / p);
    ZmodMatrix x = (sp4_j(p) * e).scaled(inv_mod(2, p));
    ZmodMatrix r = gl * exp_congruence(x, modulus);
    if (!is_symplectic(r)) throw std::logic_error("symplectic_lift: correction failed");
    return r;
}

Report check_linear_extension(const LinearExtension& ext, const std::vector<ZmodMatrix>& transporters) {
    Report rep;
    std::uint32_t q = ext.modulus, p = ext.y.modulus();
    const ZmodMatrix& y = ext.y;
    auto levi = siegel_levi_lie(p);
    auto torus = siegel_torus_lie(p);
    std::vector<ZmodMatrix> U, V, Up, Vp, Lres;
    for (const auto& m : symmetric_all(q)) {
        U.push_back(siegel_unipotent(m));
        V.push_back(siegel_unipotent(m).transpose());
    }
    for (std::uint32_t a = 0; a < q; ++a) {
        Up.push_back(siegel_levi(elementary(2, q, 0, 1, a)));
        Vp.push_back(siegel_levi(elementary(2, q, 1, 0, a)));
    }
    auto gl2 = FiniteGroup::generate(gl_generators(2, p), 2, p);
    for (Index i = 0; i < gl2->order(); ++i) Lres.push_back(siegel_levi(gl2->element(i).lift(q)));
    auto kernel = sp4_lie(p);

    Tally ext_t(rep, "extends-phi", "phi'_z restricts to phi_z on the congruence kernel");
    Tally uv_t(rep, "trivial-on-U-V", "phi'_z is trivial on U(z) and V(z)");
    Tally d_t(rep, "trivial-on-U'-V'", "phi'_z is trivial on U'(z) and V'(z) for z in d");
    Tally tr_t(rep, "transport", "Ad_g phi'_y is well defined at g.y and has the same properties");
    ext_t.record().data = {{"y", show(y)}, {"order", ext.order}, {"generator_values", ext.generator_values},
                           {"residue_order", ext.residue ? ext.residue->order() : std::size_t(0)}};

    std::map<std::uint64_t, std::vector<std::pair<ZmodMatrix, std::int64_t>>> seen;
    std::vector<ZmodMatrix> points{ZmodMatrix::identity(4, p)};
    points.insert(points.end(), transporters.begin(), transporters.end());
    for (const auto& gb : points) {
        ZmodMatrix z = gb * y * gb.inverse();
        if (!levi.contains(z)) {
            tr_t.check(false, "g=" + show(gb) + " does not map y into l");
            continue;
        }
        ZmodMatrix g = symplectic_lift(gb, q), gi = g.inverse();
        auto lam = [&](const ZmodMatrix& x) { return ext.exponent(gi * x * g); };
        std::string at = " at z=" + show(z);
        for (const auto& b : kernel.basis) {
            ZmodMatrix k = exp_congruence(b, q);
            ext_t.check(lam(k) == psi_exponent(k, z, ext.order), "kernel generator" + at);
        }
        for (const auto* set : {&U, &V})
            for (const auto& u : *set)
                if (commutes_mod_p(u, z)) uv_t.check(lam(u) == 0, "u=" + show(u) + at);
        if (torus.contains(z))
            for (const auto* set : {&Up, &Vp})
                for (const auto& u : *set)
                    if (commutes_mod_p(u, z)) d_t.check(lam(u) == 0, "u=" + show(u) + at);
        // values on a fixed sample of G(z) must not depend on the transporter
        std::vector<std::pair<ZmodMatrix, std::int64_t>> sample;
        for (const auto& l : Lres)
            if (commutes_mod_p(l, z)) sample.emplace_back(l, lam(l));
        auto [it, fresh] = seen.emplace(z.key(), sample);
        if (!fresh)
            for (std::size_t i = 0; i < sample.size(); ++i)
                tr_t.check(it->second[i].second == sample[i].second, "transporters disagree" + at);
        tr_t.check(true, "");
    }
    return rep;
}

std::optional<GroupCharacterSolution> extend_linear_character(
    const FiniteGroup& h, const std::vector<std::pair<Index, std::int64_t>>& prescribed, std::int64_t base) {
    std::int64_t order = base;
    for (Index g : h.generator_indices()) order = std::lcm(order, std::int64_t(h.element_order(g)));
    std::size_t c = h.generators().size();
    auto w = word_counts(h);
    std::vector<std::vector<std::int64_t>> rows;
    std::vector<std::int64_t> rhs;
    const auto& gi = h.generator_indices();
    for (Index x = 0; x < h.order(); ++x)
        for (std::size_t i = 0; i < c; ++i) {
            Index j = h.mul(x, gi[i]);
            std::vector<std::int64_t> row(c);
            bool zero = true;
            for (std::size_t t = 0; t < c; ++t) {
                row[t] = w[x][t] + (t == i ? 1 : 0) - w[j][t];
                zero = zero && row[t] == 0;
            }
            if (zero) continue;
            rows.push_back(std::move(row));
            rhs.push_back(0);
        }
    for (const auto& [x, e] : prescribed) {
        rows.push_back(w[x]);
        rhs.push_back(pmod(e * (order / base), order));
    }
    auto m = solve_mod(rows, rhs, order);
    if (!m) return std::nullopt;
    GroupCharacterSolution sol;
    sol.order = order;
    sol.exponent.assign(h.order(), 0);
    for (Index x = 0; x < h.order(); ++x) {
        std::int64_t v = 0;
        for (std::size_t t = 0; t < c; ++t) v += w[x][t] * (*m)[t];
        sol.exponent[x] = pmod(v, order);
    }
    for (Index x = 0; x < h.order(); ++x)
        for (std::size_t i = 0; i < c; ++i)
            if (sol.exponent[h.mul(x, gi[i])] != pmod(sol.exponent[x] + (*m)[i], order))
                throw std::logic_error("extend_linear_character: solution is not multiplicative");
    return sol;
}

std::vector<Character> character_orbit(const Character& phi, const FiniteGroup& g) {
    std::vector<Character> orbit{phi};
    for (std::size_t i = 0; i < orbit.size(); ++i)
        for (const auto& x : g.generators()) {
            Character c = conjugate_function(orbit[i], x, phi.classes);
            if (std::find(orbit.begin(), orbit.end(), c) == orbit.end()) orbit.push_back(std::move(c));
        }
    return orbit;
}

ModulePtr isotypic_block(const ModulePtr& n, const Character& phi) {
    const auto& g = n->group();
    const auto& g0 = *phi.classes->group;
    auto orbit = character_orbit(phi, *g);
    auto pos = embed(g0, *g);
    double scale = double(phi.degree_int()) / double(g0.order());
    Mat proj = Mat::Zero(n->dim(), n->dim());
    for (Index k = 0; k < g0.order(); ++k) {
        cplx s = 0;
        for (const auto& o : orbit) s += std::conj(o.at(k).to_complex());
        if (std::abs(s) > 1e-12) n->accumulate(pos[k], s * scale, proj);
    }
    return image_module(n, proj, g);
}

CliffordSetting gl2_torus_kernel_setting() {
    const std::uint32_t q = 9;
    auto g = FiniteGroup::generate(gl_generators(2, q), 2, q);
    auto k1 = subgroup_generated(g, congruence_kernel_generators(2, q));
    auto u = subgroup_generated(g, {elementary(2, q, 0, 1, 1)});
    auto l = subgroup_generated(g, torus_generators(2, q));
    auto v = subgroup_generated(g, {elementary(2, q, 1, 0, 1)});
    return {certify_iwahori(u, l, v, g, k1, "gl2-torus"), k1, "gl2-torus-kernel"};
}

namespace {

bool lies_over(const Character& chi, const Character& psi) {
    return inner_product(restrict_to(chi, psi.classes), psi) > 0;
}

// Exponent e with value = exp(2 pi i e / p).
std::int64_t root_exponent(const Cyclotomic& v, std::int64_t p) {
    double a = std::arg(v.to_complex()) / (2.0 * std::numbers::pi) * double(p);
    std::int64_t e = pmod(std::llround(a), p);
    if (std::abs(v.to_complex() - std::polar(1.0, 2.0 * std::numbers::pi * double(e) / double(p))) > 1e-9)
        throw std::invalid_argument("root_exponent: value is not a p-th root of unity");
    return e;
}

std::vector<ZmodMatrix> reduced_generators(const FiniteGroup& h, std::uint32_t p) {
    std::vector<ZmodMatrix> out;
    for (const auto& g : h.generators()) out.push_back(g.reduce(p));
    return out;
}

}  // namespace

Report verify_clifford_compat(const CliffordSetting& s) {
    Report rep;
    const auto& T = s.triple;
    const auto& G = T.G;
    const auto& L = T.L;
    std::uint32_t p = G->prime();
    auto U0 = intersect(T.U, s.G0), L0 = intersect(L, s.G0), V0 = intersect(T.V, s.G0);
    auto t0 = certify_iwahori(U0, L0, V0, s.G0, nullptr, s.name + "-kernel");
    {
        Tally t(rep, "kernel-actual", "U0 x L0 x V0 -> G0 is bijective");
        t.check(t0.actual, "product map not onto");
    }
    std::map<std::uint64_t, TablePtr> tables;
    auto table = [&](const GroupPtr& h) {
        auto [it, fresh] = tables.emplace(h->digest(), nullptr);
        if (fresh) it->second = character_table(h);
        return it->second;
    };
    auto tG = table(G), tL = table(L), tG0 = table(s.G0), tL0 = table(L0);
    auto cG0 = tG0->classes, cL0 = tL0->classes;
    auto ctx = functor_context(T);
    auto ctx0 = functor_context(t0);

    std::vector<Character> phis;
    {
        Tally irr(rep, "pind0-irreducible", "pind_0 sends Irr(L0) to Irr(G0)");
        Tally inj(rep, "pind0-injective", "pind_0 is injective on Irr(L0)");
        for (std::size_t k = 0; k < tL0->size(); ++k) {
            Character phi = module_character(*pind(*ctx0, irreducible_module(*tL0, k)).output, *tG0);
            irr.check(tG0->find(phi).has_value(), "psi #" + std::to_string(k));
            inj.check(std::find(phis.begin(), phis.end(), phi) == phis.end(), "psi #" + std::to_string(k));
            phis.push_back(std::move(phi));
        }
        Tally eq(rep, "pind0-equivariant", "pind_0 commutes with conjugation by L");
        for (std::size_t k = 0; k < tL0->size(); ++k)
            for (const auto& l : L->generators()) {
                auto j = tL0->find(conjugate_function(tL0->irr[k], l, cL0));
                eq.check(j && conjugate_function(phis[k], l, cG0) == phis[*j], "psi #" + std::to_string(k));
            }
    }

    Tally inertia(rep, "inertia-levi", "G(phi) meets L in L(psi)");
    Tally support(rep, "clifford-support", "pind maps the psi-block into the pind_0(psi)-block");
    Tally c2(rep, "clifford-induction", "ind o pind_psi = pind o ind on Irr(L(psi)) over psi");
    Tally c2b(rep, "clifford-induction-bijective", "ind is a bijection from Irr(G(phi)) over phi to Irr(G) over the orbit");
    Tally full(rep, "full-stabilizer-equivalence", "G(phi) = L(psi) G0 makes pind a bijection on irreducibles over psi");
    Tally ext(rep, "clifford-extension", "a linear extension of phi to G(phi) trivial on U(phi), V(phi) exists");
    Tally c3(rep, "clifford-twist-square", "pind_psi(infl M (x) psi') = infl(pind M) (x) phi'");
    nlohmann::json per = nlohmann::json::array();

    for (std::size_t k = 0; k < tL0->size(); ++k) {
        const Character& psi = tL0->irr[k];
        const Character& phi = phis[k];
        std::string tag = "psi #" + std::to_string(k);
        auto orbit = character_orbit(phi, *G);
        auto Gphi = stabilizer(G, [&](const ZmodMatrix& g) { return conjugate_function(phi, g, cG0) == phi; });
        auto Lpsi = stabilizer(L, [&](const ZmodMatrix& l) { return conjugate_function(psi, l, cL0) == psi; });
        auto GL = intersect(Gphi, L);
        inertia.check(GL->order() == Lpsi->order() && is_subgroup(*Lpsi, *GL), tag);
        auto Uphi = intersect(T.U, Gphi), Vphi = intersect(T.V, Gphi);
        auto tGphi = table(Gphi), tLpsi = table(Lpsi);
        bool is_full = Gphi->order() * L0->order() == Lpsi->order() * s.G0->order();

        auto over_orbit = [&](const Character& chi) {
            auto res = restrict_to(chi, cG0);
            std::int64_t sum = 0;
            for (const auto& o : orbit) sum += inner_product(res, o) * o.degree_int();
            return sum;
        };
        std::size_t block_size = 0;
        for (const auto& chi : tG->irr)
            if (over_orbit(chi) > 0) ++block_size;

        std::vector<Character> images;
        for (std::size_t j = 0; j < tL->size(); ++j) {
            if (!lies_over(tL->irr[j], psi)) continue;
            Character chi = module_character(*pind(*ctx, irreducible_module(*tL, j)).output, *tG);
            support.check(over_orbit(chi) == chi.degree_int(), tag + " sigma #" + std::to_string(j));
            images.push_back(chi);
        }
        if (is_full) {
            std::set<std::size_t> idx;
            for (const auto& chi : images) {
                auto f = tG->find(chi);
                full.check(f.has_value(), tag + ": pind not irreducible");
                if (f) idx.insert(*f);
            }
            full.check(idx.size() == images.size() && idx.size() == block_size, tag + ": not a bijection");
        }

        auto ctxphi = functor_context(Gphi, Uphi, Lpsi, Vphi, s.name + "-inertia");
        for (std::size_t j = 0; j < tLpsi->size(); ++j) {
            if (!lies_over(tLpsi->irr[j], psi)) continue;
            auto rho = irreducible_module(*tLpsi, j);
            std::vector<Index> to_m(Lpsi->order());
            std::iota(to_m.begin(), to_m.end(), Index(0));
            auto ind = std::make_shared<InducedModule>(L, Lpsi, rho, to_m);
            Character lhs = module_character(*pind(*ctx, ind).output, *tG);
            Character rhs = induce(module_character(*pind(*ctxphi, rho).output, *tGphi), tG->classes);
            c2.check(lhs == rhs, tag + " rho #" + std::to_string(j));
        }
        {
            std::set<std::size_t> idx;
            std::size_t count = 0;
            for (const auto& chi : tGphi->irr) {
                if (!lies_over(chi, phi)) continue;
                ++count;
                auto f = tG->find(induce(chi, tG->classes));
                c2b.check(f.has_value(), tag + ": induced character reducible");
                if (f) {
                    c2b.check(over_orbit(tG->irr[*f]) > 0, tag + ": induced character off the block");
                    idx.insert(*f);
                }
            }
            c2b.check(idx.size() == count && count == block_size, tag + ": counts differ");
        }

        std::vector<std::pair<Index, std::int64_t>> fixed;
        for (const auto& g : s.G0->generators())
            fixed.emplace_back(Gphi->index_of(g), root_exponent(phi.at(s.G0->index_of(g)), p));
        for (const auto* h : {&Uphi, &Vphi})
            for (const auto& g : (*h)->generators()) fixed.emplace_back(Gphi->index_of(g), 0);
        auto sol = extend_linear_character(*Gphi, fixed, p);
        if (!sol) throw std::runtime_error("verify_clifford_compat: no linear extension for " + tag);
        for (Index x = 0; x < s.G0->order(); ++x) {
            std::int64_t e = sol->exponent[Gphi->index_of(s.G0->element(x))] * std::int64_t(p) / sol->order;
            bool exact = sol->exponent[Gphi->index_of(s.G0->element(x))] * std::int64_t(p) % sol->order == 0;
            ext.check(exact && e == root_exponent(phi.at(x), p), tag);
        }
        Character phi1 = zero_function(tGphi->classes);
        for (std::uint32_t c = 0; c < tGphi->classes->count(); ++c)
            phi1.values[c] = Cyclotomic::zeta_power(int(sol->order), sol->exponent[tGphi->classes->cc.reps[c]]);

        auto Gbar = FiniteGroup::generate(reduced_generators(*Gphi, p), G->degree(), p);
        auto Ubar = subgroup_generated(Gbar, reduced_generators(*Uphi, p));
        auto Lbar = subgroup_generated(Gbar, reduced_generators(*Lpsi, p));
        auto Vbar = subgroup_generated(Gbar, reduced_generators(*Vphi, p));
        auto redG = GroupHom::reduction(Gphi, Gbar);
        auto redL = GroupHom::reduction(Lpsi, Lbar);
        auto ctxbar = functor_context(Gbar, Ubar, Lbar, Vbar, s.name + "-residue");
        auto tGbar = table(Gbar), tLbar = table(Lbar);
        for (std::size_t j = 0; j < tLbar->size(); ++j) {
            auto m = irreducible_module(*tLbar, j);
            auto infl = inflate_module(m, redL);
            std::vector<Mat> gens;
            for (std::size_t i = 0; i < Lpsi->generators().size(); ++i) {
                Index li = Lpsi->generator_indices()[i];
                cplx v = std::polar(1.0, 2.0 * std::numbers::pi *
                                             double(sol->exponent[Gphi->index_of(Lpsi->element(li))]) /
                                             double(sol->order));
                gens.push_back(infl->generator_matrix(i) * v);
            }
            auto twisted = std::make_shared<MatrixModule>(Lpsi, std::move(gens));
            Character lhs = module_character(*pind(*ctxphi, twisted).output, *tGphi);
            Character rhs =
                inflate(module_character(*pind(*ctxbar, m).output, *tGbar), redG, tGphi->classes) * phi1;
            c3.check(lhs == rhs, tag + " M #" + std::to_string(j));
        }
        per.push_back({{"psi", k},
                       {"orbit", orbit.size()},
                       {"G(phi)", Gphi->order()},
                       {"L(psi)", Lpsi->order()},
                       {"full_stabilizer", is_full},
                       {"extension_order", sol->order}});
    }
    support.record().data = per;
    return rep;
}

}  // namespace hfl
