#include "doctest.h"

#include <random>

#include "hfl/classical.hpp"
#include "hfl/group.hpp"
#include "hfl/triple.hpp"

using namespace hfl;

namespace {

std::size_t brute_gl_count(int n, std::uint32_t m) {
    std::size_t total = 1, count = 0;
    for (int i = 0; i < n * n; ++i) total *= m;
    for (std::size_t k = 0; k < total; ++k) {
        std::vector<std::int64_t> e(n * n);
        std::size_t r = k;
        for (auto& x : e) {
            x = r % m;
            r /= m;
        }
        if (ZmodMatrix::from_entries(n, m, e).is_invertible()) ++count;
    }
    return count;
}

GroupPtr sp4(std::uint32_t q) { return FiniteGroup::generate(sp4_generators(q).G, 4, q); }

}  // namespace

TEST_SUITE("grpcore") {

TEST_CASE("gl2 over Z/4 matches a brute-force count") {
    auto g = FiniteGroup::generate(gl_generators(2, 4), 2, 4);
    CHECK(g->order() == brute_gl_count(2, 4));
    CHECK(g->order() == 96);
    CHECK(g->element(0).is_identity());
}

TEST_CASE("empty generator list gives the trivial group") {
    auto g = FiniteGroup::generate({}, 2, 9);
    CHECK(g->order() == 1);
}

TEST_CASE("sp4 over F3 has the order q^4(q^2-1)(q^4-1)") {
    auto g = sp4(3);
    std::size_t q = 3;
    CHECK(g->order() == q * q * q * q * (q * q - 1) * (q * q * q * q - 1));
    for (const auto& x : g->generators()) CHECK(is_symplectic(x));
    auto s = sp4_generators(3);
    CHECK(is_symplectic(s.s));
    CHECK(is_symplectic(s.t));
    CHECK(is_symplectic(s.w));
}

TEST_CASE("group tables are closed and associative on random triples") {
    auto g = FiniteGroup::generate(gl_generators(2, 4), 2, 4);
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<Index> pick(0, Index(g->order() - 1));
    for (int i = 0; i < 200; ++i) {
        Index a = pick(rng), b = pick(rng), c = pick(rng);
        CHECK(g->mul(g->mul(a, b), c) == g->mul(a, g->mul(b, c)));
        CHECK(g->mul(a, g->inv(a)) == 0);
        CHECK(g->element(g->mul(a, b)) == g->element(a) * g->element(b));
    }
    for (Index i = 0; i < g->order(); ++i) {
        ZmodMatrix x = ZmodMatrix::identity(2, 4);
        for (int s : g->word(i)) x = x * g->generators()[s];
        CHECK(x == g->element(i));
    }
}

TEST_CASE("subgroups by predicate") {
    auto g = FiniteGroup::generate(gl_generators(2, 3), 2, 3);
    auto b = subgroup_where(g, [](const ZmodMatrix& m) { return m(1, 0) == 0; });
    CHECK(b->order() == 12);
    auto all = subgroup_where(g, [](const ZmodMatrix&) { return true; });
    CHECK(all->order() == g->order());
    auto g9 = FiniteGroup::generate(gl_generators(2, 9), 2, 9);
    auto g3 = FiniteGroup::generate(gl_generators(2, 3), 2, 3);
    auto red = GroupHom::reduction(g9, g3);
    CHECK(red.surjective());
    auto k = red.kernel();
    CHECK(k->order() == 81);
    CHECK(is_normal(*k, *g9));
}

TEST_CASE("coset transversals") {
    auto g = FiniteGroup::generate(gl_generators(2, 3), 2, 3);
    auto b = subgroup_generated(g, borel_generators(2, 3));
    auto reps = coset_transversal(*g, *b);
    CHECK(reps.size() == 4);
    CHECK(reps[0] == 0);
    CHECK(coset_transversal(*g, *g).size() == 1);
    auto s = sp4_generators(3);
    auto G = sp4(3);
    auto lu = subgroup_generated(G, [&] {
        auto x = s.L;
        x.insert(x.end(), s.U.begin(), s.U.end());
        return x;
    }());
    CHECK(coset_transversal(*G, *lu).size() == (3 + 1) * (9 + 1));
}

TEST_CASE("double cosets") {
    auto g = FiniteGroup::generate(gl_generators(2, 3), 2, 3);
    auto b = subgroup_generated(g, borel_generators(2, 3));
    auto dc = double_cosets(*b, *g, *b);
    CHECK(dc.size() == 2);
    std::size_t total = 0;
    for (const auto& d : dc) total += d.size;
    CHECK(total == g->order());
    CHECK(double_cosets(*g, *g, *g).size() == 1);
}

TEST_CASE("sp4 Weyl group double cosets are represented by 1, s, w") {
    auto s = sp4_generators(3);
    auto G = sp4(3);
    auto D = subgroup_generated(G, s.D);
    auto N = subgroup_where(G, [](const ZmodMatrix& m) {
        for (int i = 0; i < 4; ++i) {
            int nz = 0;
            for (int j = 0; j < 4; ++j) nz += m(i, j) != 0;
            if (nz != 1) return false;
        }
        return true;
    });
    CHECK(is_normal(*D, *N));
    CHECK(N->order() / D->order() == 8);
    auto L = subgroup_generated(G, s.L);
    auto NL = intersect(N, L);
    CHECK(NL->order() / D->order() == 2);
    auto dc = double_cosets(*NL, *N, *NL);
    CHECK(dc.size() == 3);
    auto same = [&](Index a, const ZmodMatrix& b) {
        for (Index x = 0; x < NL->order(); ++x)
            for (Index y = 0; y < NL->order(); ++y)
                if (NL->element(x) * b * NL->element(y) == N->element(a)) return true;
        return false;
    };
    int hits = 0;
    for (const auto& d : dc)
        for (const auto& r : {ZmodMatrix::identity(4, 3), s.s, s.w})
            if (same(d.rep, r)) ++hits;
    CHECK(hits == 3);
}

TEST_CASE("conjugacy classes") {
    auto g = FiniteGroup::generate(gl_generators(2, 3), 2, 3);
    auto cc = conjugacy_classes(*g);
    CHECK(cc.count() == 8);
    std::size_t total = 0;
    for (auto s : cc.sizes) {
        CHECK(g->order() % s == 0);
        total += s;
    }
    CHECK(total == g->order());
    CHECK(conjugacy_classes(*FiniteGroup::generate({}, 2, 3)).count() == 1);
    CHECK(conjugacy_classes(*sp4(3)).count() == 34);
}

TEST_CASE("centralizers in sp4 over F3") {
    auto G = sp4(3);
    auto c1 = centralizer(G, diagonal(3, {1, 1, -1, -1}));
    CHECK(c1->order() == 48);
    auto s = sp4_generators(3);
    auto L = subgroup_generated(G, s.L);
    CHECK(is_subgroup(*c1, *L));
    auto c2 = centralizer(G, diagonal(3, {1, 0, -1, 0}));
    CHECK(c2->order() == 2 * 24);
    CHECK(centralizer(G, ZmodMatrix::identity(4, 3))->order() == G->order());
}

TEST_CASE("iwahori certification") {
    auto G9 = FiniteGroup::generate(congruence_kernel_generators(2, 9), 2, 9);
    CHECK(G9->order() == 81);
    auto g = FiniteGroup::generate(gl_generators(2, 3), 2, 3);
    auto one = FiniteGroup::generate({}, 2, 3);
    auto t = certify_iwahori(attach_ambient(one, g), g, attach_ambient(one, g), g);
    CHECK(t.actual);
    auto b = subgroup_generated(g, borel_generators(2, 3));
    CHECK_THROWS_AS(certify_iwahori(b, g, b, g), CertificationError);

    auto i2 = FiniteGroup::generate(iwahori_generators(2, 4), 2, 4);
    CHECK(i2->order() == 32);
    auto U = subgroup_generated(i2, {elementary(2, 4, 0, 1, 1)});
    auto V = subgroup_generated(i2, {elementary(2, 4, 1, 0, 2)});
    auto D = subgroup_generated(i2, torus_generators(2, 4));
    auto tr = certify_iwahori(U, D, V, i2, i2);
    CHECK(tr.actual);
}

TEST_CASE("reduction kernels have order p^((l-1) n^2)") {
    for (std::uint32_t q : {4u, 9u}) {
        auto g = FiniteGroup::generate(gl_generators(2, q), 2, q);
        std::uint32_t p = prime_of(q);
        auto r = FiniteGroup::generate(gl_generators(2, p), 2, p);
        CHECK(GroupHom::reduction(g, r).kernel()->order() == std::size_t(p) * p * p * p);
    }
}

}  // TEST_SUITE
