#include "doctest.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>

#include "hfl/cache.hpp"
#include "hfl/chartab.hpp"
#include "hfl/classical.hpp"

using namespace hfl;

namespace {

std::vector<std::int64_t> degrees(const CharacterTable& t) {
    std::vector<std::int64_t> d;
    for (const auto& c : t.irr) d.push_back(c.degree_int());
    return d;
}

GroupPtr s3() {
    // permutation matrices of S3 inside GL3(F2)... use F3 to keep determinant units
    auto a = ZmodMatrix::from_rows(3, {{0, 1, 0}, {1, 0, 0}, {0, 0, 1}});
    auto b = ZmodMatrix::from_rows(3, {{0, 1, 0}, {0, 0, 1}, {1, 0, 0}});
    return FiniteGroup::generate({a, b}, 3, 3);
}

}  // namespace

TEST_SUITE("chartab") {

TEST_CASE("symmetric group on three letters") {
    auto g = s3();
    REQUIRE(g->order() == 6);
    auto t = character_table(g);
    CHECK(degrees(*t) == std::vector<std::int64_t>{1, 1, 2});
    // regular representation oracle
    auto reg = regular_character(t->classes);
    for (const auto& chi : t->irr) CHECK(inner_product(reg, chi) == chi.degree_int());
}

TEST_CASE("gl2 over F3") {
    auto g = FiniteGroup::generate(gl_generators(2, 3), 2, 3);
    auto t = character_table(g);
    CHECK(degrees(*t) == std::vector<std::int64_t>{1, 1, 2, 2, 2, 3, 3, 4});
    std::int64_t s = 0;
    for (auto d : degrees(*t)) s += d * d;
    CHECK(s == 48);
    std::string why;
    CHECK_MESSAGE(verify_orthogonality(*t, &why), why);
    for (const auto& a : t->irr)
        for (const auto& b : t->irr) CHECK(inner_product(a, b) == (&a == &b ? 1 : 0));
}

TEST_CASE("trivial group") {
    auto t = character_table(FiniteGroup::generate({}, 2, 5));
    REQUIRE(t->size() == 1);
    CHECK(t->irr[0].degree_int() == 1);
}

TEST_CASE("permutation characters") {
    auto g = FiniteGroup::generate(gl_generators(2, 3), 2, 3);
    auto b = subgroup_generated(g, borel_generators(2, 3));
    auto t = character_table(g);
    auto pi = permutation_character(t->classes, *b);
    CHECK(pi.degree_int() == 4);
    CHECK(inner_product(pi, trivial_character(t->classes)) == 1);
    auto ind = induce(trivial_character(class_data(b)), t->classes);
    CHECK(ind == pi);
    for (auto m : decompose(pi, *t)) CHECK(m >= 0);
}

TEST_CASE("Frobenius reciprocity on random pairs") {
    auto g = FiniteGroup::generate(gl_generators(2, 3), 2, 3);
    auto b = subgroup_generated(g, borel_generators(2, 3));
    auto tg = character_table(g);
    auto tb = character_table(b);
    std::mt19937 rng(11);
    for (int k = 0; k < 20; ++k) {
        const auto& chi = tg->irr[rng() % tg->size()];
        const auto& psi = tb->irr[rng() % tb->size()];
        CHECK(inner_product(restrict_to(chi, tb->classes), psi) == inner_product(chi, induce(psi, tg->classes)));
    }
}

TEST_CASE("inflation preserves irreducibility") {
    auto g9 = FiniteGroup::generate(gl_generators(2, 9), 2, 9);
    auto g3 = FiniteGroup::generate(gl_generators(2, 3), 2, 3);
    auto hom = GroupHom::reduction(g9, g3);
    auto t3 = character_table(g3);
    auto c9 = class_data(g9);
    for (const auto& chi : t3->irr) CHECK(inner_product(inflate(chi, hom, c9), inflate(chi, hom, c9)) == 1);
}

TEST_CASE("column orthogonality and conductors") {
    auto g = FiniteGroup::generate(iwahori_generators(2, 4), 2, 4);
    auto t = character_table(g);
    const auto& c = *t->classes;
    for (std::size_t a = 0; a < c.count(); ++a)
        for (std::size_t b = 0; b < c.count(); ++b) {
            Cyclotomic s = Cyclotomic(0);
            for (const auto& chi : t->irr) s = s + chi.values[a] * chi.values[b].conj();
            CHECK(s == Cyclotomic(a == b ? std::int64_t(c.centralizer_order(std::uint32_t(a))) : 0));
        }
    for (const auto& chi : t->irr)
        for (const auto& v : chi.values) CHECK(c.exponent % v.conductor() == 0);
}

}  // TEST_SUITE

TEST_SUITE("cache") {

TEST_CASE("group and table caches round trip and detect tampering") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "hfl_cache_test";
    fs::remove_all(dir);
    CHECK(cache_list(dir).empty());
    auto g = cached_generate(gl_generators(2, 3), 2, 3, kDefaultElementBudget, dir);
    auto g2 = cached_generate(gl_generators(2, 3), 2, 3, kDefaultElementBudget, dir);
    CHECK(g->digest() == g2->digest());
    auto t = character_table(g, dir);
    auto t2 = character_table(g2, dir);
    REQUIRE(t->size() == t2->size());
    for (std::size_t i = 0; i < t->size(); ++i) CHECK(t->irr[i].values == t2->irr[i].values);
    auto entries = cache_list(dir);
    CHECK(entries.size() == 2);
    for (const auto& e : cache_verify(dir)) CHECK(e.ok);
    fs::path victim = dir / entries[0].file;
    {
        std::fstream f(victim, std::ios::in | std::ios::out | std::ios::binary);
        f.seekp(10);
        f.put('\x7f');
    }
    auto v = cache_verify(dir);
    CHECK(std::count_if(v.begin(), v.end(), [](const CacheEntry& e) { return !e.ok; }) == 1);
    CHECK(fs::exists(dir / "quarantine" / entries[0].file));
    CHECK(cache_purge(dir) == 1);
    CHECK_THROWS_AS(cached_generate(gl_generators(2, 3), 2, 3, 10, std::nullopt), BudgetExceeded);
    fs::remove_all(dir);
}

}  // TEST_SUITE
