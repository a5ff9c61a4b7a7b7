#include "doctest.h"

#include <algorithm>

#include "hfl/iwahori.hpp"

using namespace hfl;

namespace {

void require_pass(const Report& r) {
    std::string bad;
    for (const auto& rec : r.records)
        if (!rec.pass) bad += rec.id + ": " + rec.witness + "\n";
    INFO(summary(r) << "\n" << bad);
    CHECK(r.ok());
}

const IwahoriGroup& i2() {
    static const IwahoriPtr g = build_iwahori(2, 2, 2);
    return *g;
}

const IwahoriGroup& i3() {
    static const IwahoriPtr g = build_iwahori(3, 2, 2);
    return *g;
}

// (1/|U|) sum_u chi(u): the multiplicity of the trivial character of U in chi.
Cyclotomic fixed_dimension(const Character& chi, const FiniteGroup& u) {
    const auto& G = *chi.classes->group;
    Cyclotomic acc(0);
    for (Index i = 0; i < u.order(); ++i) acc += chi.at(G.index_of(u.element(i)));
    return acc.divided(std::int64_t(u.order()));
}

}  // namespace

TEST_SUITE("iwahori") {

TEST_CASE("composition lattice") {
    CHECK(compositions(1) == std::vector<Composition>{{1}});
    CHECK(compositions(3).size() == 4);
    CHECK(compositions(4).size() == 8);
    CHECK(meet({2, 1}, {1, 2}) == Composition{1, 1, 1});
    CHECK(meet({2, 1}, {2, 1}) == Composition{2, 1});
    CHECK(meet({3}, {1, 2}) == Composition{1, 2});
    CHECK(concat({2}, {1}) == Composition{2, 1});
    CHECK(leq({1, 1, 1}, {2, 1}));
    CHECK(leq({2, 1}, {3}));
    CHECK_FALSE(leq({2, 1}, {1, 2}));
    CHECK_FALSE(leq({3}, {2, 1}));
    CHECK(block_of({1, 2}) == std::vector<int>{0, 1, 1});
    CHECK(to_string({2, 1}) == "(2,1)");
    CHECK_THROWS_AS(meet({2}, {1, 2}), std::invalid_argument);
    require_pass(lattice_report(5));
}

TEST_CASE("Iwahori subgroups and their block triples") {
    CHECK(i2().I->order() == 32);
    CHECK(i3().I->order() == 4096);
    CHECK(iwahori_order(2, 3, 2) == 972);
    require_pass(i2().certificate);
    require_pass(i3().certificate);
    CHECK(i3().certificate.find("concat-product")->pass);
    CHECK(i3().certificate.find("standard-iwahori")->pass);
    CHECK(i3().certificate.find("semidirect-factorization")->checked > 0);
    // the example of (2,1) < (3): U has the last column free, V the last row in 2Z/4
    const auto& t = i3().triples.at({{2, 1}, {3}});
    CHECK(t.U->order() == 16);
    CHECK(t.V->order() == 4);
    CHECK(t.L->order() == 64);
    CHECK(i3().block.at({2, 1})->order() == i2().I->order() * 2);
    CHECK_THROWS_AS(build_iwahori(3, 2, 2, 100), BudgetExceeded);
    CHECK_THROWS_AS(build_iwahori(2, 4, 2), std::invalid_argument);
}

TEST_CASE("support sets") {
    const auto& g = i2();
    std::size_t triv = g.table({2}).trivial_index();
    CHECK(support_set(g, triv) == g.comps);
    const auto& u = *g.upper.at({1, 1});
    bool found = false;
    for (std::size_t k = 0; k < g.irr_count(); ++k) {
        const auto& chi = g.table({2})[k];
        if (chi.degree_int() != 1 || !fixed_dimension(chi, u).is_zero()) continue;
        found = true;
        CHECK(support_set(g, k) == std::vector<Composition>{{2}});
    }
    CHECK(found);
    for (std::size_t k = 0; k < i3().irr_count(); ++k) {
        auto s = support_set(i3(), k);
        CHECK(std::find(s.begin(), s.end(), Composition{3}) != s.end());
    }
}

TEST_CASE("primitive factorization") {
    const auto& g = i2();
    auto prim = primitive_irreducibles(g);
    REQUIRE_FALSE(prim.empty());
    auto f = primitive_factorize(g, prim[0]);
    CHECK(f.alpha == Composition{2});
    CHECK(f.factors == std::vector<std::size_t>{prim[0]});
    CHECK(f.round_trip);

    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) {
            auto k = g.table({1, 1}).find(tensor_product_character(g, {1, 1}, {i, j}));
            REQUIRE(k);
            auto up = pind_module(g, {1, 1}, {2}, g.irreducibles.at({1, 1})[*k]);
            auto m = g.table({2}).find(character_of(g, {2}, up));
            REQUIRE(m);
            auto h = primitive_factorize(g, *m);
            CHECK(h.alpha == Composition{1, 1});
            CHECK(h.factors == std::vector<std::size_t>{i, j});
            CHECK(h.dim == up->dim());
        }
    CHECK(primitive_irreducibles(g.family(1)).size() == g.family(1).irr_count());
}

TEST_CASE("primitivity by two-block compositions agrees with the full test") {
    const auto& g = i3();
    for (std::size_t k = 0; k < g.irr_count(); ++k) CHECK(is_primitive(g, k) == is_primitive(g, k, true));
}

TEST_CASE("restriction-induction identity") {
    const auto& g = i2();
    for (std::size_t k = 0; k < g.table({1, 1}).size(); ++k) {
        auto r = verify_ri(g, {1, 1}, {1, 1}, k);
        CHECK(r.pass);
        CHECK(r.lhs == g.table({1, 1})[k]);
    }
    auto prim = primitive_irreducibles(g);
    auto r = verify_ri(g, {2}, {1, 1}, prim[0]);
    CHECK(r.pass);
    CHECK(r.vanishes);
    require_pass(ri_report(g));
}

TEST_CASE("full reports at desk scale") {
    for (const auto* g : {&i2(), &i3()}) {
        require_pass(factorization_report(*g));
        require_pass(grothendieck_check(*g));
        require_pass(product_report(*g));
    }
    auto gr = grothendieck_check(i3());
    const auto& d = gr.find("grothendieck-count")->data;
    CHECK(d["irreducibles"] == class_data(i3().I)->count());
    CHECK(d["primitive_counts"] == nlohmann::json{2, 10, 100});
    auto fr = factorization_report(i3());
    CHECK(fr.find("factorization")->data["table"].size() == 148);
    CHECK(fr.find("factorization-bijection")->data["images"] == 148);
}

TEST_CASE("Iwahori report over Z/9") {
    auto r = iwahori_report(2, 3, 2);
    require_pass(r);
    const auto* c = r.find("I2(Z/9)/grothendieck-count");
    REQUIRE(c);
    CHECK(c->data["irreducibles"] == 78);
    CHECK(c->data["primitive_tuples"] == 78);
}

TEST_CASE("functor properties on the I2 block triple") {
    auto r = functor_suite_report(i2());
    require_pass(r);
    CHECK(r.find("functors/(1,1)<(2)/P5-inflation")->checked > 0);
    CHECK(r.find("actual/(1,1)<(2)/A2-pres-pind-identity")->checked == 4);
}

}  // TEST_SUITE
