#include "doctest.h"

#include "hfl/classical.hpp"
#include "hfl/repmod.hpp"

using namespace hfl;

namespace {

GroupPtr gl(int n, std::uint32_t q) { return FiniteGroup::generate(gl_generators(n, q), n, q); }

std::int64_t rank_of(const Mat& m) { return gap_checked_rank(m); }

}  // namespace

TEST_SUITE("repmod") {

TEST_CASE("permutation modules have the index as dimension") {
    auto g9 = gl(2, 9);
    auto b9 = subgroup_generated(g9, borel_generators(2, 9));
    CHECK(permutation_module(g9, b9)->dim() == 12);
    auto g3 = gl(2, 3);
    auto b3 = subgroup_generated(g3, borel_generators(2, 3));
    auto m = permutation_module(g3, b3);
    CHECK(m->dim() == 4);
    auto triv = permutation_module(g3, g3);
    CHECK(triv->dim() == 1);
    CHECK(std::abs(triv->trace(5) - cplx(1)) < 1e-12);
    CHECK(representation_defect(*m) < 1e-10);
}

TEST_CASE("group algebra elements acting on modules") {
    auto g3 = gl(2, 3);
    auto b3 = subgroup_generated(g3, borel_generators(2, 3));
    auto m = permutation_module(g3, b3);
    CHECK((apply_element(*m, 0) - Mat::Identity(4, 4)).norm() < 1e-12);
    Mat eg = apply_element(*m, GAElement::average(g3, *g3));
    CHECK(rank_of(eg) == 1);
    Mat eb = averaging_projector(*m, *b3);
    CHECK(rank_of(eb) == 2);
    CHECK((eb * eb - eb).norm() < 1e-9);
    CHECK((eb.adjoint() - eb).norm() < 1e-9);
    CHECK(fixed_space(*m, *b3).cols() == 2);
}

TEST_CASE("multiplicities") {
    auto g3 = gl(2, 3);
    auto t = character_table(g3);
    auto b3 = subgroup_generated(g3, borel_generators(2, 3));
    auto m = permutation_module(g3, b3);
    CHECK(multiplicity(*m, *t, t->trivial_index()) == 1);
    RegularModule reg(g3);
    auto mult = decompose_module(reg, *t);
    for (std::size_t k = 0; k < t->size(); ++k) CHECK(mult[k] == t->irr[k].degree_int());
    auto mm = decompose_module(*m, *t);
    for (std::size_t k = 0; k < t->size(); ++k) {
        Mat p = isotypic_projector(*m, t->irr[k]);
        CHECK((p * p - p).norm() < 1e-9);
        for (std::size_t s = 0; s < g3->generators().size(); ++s) {
            Mat r = m->generator_matrix(s);
            CHECK((r * p - p * r).norm() < 1e-9);
        }
        CHECK(rank_of(p) == mm[k] * t->irr[k].degree_int());
    }
}

TEST_CASE("the principal series of GL2 over Z/9 has three constituents") {
    auto g9 = gl(2, 9);
    auto b9 = subgroup_generated(g9, borel_generators(2, 9));
    auto t = character_table(g9);
    auto mult = decompose_module(*permutation_module(g9, b9), *t);
    int constituents = 0;
    for (auto x : mult) {
        CHECK(x <= 1);
        constituents += int(x);
    }
    CHECK(constituents == 3);
}

TEST_CASE("image modules") {
    auto g3 = gl(2, 3);
    auto t = character_table(g3);
    auto b3 = subgroup_generated(g3, borel_generators(2, 3));
    ModulePtr m = permutation_module(g3, b3);
    auto same = image_module(m, Mat::Identity(4, 4), g3);
    CHECK(module_character(*same, *t) == module_character(*m, *t));
    for (std::size_t k = 0; k < t->size(); ++k) {
        if (k == t->trivial_index()) continue;
        auto irr = irreducible_module(*t, k);
        auto z = image_module(irr, averaging_projector(*irr, *g3), g3);
        CHECK(z->dim() == 0);
    }
    for (std::size_t k = 0; k < t->size(); ++k) {
        auto img = image_module(m, isotypic_projector(*m, t->irr[k]), g3);
        auto mult = decompose_module(*m, *t);
        CHECK(module_character(*img, *t) == t->irr[k].scaled(mult[k]));
    }
    CHECK_THROWS(image_module(m, Mat::Random(4, 4), g3));
}

TEST_CASE("irreducible modules realize every character") {
    for (auto g : {gl(2, 3), FiniteGroup::generate(iwahori_generators(2, 4), 2, 4),
                   FiniteGroup::generate(iwahori_generators(2, 9), 2, 9)}) {
        auto t = character_table(g);
        std::int64_t total = 0;
        for (std::size_t k = 0; k < t->size(); ++k) {
            auto m = irreducible_module(*t, k);
            CHECK(m->dim() == t->irr[k].degree_int());
            CHECK(representation_defect(*m) < 1e-8);
            total += m->dim() * m->dim();
        }
        CHECK(total == std::int64_t(g->order()));
    }
}

TEST_CASE("averaging idempotents of normalized subgroups commute with the normalizer") {
    auto i2 = FiniteGroup::generate(iwahori_generators(2, 4), 2, 4);
    auto u = subgroup_generated(i2, {elementary(2, 4, 0, 1, 1)});
    auto d = subgroup_generated(i2, torus_generators(2, 4));
    RegularModule reg(i2);
    Mat eu = averaging_projector(reg, *u);
    CHECK((eu * eu - eu).norm() < 1e-9);
    CHECK((eu.adjoint() - eu).norm() < 1e-9);
    for (const auto& s : d->generators()) {
        Mat r = reg.matrix(i2->index_of(s));
        CHECK((r * eu - eu * r).norm() < 1e-9);
    }
    auto t = character_table(i2);
    std::int64_t dim = 0;
    auto mult = decompose_module(reg, *t);
    for (std::size_t k = 0; k < t->size(); ++k) dim += mult[k] * t->irr[k].degree_int();
    CHECK(dim == reg.dim());
}

TEST_CASE("tensor factorization over block-diagonal products") {
    auto whole = FiniteGroup::generate(torus_generators(2, 4), 2, 4);
    auto one = FiniteGroup::generate(torus_generators(1, 4), 1, 4);
    auto one2 = FiniteGroup::generate(torus_generators(1, 4), 1, 4);
    auto e = product_embedding(whole, one, one2, 1);
    auto tw = character_table(whole);
    auto t1 = character_table(one);
    auto t2 = character_table(one2);
    CHECK(tw->size() == t1->size() * t2->size());
    auto [a, b] = tensor_factor(e, tw->irr[tw->trivial_index()], *t1, *t2);
    CHECK(a == t1->trivial_index());
    CHECK(b == t2->trivial_index());
    for (std::size_t i = 0; i < t1->size(); ++i)
        for (std::size_t j = 0; j < t2->size(); ++j) {
            auto chi = tensor_character(e, t1->irr[i], t2->irr[j], tw->classes);
            CHECK(inner_product(chi, chi) == 1);
            auto back = tensor_factor(e, chi, *t1, *t2);
            CHECK(back.first == i);
            CHECK(back.second == j);
        }
}

}  // TEST_SUITE
