#include "doctest.h"

#include "hfl/classical.hpp"
#include "hfl/hcfun.hpp"

using namespace hfl;

namespace {

GroupPtr gl(int n, std::uint32_t q) { return FiniteGroup::generate(gl_generators(n, q), n, q); }

// Standard triple of GL2 or I2 over Z/q: upper unipotent, diagonal torus, lower unipotent scaled by `low`.
IwahoriTriple rank_one_triple(const GroupPtr& g, std::uint32_t q, std::int64_t low, GroupPtr k = nullptr) {
    auto u = subgroup_generated(g, {elementary(2, q, 0, 1, 1)});
    auto l = subgroup_generated(g, torus_generators(2, q));
    auto v = subgroup_generated(g, {elementary(2, q, 1, 0, low)});
    return certify_iwahori(u, l, v, g, std::move(k), "rank-one");
}

IwahoriTriple i2_triple() {
    auto g = FiniteGroup::generate(iwahori_generators(2, 4), 2, 4);
    return rank_one_triple(g, 4, 2);
}

IwahoriTriple kernel_triple() {
    auto g = FiniteGroup::generate(congruence_kernel_generators(2, 9), 2, 9);
    auto u = subgroup_generated(g, {elementary(2, 9, 0, 1, 3)});
    auto l = subgroup_generated(g, {diagonal(9, {4, 1}), diagonal(9, {1, 4})});
    auto v = subgroup_generated(g, {elementary(2, 9, 1, 0, 3)});
    return certify_iwahori(u, l, v, g, nullptr, "kernel");
}

// Harish-Chandra restriction by the character formula: t -> (1/|U|) sum_u chi(t u).
Character hc_restriction(const Character& chi, const IwahoriTriple& t, const ClassDataPtr& cl) {
    ClassFunction r = zero_function(cl);
    const auto& G = *chi.classes->group;
    for (std::uint32_t k = 0; k < cl->count(); ++k) {
        Cyclotomic acc(0);
        ZmodMatrix x = cl->group->element(cl->cc.reps[k]);
        for (Index u = 0; u < t.U->order(); ++u) acc += chi.at(G.index_of(x * t.U->element(u)));
        r.values[k] = acc.divided(std::int64_t(t.U->order()));
    }
    return r;
}

}  // namespace

TEST_SUITE("hcfun") {

TEST_CASE("trivial unipotent parts give the identity functors") {
    auto g = gl(2, 3);
    auto one = subgroup_generated(g, {});
    auto t = certify_iwahori(one, g, one, g, nullptr, "trivial");
    CHECK(t.actual);
    auto tab = character_table(g);
    for (std::size_t k = 0; k < tab->size(); ++k) {
        auto m = irreducible_module(*tab, k);
        CHECK(module_character(*pind(t, m).output, *tab) == tab->irr[k]);
        CHECK(module_character(*pres(t, m).output, *tab) == tab->irr[k]);
    }
}

TEST_CASE("pind of the trivial torus character over Z/9 is the residue-field principal series") {
    auto g9 = gl(2, 9);
    auto k1 = subgroup_generated(g9, congruence_kernel_generators(2, 9));
    auto t = rank_one_triple(g9, 9, 1, k1);
    CHECK_FALSE(t.actual);
    auto r = pind(t, trivial_module(t.L));
    CHECK(r.output->dim() == 4);
    CHECK(r.ambient_dim == 12);
    auto g3 = gl(2, 3);
    auto b3 = subgroup_generated(g3, borel_generators(2, 3));
    auto red = GroupHom::reduction(g9, g3);
    auto t9 = character_table(g9);
    auto expected = inflate(permutation_character(class_data(g3), *b3), red, t9->classes);
    CHECK(module_character(*r.output, *t9) == expected);
}

TEST_CASE("actual decomposition of I2(Z/4)") {
    auto t = i2_triple();
    CHECK(t.actual);
    CHECK(t.G->order() == 32);
    auto r = pind(t, trivial_module(t.L));
    CHECK(r.output->dim() == 1);
    auto back = pres(t, r.output);
    CHECK(back.output->dim() == 1);
    auto tg = character_table(t.G);
    auto tl = character_table(t.L);
    CHECK(module_character(*pres(t, trivial_module(t.G)).output, *tl) == tl->irr[tl->trivial_index()]);
    for (std::size_t s = 0; s < tl->size(); ++s) {
        auto m = irreducible_module(*tl, s);
        CHECK(module_character(*pres(t, pind(t, m).output).output, *tl) == tl->irr[s]);
    }
}

TEST_CASE("a linear character nontrivial on U has zero restriction") {
    auto t = i2_triple();
    auto tg = character_table(t.G);
    auto tl = character_table(t.L);
    auto c = functor_context(t);
    Index u = t.G->index_of(elementary(2, 4, 0, 1, 1));
    int found = 0;
    for (const auto& chi : tg->irr) {
        if (chi.degree_int() != 1 || (chi.at(u).is_integer() && chi.at(u).to_integer() == 1)) continue;
        ++found;
        auto m = linear_module(chi);
        CHECK(pres(*c, m).output->dim() == 0);
        for (const auto& sigma : tl->irr) CHECK(pres_multiplicity(*c, sigma, m) == 0);
    }
    CHECK(found > 0);
}

TEST_CASE("pres multiplicities on the GL2(F3) principal series match the character formula") {
    auto g = gl(2, 3);
    auto t = rank_one_triple(g, 3, 1);
    auto c = functor_context(t);
    auto tg = character_table(g);
    auto tl = character_table(t.L);
    auto b = subgroup_generated(g, borel_generators(2, 3));
    ModulePtr perm = permutation_module(g, b);
    auto mult = decompose_module(*perm, *tg);
    int constituents = 0;
    for (std::size_t k = 0; k < tg->size(); ++k) {
        if (!mult[k]) continue;
        ++constituents;
        auto block = image_module(perm, isotypic_projector(*perm, tg->irr[k]), g);
        auto oracle = decompose(hc_restriction(tg->irr[k], t, tl->classes), *tl);
        for (std::size_t s = 0; s < tl->size(); ++s) CHECK(pres_multiplicity(*c, tl->irr[s], block) == oracle[s]);
        CHECK(oracle[tl->trivial_index()] == 1);
    }
    CHECK(constituents == 2);
    CHECK(pres_multiplicity(*c, tl->irr[tl->trivial_index()], perm) == 2);
    auto full = decompose_module(*pres(*c, perm).output, *tl);
    for (std::size_t s = 0; s < tl->size(); ++s) CHECK(full[s] == pres_multiplicity(*c, tl->irr[s], perm));
}

TEST_CASE("z spectrum") {
    auto g = gl(2, 3);
    auto tg = character_table(g);
    auto a = subgroup_generated(g, {diagonal(3, {2, 1})});
    auto d = subgroup_generated(g, {diagonal(3, {1, 2})});
    auto u = subgroup_generated(g, {elementary(2, 3, 0, 1, 1)});
    RegularModule reg(g);
    auto commuting = z_spectrum(reg, *a, *d);
    CHECK(commuting.ok());
    CHECK(commuting.eigenvalues.size() == 12);
    for (double x : commuting.eigenvalues) CHECK(x == doctest::Approx(1.0).epsilon(1e-10));
    auto same = z_spectrum(reg, *u, *u);
    CHECK(same.eigenvalues.size() == 16);
    CHECK(same.scalar(1, 1));
    auto t = rank_one_triple(g, 3, 1);
    for (std::size_t k = 0; k < tg->size(); ++k) {
        auto z = z_spectrum(*irreducible_module(*tg, k), *t.U, *t.V);
        CHECK(z.ok());
        for (double x : z.eigenvalues) CHECK((x > 0 && x <= 1 + 1e-8));
    }
    auto i2 = i2_triple();
    auto ti = character_table(i2.G);
    for (std::size_t k = 0; k < ti->size(); ++k) {
        auto m = irreducible_module(*ti, k);
        auto p = pres(i2, m).output->dim();
        CHECK(z_spectrum(*m, *i2.U, *i2.V).scalar(p ? p : m->dim(), m->dim()));
    }
}

TEST_CASE("J_V intertwines and is injective over the residue field") {
    auto sp = sp4_generators(3);
    auto g = FiniteGroup::generate(sp.G, 4, 3);
    auto t = certify_iwahori(subgroup_generated(g, sp.U), subgroup_generated(g, sp.L),
                             subgroup_generated(g, sp.V), g, nullptr, "siegel");
    CHECK_FALSE(t.actual);
    auto c = functor_context(t);
    auto tl = character_table(t.L);
    CHECK(tl->size() == 8);
    for (std::size_t s = 0; s < tl->size(); ++s) {
        auto m = irreducible_module(*tl, s);
        auto from = induced_from_lu(*c, m);
        auto to = induced_from_lv(*c, m);
        Mat j = intertwiner(*c, *from, *to);
        for (std::size_t k = 0; k < g->generators().size(); ++k)
            CHECK((to->generator_matrix(k) * j - j * from->generator_matrix(k)).norm() < 1e-9);
        CHECK(gap_checked_rank(j) == 40 * m->dim());
    }
}

TEST_CASE("parahoric pind with U0 = U is pind") {
    auto i2 = i2_triple();
    auto tg = character_table(i2.G);
    auto tl = character_table(i2.L);
    for (std::size_t s = 0; s < tl->size(); ++s) {
        auto m = irreducible_module(*tl, s);
        CHECK(module_character(*parahoric_pind(i2.G, i2.U, i2.L, i2.V, m).output, *tg) ==
              module_character(*pind(i2, m).output, *tg));
    }
    auto one = subgroup_generated(i2.G, {});
    auto big = parahoric_pind(i2.G, one, i2.L, i2.V, trivial_module(i2.L));
    CHECK(big.output->dim() >= pind(i2, trivial_module(i2.L)).output->dim());
}

TEST_CASE("budget guard") {
    auto i2 = i2_triple();
    CHECK_THROWS_AS(pind(i2, trivial_module(i2.L), 0), BudgetExceeded);
}

TEST_CASE("idempotent proportionality checked directly in the group algebra") {
    auto t = i2_triple();
    auto tg = character_table(t.G);
    auto tl = character_table(t.L);
    auto eu = ga_average(t.G, *t.U);
    auto ev = ga_average(t.G, *t.V);
    for (std::size_t k = 0; k < tg->size(); ++k) {
        auto lhs = ga_product(t.G, ga_product(t.G, eu, ga_isotypic(tg->irr[k], t.G)), ev);
        auto p = decompose_module(*pres(t, irreducible_module(*tg, k)).output, *tl);
        double lnorm = 0;
        for (auto x : lhs) lnorm += std::norm(x);
        std::optional<std::size_t> psi;
        for (std::size_t s = 0; s < p.size(); ++s)
            if (p[s]) psi = s;
        if (!psi) {
            CHECK(lnorm < 1e-16);
            continue;
        }
        auto rhs = ga_product(t.G, ga_product(t.G, eu, ga_isotypic(tl->irr[*psi], t.G)), ev);
        cplx num = 0;
        double den = 0;
        for (std::size_t i = 0; i < rhs.size(); ++i) {
            num += std::conj(rhs[i]) * lhs[i];
            den += std::norm(rhs[i]);
        }
        cplx c = num / den;
        double res = 0;
        for (std::size_t i = 0; i < rhs.size(); ++i) res += std::norm(lhs[i] - c * rhs[i]);
        CHECK(std::abs(c) > 1e-8);
        CHECK(std::sqrt(res) < 1e-10);
    }
}

TEST_CASE("property suites on actual decompositions") {
    for (auto t : {i2_triple(), kernel_triple()}) {
        CHECK(t.actual);
        auto tg = character_table(t.G);
        auto tl = character_table(t.L);
        auto a = verify_actual_decomposition_properties(t, tg, tl);
        INFO(summary(a));
        CHECK(a.ok());
        CHECK(a.records.size() == 7);
        FunctorSuiteInput in{t, tg, tl};
        in.compatible.push_back(hfl::swapped(t));
        auto f = verify_functor_properties(in);
        INFO(summary(f));
        CHECK(f.ok());
    }
}

TEST_CASE("inflation from a quotient in the functor suite") {
    auto g9 = gl(2, 9);
    auto k1 = subgroup_generated(g9, congruence_kernel_generators(2, 9));
    auto t = rank_one_triple(g9, 9, 1, k1);
    auto g3 = gl(2, 3);
    auto q = rank_one_triple(g3, 3, 1);
    FunctorSuiteInput in{t, character_table(g9), character_table(t.L)};
    in.quotient = QuotientData{q, std::make_shared<GroupHom>(GroupHom::reduction(g9, g3))};
    auto f = verify_functor_properties(in);
    INFO(summary(f));
    CHECK(f.ok());
    CHECK(f.find("P5-inflation") != nullptr);
    CHECK(f.find("P5-inflation")->checked > 0);
}

}  // TEST_SUITE
