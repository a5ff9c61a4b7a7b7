#include "doctest.h"

#include <random>

#include "hfl/classical.hpp"
#include "hfl/cliffordorbit.hpp"

using namespace hfl;

namespace {

void require_pass(const Report& r) {
    INFO(summary(r));
    CHECK(r.ok());
}

ZmodMatrix siegel_diag(std::uint32_t p, std::int64_t a, std::int64_t b) { return diagonal(p, {a, b, -a, -b}); }

}  // namespace

TEST_SUITE("cliffordorbit") {

TEST_CASE("exp on the Sp4 congruence kernel") {
    auto g = sp4_lie(3);
    CHECK(g.dim() == 10);
    CHECK(exp_congruence(ZmodMatrix(4, 3), 9).is_identity());
    std::mt19937_64 rng(7);
    for (int i = 0; i < 50; ++i) {
        ZmodMatrix y = g.element(rng() % g.size());
        CHECK((exp_congruence(y, 9) * exp_congruence(-y, 9)).is_identity());
        CHECK(is_symplectic(exp_congruence(y, 9)));
    }
    CHECK_THROWS_AS(exp_congruence(ZmodMatrix(2, 3), 27), std::invalid_argument);
    auto k = congruence_group(g, 9);
    CHECK(k->order() == 59049);
}

TEST_CASE("duality on the Siegel Levi algebra and torus") {
    auto sp = sp4_generators(9);
    auto r = dual_bijectivity_check(siegel_levi_lie(3), sp.L);
    require_pass(r);
    CHECK(r.find("dual-injective")->checked == 82);
    require_pass(dual_bijectivity_check(siegel_torus_lie(3), sp.D));
    auto zero = dual_character(ZmodMatrix(4, 3));
    for (const auto& b : sp4_lie(3).basis) CHECK(std::abs(zero(exp_congruence(b, 9)) - 1.0) < 1e-12);
}

TEST_CASE("duality and exp equivariance on sp4(F3)") {
    auto sp = sp4_generators(9);
    auto r = dual_bijectivity_check(sp4_lie(3), sp.G);
    require_pass(r);
    CHECK(r.find("dual-injective")->checked == 59050);
}

TEST_CASE("a degenerate pairing is reported") {
    auto n = strict_triangular_lie(2, 3, true);
    CHECK(pairing_rank(n) == 0);
    auto r = dual_bijectivity_check(n, {});
    CHECK_FALSE(r.find("pairing-nondegenerate")->pass);
    CHECK_FALSE(r.find("dual-injective")->pass);
}

TEST_CASE("solve_mod handles non-field moduli") {
    auto one = solve_mod({{2}}, {2}, 4);
    REQUIRE(one);
    CHECK((2 * (*one)[0]) % 4 == 2);
    CHECK_FALSE(solve_mod({{2}}, {1}, 4));
    CHECK_FALSE(solve_mod({{0, 0}}, {3}, 12));
    auto crt = solve_mod({{1, 0}, {0, 5}}, {5, 10}, 12);
    REQUIRE(crt);
    CHECK((*crt)[0] == 5);
    CHECK((5 * (*crt)[1]) % 12 == 10);

    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        const std::int64_t N = 36;
        std::size_t rows = 1 + rng() % 6, cols = 1 + rng() % 4;
        std::vector<std::vector<std::int64_t>> a(rows, std::vector<std::int64_t>(cols));
        std::vector<std::int64_t> x(cols), b(rows, 0);
        for (auto& v : x) v = std::int64_t(rng() % N);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) {
                a[i][j] = std::int64_t(rng() % N) * std::int64_t(1 + rng() % 3 == 1 ? 1 : (rng() % 2 ? 2 : 3));
                b[i] = (b[i] + a[i][j] * x[j]) % N;
            }
        auto m = solve_mod(a, b, N);
        REQUIRE(m);
        for (std::size_t i = 0; i < rows; ++i) {
            std::int64_t s = 0;
            for (std::size_t j = 0; j < cols; ++j) s += a[i][j] * (*m)[j];
            CHECK((s - b[i]) % N == 0);
        }
    }
}

TEST_CASE("orbit diagrams commute") {
    require_pass(verify_orbit_diagram(gl2_kernel_triple(3), 9));
    auto r = verify_orbit_diagram(levi_kernel_triple(3), 9);
    require_pass(r);
    CHECK(r.find("pind0-diagram")->checked == 9);
}

TEST_CASE("orbit diagram for sp4 over all 81 points of l") {
    auto r = verify_orbit_diagram(sp4_kernel_triple(3), 9);
    require_pass(r);
    CHECK(r.find("pind0-diagram")->checked == 81);
    CHECK(r.find("kernel-actual")->data["kernel_order"] == 59049);
}

TEST_CASE("linear extensions of phi_y") {
    auto zero = linear_extension(ZmodMatrix(4, 3), 9);
    CHECK(zero.order == 1);
    CHECK(zero.exponent(sp4_generators(9).s) == 0);

    auto sp = sp4_generators(3);
    auto y = siegel_diag(3, 1, 1);
    auto ext = linear_extension(y, 9);
    CHECK(ext.residue->order() == 2304);
    auto r = check_linear_extension(ext, {sp.s, sp.w});
    require_pass(r);
    CHECK(r.find("trivial-on-U-V")->checked > 0);

    // 2A* and the nilpotent case
    require_pass(check_linear_extension(linear_extension(siegel_diag(3, 1, 0), 9), {sp.w}));
    ZmodMatrix n = ZmodMatrix(4, 3) + unit_matrix(4, 3, 0, 1) - unit_matrix(4, 3, 3, 2);
    auto r4 = check_linear_extension(linear_extension(n, 9), {sp.s});
    require_pass(r4);
}

TEST_CASE("isotypic blocks of the I2(Z/4) regular module") {
    auto g = FiniteGroup::generate(iwahori_generators(2, 4), 2, 4);
    auto k = subgroup_generated(g, congruence_kernel_generators(2, 4));
    auto tk = character_table(k);
    auto reg = std::make_shared<RegularModule>(g);
    std::int64_t total = 0;
    std::vector<bool> done(tk->size(), false);
    for (std::size_t i = 0; i < tk->size(); ++i) {
        auto orbit = character_orbit(tk->irr[i], *g);
        auto block = isotypic_block(reg, tk->irr[i]);
        CHECK(block->dim() == std::int64_t(g->order() * orbit.size() / k->order()));
        if (done[i]) continue;
        for (const auto& o : orbit) done[*tk->find(o)] = true;
        total += block->dim();
    }
    CHECK(total == std::int64_t(g->order()));

    auto tg = character_table(g);
    for (std::size_t j = 0; j < tg->size(); ++j) {
        auto n = irreducible_module(*tg, j);
        for (std::size_t i = 0; i < tk->size(); ++i) {
            bool over = inner_product(restrict_to(tg->irr[j], tk->classes), tk->irr[i]) > 0;
            CHECK(isotypic_block(n, tk->irr[i])->dim() == (over ? n->dim() : 0));
        }
    }
}

TEST_CASE("Clifford compatibility on the GL2(Z/9) torus kernel") {
    auto r = verify_clifford_compat(gl2_torus_kernel_setting());
    require_pass(r);
    CHECK(r.find("full-stabilizer-equivalence")->checked > 0);
    CHECK(r.find("clifford-twist-square")->checked > 0);
    CHECK(r.find("clifford-induction")->checked > 0);
}

}  // TEST_SUITE
