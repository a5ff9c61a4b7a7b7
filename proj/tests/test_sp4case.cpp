#include "doctest.h"

#include <set>

#include "hfl/sp4case.hpp"

using namespace hfl;

namespace {

void require_pass(const Report& r) {
    INFO(summary(r));
    CHECK(r.ok());
}

const Sp4Context& ctx3() {
    static const Sp4Context c = build_sp4(3);
    return c;
}

const Sp4Context& ctx5() {
    static const Sp4Context c = build_sp4(5);
    return c;
}

OrbitCase case_of(std::uint32_t p, std::initializer_list<std::initializer_list<std::int64_t>> x) {
    return classify(ZmodMatrix::from_rows(p, x));
}

Transporter named(const Sp4Context& c, const OrbitCase& oc, const std::string& name) {
    for (const auto& t : expected_transporters(c, oc))
        if (t.name == name) return t;
    throw std::logic_error("no transporter " + name);
}

}  // namespace

TEST_SUITE("sp4case") {

TEST_CASE("Sp4 context at p = 3") {
    const auto& c = ctx3();
    require_pass(c.certificate);
    REQUIRE(c.G);
    CHECK(c.G->order() == 51840);
    CHECK(c.certificate.find("weyl-group")->data["W_G"] == 8);
    CHECK(c.certificate.find("weyl-group")->data["W_L"] == 2);
    CHECK(c.certificate.find("weyl-double-cosets")->pass);
    CHECK(c.certificate.find("kernel-triple")->data["kernel_order"] == 59049);
    CHECK_THROWS_AS(build_sp4(2), std::invalid_argument);
    CHECK_THROWS_AS(build_sp4(9), std::invalid_argument);
}

TEST_CASE("Sp4 context at p = 5 without the full group") {
    const auto& c = ctx5();
    require_pass(c.certificate);
    CHECK_FALSE(c.G);
    CHECK(c.L->order() == 480);
    CHECK(c.N->order() == 128);
}

TEST_CASE("classification of M2(F_p)") {
    CHECK(case_of(3, {{0, 0}, {0, 0}}).label == "1B");
    CHECK(case_of(3, {{0, 1}, {0, 0}}).label == "4B");
    CHECK(case_of(3, {{1, 0}, {0, 0}}).label == "2A*");
    CHECK(case_of(3, {{1, 0}, {0, 2}}).label == "2B");
    CHECK(case_of(5, {{1, 0}, {0, 2}}).label == "2A");
    CHECK(case_of(3, {{0, 1}, {2, 0}}).label == "3B");
    require_pass(classification_report(3));
    require_pass(classification_report(5));
    auto cases = enumerate_cases(3);
    CHECK(cases.size() == 12);
    std::set<std::string> labels;
    for (const auto& oc : cases) labels.insert(oc.label);
    CHECK(labels == std::set<std::string>{"1A", "1B", "2A*", "2B", "3A", "3B", "4A", "4B"});
    std::size_t twoA = 0;
    for (const auto& oc : enumerate_cases(5)) twoA += oc.label == "2A";
    CHECK(twoA == 4);
}

TEST_CASE("centralizers and transporters at p = 3") {
    for (const auto& oc : enumerate_cases(3)) {
        INFO(oc.label);
        auto r = centralizer_report(ctx3(), oc);
        require_pass(r);
        std::size_t n = expected_transporters(ctx3(), oc).size();
        CHECK(r.find("transporter-sizes")->data["double_cosets"] == n);
    }
    auto r4 = centralizer_report(ctx3(), case_of(3, {{0, 1}, {0, 0}}));
    CHECK(r4.find("centralizer-orders")->data["orders"][2] == 3);
    CHECK(r4.find("centralizer-structure")->data["S"] == 2);
}

TEST_CASE("centralizers computed from the commutant agree with enumeration") {
    auto lazy = build_sp4(3, false);
    for (const auto& oc : enumerate_cases(3)) {
        if (oc.y.is_zero()) continue;
        auto a = point_data(ctx3(), oc.y), b = point_data(lazy, oc.y);
        CHECK(a.G->order() == b.G->order());
        CHECK(is_subgroup(*b.G, *a.G));
        if (oc.label == "4A" || oc.label == "4B") {
            CHECK_THROWS_AS(transporter_double_cosets(lazy, b), std::invalid_argument);
            continue;
        }
        auto ta = transporter_double_cosets(ctx3(), a), tb = transporter_double_cosets(lazy, b);
        CHECK(ta.transporter_size == tb.transporter_size);
        CHECK(ta.cosets.size() == tb.cosets.size());
        std::multiset<std::size_t> sa, sb;
        for (const auto& x : ta.cosets) sa.insert(x.size);
        for (const auto& x : tb.cosets) sb.insert(x.size);
        CHECK(sa == sb);
    }
    CHECK_THROWS_AS(point_data(lazy, ZmodMatrix(4, 3)), BudgetExceeded);
}

TEST_CASE("case 2A at p = 5") {
    for (const auto& oc : enumerate_cases(5)) {
        if (oc.label != "2A") continue;
        auto r = centralizer_report(ctx5(), oc);
        require_pass(r);
        CHECK(r.find("transporter-sizes")->data["double_cosets"] == 4);
        for (const auto& g : expected_transporters(ctx5(), oc)) require_pass(verify_reduced_mackey(ctx5(), oc, g));
    }
}

TEST_CASE("reduced Mackey identities with named outcomes") {
    const auto& c = ctx3();
    auto zero = case_of(3, {{0, 0}, {0, 0}});
    auto r = verify_reduced_mackey(c, zero, named(c, zero, "1"));
    require_pass(r);
    CHECK(r.find("reduced-mackey")->checked == 8);
    CHECK(r.find("reduced-mackey")->data["xi_terms"] == 1);

    auto nil = case_of(3, {{0, 1}, {0, 0}});
    auto r4 = verify_reduced_mackey(c, nil, named(c, nil, "1"));
    require_pass(r4);
    CHECK(r4.find("reduced-mackey")->data["delta_s"] == true);
    CHECK(r4.find("reduced-mackey")->data["xi_terms"] == 0);

    auto star = case_of(3, {{1, 0}, {0, 0}});
    auto r2 = verify_reduced_mackey(c, star, named(c, star, "1"));
    require_pass(r2);
    // id + Ad_{t^-1 w t}: the s-term vanishes and one Xi term survives
    CHECK(r2.find("reduced-mackey")->data["delta_s"] == false);
    CHECK(r2.find("reduced-mackey")->data["xi_terms"] == 1);

    Transporter bad{"t-shift", ZmodMatrix::identity(4, 3) + unit_matrix(4, 3, 0, 2), {}, 0};
    CHECK_FALSE(verify_reduced_mackey(c, case_of(3, {{1, 0}, {0, 1}}), bad).ok());
}

TEST_CASE("reduced Mackey at every case and transporter for p = 3") {
    for (const auto& oc : enumerate_cases(3))
        for (const auto& g : expected_transporters(ctx3(), oc)) {
            INFO(oc.label << " " << g.name);
            require_pass(verify_reduced_mackey(ctx3(), oc, g));
        }
}

TEST_CASE("parahoric comparison") {
    auto r = dat_compare(ctx3());
    require_pass(r);
    const auto& nil = r.find("parahoric-nilpotent-dims")->data["irreducibles"];
    REQUIRE(nil.size() == 6);
    CHECK(nil[0]["dim_pind"] == 2);
    CHECK(nil[0]["dim_parahoric"] == 6);
    CHECK(nil[0]["end_pind"] == 2);
    CHECK(nil[0]["end_parahoric"] == 4);
    for (const auto& m : nil) CHECK(m["self_conjugate"] == true);
    CHECK(r.find("parahoric-semisimple")->checked > 0);

    auto r5 = dat_compare(ctx5(), {"4B"});
    // at p = 5, L(y) acts on U(y) through squares, so U(y) splits into three double coset types and the
    // |k| + 1, |k| counts are replaced by 4, 3; the Mackey sum confirms the computed values
    CHECK(r5.find("parahoric-nilpotent-dims")->pass);
    CHECK(r5.find("parahoric-end-formula")->pass);
    CHECK(r5.find("parahoric-proper-inclusion")->pass);
    CHECK(r5.find("parahoric-end-mackey")->pass);
    CHECK_FALSE(r5.find("parahoric-nilpotent-end")->pass);
    bool other = false;
    for (const auto& m : r5.find("parahoric-nilpotent-dims")->data["irreducibles"]) {
        bool self = m["self_conjugate"].get<bool>();
        other = other || !self;
        CHECK(m["end_pind"] == (self ? 2 : 1));
        CHECK(m["end_parahoric"] == (self ? 4 : 3));
    }
    CHECK(other);
}

}  // TEST_SUITE
