#include "hfl/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "hfl/cache.hpp"
#include "hfl/classical.hpp"
#include "hfl/iwahori.hpp"
#include "hfl/sp4case.hpp"

namespace hfl {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool is_prime(std::uint32_t p) {
    if (p < 2) return false;
    for (std::uint32_t d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

void require(bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument(what);
}

void require_p(const RunConfig& c, std::initializer_list<std::uint32_t> allowed) {
    bool ok = std::find(allowed.begin(), allowed.end(), *c.p) != allowed.end();
    std::string list;
    for (auto q : allowed) list += (list.empty() ? "" : ", ") + std::to_string(q);
    require(ok, "target " + c.target + " supports p in {" + list + "}, got " + std::to_string(*c.p));
}

GroupPtr gl2(std::uint32_t q) { return FiniteGroup::generate(gl_generators(2, q), 2, q); }

}  // namespace

RunConfig resolve(RunConfig c) {
    require(std::find(kTargets.begin(), kTargets.end(), c.target) != kTargets.end(), "unknown target " + c.target);
    require(c.budget_elems > 0, "--budget-elems must be positive");
    require(c.budget_dim > 0, "--budget-dim must be positive");
    if (c.n) require(*c.n >= 1, "--n must be at least 1");
    if (c.ell) require(*c.ell >= 1, "--ell must be at least 1");
    const auto& t = c.target;
    if (t == "iwahori") {
        c.n = c.n.value_or(2);
        c.p = c.p.value_or(2);
        c.ell = c.ell.value_or(2);
        require(is_prime(*c.p), "--p must be prime");
    } else if (t == "functors") {
        c.n = c.n.value_or(3);
        c.ell = c.ell.value_or(2);
        c.p = c.p.value_or(3);
        require_p(c, {3});
    } else if (t == "sp4" || t == "clifford") {
        c.p = c.p.value_or(3);
        require_p(c, {3});
    } else if (t == "dat") {
        c.p = c.p.value_or(3);
        require_p(c, {3, 5});
    } else if (t == "orbit") {
        // 4x4 matrices over Z/p^2 need (p^2)^16 < 2^64
        c.p = c.p.value_or(3);
        require_p(c, {3});
    }
    if (!c.cache_dir)
        if (const char* env = std::getenv("HFL_CACHE_DIR"); env && *env) c.cache_dir = env;
    return c;
}

nlohmann::json config_json(const RunConfig& c) {
    nlohmann::json j;
    j["target"] = c.target;
    j["p"] = c.p ? nlohmann::json(*c.p) : nlohmann::json();
    j["ell"] = c.ell ? nlohmann::json(*c.ell) : nlohmann::json();
    j["n"] = c.n ? nlohmann::json(*c.n) : nlohmann::json();
    j["budget_elems"] = c.budget_elems;
    j["budget_dim"] = c.budget_dim;
    j["audit"] = c.audit;
    j["seed"] = c.seed;
    return j;
}

Report principal_series_report(std::uint32_t p) {
    auto t0 = std::chrono::steady_clock::now();
    const std::uint32_t q = p * p;
    Report rep;
    auto g = gl2(q);
    auto tg = character_table(g);
    auto b = subgroup_generated(g, borel_generators(2, q));
    {
        Tally t(rep, "principal-series-constituents",
                "H(GL2(Z/p^2)/B) has l + 1 = 3 irreducible constituents, each of multiplicity one");
        auto mult = decompose_module(*permutation_module(g, b), *tg);
        std::int64_t constituents = 0, squares = 0;
        nlohmann::json parts = nlohmann::json::array();
        for (std::size_t k = 0; k < mult.size(); ++k) {
            if (!mult[k]) continue;
            ++constituents;
            squares += mult[k] * mult[k];
            parts.push_back({{"irreducible", k}, {"degree", tg->irr[k].degree_int()}, {"multiplicity", mult[k]}});
        }
        // dim End_G = |B \ G / B|
        auto dc = double_cosets(*b, *g, *b).size();
        t.check(constituents == 3, "constituent count " + std::to_string(constituents));
        t.check(squares == std::int64_t(dc), "sum of squared multiplicities vs double cosets");
        t.record().data = {{"group_order", g->order()},
                           {"index", g->order() / b->order()},
                           {"constituents", parts},
                           {"double_cosets", dc}};
    }
    {
        Tally t(rep, "pind-residue-collapse",
                "pind of the trivial torus character is the inflated residue-field principal series");
        auto k1 = subgroup_generated(g, congruence_kernel_generators(2, q));
        auto u = subgroup_generated(g, {elementary(2, q, 0, 1, 1)});
        auto l = subgroup_generated(g, torus_generators(2, q));
        auto v = subgroup_generated(g, {elementary(2, q, 1, 0, 1)});
        auto tr = certify_iwahori(u, l, v, g, k1, "GL2 rank one");
        auto r = pind(tr, trivial_module(l));
        auto g1 = gl2(p);
        auto b1 = subgroup_generated(g1, borel_generators(2, p));
        auto expected = inflate(permutation_character(class_data(g1), *b1), GroupHom::reduction(g, g1), tg->classes);
        t.check(!tr.actual, "the rank-one triple is only kernel-witnessed");
        t.check(r.output->dim() == Eigen::Index(p + 1), "dimension " + std::to_string(r.output->dim()));
        t.check(module_character(*r.output, *tg) == expected, "character");
        t.record().data = {{"dim", r.output->dim()}, {"ambient", r.ambient_dim}, {"decomposition", decompose(expected, *tg)}};
    }
    rep.timing["seconds"] = seconds_since(t0);
    return rep;
}

FunctorSuiteInput sp4_siegel_suite(std::uint32_t p) {
    auto c = build_sp4(p, true);
    auto t = certify_iwahori(c.U, c.L, c.V, c.G, nullptr, "Sp4 Siegel");
    auto x = subgroup_generated(c.L, {siegel_levi(elementary(2, p, 0, 1, 1))});
    auto h = subgroup_generated(c.L, {siegel_levi(diagonal(p, {std::int64_t(p) - 1, 1})),
                                      siegel_levi(diagonal(p, {1, std::int64_t(p) - 1}))});
    auto y = subgroup_generated(c.L, {siegel_levi(elementary(2, p, 1, 0, 1))});
    FunctorSuiteInput in;
    in.triple = t;
    in.tG = character_table(c.G);
    in.tL = character_table(c.L);
    in.compatible = {swapped(t)};
    in.inner = certify_iwahori(x, h, y, c.L, nullptr, "GL2 Levi");
    return in;
}

IwahoriTriple gl2_congruence_triple(std::uint32_t p) {
    const std::uint32_t q = p * p;
    auto k1 = FiniteGroup::generate(congruence_kernel_generators(2, q), 2, q);
    auto u = subgroup_generated(k1, {elementary(2, q, 0, 1, p)});
    auto l = subgroup_generated(k1, {diagonal(q, {1 + std::int64_t(p), 1}), diagonal(q, {1, 1 + std::int64_t(p)})});
    auto v = subgroup_generated(k1, {elementary(2, q, 1, 0, p)});
    return certify_iwahori(u, l, v, k1, nullptr, "GL2 kernel");
}

Report functors_report(int n, int ell, std::uint32_t p) {
    auto t0 = std::chrono::steady_clock::now();
    Report rep;
    auto iw = build_iwahori(n, 2, ell);
    std::string tag = "I" + std::to_string(n) + "(Z/" + std::to_string(iw->modulus) + ")";
    rep.merge(functor_suite_report(*iw), tag);

    std::string sp = "Sp4(F" + std::to_string(p) + ")/siegel";
    rep.merge(verify_functor_properties(sp4_siegel_suite(p)), sp + "/functors");

    std::string gk = "GL2(Z/" + std::to_string(p * p) + ")";
    auto kt = gl2_congruence_triple(p);
    FunctorSuiteInput in;
    in.triple = kt;
    in.tG = character_table(kt.G);
    in.tL = character_table(kt.L);
    in.compatible = {swapped(kt)};
    rep.merge(verify_functor_properties(in), gk + "/kernel/functors");
    rep.merge(verify_actual_decomposition_properties(kt, in.tG, in.tL), gk + "/kernel/actual");
    rep.merge(principal_series_report(p), gk);
    rep.timing["functors/seconds"] = seconds_since(t0);
    return rep;
}

Report run(const RunConfig& raw) {
    RunConfig c = resolve(raw);
    struct Defaults {
        std::size_t elems = default_element_budget(), dim = default_pind_budget();
        std::optional<std::filesystem::path> dir = default_cache_dir();
        ~Defaults() {
            set_default_element_budget(elems);
            set_default_pind_budget(dim);
            set_default_cache_dir(dir);
        }
    } restore;
    set_default_element_budget(c.budget_elems);
    set_default_pind_budget(c.budget_dim);
    set_default_cache_dir(c.cache_dir);
    const auto& t = c.target;
    const std::uint32_t p = *c.p;
    if (t == "iwahori") return iwahori_report(*c.n, p, *c.ell, c.audit);
    if (t == "functors") return functors_report(*c.n, *c.ell, p);
    if (t == "sp4") return sp4_report(true);
    if (t == "clifford") {
        Report rep;
        rep.merge(verify_clifford_compat(gl2_torus_kernel_setting()), "clifford");
        return rep;
    }
    if (t == "orbit") {
        Report rep;
        rep.merge(orbit_report(p, c.seed), "orbit/p" + std::to_string(p));
        return rep;
    }
    Report rep;
    if (p == 3)
        rep.merge(dat_compare(build_sp4(3)), "dat/p3");
    else
        rep.merge(dat_compare(build_sp4(p), {"4B"}), "dat/p" + std::to_string(p));
    return rep;
}

nlohmann::json run_document(const RunConfig& c, const Report& r, bool with_timing) {
    nlohmann::json j;
    j["schema"] = kReportSchema;
    j["config"] = config_json(resolve(c));
    j["report"] = to_json(r, with_timing);
    return j;
}

std::string factorization_table(const Report& r) {
    std::ostringstream os;
    auto join = [](const nlohmann::json& a) {
        std::string s;
        if (a.is_string()) return a.get<std::string>();
        for (const auto& x : a) s += (s.empty() ? "" : ",") + (x.is_boolean() ? std::string(x.get<bool>() ? "y" : "n") : x.dump());
        return "[" + s + "]";
    };
    for (const auto& rec : r.records) {
        const std::string suffix = "/factorization";
        if (rec.id.size() < suffix.size() || rec.id.compare(rec.id.size() - suffix.size(), suffix.size(), suffix) != 0)
            continue;
        os << rec.id.substr(0, rec.id.size() - suffix.size()) << "\n";
        os << std::setw(5) << "irr" << std::setw(6) << "dim" << "  " << std::left << std::setw(12) << "alpha"
           << std::setw(16) << "factors" << std::setw(16) << "factor dims" << std::setw(12) << "primitive"
           << "support" << std::right << "\n";
        for (const auto& row : rec.data["table"]) {
            os << std::setw(5) << row["irreducible"].get<std::size_t>() << std::setw(6) << row["dim"].get<std::int64_t>()
               << "  " << std::left << std::setw(12) << join(row["alpha"]) << std::setw(16) << join(row["factors"])
               << std::setw(16) << join(row["factor_dims"]) << std::setw(12) << join(row["primitive"])
               << row["support_size"].get<std::size_t>() << std::right << "\n";
        }
    }
    return os.str();
}

}  // namespace hfl
