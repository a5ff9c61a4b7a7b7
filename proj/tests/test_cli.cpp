#include "doctest.h"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sys/wait.h>

#include "hfl/cache.hpp"
#include "hfl/cli.hpp"

using namespace hfl;
namespace fs = std::filesystem;

namespace {

RunConfig small_iwahori() {
    RunConfig c;
    c.target = "iwahori";
    c.n = 2;
    c.p = 2;
    c.ell = 2;
    return c;
}

struct TempDir {
    fs::path path;
    TempDir() {
        std::random_device rd;
        path = fs::temp_directory_path() / ("hfl-cli-test-" + std::to_string(rd()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::size_t count_kind(const std::vector<CacheEntry>& es, const std::string& kind) {
    std::size_t k = 0;
    for (const auto& e : es) k += e.kind == kind;
    return k;
}

int shell(const std::string& args) {
    std::string cmd = std::string(HFL_CLI) + " " + args + " > /dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("configuration defaults and validation") {
    auto c = resolve(small_iwahori());
    CHECK(*c.n == 2);
    RunConfig f;
    f.target = "functors";
    f = resolve(f);
    CHECK(*f.n == 3);
    CHECK(*f.ell == 2);
    CHECK(*f.p == 3);
    RunConfig bad = small_iwahori();
    bad.target = "nope";
    CHECK_THROWS_AS(resolve(bad), std::invalid_argument);
    bad = small_iwahori();
    bad.p = 4;
    CHECK_THROWS_AS(resolve(bad), std::invalid_argument);
    bad = small_iwahori();
    bad.budget_elems = 0;
    CHECK_THROWS_AS(resolve(bad), std::invalid_argument);
    RunConfig sp;
    sp.target = "sp4";
    sp.p = 2;
    CHECK_THROWS_AS(resolve(sp), std::invalid_argument);
    sp.p = 5;
    CHECK_THROWS_AS(resolve(sp), std::invalid_argument);
    auto j = config_json(c);
    CHECK(j["target"] == "iwahori");
    CHECK(j["ell"] == 2);
}

TEST_CASE("iwahori run and factorization table") {
    auto r = run(small_iwahori());
    CHECK(r.ok());
    CHECK(r.find("I2(Z/4)/grothendieck-count") != nullptr);
    auto table = factorization_table(r);
    CHECK(table.find("I2(Z/4)") == 0);
    // header plus one row per irreducible
    CHECK(std::count(table.begin(), table.end(), '\n') == 2 + 14);
}

TEST_CASE("budgets stop a run before any report") {
    auto c = small_iwahori();
    c.budget_elems = 1;
    CHECK_THROWS_AS(run(c), BudgetExceeded);
    RunConfig o;
    o.target = "orbit";
    o.budget_elems = 1;
    CHECK_THROWS_AS(run(o), BudgetExceeded);
    // defaults are restored afterwards
    CHECK(default_element_budget() == kDefaultElementBudget);
    CHECK(run(small_iwahori()).ok());
}

TEST_CASE("cache listing, reuse and quarantine") {
    TempDir tmp;
    CHECK(cache_list(tmp.path).empty());
    auto c = small_iwahori();
    c.cache_dir = tmp.path;
    auto first = run(c);
    auto entries = cache_list(tmp.path);
    CHECK(count_kind(entries, "group") >= 2);
    CHECK(count_kind(entries, "table") >= 2);
    for (const auto& e : cache_verify(tmp.path)) CHECK(e.ok);
    auto second = run(c);
    CHECK(render(first, false) == render(second, false));

    fs::path victim;
    for (const auto& e : entries)
        if (e.kind == "table") victim = tmp.path / e.file;
    {
        std::fstream f(victim, std::ios::in | std::ios::out | std::ios::binary);
        f.seekp(std::streamoff(fs::file_size(victim) / 2));
        f.put('\x5a');
    }
    auto checked = cache_verify(tmp.path);
    std::size_t bad = 0;
    for (const auto& e : checked) bad += !e.ok;
    CHECK(bad == 1);
    CHECK_FALSE(fs::exists(victim));
    CHECK(fs::exists(tmp.path / "quarantine" / victim.filename()));
    CHECK(cache_list(tmp.path).size() == entries.size() - 1);
    CHECK(run(c).ok());
    CHECK(cache_purge(tmp.path) > 0);
    CHECK(cache_list(tmp.path).empty());
}

TEST_CASE("run documents are deterministic without timing") {
    auto c = small_iwahori();
    auto a = run_document(c, run(c), false).dump(2);
    auto b = run_document(c, run(c), false).dump(2);
    CHECK(a == b);
    auto j = nlohmann::json::parse(a);
    CHECK(j["schema"] == kReportSchema);
    CHECK(j["config"]["n"] == 2);
    CHECK_FALSE(j["report"].contains("timing"));
    RunConfig o;
    o.target = "orbit";
    o.seed = 7;
    CHECK(render(run(o), false) == render(run(o), false));
}

TEST_CASE("principal series over Z/9") {
    auto r = principal_series_report(3);
    CHECK(r.ok());
    const auto& d = r.find("principal-series-constituents")->data;
    CHECK(d["constituents"].size() == 3);
    CHECK(d["double_cosets"] == 3);
    CHECK(d["index"] == 12);
    for (const auto& part : d["constituents"]) CHECK(part["multiplicity"] == 1);
    const auto& e = r.find("pind-residue-collapse")->data;
    CHECK(e["dim"] == 4);
    CHECK(e["ambient"] == 12);
}

TEST_CASE("GL2 kernel triple is an actual decomposition") {
    auto t = gl2_congruence_triple(3);
    CHECK(t.actual);
    CHECK(t.G->order() == 81);
    CHECK(t.U->order() == 3);
    CHECK(t.L->order() == 9);
}

TEST_CASE("command line exit codes") {
    CHECK(shell("run --target iwahori --n 2 --p 2 --ell 2 -q") == 0);
    CHECK(shell("run --target iwahori --budget-elems 1") == 3);
    CHECK(shell("run --target orbit --p 5") == 2);
    CHECK(shell("run --target bogus") != 0);
    TempDir tmp;
    auto out = tmp.path / "r.json";
    CHECK(shell("run --target iwahori --no-timing --out " + out.string()) == 0);
    std::ifstream f(out);
    auto j = nlohmann::json::parse(f);
    CHECK(j["report"]["status"] == "pass");
    CHECK(shell("run --target iwahori --budget-elems 1 --out " + (tmp.path / "none.json").string()) == 3);
    CHECK_FALSE(fs::exists(tmp.path / "none.json"));
    CHECK(shell("cache list --cache-dir " + tmp.path.string()) == 0);
}

}  // TEST_SUITE
