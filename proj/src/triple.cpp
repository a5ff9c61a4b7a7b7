#include "hfl/triple.hpp"

#include <unordered_set>

namespace hfl {

std::size_t triple_product_count(const FiniteGroup& u, const FiniteGroup& l, const FiniteGroup& v) {
    std::unordered_set<std::uint64_t> s;
    s.reserve(u.order() * l.order() * v.order());
    std::vector<ZmodMatrix> vm;
    for (Index k = 0; k < v.order(); ++k) vm.push_back(v.element(k));
    for (Index i = 0; i < u.order(); ++i) {
        ZmodMatrix x = u.element(i);
        for (Index j = 0; j < l.order(); ++j) {
            ZmodMatrix xl = x * l.element(j);
            for (const auto& y : vm) s.insert((xl * y).key());
        }
    }
    return s.size();
}

IwahoriTriple certify_iwahori(GroupPtr U, GroupPtr L, GroupPtr V, GroupPtr G, GroupPtr K, std::string name) {
    std::vector<std::string> failures;
    if (!is_subgroup(*U, *G)) failures.push_back("U not contained in G");
    if (!is_subgroup(*L, *G)) failures.push_back("L not contained in G");
    if (!is_subgroup(*V, *G)) failures.push_back("V not contained in G");
    if (!normalizes(*L, *U)) failures.push_back("L does not normalize U");
    if (!normalizes(*L, *V)) failures.push_back("L does not normalize V");
    std::size_t expected = U->order() * L->order() * V->order();
    std::size_t count = triple_product_count(*U, *L, *V);
    if (count != expected)
        failures.push_back("product map U x L x V not injective (" + std::to_string(count) + " of " +
                           std::to_string(expected) + ")");
    if (K) {
        if (!is_normal(*K, *G)) failures.push_back("witness K not normal in G");
        GroupPtr uk = intersect(U, K), lk = intersect(L, K), vk = intersect(V, K);
        std::size_t ck = triple_product_count(*uk, *lk, *vk);
        if (ck != K->order() || uk->order() * lk->order() * vk->order() != K->order())
            failures.push_back("product map on K not bijective");
    }
    if (!failures.empty()) {
        std::string msg = "certify_iwahori failed" + (name.empty() ? std::string() : " [" + name + "]") + ":";
        for (const auto& f : failures) msg += " " + f + ";";
        throw CertificationError(msg);
    }
    IwahoriTriple t;
    t.G = std::move(G);
    t.U = std::move(U);
    t.L = std::move(L);
    t.V = std::move(V);
    t.K = std::move(K);
    t.actual = count == t.G->order();
    t.name = std::move(name);
    return t;
}

IwahoriTriple swapped(const IwahoriTriple& t) {
    IwahoriTriple s = t;
    std::swap(s.U, s.V);
    if (!s.name.empty()) s.name += "/swapped";
    return s;
}

}  // namespace hfl
