#include "hfl/iwahori.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <optional>
#include <set>
#include <stdexcept>

#include "hfl/cache.hpp"
#include "hfl/classical.hpp"

namespace hfl {

namespace {

std::uint64_t ipow(std::uint64_t b, int e) {
    std::uint64_t r = 1;
    while (e-- > 0) r *= b;
    return r;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::set<int> cuts(const Composition& a) {
    std::set<int> s;
    int acc = 0;
    for (std::size_t i = 0; i + 1 < a.size(); ++i) s.insert(acc += a[i]);
    return s;
}

Composition from_cuts(const std::set<int>& s, int n) {
    Composition a;
    int last = 0;
    for (int c : s) {
        a.push_back(c - last);
        last = c;
    }
    a.push_back(n - last);
    return a;
}

Composition tail(const Composition& a) { return Composition(a.begin() + 1, a.end()); }

bool same_set(const FiniteGroup& a, const FiniteGroup& b) { return a.order() == b.order() && is_subgroup(a, b); }

std::string pair_name(const Composition& a, const Composition& b) { return to_string(a) + "<" + to_string(b); }

/// Pairs i < j in one block of b and different blocks of a.
int cross_pairs(const Composition& a, const Composition& b) {
    auto ba = block_of(a), bb = block_of(b);
    int c = 0;
    for (std::size_t i = 0; i < ba.size(); ++i)
        for (std::size_t j = i + 1; j < ba.size(); ++j) c += bb[i] == bb[j] && ba[i] != ba[j];
    return c;
}

bool unipotent_outside(const ZmodMatrix& x, const std::vector<int>& bl, bool upper) {
    for (int i = 0; i < x.size(); ++i)
        for (int j = 0; j < x.size(); ++j) {
            if (i == j) {
                if (x(i, j) != 1) return false;
            } else if ((upper ? i > j : i < j) || bl[i] == bl[j]) {
                if (x(i, j) != 0) return false;
            }
        }
    return true;
}

Character zero_of(const IwahoriGroup& g, const Composition& a) { return zero_function(g.tables.at(a)->classes); }

std::string irr_name(const Composition& a, std::size_t k) { return to_string(a) + "#" + std::to_string(k); }

void certify_family(IwahoriGroup& g) {
    Report& rep = g.certificate;
    const Composition top{g.n};
    {
        Tally t(rep, "iwahori-order", "|I_n| = (p-1)^n p^{n(n-1)/2} p^{n^2(ell-1)}");
        std::uint64_t want = iwahori_order(g.n, g.p, g.ell);
        t.check(g.I->order() == want, "order " + std::to_string(g.I->order()) + " vs " + std::to_string(want));
        t.record().data["order"] = g.I->order();
    }
    {
        Tally t(rep, "block-orders", "orders of I_alpha, U_alpha, V_alpha by counting free entries");
        for (const auto& a : g.comps) {
            std::uint64_t want = 1;
            for (int m : a) want *= iwahori_order(m, g.p, g.ell);
            int c = cross_pairs(a, top);
            t.check(g.block.at(a)->order() == want, "I" + to_string(a));
            t.check(g.upper.at(a)->order() == ipow(g.modulus, c), "U" + to_string(a));
            t.check(g.lower.at(a)->order() == ipow(g.p, c * (g.ell - 1)), "V" + to_string(a));
        }
    }
    {
        Tally t(rep, "block-triples", "(U_alpha^beta, I_alpha, V_alpha^beta) is an Iwahori decomposition of I_beta");
        for (const auto& a : g.comps)
            for (const auto& b : g.comps) {
                if (!leq(a, b)) continue;
                auto it = g.triples.find({a, b});
                bool ok = it != g.triples.end() && it->second.actual;
                if (ok) {
                    int c = cross_pairs(a, b);
                    ok = it->second.U->order() == ipow(g.modulus, c) &&
                         it->second.V->order() == ipow(g.p, c * (g.ell - 1));
                }
                t.check(ok, pair_name(a, b));
            }
    }
    {
        Tally t(rep, "standard-iwahori", "I_(1,...,1) U V is the full Iwahori subgroup");
        Composition ones(g.n, 1);
        const auto& tr = g.triples.at({ones, top});
        t.check(triple_product_count(*tr.U, *tr.L, *tr.V) == g.I->order(), to_string(ones));
    }
    {
        Tally t(rep, "semidirect-factorization",
                "U_alpha^gamma = U_alpha^beta x| U_beta^gamma and V_alpha^gamma = V_alpha^beta x| V_beta^gamma");
        for (const auto& a : g.comps)
            for (const auto& b : g.comps)
                for (const auto& c : g.comps) {
                    if (!leq(a, b) || !leq(b, c)) continue;
                    const auto &ac = g.triples.at({a, c}), &ab = g.triples.at({a, b}), &bc = g.triples.at({b, c});
                    std::string w = to_string(a) + "<" + pair_name(b, c);
                    for (bool up : {true, false}) {
                        const auto& whole = up ? ac.U : ac.V;
                        const auto& inner = up ? ab.U : ab.V;
                        const auto& normal = up ? bc.U : bc.V;
                        bool ok = is_subgroup(*inner, *whole) && is_subgroup(*normal, *whole) &&
                                  is_normal(*normal, *whole) && intersect(inner, normal)->order() == 1 &&
                                  inner->order() * normal->order() == whole->order();
                        t.check(ok, (up ? "U " : "V ") + w);
                    }
                }
    }
    {
        Tally t(rep, "meet-intersection", "U_{alpha^beta}^alpha = U_beta cap I_alpha and likewise for V");
        for (const auto& a : g.comps)
            for (const auto& b : g.comps) {
                const auto& tr = g.triples.at({meet(a, b), a});
                t.check(same_set(*tr.U, *intersect(g.upper.at(b), g.block.at(a))), "U " + to_string(a) + "," + to_string(b));
                t.check(same_set(*tr.V, *intersect(g.lower.at(b), g.block.at(a))), "V " + to_string(a) + "," + to_string(b));
            }
    }
    {
        Tally t(rep, "concat-product", "I_{alpha.beta} = I_alpha x I_beta, restricting to the U and V parts");
        for (int a = 1; a < g.n; ++a) {
            const auto &fa = g.family(a), &fb = g.family(g.n - a);
            std::map<CompositionPair, ProductEmbedding> emb;
            for (const auto& x : fa.comps)
                for (const auto& y : fb.comps) {
                    std::string w = to_string(x) + "." + to_string(y);
                    try {
                        emb.emplace(CompositionPair{x, y},
                                    product_embedding(g.block.at(concat(x, y)), fa.block.at(x), fb.block.at(y), a));
                        t.check(true, w);
                    } catch (const std::invalid_argument& e) {
                        t.check(false, w + ": " + e.what());
                    }
                }
            for (const auto& [xy, e] : emb) {
                const auto& [x2, y2] = xy;
                for (const auto& x : fa.comps)
                    for (const auto& y : fb.comps) {
                        if (!leq(x, x2) || !leq(y, y2)) continue;
                        const auto& whole = g.triples.at({concat(x, y), concat(x2, y2)});
                        const auto& left = fa.triples.at({x, x2});
                        const auto& right = fb.triples.at({y, y2});
                        for (bool up : {true, false}) {
                            const auto& h = up ? whole.U : whole.V;
                            const auto& l = up ? left.U : left.V;
                            const auto& r = up ? right.U : right.V;
                            bool ok = h->order() == l->order() * r->order();
                            for (Index i = 0; ok && i < h->order(); ++i) {
                                auto [u, v] = e.split(g.block.at(concat(x2, y2))->index_of(h->element(i)));
                                ok = l->contains(e.left->element(u)) && r->contains(e.right->element(v));
                            }
                            t.check(ok, std::string(up ? "U " : "V ") + to_string(concat(x, y)) + "<" +
                                            to_string(concat(x2, y2)));
                        }
                    }
            }
        }
    }
}

IwahoriPtr build_family(int n, std::uint32_t p, int ell, std::size_t budget, std::vector<IwahoriPtr> smaller) {
    auto g = std::make_shared<IwahoriGroup>();
    g->n = n;
    g->p = p;
    g->ell = ell;
    g->modulus = std::uint32_t(ipow(p, ell));
    g->smaller = std::move(smaller);
    g->I = cached_generate(iwahori_generators(n, g->modulus), n, g->modulus, budget, default_cache_dir());
    g->comps = compositions(n);
    const Composition top{n};
    for (const auto& a : g->comps) {
        auto bl = block_of(a);
        g->block[a] = a == top ? g->I : subgroup_where(g->I, [&](const ZmodMatrix& x) {
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    if (bl[i] != bl[j] && x(i, j) != 0) return false;
            return true;
        });
        g->upper[a] = subgroup_where(g->I, [&](const ZmodMatrix& x) { return unipotent_outside(x, bl, true); });
        g->lower[a] = subgroup_where(g->I, [&](const ZmodMatrix& x) { return unipotent_outside(x, bl, false); });
    }
    std::vector<CompositionPair> pairs;
    for (const auto& a : g->comps)
        for (const auto& b : g->comps)
            if (leq(a, b)) pairs.push_back({a, b});
    for (const auto& [a, b] : pairs) {
        try {
            auto t = certify_iwahori(intersect(g->upper[a], g->block[b]), g->block[a],
                                     intersect(g->lower[a], g->block[b]), g->block[b], nullptr, pair_name(a, b));
            g->contexts[{a, b}] = functor_context(t);
            g->triples[{a, b}] = std::move(t);
        } catch (const CertificationError&) {
        }
    }
    for (const auto& a : g->comps)
        if (a.size() > 1)
            g->splits.emplace(a, product_embedding(g->block[a], g->family(a[0]).I,
                                                   g->family(n - a[0]).block.at(tail(a)), a[0]));
    std::vector<TablePtr> tabs(g->comps.size());
    parallel_for(tabs.size(), [&](std::size_t i) { tabs[i] = character_table(g->block[g->comps[i]]); });
    for (std::size_t i = 0; i < tabs.size(); ++i) g->tables[g->comps[i]] = tabs[i];
    for (const auto& a : g->comps) {
        const auto& t = *g->tables[a];
        std::vector<ModulePtr> mods(t.size());
        parallel_for(t.size(), [&](std::size_t k) { mods[k] = irreducible_module(t, k); });
        g->irreducibles[a] = std::move(mods);
    }
    if (g->triples.size() == pairs.size()) certify_family(*g);
    else {
        Tally t(g->certificate, "block-triples", "(U_alpha^beta, I_alpha, V_alpha^beta) is an Iwahori decomposition of I_beta");
        for (const auto& [a, b] : pairs) t.check(g->triples.count({a, b}) > 0, pair_name(a, b));
    }
    if (!g->certificate.ok())
        throw CertificationError("build_iwahori: " + summary(g->certificate));
    return g;
}

}  // namespace

std::vector<Composition> compositions(int n) {
    if (n < 1) throw std::invalid_argument("compositions: n must be positive");
    std::vector<Composition> out;
    for (std::uint32_t mask = 0; mask < (1u << (n - 1)); ++mask) {
        std::set<int> s;
        for (int i = 0; i < n - 1; ++i)
            if (mask >> i & 1) s.insert(i + 1);
        out.push_back(from_cuts(s, n));
    }
    std::sort(out.begin(), out.end());
    return out;
}

int total(const Composition& a) {
    int s = 0;
    for (int x : a) s += x;
    return s;
}

std::vector<int> block_of(const Composition& a) {
    std::vector<int> b;
    for (std::size_t i = 0; i < a.size(); ++i) b.insert(b.end(), a[i], int(i));
    return b;
}

bool leq(const Composition& a, const Composition& b) {
    if (total(a) != total(b)) return false;
    auto ca = cuts(a), cb = cuts(b);
    return std::includes(ca.begin(), ca.end(), cb.begin(), cb.end());
}

Composition meet(const Composition& a, const Composition& b) {
    if (total(a) != total(b)) throw std::invalid_argument("meet: compositions of different sizes");
    auto s = cuts(a);
    auto cb = cuts(b);
    s.insert(cb.begin(), cb.end());
    return from_cuts(s, total(a));
}

Composition concat(const Composition& a, const Composition& b) {
    Composition c = a;
    c.insert(c.end(), b.begin(), b.end());
    return c;
}

std::string to_string(const Composition& a) {
    std::string s = "(";
    for (std::size_t i = 0; i < a.size(); ++i) s += (i ? "," : "") + std::to_string(a[i]);
    return s + ")";
}

Report lattice_report(int n) {
    Report rep;
    {
        Tally t(rep, "lattice-laws", "refinement is a partial order and meet is its greatest lower bound");
        for (int m = 1; m <= n; ++m) {
            auto P = compositions(m);
            t.check(P.size() == std::size_t(1) << (m - 1), "count " + std::to_string(m));
            for (const auto& a : P)
                for (const auto& b : P) {
                    auto w = to_string(a) + "," + to_string(b);
                    auto ab = meet(a, b);
                    t.check(leq(a, a) && ab == meet(b, a) && meet(a, a) == a, w);
                    t.check(leq(ab, a) && leq(ab, b), w);
                    t.check(!(leq(a, b) && leq(b, a)) || a == b, w);
                    t.check(leq(a, b) == (ab == a), w);
                    for (const auto& c : P) {
                        auto wc = w + "," + to_string(c);
                        t.check(!(leq(a, b) && leq(b, c)) || leq(a, c), wc);
                        t.check(meet(ab, c) == meet(a, meet(b, c)), wc);
                        t.check(!(leq(c, a) && leq(c, b)) || leq(c, ab), wc);
                    }
                }
        }
    }
    {
        Tally t(rep, "concat-laws", "concatenation is associative and order-preserving");
        for (int i = 1; i < n; ++i)
            for (int j = 1; i + j <= n; ++j)
                for (const auto& a : compositions(i))
                    for (const auto& b : compositions(j)) {
                        auto w = to_string(a) + "." + to_string(b);
                        t.check(total(concat(a, b)) == i + j, w);
                        for (const auto& a2 : compositions(i))
                            for (const auto& b2 : compositions(j))
                                if (leq(a, a2) && leq(b, b2)) t.check(leq(concat(a, b), concat(a2, b2)), w);
                        for (int k = 1; i + j + k <= n; ++k)
                            for (const auto& c : compositions(k))
                                t.check(concat(concat(a, b), c) == concat(a, concat(b, c)), w + "." + to_string(c));
                    }
    }
    return rep;
}

const IwahoriGroup& IwahoriGroup::family(int m) const {
    if (m == n) return *this;
    if (m < 1 || m > n) throw std::out_of_range("IwahoriGroup::family");
    return *smaller.at(std::size_t(m - 1));
}

std::uint64_t iwahori_order(int n, std::uint32_t p, int ell) {
    return ipow(p - 1, n) * ipow(p, n * (n - 1) / 2) * ipow(p, n * n * (ell - 1));
}

IwahoriPtr build_iwahori(int n, std::uint32_t p, int ell, std::optional<std::size_t> limit) {
    const std::size_t budget = limit.value_or(default_element_budget());
    if (n < 1 || ell < 1 || p < 2) throw std::invalid_argument("build_iwahori: need n >= 1, ell >= 1, p prime");
    for (std::uint32_t d = 2; d * d <= p; ++d)
        if (p % d == 0) throw std::invalid_argument("build_iwahori: p must be prime");
    if (iwahori_order(n, p, ell) > budget)
        throw BudgetExceeded("build_iwahori: |I_n| = " + std::to_string(iwahori_order(n, p, ell)) +
                             " exceeds the element budget " + std::to_string(budget));
    std::vector<IwahoriPtr> fams;
    for (int m = 1; m <= n; ++m) fams.push_back(build_family(m, p, ell, budget, fams));
    return fams.back();
}

ModulePtr pres_module(const IwahoriGroup& g, const Composition& a, const Composition& b, const ModulePtr& m) {
    auto r = pres(g.context(a, b), m);
    return r.output->dim() == 0 ? nullptr : r.output;
}

ModulePtr pind_module(const IwahoriGroup& g, const Composition& a, const Composition& b, const ModulePtr& m) {
    if (!m) return nullptr;
    auto r = pind(g.context(a, b), m);
    return r.output->dim() == 0 ? nullptr : r.output;
}

Character character_of(const IwahoriGroup& g, const Composition& a, const ModulePtr& m) {
    return m ? module_character(*m, g.table(a)) : zero_of(g, a);
}

std::vector<Composition> support_set(const IwahoriGroup& g, std::size_t k) {
    const auto& m = g.irreducibles.at({g.n}).at(k);
    std::vector<Composition> s;
    for (const auto& a : g.comps)
        if (pres_module(g, a, {g.n}, m)) s.push_back(a);
    for (const auto& a : s)
        for (const auto& b : s)
            if (std::find(s.begin(), s.end(), meet(a, b)) == s.end())
                throw CertificationError("support set of irreducible #" + std::to_string(k) + " contains " +
                                         to_string(a) + " and " + to_string(b) + " but not their meet");
    return s;
}

bool is_primitive(const IwahoriGroup& g, std::size_t k, bool audit) {
    const auto& m = g.irreducibles.at({g.n}).at(k);
    bool two = true;
    for (const auto& a : g.comps)
        if (a.size() == 2 && pres_module(g, a, {g.n}, m)) {
            two = false;
            break;
        }
    if (!audit) return two;
    bool all = true;
    for (const auto& a : g.comps)
        if (a.size() > 1 && pres_module(g, a, {g.n}, m)) all = false;
    if (all != two)
        throw CertificationError("is_primitive: two-block test disagrees with the full test on irreducible #" +
                                 std::to_string(k));
    return all;
}

std::vector<std::size_t> primitive_irreducibles(const IwahoriGroup& g, bool audit) {
    std::vector<char> flag(g.irr_count());
    parallel_for(flag.size(), [&](std::size_t k) { flag[k] = is_primitive(g, k, audit); });
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < flag.size(); ++k)
        if (flag[k]) out.push_back(k);
    return out;
}

Character tensor_product_character(const IwahoriGroup& g, const Composition& a, const std::vector<std::size_t>& factors) {
    if (factors.size() != a.size()) throw std::invalid_argument("tensor_product_character: one factor per block");
    if (a.size() == 1) return g.family(a[0]).table({a[0]}).irr.at(factors[0]);
    const auto& e = g.splits.at(a);
    const auto& left = g.family(a[0]).table({a[0]}).irr.at(factors[0]);
    auto right = tensor_product_character(g.family(g.n - a[0]), tail(a), {factors.begin() + 1, factors.end()});
    return tensor_character(e, left, right, g.tables.at(a)->classes);
}

std::vector<std::size_t> tensor_factors(const IwahoriGroup& g, const Composition& a, const Character& chi) {
    if (a.size() == 1) {
        auto k = g.table(a).find(chi);
        if (!k) throw std::invalid_argument("tensor_factors: not an irreducible character");
        return {*k};
    }
    const auto& rest = g.family(g.n - a[0]);
    auto [i, j] = tensor_factor(g.splits.at(a), chi, g.family(a[0]).table({a[0]}), rest.table(tail(a)));
    auto out = tensor_factors(rest, tail(a), rest.table(tail(a)).irr[j]);
    out.insert(out.begin(), i);
    return out;
}

Factorization primitive_factorize(const IwahoriGroup& g, std::size_t k, bool audit) {
    const Composition top{g.n};
    Factorization f;
    f.irreducible = k;
    const auto& m = g.irreducibles.at(top).at(k);
    f.dim = m->dim();
    f.support = support_set(g, k);
    f.alpha = top;
    for (const auto& a : f.support) f.alpha = meet(f.alpha, a);
    if (std::find(f.support.begin(), f.support.end(), f.alpha) == f.support.end())
        throw CertificationError("primitive_factorize: minimum of the support set is not in it");
    auto chi = character_of(g, f.alpha, pres_module(g, f.alpha, top, m));
    if (!g.table(f.alpha).find(chi))
        throw CertificationError("primitive_factorize: pres to " + to_string(f.alpha) + " is not irreducible");
    f.factors = tensor_factors(g, f.alpha, chi);
    for (std::size_t i = 0; i < f.factors.size(); ++i) {
        const auto& fam = g.family(f.alpha[i]);
        f.factor_dims.push_back(fam.table({f.alpha[i]}).irr[f.factors[i]].degree_int());
        f.primitive.push_back(is_primitive(fam, f.factors[i], audit));
    }
    if (std::find(f.primitive.begin(), f.primitive.end(), false) != f.primitive.end())
        throw CertificationError("primitive_factorize: a factor of irreducible #" + std::to_string(k) +
                                 " is not primitive");
    auto idx = g.table(f.alpha).find(tensor_product_character(g, f.alpha, f.factors));
    if (idx) {
        auto back = pind_module(g, f.alpha, top, g.irreducibles.at(f.alpha)[*idx]);
        f.round_trip = character_of(g, top, back) == g.table(top).irr[k];
    }
    if (!f.round_trip)
        throw CertificationError("primitive_factorize: round trip fails for irreducible #" + std::to_string(k));
    return f;
}

RiResult verify_ri(const IwahoriGroup& g, const Composition& a, const Composition& b, std::size_t k) {
    const Composition top{g.n};
    const auto& m = g.irreducibles.at(a).at(k);
    RiResult r;
    auto up = pind_module(g, a, top, m);
    r.lhs = character_of(g, b, up ? pres_module(g, b, top, up) : nullptr);
    auto c = meet(a, b);
    r.rhs = character_of(g, b, pind_module(g, c, b, pres_module(g, c, a, m)));
    r.pass = r.lhs == r.rhs;
    r.vanishes = r.lhs.is_zero();
    return r;
}

Report factorization_report(const IwahoriGroup& g, bool audit) {
    auto t0 = std::chrono::steady_clock::now();
    Report rep;
    const Composition top{g.n};
    const std::size_t n = g.irr_count();
    struct Out {
        std::optional<Factorization> f;
        std::string error;
        bool closed = true, deterministic = false, unique = true;
        std::string unique_witness;
    };
    std::vector<Out> out(n);
    parallel_for(n, [&](std::size_t k) {
        auto& o = out[k];
        try {
            support_set(g, k);
        } catch (const CertificationError& e) {
            o.closed = false;
            o.error = e.what();
        }
        try {
            o.f = primitive_factorize(g, k, audit);
        } catch (const std::exception& e) {
            if (o.error.empty()) o.error = e.what();
            return;
        }
        o.deterministic = primitive_factorize(g, k, audit) == *o.f;
        const auto& m = g.irreducibles.at(top)[k];
        for (const auto& b : o.f->support) {
            if (b == o.f->alpha) continue;
            // a factorization along b has a non-primitive factor exactly when pres^b_gamma is nonzero for some gamma < b
            auto nb = pres_module(g, b, top, m);
            if (!pres_module(g, o.f->alpha, b, nb)) {
                o.unique = false;
                o.unique_witness = to_string(b);
            }
        }
    });

    std::vector<std::size_t> prim_count(std::size_t(g.n) + 1);
    for (int m = 1; m <= g.n; ++m) prim_count[m] = primitive_irreducibles(g.family(m), audit).size();
    std::size_t expected = 0;
    for (const auto& a : g.comps) {
        std::size_t c = 1;
        for (int x : a) c *= prim_count[x];
        expected += c;
    }

    Tally closed(rep, "support-meet-closed", "pres^n_alpha M and pres^n_beta M nonzero imply pres^n_{alpha^beta} M nonzero");
    Tally topc(rep, "support-contains-top", "every support set contains (n)");
    Tally fact(rep, "factorization", "M = pind^n_alpha(M_1 x ... x M_m) with every M_i primitive");
    Tally det(rep, "factorization-deterministic", "re-running the factorization gives the same composition and factors");
    Tally uniq(rep, "factorization-unique", "no other support composition yields only primitive factors");
    Tally bij(rep, "factorization-bijection", "factorization is a bijection onto tuples of primitive irreducibles");
    nlohmann::json table = nlohmann::json::array();
    std::set<std::pair<Composition, std::vector<std::size_t>>> images;
    for (std::size_t k = 0; k < n; ++k) {
        const auto& o = out[k];
        std::string w = "irreducible #" + std::to_string(k);
        closed.check(o.closed, w + (o.closed ? "" : ": " + o.error));
        fact.check(o.f.has_value(), w + (o.f ? "" : ": " + o.error));
        if (!o.f) continue;
        const auto& f = *o.f;
        topc.check(std::find(f.support.begin(), f.support.end(), top) != f.support.end(), w);
        det.check(o.deterministic, w);
        uniq.check(o.unique, w + " via " + o.unique_witness);
        bij.check(images.insert({f.alpha, f.factors}).second, w + " repeats an image");
        nlohmann::json row{{"irreducible", k}, {"dim", f.dim}, {"alpha", to_string(f.alpha)},
                           {"factors", f.factors}, {"factor_dims", f.factor_dims}, {"primitive", f.primitive},
                           {"support_size", f.support.size()}};
        table.push_back(row);
    }
    bij.check(images.size() == expected,
              "images " + std::to_string(images.size()) + " vs primitive tuples " + std::to_string(expected));
    bij.record().data["images"] = images.size();
    bij.record().data["primitive_tuples"] = expected;
    fact.record().data["table"] = std::move(table);
    rep.timing["seconds"] = seconds_since(t0);
    return rep;
}

Report ri_report(const IwahoriGroup& g) {
    auto t0 = std::chrono::steady_clock::now();
    Report rep;
    struct Job {
        Composition a, b;
        std::size_t k;
    };
    std::vector<Job> jobs;
    for (const auto& a : g.comps)
        for (const auto& b : g.comps)
            for (std::size_t k = 0; k < g.table(a).size(); ++k) jobs.push_back({a, b, k});
    std::vector<char> pass(jobs.size()), zero(jobs.size());
    parallel_for(jobs.size(), [&](std::size_t i) {
        auto r = verify_ri(g, jobs[i].a, jobs[i].b, jobs[i].k);
        pass[i] = r.pass;
        zero[i] = r.vanishes;
    });
    Tally t(rep, "restriction-induction", "pres^n_beta pind^n_alpha M = pind^beta_{alpha^beta} pres^alpha_{alpha^beta} M");
    std::size_t vanishing = 0;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        t.check(pass[i], to_string(jobs[i].b) + " from " + irr_name(jobs[i].a, jobs[i].k));
        vanishing += zero[i];
    }
    t.record().data["triples"] = jobs.size();
    t.record().data["vanishing"] = vanishing;
    rep.timing["seconds"] = seconds_since(t0);
    return rep;
}

Report grothendieck_check(const IwahoriGroup& g, bool audit) {
    auto t0 = std::chrono::steady_clock::now();
    Report rep;
    const Composition top{g.n};
    std::vector<std::vector<std::size_t>> prim(std::size_t(g.n) + 1);
    for (int m = 1; m <= g.n; ++m) prim[m] = primitive_irreducibles(g.family(m), audit);

    struct Tuple {
        Composition a;
        std::vector<std::size_t> factors;
    };
    std::vector<Tuple> tuples;
    nlohmann::json per = nlohmann::json::object();
    std::size_t expected = 0;
    for (const auto& a : g.comps) {
        std::size_t c = 1;
        for (int x : a) c *= prim[x].size();
        per[to_string(a)] = c;
        expected += c;
        std::vector<std::size_t> digit(a.size(), 0);
        for (std::size_t i = 0; i < c; ++i) {
            Tuple t{a, {}};
            for (std::size_t j = 0; j < a.size(); ++j) t.factors.push_back(prim[a[j]][digit[j]]);
            tuples.push_back(std::move(t));
            for (std::size_t j = a.size(); j-- > 0;) {
                if (++digit[j] < prim[a[j]].size()) break;
                digit[j] = 0;
            }
        }
    }
    {
        Tally t(rep, "grothendieck-count", "|Irr(I_n)| = sum over compositions alpha of prod |Prim(I_{alpha_i})|");
        t.check(g.irr_count() == expected,
                std::to_string(g.irr_count()) + " irreducibles vs " + std::to_string(expected) + " primitive tuples");
        nlohmann::json counts = nlohmann::json::array();
        for (int m = 1; m <= g.n; ++m) counts.push_back(prim[m].size());
        t.record().data["irreducibles"] = g.irr_count();
        t.record().data["primitive_tuples"] = expected;
        t.record().data["primitive_counts"] = counts;
        t.record().data["per_composition"] = per;
    }
    std::vector<std::optional<std::size_t>> image(tuples.size());
    parallel_for(tuples.size(), [&](std::size_t i) {
        const auto& tp = tuples[i];
        auto k = g.table(tp.a).find(tensor_product_character(g, tp.a, tp.factors));
        if (!k) return;
        auto up = pind_module(g, tp.a, top, g.irreducibles.at(tp.a)[*k]);
        image[i] = g.table(top).find(character_of(g, top, up));
    });
    Tally inj(rep, "grothendieck-injective", "pind^n_alpha(M_1 x ... x M_m) over primitive tuples are distinct irreducibles");
    std::set<std::size_t> seen;
    for (std::size_t i = 0; i < tuples.size(); ++i) {
        std::string w = to_string(tuples[i].a) + nlohmann::json(tuples[i].factors).dump();
        inj.check(image[i].has_value(), w + " is not irreducible");
        if (image[i]) inj.check(seen.insert(*image[i]).second, w + " repeats irreducible #" + std::to_string(*image[i]));
    }
    inj.record().data["images"] = seen.size();
    rep.timing["seconds"] = seconds_since(t0);
    return rep;
}

Report product_report(const IwahoriGroup& g) {
    auto t0 = std::chrono::steady_clock::now();
    Report rep;
    {
        struct Job {
            Composition a, b;
            std::size_t k;
        };
        std::vector<Job> jobs;
        for (const auto& a : g.comps)
            for (const auto& b : g.comps)
                if (leq(a, b))
                    for (std::size_t k = 0; k < g.table(a).size(); ++k) jobs.push_back({a, b, k});
        std::vector<char> ok(jobs.size());
        parallel_for(jobs.size(), [&](std::size_t i) {
            const auto& j = jobs[i];
            auto up = pind_module(g, j.a, j.b, g.irreducibles.at(j.a)[j.k]);
            ok[i] = up && g.table(j.b).find(character_of(g, j.b, up)).has_value();
        });
        Tally t(rep, "pind-irreducible", "pind^beta_alpha sends irreducibles to irreducibles");
        for (std::size_t i = 0; i < jobs.size(); ++i) t.check(ok[i], pair_name(jobs[i].a, jobs[i].b) + " " + irr_name(jobs[i].a, jobs[i].k));
    }
    {
        struct Job {
            Composition a, b, c;
            std::size_t k;
            bool induce;
        };
        std::vector<Job> jobs;
        for (const auto& a : g.comps)
            for (const auto& b : g.comps)
                for (const auto& c : g.comps) {
                    if (!leq(a, b) || !leq(b, c)) continue;
                    for (std::size_t k = 0; k < g.table(a).size(); ++k) jobs.push_back({a, b, c, k, true});
                    for (std::size_t k = 0; k < g.table(c).size(); ++k) jobs.push_back({a, b, c, k, false});
                }
        std::vector<char> ok(jobs.size());
        parallel_for(jobs.size(), [&](std::size_t i) {
            const auto& j = jobs[i];
            if (j.induce) {
                const auto& m = g.irreducibles.at(j.a)[j.k];
                ok[i] = character_of(g, j.c, pind_module(g, j.b, j.c, pind_module(g, j.a, j.b, m))) ==
                        character_of(g, j.c, pind_module(g, j.a, j.c, m));
            } else {
                const auto& m = g.irreducibles.at(j.c)[j.k];
                auto mid = pres_module(g, j.b, j.c, m);
                ok[i] = character_of(g, j.a, mid ? pres_module(g, j.a, j.b, mid) : nullptr) ==
                        character_of(g, j.a, pres_module(g, j.a, j.c, m));
            }
        });
        Tally t(rep, "pind-stages", "pind^gamma_alpha = pind^gamma_beta pind^beta_alpha and pres likewise");
        for (std::size_t i = 0; i < jobs.size(); ++i) {
            const auto& j = jobs[i];
            t.check(ok[i], std::string(j.induce ? "pind " : "pres ") + to_string(j.a) + "<" + pair_name(j.b, j.c) + " " +
                               irr_name(j.induce ? j.a : j.c, j.k));
        }
    }
    {
        Tally t(rep, "concat-compatibility",
                "pind and pres along a concatenation agree with the exterior tensor product of the factors");
        for (int a = 1; a < g.n; ++a) {
            const auto &fa = g.family(a), &fb = g.family(g.n - a);
            std::map<CompositionPair, ProductEmbedding> emb;
            for (const auto& x : fa.comps)
                for (const auto& y : fb.comps)
                    emb.emplace(CompositionPair{x, y},
                                product_embedding(g.block.at(concat(x, y)), fa.block.at(x), fb.block.at(y), a));
            auto tensor = [&](const Composition& x, const Composition& y, const Character& l, const Character& r) {
                return tensor_character(emb.at({x, y}), l, r, g.tables.at(concat(x, y))->classes);
            };
            struct Job {
                Composition x, x2, y, y2;
                std::size_t i, j;
                bool induce;
            };
            std::vector<Job> jobs;
            for (const auto& x : fa.comps)
                for (const auto& x2 : fa.comps)
                    for (const auto& y : fb.comps)
                        for (const auto& y2 : fb.comps) {
                            if (!leq(x, x2) || !leq(y, y2)) continue;
                            for (std::size_t i = 0; i < fa.table(x).size(); ++i)
                                for (std::size_t j = 0; j < fb.table(y).size(); ++j) jobs.push_back({x, x2, y, y2, i, j, true});
                            for (std::size_t i = 0; i < fa.table(x2).size(); ++i)
                                for (std::size_t j = 0; j < fb.table(y2).size(); ++j) jobs.push_back({x, x2, y, y2, i, j, false});
                        }
            std::vector<char> ok(jobs.size());
            parallel_for(jobs.size(), [&](std::size_t q) {
                const auto& jb = jobs[q];
                auto xy = concat(jb.x, jb.y), xy2 = concat(jb.x2, jb.y2);
                if (jb.induce) {
                    auto k = g.table(xy).find(tensor(jb.x, jb.y, fa.table(jb.x)[jb.i], fb.table(jb.y)[jb.j]));
                    if (!k) return;
                    auto lhs = character_of(g, xy2, pind_module(g, xy, xy2, g.irreducibles.at(xy)[*k]));
                    auto l = character_of(fa, jb.x2, pind_module(fa, jb.x, jb.x2, fa.irreducibles.at(jb.x)[jb.i]));
                    auto r = character_of(fb, jb.y2, pind_module(fb, jb.y, jb.y2, fb.irreducibles.at(jb.y)[jb.j]));
                    ok[q] = lhs == tensor(jb.x2, jb.y2, l, r);
                } else {
                    auto k = g.table(xy2).find(tensor(jb.x2, jb.y2, fa.table(jb.x2)[jb.i], fb.table(jb.y2)[jb.j]));
                    if (!k) return;
                    auto lhs = character_of(g, xy, pres_module(g, xy, xy2, g.irreducibles.at(xy2)[*k]));
                    auto l = character_of(fa, jb.x, pres_module(fa, jb.x, jb.x2, fa.irreducibles.at(jb.x2)[jb.i]));
                    auto r = character_of(fb, jb.y, pres_module(fb, jb.y, jb.y2, fb.irreducibles.at(jb.y2)[jb.j]));
                    ok[q] = lhs == tensor(jb.x, jb.y, l, r);
                }
            });
            for (std::size_t q = 0; q < jobs.size(); ++q) {
                const auto& jb = jobs[q];
                t.check(ok[q], std::string(jb.induce ? "pind " : "pres ") + to_string(jb.x) + "." + to_string(jb.y) + "<" +
                                   to_string(jb.x2) + "." + to_string(jb.y2) + " #" + std::to_string(jb.i) + "x#" +
                                   std::to_string(jb.j));
            }
        }
    }
    rep.timing["seconds"] = seconds_since(t0);
    return rep;
}

Report functor_suite_report(const IwahoriGroup& g) {
    auto t0 = std::chrono::steady_clock::now();
    Report rep;
    const Composition ones(g.n, 1);
    for (const auto& [ab, tr] : g.triples) {
        const auto& [a, b] = ab;
        if (a == b) continue;
        FunctorSuiteInput in;
        in.triple = tr;
        in.tG = g.tables.at(b);
        in.tL = g.tables.at(a);
        if (ones != a) in.inner = g.triples.at({ones, a});
        // reduction mod p: the lower part dies and the quotient triple is (U mod p, I_alpha mod p, 1)
        if (g.ell > 1) {
            auto reduce = [&](const GroupPtr& h) {
                std::vector<ZmodMatrix> gens;
                for (const auto& x : h->generators()) gens.push_back(x.reduce(g.p));
                return gens;
            };
            auto qG = FiniteGroup::generate(reduce(tr.G), g.n, g.p);
            auto q = certify_iwahori(subgroup_generated(qG, reduce(tr.U)), subgroup_generated(qG, reduce(tr.L)),
                                     subgroup_generated(qG, {}), qG, nullptr, tr.name + "/residue");
            in.quotient = QuotientData{q, std::make_shared<GroupHom>(GroupHom::reduction(tr.G, qG))};
        }
        rep.merge(verify_functor_properties(in), "functors/" + tr.name);
        rep.merge(verify_actual_decomposition_properties(tr, g.tables.at(b), g.tables.at(a)), "actual/" + tr.name);
    }
    rep.timing["seconds"] = seconds_since(t0);
    return rep;
}

Report iwahori_report(int n, std::uint32_t p, int ell, bool audit, std::optional<std::size_t> budget) {
    auto t0 = std::chrono::steady_clock::now();
    auto g = build_iwahori(n, p, ell, budget);
    Report rep;
    std::string tag = "I" + std::to_string(n) + "(Z/" + std::to_string(g->modulus) + ")";
    rep.merge(g->certificate, tag + "/certificate");
    rep.merge(lattice_report(n), tag);
    for (const auto& r : {factorization_report(*g, audit), ri_report(*g), grothendieck_check(*g, audit), product_report(*g)})
        rep.merge(r, tag);
    rep.timing[tag + "/seconds"] = seconds_since(t0);
    return rep;
}

}  // namespace hfl
