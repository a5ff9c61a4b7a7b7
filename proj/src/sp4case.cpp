#include "hfl/sp4case.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

#include "hfl/cache.hpp"
#include "hfl/modp.hpp"

namespace hfl {

namespace {

constexpr double kTraceTol = 1e-6;

std::uint64_t ipow(std::uint64_t b, int e) {
    std::uint64_t r = 1;
    while (e-- > 0) r *= b;
    return r;
}

nlohmann::json rows(const ZmodMatrix& m) {
    nlohmann::json j = nlohmann::json::array();
    for (int i = 0; i < m.size(); ++i) {
        nlohmann::json r = nlohmann::json::array();
        for (int k = 0; k < m.size(); ++k) r.push_back(m(i, k));
        j.push_back(r);
    }
    return j;
}

std::string brief(const ZmodMatrix& m) { return rows(m).dump(); }

ZmodMatrix conj(const ZmodMatrix& g, const ZmodMatrix& y) { return g * y * g.inverse(); }

bool in_levi_lie(const ZmodMatrix& z) {
    for (int i = 0; i < 2; ++i)
        for (int k = 0; k < 2; ++k) {
            if (z(i, k + 2) || z(i + 2, k)) return false;
            if (Zmod(z(i, k), z.modulus()) != -Zmod(z(k + 2, i + 2), z.modulus())) return false;
        }
    return true;
}

bool block_diagonal(const ZmodMatrix& g) {
    for (int i = 0; i < 2; ++i)
        for (int k = 0; k < 2; ++k)
            if (g(i, k + 2) || g(i + 2, k)) return false;
    return true;
}

bool same_set(const FiniteGroup& a, const FiniteGroup& b) { return a.order() == b.order() && is_subgroup(a, b); }

bool commutative(const FiniteGroup& g) {
    for (Index a : g.generator_indices())
        for (Index b : g.generator_indices())
            if (g.mul(a, b) != g.mul(b, a)) return false;
    return true;
}

bool has_element_of_order(const FiniteGroup& g, std::uint64_t n) {
    for (Index i = 0; i < g.order(); ++i)
        if (g.element_order(i) == n) return true;
    return false;
}

/// l -> l x l^{-1} over the Levi, keyed by the image.
std::map<std::uint64_t, ZmodMatrix> levi_orbit(const Sp4Context& c, const ZmodMatrix& x) {
    std::map<std::uint64_t, ZmodMatrix> out;
    for (Index i = 0; i < c.L->order(); ++i) {
        ZmodMatrix l = c.L->element(i);
        out.emplace((l * x * c.L->element(c.L->inv(i))).key(), l);
    }
    return out;
}

std::uint64_t orbit_key(const Sp4Context& c, const ZmodMatrix& x) {
    std::uint64_t best = ~std::uint64_t(0);
    for (Index i = 0; i < c.L->order(); ++i)
        best = std::min(best, (c.L->element(i) * x * c.L->element(c.L->inv(i))).key());
    return best;
}

std::vector<std::uint64_t> charpoly4(const ZmodMatrix& z) {
    modp::Mat m(4, 4);
    for (int i = 0; i < 4; ++i)
        for (int k = 0; k < 4; ++k) m(i, k) = z(i, k);
    return modp::charpoly(m, z.modulus());
}

std::vector<ZmodMatrix> all_elements(const FiniteGroup& g) {
    std::vector<ZmodMatrix> out;
    for (Index i = 0; i < g.order(); ++i) out.push_back(g.element(i));
    return out;
}

GroupPtr generated(const std::vector<ZmodMatrix>& gens, std::uint32_t p) { return FiniteGroup::generate(gens, 4, p); }

std::vector<ZmodMatrix> monomial_symplectic(std::uint32_t p) {
    std::vector<int> perm{0, 1, 2, 3};
    std::vector<ZmodMatrix> out;
    std::uint64_t n = ipow(p - 1, 4);
    do {
        for (std::uint64_t e = 0; e < n; ++e) {
            ZmodMatrix m(4, p);
            std::uint64_t r = e;
            for (int i = 0; i < 4; ++i) {
                m.set(perm[i], i, std::int64_t(1 + r % (p - 1)));
                r /= p - 1;
            }
            if (is_symplectic(m)) out.push_back(m);
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

/// Numerical class traces compared on every class.
bool traces_agree(const ModuleRep& a, const ModuleRep& b, const ClassData& c, std::string* why = nullptr) {
    auto ta = class_traces(a, c), tb = class_traces(b, c);
    for (std::size_t k = 0; k < ta.size(); ++k)
        if (std::abs(ta[k] - tb[k]) > kTraceTol) {
            if (why) *why = "class " + std::to_string(k) + ": " + std::to_string(ta[k].real()) + " vs " +
                            std::to_string(tb[k].real());
            return false;
        }
    return true;
}

double self_pairing(const ModuleRep& a, const ClassData& c) {
    auto t = class_traces(a, c);
    double s = 0;
    for (std::size_t k = 0; k < t.size(); ++k) s += double(c.cc.sizes[k]) * std::norm(t[k]);
    return s / double(c.order());
}

std::int64_t rounded(double x, bool* ok) {
    double r = std::round(x);
    if (std::abs(x - r) > kTraceTol) *ok = false;
    return std::int64_t(r);
}

/// dim End_G(Ind_{LV}^G chi) by the Mackey double coset sum over LV \ G / LV.
std::int64_t induced_end_dimension(const GroupPtr& G, const GroupPtr& L, const GroupPtr& V, const Character& chi,
                                   bool* ok) {
    auto K = join(G, L, V);
    std::map<std::uint64_t, Index> levi_part;
    for (Index i = 0; i < K->order(); ++i) {
        ZmodMatrix k = K->element(i);
        for (Index j = 0; j < L->order(); ++j)
            if (V->contains(L->element(L->inv(j)) * k)) {
                levi_part.emplace(k.key(), j);
                break;
            }
    }
    auto value = [&](const ZmodMatrix& k) { return chi.at(levi_part.at(k.key())).to_complex(); };
    double total = 0;
    for (const auto& dc : double_cosets(*K, *G, *K)) {
        ZmodMatrix g = G->element(dc.rep), gi = g.inverse();
        std::complex<double> sum = 0;
        std::size_t n = 0;
        for (Index i = 0; i < K->order(); ++i) {
            ZmodMatrix k = K->element(i), kg = gi * k * g;
            if (!K->contains(kg)) continue;
            sum += value(k) * std::conj(value(kg));
            ++n;
        }
        total += sum.real() / double(n);
    }
    return rounded(total, ok);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

ZmodMatrix levi_point(const ZmodMatrix& x) { return block_diag(x, -x.transpose()); }

ZmodMatrix top_left(const ZmodMatrix& m) {
    return ZmodMatrix::from_entries(2, m.modulus(), {m(0, 0), m(0, 1), m(1, 0), m(1, 1)});
}

Sp4Context build_sp4(std::uint32_t p, std::optional<bool> enumerate_group) {
    if (p % 2 == 0 || !modp::is_prime(p)) throw std::invalid_argument("build_sp4: p must be an odd prime");
    Sp4Context c;
    c.p = p;
    c.lifted = sp4_generators(p * p);
    c.residue = sp4_generators(p);
    const auto& r = c.residue;
    bool full = enumerate_group.value_or(p == 3);
    std::uint64_t q = p;
    std::uint64_t sp4_order = ipow(q, 4) * (q * q - 1) * (q * q * q * q - 1);
    std::uint64_t gl2_order = (q * q - 1) * (q * q - q);
    if (full) c.G = cached_generate(r.G, 4, p, default_element_budget(), default_cache_dir());
    c.L = generated(r.L, p);
    c.U = generated(r.U, p);
    c.V = generated(r.V, p);
    c.D = generated(r.D, p);
    c.Uprime = generated(r.Uprime, p);
    c.Vprime = generated(r.Vprime, p);
    c.g = sp4_lie(p);
    c.l = siegel_levi_lie(p);
    c.d = siegel_torus_lie(p);
    c.N = group_from_elements(monomial_symplectic(p), 4, p);
    c.NL = subgroup_where(c.N, block_diagonal);

    Report& rep = c.certificate;
    {
        Tally t(rep, "symplectic-form", "every generator and s, t, w satisfy g^t j g = j");
        for (const auto* gs : {&c.lifted, &c.residue}) {
            for (const auto* v : {&gs->G, &gs->L, &gs->U, &gs->V, &gs->D, &gs->Uprime, &gs->Vprime})
                for (const auto& x : *v) t.check(is_symplectic(x), brief(x));
            for (const auto& x : {gs->s, gs->t, gs->w}) t.check(is_symplectic(x), brief(x));
        }
        if (c.G)
            for (Index i = 0; i < c.G->order(); ++i) t.check(is_symplectic(c.G->element(i)), "group element");
    }
    {
        Tally t(rep, "element-forms", "t = diag(sigma, sigma), s = [[0, sigma], [sigma^-1, 0]], w as stated");
        ZmodMatrix sigma = ZmodMatrix::from_rows(p, {{0, -1}, {1, 0}});
        ZmodMatrix zero(2, p);
        t.check(r.t == block_diag(sigma, sigma), "t");
        t.check(r.s == block_matrix(zero, sigma, sigma.inverse(), zero), "s");
        t.check(r.w == ZmodMatrix::from_rows(p, {{0, 0, -1, 0}, {0, 1, 0, 0}, {1, 0, 0, 0}, {0, 0, 0, 1}}), "w");
        t.check(r.j == block_matrix(zero, -ZmodMatrix::identity(2, p), ZmodMatrix::identity(2, p), zero), "j");
        for (const auto& x : {r.s, r.t, r.w}) t.check(c.N->contains(x), "s, t, w normalize D");
        t.check(c.L->contains(r.t), "t in L");
    }
    {
        Tally t(rep, "subgroup-orders", "orders of G, L, U, V, D, U', V' from the order formulas");
        auto& data = t.record().data;
        if (c.G) {
            t.check(c.G->order() == sp4_order, "Sp4 order " + std::to_string(c.G->order()));
            data["G"] = c.G->order();
        }
        data["G_formula"] = sp4_order;
        t.check(c.L->order() == gl2_order, "L");
        t.check(c.U->order() == q * q * q && c.V->order() == q * q * q, "U, V");
        t.check(c.D->order() == (q - 1) * (q - 1), "D");
        t.check(c.Uprime->order() == q && c.Vprime->order() == q, "U', V'");
        data["L"] = c.L->order();
        data["U"] = c.U->order();
        data["D"] = c.D->order();
    }
    {
        Tally t(rep, "residue-triple", "L normalizes U and V and U x L x V -> G is injective over F_p");
        t.check(normalizes(*c.L, *c.U) && normalizes(*c.L, *c.V), "normalization");
        t.check(triple_product_count(*c.U, *c.L, *c.V) == c.U->order() * c.L->order() * c.V->order(), "product");
        t.check(c.D->order() * c.Uprime->order() * c.Vprime->order() ==
                    triple_product_count(*c.Uprime, *c.D, *c.Vprime),
                "U' D V'");
        if (c.G) {
            auto tr = certify_iwahori(c.U, c.L, c.V, c.G, nullptr, "siegel");
            t.check(!tr.actual, "the residue triple is not an actual decomposition of Sp4(F_p)");
        }
    }
    if (p == 3) {
        // key width limits the lifted-level groups to p = 3
        std::uint32_t m = p * p;
        const auto& lf = c.lifted;
        Tally v(rep, "virtual-triple", "over Z/p^2: L normalizes U and V, U meets LV trivially, L meets V trivially");
        auto U2 = FiniteGroup::generate(lf.U, 4, m), V2 = FiniteGroup::generate(lf.V, 4, m);
        for (const auto& l : lf.L)
            for (const auto& u : lf.U) {
                ZmodMatrix x = conj(l, u), y = conj(l, u.transpose());
                v.check(U2->contains(x) && V2->contains(y), brief(l));
            }
        for (Index i = 1; i < U2->order(); ++i) {
            ZmodMatrix u = U2->element(i);
            v.check(u(0, 2) || u(0, 3) || u(1, 2) || u(1, 3), "U meets LV");
        }
        for (Index i = 1; i < V2->order(); ++i) v.check(!block_diagonal(V2->element(i)), "V meets L");
        v.record().data = {{"U_order", U2->order()}, {"V_order", V2->order()}};

        Tally k(rep, "kernel-triple", "the first congruence kernel is the product of its U, L, V parts");
        auto kt = sp4_kernel_triple(p);
        auto K = congruence_group(kt.whole, m), K1 = congruence_group(kt.upper, m), K2 = congruence_group(kt.levi, m),
             K3 = congruence_group(kt.lower, m);
        k.check(K->order() == ipow(q, 10), "kernel order");
        k.check(K1->order() * K2->order() * K3->order() == K->order(), "part orders");
        k.check(triple_product_count(*K1, *K2, *K3) == K->order(), "kernel products");
        for (const auto& g : lf.G)
            for (const auto& x : K->generators())
                k.check(conj(g, x).reduce(p).is_identity() && is_symplectic(conj(g, x)), "kernel not normal");
        k.record().data = {{"kernel_order", K->order()}};
    }
    {
        Tally t(rep, "weyl-group", "N(D)/D is dihedral of order 8, generated by W_L and w, with |W_L| = 2");
        std::size_t nd = c.N->order() / c.D->order();
        t.check(c.N->order() % c.D->order() == 0 && nd == 8, "|W_G| = " + std::to_string(nd));
        t.check(is_normal(*c.D, *c.N), "D normal in N");
        std::size_t wl = c.NL->order() / c.D->order();
        t.check(wl == 2, "|W_L| = " + std::to_string(wl));
        std::size_t involutions = 0;
        bool nonabelian = false;
        for (Index a = 0; a < c.N->order(); ++a) {
            if (c.D->contains(c.N->element(c.N->mul(a, a)))) ++involutions;
            for (Index b : c.N->generator_indices()) {
                Index ab = c.N->mul(a, b), ba = c.N->mul(b, a);
                if (!c.D->contains(c.N->element(c.N->mul(ab, c.N->inv(ba))))) nonabelian = true;
            }
        }
        // elements squaring into D, counted in N: dihedral of order 8 has 6 of its 8 classes
        t.check(nonabelian && involutions == 6 * c.D->order(), "not dihedral");
        auto gen = r.D;
        gen.push_back(r.t);
        gen.push_back(r.w);
        t.check(generated(gen, p)->order() == c.N->order(), "<D, t, w> != N(D)");
        t.record().data = {{"W_G", nd}, {"W_L", wl}};

        Tally dc(rep, "weyl-double-cosets", "W_L \\ W_G / W_L = {1, s, w}");
        auto cosets = double_cosets(*c.NL, *c.N, *c.NL);
        dc.check(cosets.size() == 3, std::to_string(cosets.size()) + " double cosets");
        std::vector<ZmodMatrix> named{ZmodMatrix::identity(4, p), r.s, r.w};
        auto coset_of = [&](const ZmodMatrix& x) {
            for (std::size_t k = 0; k < cosets.size(); ++k) {
                ZmodMatrix rep_k = c.N->element(cosets[k].rep);
                for (Index a = 0; a < c.NL->order(); ++a) {
                    ZmodMatrix rest = (c.NL->element(a) * rep_k).inverse() * x;
                    if (c.NL->contains(rest)) return k;
                }
            }
            return cosets.size();
        };
        std::set<std::size_t> hit;
        for (const auto& x : named) hit.insert(coset_of(x));
        dc.check(hit.size() == 3 && !hit.count(cosets.size()), "1, s, w do not separate the double cosets");
        nlohmann::json sizes = nlohmann::json::array();
        for (const auto& d : cosets) sizes.push_back(d.size / c.D->order());
        dc.record().data = {{"sizes", sizes}};
    }
    return c;
}

std::vector<std::string> matching_labels(const ZmodMatrix& x) {
    std::uint32_t p = x.modulus();
    Zmod tr(x.trace(), p), det(x.det(), p);
    std::vector<std::uint32_t> roots;
    for (std::uint32_t l = 0; l < p; ++l) {
        Zmod z(l, p);
        if (z * z - tr * z + det == Zmod(0, p)) roots.push_back(l);
    }
    bool scalar = x(0, 1) == 0 && x(1, 0) == 0 && x(0, 0) == x(1, 1);
    auto neg = [&](std::uint32_t a) { return (p - a) % p; };
    std::vector<std::string> out;
    if (scalar && x(0, 0) != 0) out.push_back("1A");
    if (x.is_zero()) out.push_back("1B");
    if (roots.size() == 2 && roots[0] && roots[1] && roots[0] != neg(roots[1])) out.push_back("2A");
    if (roots.size() == 2 && (roots[0] == 0 || roots[1] == 0)) out.push_back("2A*");
    if (roots.size() == 2 && roots[0] == neg(roots[1])) out.push_back("2B");
    if (roots.empty() && tr.value() != 0) out.push_back("3A");
    if (roots.empty() && tr.value() == 0) out.push_back("3B");
    if (roots.size() == 1 && !scalar && roots[0] != 0) out.push_back("4A");
    if (roots.size() == 1 && !scalar && roots[0] == 0) out.push_back("4B");
    return out;
}

OrbitCase classify(const ZmodMatrix& x) {
    auto labels = matching_labels(x);
    if (labels.size() != 1) throw std::logic_error("classify: " + std::to_string(labels.size()) + " labels");
    return {labels[0], x, levi_point(x)};
}

namespace {

/// Normal forms in a fixed order, each with the label its parameters prescribe.
std::vector<std::pair<std::string, ZmodMatrix>> normal_forms(std::uint32_t p) {
    std::vector<std::pair<std::string, ZmodMatrix>> out;
    auto m = [&](std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
        return ZmodMatrix::from_rows(p, {{a, b}, {c, d}});
    };
    std::int64_t P = p;
    for (std::int64_t mu = 0; mu < P; ++mu) out.emplace_back(mu ? "1A" : "1B", m(mu, 0, 0, mu));
    for (std::int64_t mu = 0; mu < P; ++mu)
        for (std::int64_t nu = 0; nu < P; ++nu) {
            if (mu == nu) continue;
            if (mu && nu && (mu + nu) % P) out.emplace_back("2A", m(mu, 0, 0, nu));
            else if (nu == 0) out.emplace_back("2A*", m(mu, 0, 0, nu));
            else if ((mu + nu) % P == 0) out.emplace_back("2B", m(mu, 0, 0, nu));
        }
    std::int64_t ns = 2;
    while (modp::powmod(std::uint64_t(ns), (p - 1) / 2, p) == 1) ++ns;
    for (std::int64_t a = 0; a < P; ++a)
        for (std::int64_t b = 1; b < P; ++b) out.emplace_back(a ? "3A" : "3B", m(a, b, ns * b, a));
    for (std::int64_t mu = 0; mu < P; ++mu) out.emplace_back(mu ? "4A" : "4B", m(mu, 1, 0, mu));
    return out;
}

struct Gl2Classes {
    std::vector<ZmodMatrix> gl2;
    std::map<std::uint64_t, std::uint64_t> class_of;  // key -> least key in the class
};

Gl2Classes gl2_classes(std::uint32_t p) {
    Gl2Classes c;
    auto g = FiniteGroup::generate(gl_generators(2, p), 2, p);
    c.gl2 = all_elements(*g);
    std::vector<ZmodMatrix> inv;
    for (const auto& a : c.gl2) inv.push_back(a.inverse());
    for (std::uint64_t k = 0; k < ipow(p, 4); ++k) {
        if (c.class_of.count(k)) continue;
        ZmodMatrix x = ZmodMatrix::from_key(k, 2, p);
        for (std::size_t i = 0; i < c.gl2.size(); ++i) c.class_of.emplace((c.gl2[i] * x * inv[i]).key(), k);
    }
    return c;
}

}  // namespace

std::vector<OrbitCase> enumerate_cases(std::uint32_t p) {
    auto cls = gl2_classes(p);
    std::set<std::uint64_t> done;
    std::vector<OrbitCase> out;
    for (const auto& [label, x] : normal_forms(p)) {
        if (!done.insert(cls.class_of.at(x.key())).second) continue;
        auto oc = classify(x);
        if (oc.label != label) throw std::logic_error("enumerate_cases: normal form label mismatch");
        out.push_back(oc);
    }
    if (done.size() != std::set<std::uint64_t>([&] {
                           std::set<std::uint64_t> s;
                           for (const auto& kv : cls.class_of) s.insert(kv.second);
                           return s;
                       }())
                           .size())
        throw std::logic_error("enumerate_cases: a class has no normal form");
    return out;
}

Report classification_report(std::uint32_t p) {
    Report rep;
    auto cls = gl2_classes(p);
    std::map<std::uint64_t, std::string> class_label;
    std::map<std::string, std::size_t> per_label;
    Tally total(rep, "classification-total", "every x in M2(F_p) satisfies exactly one case condition");
    Tally inv(rep, "classification-invariant", "the case label is constant on GL2-conjugacy classes");
    for (std::uint64_t k = 0; k < ipow(p, 4); ++k) {
        ZmodMatrix x = ZmodMatrix::from_key(k, 2, p);
        auto labels = matching_labels(x);
        total.check(labels.size() == 1, brief(x) + " matches " + std::to_string(labels.size()));
        if (labels.size() != 1) continue;
        ++per_label[labels[0]];
        auto [it, fresh] = class_label.emplace(cls.class_of.at(k), labels[0]);
        inv.check(fresh || it->second == labels[0], brief(x));
    }
    inv.check(class_label.size() == std::size_t(p) * p + p, std::to_string(class_label.size()) + " classes");
    total.record().data = per_label;
    inv.record().data = {{"classes", class_label.size()}};

    Tally nf(rep, "normal-forms", "each class contains a normal form, found by conjugator search, with its label");
    std::map<std::uint64_t, std::string> reached;
    for (const auto& [label, x] : normal_forms(p)) {
        // explicit conjugators from the normal form to every member
        std::set<std::uint64_t> orbit;
        for (const auto& a : cls.gl2) orbit.insert((a * x * a.inverse()).key());
        std::uint64_t c0 = cls.class_of.at(x.key());
        nf.check(orbit.count(c0) == 1, brief(x));
        nf.check(class_label.at(c0) == label, brief(x) + " labelled " + label);
        reached.emplace(c0, label);
    }
    nf.check(reached.size() == class_label.size(), "classes without a normal form");
    auto cases = enumerate_cases(p);
    nlohmann::json reps = nlohmann::json::array();
    for (const auto& oc : cases) reps.push_back({{"label", oc.label}, {"x", rows(oc.x)}});
    nf.record().data = {{"representatives", reps}};
    return rep;
}

PointData levi_point_data(const Sp4Context& c, const ZmodMatrix& y) {
    PointData d;
    d.y = y;
    auto fixes = [&](const ZmodMatrix& g) { return g * y == y * g; };
    d.L = subgroup_where(c.L, fixes);
    d.Uprime = subgroup_where(c.Uprime, fixes);
    d.Vprime = subgroup_where(c.Vprime, fixes);
    return d;
}

PointData point_data(const Sp4Context& c, const ZmodMatrix& y) {
    PointData d = levi_point_data(c, y);
    auto fixes = [&](const ZmodMatrix& g) { return g * y == y * g; };
    if (c.G) {
        d.G = subgroup_where(c.G, fixes);
    } else {
        if (y.is_zero()) throw BudgetExceeded("point_data: G(0) is the whole group, which is not enumerated");
        std::vector<ZmodMatrix> sym;
        for (auto& x : commutant_elements(y))
            if (is_symplectic(x)) sym.push_back(std::move(x));
        d.G = group_from_elements(std::move(sym), 4, c.p);
    }
    d.U = subgroup_where(c.U, fixes);
    d.V = subgroup_where(c.V, fixes);
    return d;
}

TransporterSet transporter_double_cosets(const Sp4Context& c, const PointData& pd) {
    TransporterSet out;
    const ZmodMatrix& y = pd.y;
    std::size_t gy = pd.G->order();
    if (c.G) {
        std::vector<bool> mask(c.G->order(), false);
        for (Index i = 0; i < c.G->order(); ++i) {
            mask[i] = in_levi_lie(c.G->element(i) * y * c.G->element(c.G->inv(i)));
            out.transporter_size += mask[i];
        }
        for (const auto& dc : double_cosets_in(*c.L, *c.G, *pd.G, mask)) {
            ZmodMatrix g = c.G->element(dc.rep);
            out.cosets.push_back({"", g, conj(g, y), dc.size});
        }
        return out;
    }
    // semisimple points of l with the characteristic polynomial of y form one G-orbit (connected
    // centralizers); each L-orbit of that set must be reached by an explicit monomial conjugator
    auto semisimple = [](const ZmodMatrix& z) {
        auto lab = classify(top_left(z)).label;
        return lab != "4A" && lab != "4B";
    };
    if (!in_levi_lie(y) || !semisimple(y))
        throw std::invalid_argument("transporter_double_cosets: needs the enumerated group unless y is semisimple in l");
    auto cp = charpoly4(y);
    std::map<std::uint64_t, std::size_t> orbit_size;
    for (std::size_t i = 0; i < c.l.size(); ++i) {
        ZmodMatrix z = c.l.element(i);
        if (charpoly4(z) == cp && semisimple(z)) ++orbit_size[orbit_key(c, z)];
    }
    std::size_t s_size = 0;
    for (const auto& kv : orbit_size) s_size += kv.second;
    out.transporter_size = s_size * gy;
    std::set<std::uint64_t> reached;
    for (Index i = 0; i < c.N->order(); ++i) {
        ZmodMatrix n = c.N->element(i);
        ZmodMatrix z = conj(n, y);
        if (!in_levi_lie(z)) continue;
        std::uint64_t k = orbit_key(c, z);
        if (!reached.insert(k).second) continue;
        std::size_t lz = 0;
        for (Index j = 0; j < c.L->order(); ++j)
            if (c.L->element(j) * z == z * c.L->element(j)) ++lz;
        out.cosets.push_back({"", n, z, c.L->order() * gy / lz});
    }
    if (reached.size() != orbit_size.size())
        throw std::runtime_error("transporter_double_cosets: an L-orbit with the characteristic polynomial of y "
                                 "was not reached by a monomial conjugator");
    return out;
}

std::vector<Transporter> expected_transporters(const Sp4Context& c, const OrbitCase& oc) {
    static const std::map<std::string, std::vector<std::string>> names{
        {"1A", {"1", "s", "w"}}, {"1B", {"1"}},      {"2A", {"1", "s", "w", "wt"}}, {"2A*", {"1", "w"}},
        {"2B", {"1", "w", "wt"}}, {"3A", {"1", "s"}}, {"3B", {"1"}},                {"4A", {"1", "s"}},
        {"4B", {"1"}}};
    const auto& r = c.residue;
    std::map<std::string, ZmodMatrix> el{
        {"1", ZmodMatrix::identity(4, c.p)}, {"s", r.s}, {"w", r.w}, {"wt", r.w * r.t}};
    std::vector<Transporter> out;
    for (const auto& n : names.at(oc.label)) out.push_back({n, el.at(n), conj(el.at(n), oc.y), 0});
    return out;
}

std::vector<std::size_t> expected_centralizer_orders(const std::string& label, std::uint64_t q) {
    std::uint64_t gl2 = (q * q - 1) * (q * q - q), sp4 = ipow(q, 4) * (q * q - 1) * (q * q * q * q - 1);
    std::uint64_t t = (q - 1) * (q - 1), a = q * q - 1;
    if (label == "1A") return {gl2, gl2, 1, 1};
    if (label == "1B") return {sp4, gl2, q * q * q, q * q * q};
    if (label == "2A") return {t, t, 1, 1};
    if (label == "2A*") return {(q - 1) * q * (q * q - 1), t, q, q};
    if (label == "2B") return {gl2, t, q, q};
    if (label == "3A") return {a, a, 1, 1};
    if (label == "3B") return {q * (q + 1) * a, a, q, q};
    if (label == "4A") return {q * (q - 1), q * (q - 1), 1, 1};
    if (label == "4B") return {2 * q * q * q * (q - 1), q * (q - 1), q, q};
    throw std::invalid_argument("expected_centralizer_orders: unknown label " + label);
}

namespace {

void structure_checks(const Sp4Context& c, const OrbitCase& oc, const PointData& pd, Tally& t) {
    const auto& r = c.residue;
    std::uint32_t p = c.p;
    const auto& G = pd.G;
    const auto& L = pd.L;
    auto& data = t.record().data;
    const std::string& lab = oc.label;
    auto weyl = [&](const GroupPtr& h) { return intersect(h, c.N); };
    if (lab == "1A") {
        t.check(same_set(*G, *c.L), "G(y) != L");
    } else if (lab == "1B") {
        t.check(!c.G || G->order() == c.G->order(), "G(y) != G");
    } else if (lab == "2A") {
        t.check(same_set(*G, *c.D) && same_set(*L, *c.D), "G(y) = L(y) = D fails");
    } else if (lab == "2A*") {
        t.check(same_set(*L, *c.D), "L(y) != D");
        std::int64_t g0 = std::int64_t(modp::primitive_root(p));
        auto A = generated({diagonal(p, {g0, 1, std::int64_t(modp::invmod(std::uint64_t(g0), p)), 1})}, p);
        auto B = generated({ZmodMatrix::identity(4, p) + unit_matrix(4, p, 1, 3),
                            ZmodMatrix::identity(4, p) + unit_matrix(4, p, 3, 1)},
                           p);
        t.check(A->order() == p - 1 && B->order() == std::size_t(p) * (std::size_t(p) * p - 1), "GL1, SL2 orders");
        t.check(is_subgroup(*A, *G) && is_subgroup(*B, *G), "GL1 x SL2 not inside G(y)");
        t.check(elementwise_commute(*A, *B), "factors do not commute");
        t.check(product_set_size(*A, *B) == G->order() && A->order() * B->order() == G->order(),
                "G(y) is not the direct product");
        for (Index i = 0; i < G->order(); ++i) {
            ZmodMatrix e = G->element(i);
            bool shape = !e(0, 1) && !e(0, 2) && !e(0, 3) && !e(1, 0) && !e(1, 2) && !e(2, 0) && !e(2, 1) &&
                         !e(2, 3) && !e(3, 0) && !e(3, 2);
            Zmod a1(e(0, 0), p), d1(e(2, 2), p), a2(e(1, 1), p), d2(e(3, 3), p), b(e(1, 3), p), g(e(3, 1), p);
            t.check(shape && a1 * d1 == Zmod(1, p) && a2 * d2 - b * g == Zmod(1, p), brief(e));
        }
        auto W = weyl(G);
        ZmodMatrix twt = r.t.inverse() * r.w * r.t;
        t.check(W->order() == 2 * c.D->order() && W->contains(twt) && !c.D->contains(twt),
                "Weyl group of G(y) is not generated by t^-1 w t");
    } else if (lab == "2B") {
        t.check(same_set(*G, *conjugate_group(c.L, r.w)), "G(y) != Ad_w(L)");
        t.check(same_set(*pd.U, *conjugate_group(c.Vprime, r.w)), "U(y) != Ad_w(V')");
        t.check(same_set(*pd.V, *conjugate_group(c.Uprime, r.w)), "V(y) != Ad_w(U')");
    } else if (lab == "3A") {
        t.check(same_set(*G, *L), "G(y) != L(y)");
        t.check(commutative(*L) && has_element_of_order(*L, std::uint64_t(p) * p - 1), "L(y) not k2^x");
    } else if (lab == "3B") {
        t.check(commutative(*L) && has_element_of_order(*L, std::uint64_t(p) * p - 1), "L(y) not k2^x");
        auto NLy = normalizer(G, *L);
        t.check(NLy->order() == 2 * L->order() && NLy->contains(r.s) && !L->contains(r.s),
                "Weyl group of G(y) is not generated by s");
        t.check(normalizes(*L, *pd.U) && G->order() == (p + 1) * L->order() * pd.U->order(),
                "L(y) U(y) is not a Borel subgroup");
        data["normalizer_of_torus"] = NLy->order();
    } else if (lab == "4A") {
        t.check(same_set(*G, *L) && commutative(*L), "G(y) != L(y) abelian");
    } else if (lab == "4B") {
        const auto& X = pd.U;
        const auto& Y = pd.V;
        t.check(elementwise_commute(*X, *Y), "U(y), V(y) do not commute");
        auto XY = join(G, X, Y);
        t.check(XY->order() == X->order() * Y->order(), "U(y) meets V(y)");
        t.check(is_normal(*XY, *G), "U(y) V(y) not normal");
        t.check(G->contains(r.s), "s not in G(y)");
        auto S = subgroup_generated(G, {r.s});
        t.check(S->order() == 2, "|S| = " + std::to_string(S->order()));
        t.check(normalizes(*S, *L) && !L->contains(r.s), "L(y) S is not a semidirect product");
        auto H = join(G, L, S);
        t.check(H->order() == 2 * L->order(), "|L(y) S|");
        t.check(intersect(H, XY)->order() == 1 && H->order() * XY->order() == G->order(),
                "G(y) != (U(y) x V(y)) x| (L(y) x| S)");
        data["S"] = S->order();
        data["UV"] = XY->order();
    }
}

}  // namespace

Report centralizer_report(const Sp4Context& c, const OrbitCase& oc) {
    auto t0 = std::chrono::steady_clock::now();
    Report rep;
    PointData pd = point_data(c, oc.y);
    auto expect = expected_centralizer_orders(oc.label, c.p);
    {
        Tally t(rep, "centralizer-orders", "orders of G(y), L(y), U(y), V(y) in the case");
        std::vector<std::size_t> got{pd.G->order(), pd.L->order(), pd.U->order(), pd.V->order()};
        t.check(got == expect, nlohmann::json(got).dump() + " vs " + nlohmann::json(expect).dump());
        t.record().data = {{"label", oc.label}, {"x", rows(oc.x)}, {"orders", got}, {"expected", expect}};
    }
    {
        Tally t(rep, "centralizer-levi-triple", "L(y) normalizes U(y), V(y) and meets each trivially");
        t.check(normalizes(*pd.L, *pd.U) && normalizes(*pd.L, *pd.V), "normalization");
        t.check(intersect(pd.L, pd.U)->order() == 1 && intersect(pd.L, pd.V)->order() == 1, "intersections");
        t.check(is_subgroup(*pd.U, *pd.G) && is_subgroup(*pd.L, *pd.G) && is_subgroup(*pd.V, *pd.G),
                "containment");
    }
    {
        Tally t(rep, "centralizer-structure", "structure of the centralizer for the case");
        structure_checks(c, oc, pd, t);
        if (t.record().checked == 0) t.check(true, "");
    }
    auto ts = transporter_double_cosets(c, pd);
    auto ex = expected_transporters(c, oc);
    {
        Tally t(rep, "transporter-sizes", "|L g G(y)| over L \\ G(y, l) / G(y) sums to |G(y, l)|");
        std::size_t sum = 0;
        for (const auto& tr : ts.cosets) {
            sum += tr.size;
            std::size_t lz = 0;
            for (Index j = 0; j < c.L->order(); ++j)
                if (c.L->element(j) * tr.image == tr.image * c.L->element(j)) ++lz;
            t.check(tr.size == c.L->order() * pd.G->order() / lz, "double coset size formula");
        }
        t.check(sum == ts.transporter_size, std::to_string(sum) + " vs " + std::to_string(ts.transporter_size));
        t.record().data = {{"transporter", ts.transporter_size}, {"double_cosets", ts.cosets.size()}};
    }
    {
        Tally t(rep, "transporter-representatives", "computed double cosets match the listed representatives");
        std::map<std::uint64_t, std::string> computed;
        for (const auto& tr : ts.cosets) computed.emplace(orbit_key(c, tr.image), "");
        t.check(computed.size() == ts.cosets.size(), "two double cosets with L-conjugate images");
        std::set<std::uint64_t> listed;
        nlohmann::json reps = nlohmann::json::array();
        for (const auto& e : ex) {
            bool in_l = in_levi_lie(e.image);
            t.check(in_l, e.name + ".y not in l");
            std::uint64_t k = orbit_key(c, e.image);
            t.check(listed.insert(k).second, e.name + " repeats a double coset");
            t.check(computed.count(k) == 1, e.name + " is not a transporter");
            reps.push_back({{"name", e.name}, {"g", rows(e.g)}, {"image", rows(top_left(e.image))}});
        }
        t.check(listed.size() == computed.size(),
                std::to_string(listed.size()) + " listed vs " + std::to_string(computed.size()) + " computed");
        t.record().data = {{"representatives", reps}};
    }
    if (c.p == 3) {
        std::vector<ZmodMatrix> gs;
        for (const auto& e : ex) gs.push_back(e.g);
        auto ext = linear_extension(oc.y, c.p * c.p);
        rep.merge(check_linear_extension(ext, gs), "extension");
    }
    rep.timing["seconds"] = seconds_since(t0);
    return rep;
}

Report verify_reduced_mackey(const Sp4Context& c, const OrbitCase& oc, const Transporter& tr) {
    auto t0 = std::chrono::steady_clock::now();
    Report rep;
    const ZmodMatrix& y = oc.y;
    const ZmodMatrix& g = tr.g;
    const auto& r = c.residue;
    ZmodMatrix z = conj(g, y);
    Tally t(rep, "reduced-mackey",
            "pres Ad_g pind = Delta(g.y, y) + Delta(g.y, s.y) Ad_s + Xi(g.y, y) on characters of L(g.y)");
    if (!in_levi_lie(z)) {
        t.check(false, "g.y not in l");
        return rep;
    }
    PointData py = point_data(c, y), pz = point_data(c, z);
    auto cy = functor_context(py.G, py.U, py.L, py.V, "G(y)");
    auto cz = functor_context(pz.G, pz.U, pz.L, pz.V, "G(z)");
    auto tly = character_table(py.L), tlz = character_table(pz.L);
    auto orb_y = levi_orbit(c, y), orb_z = levi_orbit(c, z);

    // l with l a l^-1 = z, if any
    auto into_z = [&](const ZmodMatrix& a) -> std::optional<ZmodMatrix> {
        auto it = orb_z.find(a.key());
        if (it == orb_z.end()) return std::nullopt;
        return it->second.inverse();
    };

    struct XiTerm {
        ZmodMatrix l1, l2;
        PointData d, wd;
        ContextPtr cd, cwd;
        TablePtr twd;
    };
    std::vector<XiTerm> xi;
    for (std::size_t i = 0; i < c.d.size(); ++i) {
        ZmodMatrix d = c.d.element(i);
        auto a = orb_y.find(d.key());
        if (a == orb_y.end()) continue;
        ZmodMatrix wd = conj(r.w, d);
        auto l2 = into_z(wd);
        if (!l2) continue;
        XiTerm x{a->second, *l2, levi_point_data(c, d), levi_point_data(c, wd), nullptr, nullptr, nullptr};
        x.cd = functor_context(x.d.L, x.d.Uprime, c.D, x.d.Vprime, "L(d)");
        x.cwd = functor_context(x.wd.L, x.wd.Uprime, c.D, x.wd.Vprime, "L(w.d)");
        x.twd = character_table(x.wd.L);
        xi.push_back(std::move(x));
    }
    auto delta = into_z(y);
    auto delta_s = into_z(conj(r.s, y));

    nlohmann::json per = nlohmann::json::array();
    for (std::size_t k = 0; k < tly->size(); ++k) {
        const Character& sigma = tly->irr[k];
        auto m = irreducible_module(*tly, k);
        auto up = pind(*cy, m).output;
        auto moved = conjugate_module(up, g, pz.G);
        Character lhs = module_character(*pres(*cz, moved).output, *tlz);

        Character rhs = zero_function(tlz->classes);
        if (delta) rhs = rhs + conjugate_function(sigma, *delta, tlz->classes);
        if (delta_s) rhs = rhs + conjugate_function(sigma, *delta_s * r.s, tlz->classes);
        for (const auto& x : xi) {
            auto at_d = conjugate_module(m, x.l1, x.d.L);
            auto down = pres(*x.cd, at_d).output;
            auto turned = conjugate_module(down, r.w, c.D);
            auto back = pind(*x.cwd, turned).output;
            rhs = rhs + conjugate_function(module_character(*back, *x.twd), x.l2, tlz->classes);
        }
        bool ok = lhs == rhs;
        t.check(ok, "irreducible " + std::to_string(k) + " of L(y)");
        per.push_back({{"irreducible", k},
                       {"degree", sigma.degree_int()},
                       {"lhs", decompose(lhs, *tlz)},
                       {"rhs", decompose(rhs, *tlz)},
                       {"equal", ok}});
    }
    t.record().data = {{"label", oc.label},
                       {"g", tr.name},
                       {"delta", bool(delta)},
                       {"delta_s", bool(delta_s)},
                       {"xi_terms", xi.size()},
                       {"comparisons", per}};
    rep.timing["seconds"] = seconds_since(t0);
    return rep;
}

Report dat_compare(const Sp4Context& c, const std::vector<std::string>& labels) {
    Report rep;
    Tally semi(rep, "parahoric-semisimple", "pind_{U(y),V(y)} = pind_{V(y)} when x is zero or non-nilpotent");
    Tally dims(rep, "parahoric-nilpotent-dims", "case 4B: dim pind = 2 dim M, dim pind_{V(y)} = 2|k| dim M");
    Tally ends(rep, "parahoric-nilpotent-end",
               "case 4B: End dims 2 or 1 for pind and |k| + 1 or |k| for pind_{V(y)}, as M = Ad_s M or not");
    Tally form(rep, "parahoric-end-formula", "case 4B: dim End(pind M) = <M, M + Ad_s M>");
    Tally incl(rep, "parahoric-proper-inclusion", "case 4B: pind M is a proper summand of pind_{V(y)} M");
    Tally mk(rep, "parahoric-end-mackey", "case 4B: dim End(pind_{V(y)} M) equals the Mackey double coset sum");
    nlohmann::json semidata = nlohmann::json::array(), nildata = nlohmann::json::array();
    std::vector<std::size_t> counts(2, 0);
    for (const auto& oc : enumerate_cases(c.p)) {
        if (!labels.empty() && std::find(labels.begin(), labels.end(), oc.label) == labels.end()) continue;
        if (!c.G && oc.y.is_zero()) continue;
        auto t0 = std::chrono::steady_clock::now();
        PointData pd = point_data(c, oc.y);
        auto ctx = functor_context(pd.G, pd.U, pd.L, pd.V, "G(y)");
        auto one = subgroup_generated(pd.G, {});
        auto tl = character_table(pd.L);
        auto cg = class_data(pd.G);
        bool nilpotent = oc.label == "4B";
        TablePtr tg = nilpotent ? character_table(pd.G) : nullptr;
        for (std::size_t k = 0; k < tl->size(); ++k) {
            auto m = irreducible_module(*tl, k);
            auto a = pind(*ctx, m).output;
            auto b = parahoric_pind(pd.G, one, pd.L, pd.V, m).output;
            std::int64_t dm = m->dim();
            if (!nilpotent) {
                std::string why;
                semi.check(traces_agree(*a, *b, *cg, &why), oc.label + " irreducible " + std::to_string(k) + ": " + why);
                ++counts[0];
                continue;
            }
            ++counts[1];
            dims.check(a->dim() == 2 * dm && b->dim() == 2 * std::int64_t(c.p) * dm,
                       std::to_string(a->dim()) + ", " + std::to_string(b->dim()));
            Character ms = conjugate_function(tl->irr[k], c.residue.s, tl->classes);
            bool self = ms == tl->irr[k];
            bool ok = true;
            std::int64_t ea = rounded(self_pairing(*a, *cg), &ok), eb = rounded(self_pairing(*b, *cg), &ok);
            ends.check(ok && ea == (self ? 2 : 1) && eb == std::int64_t(c.p) + (self ? 1 : 0),
                       "End dims " + std::to_string(ea) + ", " + std::to_string(eb));
            bool mk_ok = true;
            std::int64_t em = induced_end_dimension(pd.G, pd.L, pd.V, tl->irr[k], &mk_ok);
            mk.check(mk_ok && em == eb, std::to_string(eb) + " vs " + std::to_string(em));
            std::int64_t pairing = inner_product(tl->irr[k], tl->irr[k] + ms);
            form.check(ea == pairing, std::to_string(ea) + " vs " + std::to_string(pairing));
            auto ma = decompose_module(*a, *tg), mb = decompose_module(*b, *tg);
            bool sub = true;
            for (std::size_t i = 0; i < ma.size(); ++i) sub = sub && ma[i] <= mb[i];
            incl.check(sub && ma != mb, "irreducible " + std::to_string(k));
            nildata.push_back({{"irreducible", k},
                               {"dim_M", dm},
                               {"dim_pind", a->dim()},
                               {"dim_parahoric", b->dim()},
                               {"self_conjugate", self},
                               {"end_pind", ea},
                               {"end_parahoric", eb},
                               {"end_mackey", em}});
        }
        if (!nilpotent) semidata.push_back({{"label", oc.label}, {"x", rows(oc.x)}, {"irreducibles", tl->size()}});
        rep.timing["dat/" + oc.label + "/" + brief(oc.x)] = seconds_since(t0);
    }
    semi.record().data = {{"cases", semidata}, {"comparisons", counts[0]}};
    dims.record().data = {{"p", c.p}, {"irreducibles", nildata}};
    return rep;
}

Report sp4_report(bool with_p5) {
    Report rep;
    auto c3 = build_sp4(3);
    rep.merge(c3.certificate, "p3/context");
    rep.merge(classification_report(3), "p3/classification");
    auto cases = enumerate_cases(3);
    struct Job {
        const Sp4Context* c;
        OrbitCase oc;
        std::optional<Transporter> g;
        std::string name;
    };
    std::vector<Job> jobs;
    auto add_case = [&](const Sp4Context& c, const OrbitCase& oc, const std::string& prefix) {
        std::string base = prefix + "/" + oc.label + "/" + brief(oc.x);
        jobs.push_back({&c, oc, std::nullopt, base + "/centralizer"});
        for (const auto& g : expected_transporters(c, oc)) jobs.push_back({&c, oc, g, base + "/mackey/" + g.name});
    };
    for (const auto& oc : cases) add_case(c3, oc, "p3");
    std::optional<Sp4Context> c5;
    if (with_p5) {
        c5 = build_sp4(5);
        for (const auto& oc : enumerate_cases(5))
            if (oc.label == "2A") add_case(*c5, oc, "p5");
    }
    std::vector<Report> out(jobs.size());
    parallel_for(jobs.size(), [&](std::size_t i) {
        const auto& j = jobs[i];
        out[i] = j.g ? verify_reduced_mackey(*j.c, j.oc, *j.g) : centralizer_report(*j.c, j.oc);
    });
    bool all = true;
    std::size_t mackey = 0;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        rep.merge(out[i], jobs[i].name);
        if (jobs[i].g) {
            all = all && out[i].ok();
            ++mackey;
        }
    }
    rep.merge(dat_compare(c3), "p3/dat");
    if (c5) rep.merge(c5->certificate, "p5/context");
    Tally chain(rep, "mackey-chain",
                "the Mackey formula for Sp4(Z/p^2) is equivalent to the reduced identities for every y in l and "
                "every transporter representative; the group itself is not enumerated");
    chain.check(all, "a reduced identity failed");
    chain.record().data = {{"reduced_identities", mackey}, {"cases_p3", cases.size()}, {"p5", with_p5}};
    return rep;
}

}  // namespace hfl
