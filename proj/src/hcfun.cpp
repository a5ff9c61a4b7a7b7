#include "hfl/hcfun.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

namespace hfl {

namespace {

void check_group(const FiniteGroup& a, const FiniteGroup& b, const char* what) {
    if (&a != &b && a.digest() != b.digest()) throw std::invalid_argument(std::string(what) + ": group mismatch");
}

std::vector<Index> projection_table(const GroupPtr& lx, const GroupPtr& l, const GroupPtr& x) {
    std::vector<Index> table(lx->order(), Index(-1));
    for (Index i = 0; i < l->order(); ++i) {
        ZmodMatrix a = l->element(i);
        for (Index j = 0; j < x->order(); ++j) table[lx->index_of(a * x->element(j))] = i;
    }
    return table;
}

std::string dims(const std::vector<std::int64_t>& v) {
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    return os.str();
}

GroupHom restrict_hom(const GroupHom& hom, const GroupPtr& src, const GroupPtr& tgt) {
    std::vector<Index> images;
    for (const auto& s : src->generators())
        images.push_back(tgt->index_of(hom.target()->element(hom(hom.source()->index_of(s)))));
    return GroupHom(src, tgt, std::move(images));
}

std::vector<std::int64_t> divide_exact(std::vector<std::int64_t> v, std::int64_t m, bool& ok) {
    ok = true;
    for (auto& x : v) {
        if (x % m) ok = false;
        x /= m;
    }
    return v;
}

}  // namespace

namespace {
std::atomic<std::size_t> pind_budget{kPindBudget};
}  // namespace

std::size_t default_pind_budget() { return pind_budget.load(); }
void set_default_pind_budget(std::size_t budget) { pind_budget = budget; }

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f) {
    std::size_t workers = std::min<std::size_t>(n, std::max(1u, std::thread::hardware_concurrency()));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr err;
    std::mutex mu;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i; (i = next++) < n;) {
                try {
                    f(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(mu);
                    if (!err) err = std::current_exception();
                }
            }
        });
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

ContextPtr functor_context(GroupPtr G, GroupPtr U, GroupPtr L, GroupPtr V, std::string name) {
    for (const auto* h : {U.get(), L.get(), V.get()})
        if (!is_subgroup(*h, *G)) throw std::invalid_argument("functor_context: subgroup not contained in G");
    if (!normalizes(*L, *U) || !normalizes(*L, *V))
        throw std::invalid_argument("functor_context: L does not normalize U and V");
    auto c = std::make_shared<FunctorContext>();
    c->G = G;
    c->U = U;
    c->L = L;
    c->V = V;
    c->name = std::move(name);
    c->LU = join(G, L, U);
    c->LV = join(G, L, V);
    if (c->LU->order() != L->order() * U->order() || c->LV->order() != L->order() * V->order())
        throw std::invalid_argument("functor_context: L meets U or V nontrivially");
    c->lu_to_l = projection_table(c->LU, L, U);
    c->lv_to_l = projection_table(c->LV, L, V);
    return c;
}

ContextPtr functor_context(const IwahoriTriple& t) { return functor_context(t.G, t.U, t.L, t.V, t.name); }

ContextPtr swapped(const FunctorContext& c) {
    auto s = std::make_shared<FunctorContext>(c);
    std::swap(s->U, s->V);
    std::swap(s->LU, s->LV);
    std::swap(s->lu_to_l, s->lv_to_l);
    s->name = c.name + "^op";
    return s;
}

std::shared_ptr<const InducedModule> induced_from_lu(const FunctorContext& c, const ModulePtr& m) {
    check_group(*m->group(), *c.L, "induced_from_lu");
    return std::make_shared<InducedModule>(c.G, c.LU, m, c.lu_to_l);
}

std::shared_ptr<const InducedModule> induced_from_lv(const FunctorContext& c, const ModulePtr& m) {
    check_group(*m->group(), *c.L, "induced_from_lv");
    return std::make_shared<InducedModule>(c.G, c.LV, m, c.lv_to_l);
}

Mat intertwiner(const FunctorContext& c, const InducedModule& from_lu, const InducedModule& to_lv) {
    const auto& M = *from_lu.inducing();
    Eigen::Index d = M.dim();
    const auto& src = from_lu.cosets();
    const auto& dst = to_lv.cosets();
    auto vpos = embed(*c.V, *c.G);
    cplx w = 1.0 / double(vpos.size());
    Mat j = Mat::Zero(to_lv.dim(), from_lu.dim());
    Mat blk(d, d);
    for (Index i = 0; i < dst.index(); ++i)
        for (Index v : vpos) {
            Index x = c.G->mul(v, dst.reps[i]);
            Index col = src.coset_of[x];
            blk.setZero();
            M.accumulate(from_lu.project(src.h_part[x]), w, blk);
            j.block(Eigen::Index(i) * d, Eigen::Index(col) * d, d, d) += blk;
        }
    return j;
}

FunctorResult pind(const FunctorContext& c, const ModulePtr& m, std::optional<std::size_t> limit) {
    const std::size_t budget = limit.value_or(default_pind_budget());
    std::size_t index = c.G->order() / c.LU->order();
    if (index * std::size_t(m->dim()) > budget)
        throw BudgetExceeded("pind: [G:LU] * dim M = " + std::to_string(index * m->dim()) +
                             " exceeds the linear-algebra budget; use the Clifford reduction");
    auto from = induced_from_lu(c, m);
    auto to = induced_from_lv(c, m);
    Mat q = image_basis(intertwiner(c, *from, *to));
    FunctorResult r;
    r.input = m;
    r.output = std::make_shared<CompressedModule>(to, std::move(q));
    r.triple = c.name;
    r.direction = "pind";
    r.ambient_dim = to->dim();
    return r;
}

FunctorResult pind(const IwahoriTriple& t, const ModulePtr& m, std::optional<std::size_t> budget) {
    return pind(*functor_context(t), m, budget);
}

FunctorResult pres(const FunctorContext& c, const ModulePtr& n) {
    check_group(*n->group(), *c.G, "pres");
    Mat bu = fixed_space(*n, *c.U);
    Mat bv = fixed_space(*n, *c.V);
    Mat q = image_basis(bu * (bu.adjoint() * bv));
    FunctorResult r;
    r.input = n;
    r.output = std::make_shared<CompressedModule>(restrict_module(n, c.L), std::move(q));
    r.triple = c.name;
    r.direction = "pres";
    r.ambient_dim = n->dim();
    return r;
}

FunctorResult pres(const IwahoriTriple& t, const ModulePtr& n) { return pres(*functor_context(t), n); }

FunctorResult parahoric_pind(const GroupPtr& G, const GroupPtr& U0, const GroupPtr& L, const GroupPtr& V,
                             const ModulePtr& m, std::optional<std::size_t> budget) {
    auto r = pind(*functor_context(G, U0, L, V, "parahoric"), m, budget);
    r.direction = "parahoric_pind";
    return r;
}

FunctorResult& attach_character(FunctorResult& r, const CharacterTable& t) {
    r.character = module_character(*r.output, t);
    return r;
}

std::int64_t pres_multiplicity(const FunctorContext& c, const Character& sigma, const ModulePtr& n) {
    check_group(*n->group(), *c.G, "pres_multiplicity");
    Mat bu = fixed_space(*n, *c.U);
    Mat bv = fixed_space(*n, *c.V);
    Mat e = isotypic_projector(*restrict_module(n, c.L), sigma);
    std::int64_t r = gap_checked_rank(e * bu * (bu.adjoint() * bv) * bv.adjoint());
    std::int64_t d = sigma.degree_int();
    if (r % d) throw std::logic_error("pres_multiplicity: rank not divisible by the degree");
    return r / d;
}

bool ZSpectrum::scalar(std::int64_t num, std::int64_t den) const {
    for (double x : eigenvalues)
        if (std::abs(x * double(den) - double(num)) > 1e-8 * double(den)) return false;
    return true;
}

ZSpectrum z_spectrum(const ModuleRep& n, const FiniteGroup& u, const FiniteGroup& v) {
    Mat bu = fixed_space(n, u);
    Mat bv = fixed_space(n, v);
    ZSpectrum z;
    if (bu.cols() == 0) return z;
    Mat c = bu.adjoint() * bv;
    Mat a = c * c.adjoint();
    a = (a + a.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<Mat> es(a);
    const auto& ev = es.eigenvalues();
    Mat inv = Mat::Zero(a.rows(), a.cols());
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        double x = ev(i);
        z.max_excess = std::max({z.max_excess, x - 1.0, -x});
        if (x > kRankThreshold) {
            z.eigenvalues.push_back(x);
            inv += (1.0 / x) * es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
        }
    }
    // z^{-1} e_U e_V, written in N's coordinates
    Mat x = bu * inv * c * bv.adjoint();
    z.idempotent_defect = (x * x - x).norm() / std::max(1.0, x.norm());
    return z;
}

GAVector ga_dense(const GAElement& e, const GroupPtr& ambient) {
    GAVector r(ambient->order(), 0.0);
    bool same = e.group.get() == ambient.get() || e.group->digest() == ambient->digest();
    for (const auto& [x, a] : e.coeff) r[same ? x : ambient->index_of(e.group->element(x))] += a;
    return r;
}

GAVector ga_average(const GroupPtr& g, const FiniteGroup& h) {
    GAVector r(g->order(), 0.0);
    for (Index x : embed(h, *g)) r[x] = 1.0 / double(h.order());
    return r;
}

GAVector ga_isotypic(const Character& chi, const GroupPtr& ambient) {
    return ga_dense(GAElement::isotypic(chi), ambient);
}

GAVector ga_product(const GroupPtr& g, const GAVector& a, const GAVector& b) {
    std::vector<Index> sa, sb;
    for (Index i = 0; i < a.size(); ++i)
        if (a[i] != cplx(0)) sa.push_back(i);
    for (Index i = 0; i < b.size(); ++i)
        if (b[i] != cplx(0)) sb.push_back(i);
    GAVector r(g->order(), 0.0);
    for (Index x : sa)
        for (Index y : sb) r[g->mul(x, y)] += a[x] * b[y];
    return r;
}

Realizer::Realizer(ContextPtr c, TablePtr tG, TablePtr tL, std::size_t regular_limit)
    : c_(std::move(c)), tG_(std::move(tG)), tL_(std::move(tL)) {
    regular_ = c_->G->order() <= regular_limit;
    if (regular_) return;
    auto cg = tG_->classes;
    for (int side = 0; side < 2; ++side) {
        const auto& lx = side ? c_->LV : c_->LU;
        const auto& tab = side ? c_->lv_to_l : c_->lu_to_l;
        std::vector<Index> images;
        for (Index s : lx->generator_indices()) images.push_back(tab[s]);
        GroupHom hom(lx, tL_->classes->group, images);
        auto cl = class_data(lx);
        for (const auto& sigma : tL_->irr) (side ? ind_v_ : ind_u_).push_back(induce(inflate(sigma, hom, cl), cg));
    }
}

Realization Realizer::operator()(std::size_t k) const {
    if (regular_) return {irreducible_module(*tG_, k), 1};
    const auto& tau = tG_->irr[k];
    for (int side = 0; side < 2; ++side) {
        const auto& ind = side ? ind_v_ : ind_u_;
        for (std::size_t s = 0; s < ind.size(); ++s) {
            std::int64_t m = inner_product(ind[s], tau);
            if (m == 0) continue;
            auto sigma = irreducible_module(*tL_, s);
            ModulePtr big = side ? induced_from_lv(*c_, sigma) : induced_from_lu(*c_, sigma);
            auto block = image_module(big, isotypic_projector(*big, tau), c_->G);
            if (block->dim() != m * tau.degree_int())
                throw std::logic_error("Realizer: isotypic block has the wrong dimension");
            return {block, m};
        }
    }
    return {};
}

Report verify_functor_properties(const FunctorSuiteInput& in) {
    const auto& T = in.triple;
    const auto& tG = *in.tG;
    const auto& tL = *in.tL;
    auto c = functor_context(T);
    auto cs = swapped(*c);
    std::vector<ContextPtr> compat;
    for (const auto& t : in.compatible) compat.push_back(functor_context(t));
    const std::size_t ns = tL.size(), nt = tG.size();

    struct SigmaOut {
        std::vector<std::int64_t> pind, pind_op, stage_direct, stage_composed;
        std::vector<std::vector<std::int64_t>> compat;
        std::int64_t dim = 0, bound = 0;
        ZSpectrum z;
    };
    struct TauOut {
        bool realized = false;
        bool divisible = true;
        std::vector<std::int64_t> pres, pres_op;
        std::vector<std::vector<std::int64_t>> compat;
        ZSpectrum z;
    };
    std::vector<SigmaOut> so(ns);
    std::vector<TauOut> to(nt);

    ContextPtr direct;
    TablePtr tH;
    if (in.inner) {
        const auto& X = *in.inner;
        direct = functor_context(T.G, join(T.G, T.U, X.U), X.L, join(T.G, X.V, T.V), T.name + "/stages");
        tH = character_table(X.L);
    }

    std::vector<ModulePtr> sig(ns);
    for (std::size_t s = 0; s < ns; ++s) sig[s] = irreducible_module(tL, s);

    parallel_for(ns, [&](std::size_t s) {
        auto& o = so[s];
        auto r = pind(*c, sig[s], in.budget);
        o.dim = r.output->dim();
        o.bound = std::int64_t(c->G->order() / c->LU->order()) * sig[s]->dim();
        o.pind = decompose_module(*r.output, tG);
        o.pind_op = decompose_module(*pind(*cs, sig[s], in.budget).output, tG);
        for (const auto& cc : compat) o.compat.push_back(decompose_module(*pind(*cc, sig[s], in.budget).output, tG));
        o.z = z_spectrum(*r.output, *T.U, *T.V);
    });

    Realizer realize(c, in.tG, in.tL);
    std::vector<Realizer> realize_compat;
    for (const auto& cc : compat) realize_compat.emplace_back(cc, in.tG, in.tL);
    parallel_for(nt, [&](std::size_t k) {
        auto& o = to[k];
        auto R = realize(k);
        if (!R.module) {
            // no U- or V-fixed vectors: pres vanishes for (U, V); each compatible pair is realized on its own
            o.pres.assign(ns, 0);
            o.pres_op.assign(ns, 0);
            for (std::size_t i = 0; i < compat.size(); ++i) {
                auto Rc = realize_compat[i](k);
                if (!Rc.module) {
                    o.compat.emplace_back(ns, 0);
                    continue;
                }
                bool ok;
                o.compat.push_back(
                    divide_exact(decompose_module(*pres(*compat[i], Rc.module).output, tL), Rc.multiplicity, ok));
                o.divisible = o.divisible && ok;
            }
            return;
        }
        o.realized = true;
        bool ok1, ok2;
        o.pres = divide_exact(decompose_module(*pres(*c, R.module).output, tL), R.multiplicity, ok1);
        o.pres_op = divide_exact(decompose_module(*pres(*cs, R.module).output, tL), R.multiplicity, ok2);
        o.divisible = ok1 && ok2;
        for (const auto& cc : compat) {
            bool ok;
            o.compat.push_back(divide_exact(decompose_module(*pres(*cc, R.module).output, tL), R.multiplicity, ok));
            o.divisible = o.divisible && ok;
        }
        o.z = z_spectrum(*R.module, *T.U, *T.V);
    });

    Report rep;
    {
        Tally p1(rep, "P1-order-symmetry", "pind_{U,V} and pind_{V,U} agree, likewise pres");
        for (std::size_t s = 0; s < ns; ++s) p1.check(so[s].pind == so[s].pind_op, "sigma#" + std::to_string(s));
        for (std::size_t k = 0; k < nt; ++k)
            p1.check(to[k].divisible && to[k].pres == to[k].pres_op, "tau#" + std::to_string(k));
    }
    {
        Tally p2(rep, "P2-adjunction-pres-pind", "Hom_L(pres tau, sigma) = Hom_G(tau, pind sigma)");
        Tally p3(rep, "P3-adjunction-pind-pres", "Hom_G(pind sigma, tau) = Hom_L(sigma, pres tau)");
        for (std::size_t s = 0; s < ns; ++s) {
            auto pind_chi = from_multiplicities(tG, so[s].pind);
            for (std::size_t k = 0; k < nt; ++k) {
                auto pres_chi = from_multiplicities(tL, to[k].pres);
                std::string w = "sigma#" + std::to_string(s) + " tau#" + std::to_string(k);
                p2.check(inner_product(pres_chi, tL.irr[s]) == inner_product(tG.irr[k], pind_chi), w);
                p3.check(inner_product(pind_chi, tG.irr[k]) == inner_product(tL.irr[s], pres_chi), w);
            }
        }
    }
    if (!compat.empty()) {
        Tally p4(rep, "P4-compatible-pairs", "compatible decompositions give isomorphic functors");
        for (std::size_t i = 0; i < compat.size(); ++i) {
            for (std::size_t s = 0; s < ns; ++s)
                p4.check(so[s].compat[i] == so[s].pind, compat[i]->name + " sigma#" + std::to_string(s));
            for (std::size_t k = 0; k < nt; ++k)
                p4.check(to[k].compat[i] == to[k].pres, compat[i]->name + " tau#" + std::to_string(k));
        }
    }
    if (in.quotient) {
        Tally p5(rep, "P5-inflation", "pind and pres commute with inflation from a quotient");
        const auto& Q = in.quotient->quotient;
        const auto& phi = *in.quotient->to_quotient;
        auto cq = functor_context(Q);
        auto tQG = character_table(Q.G);
        auto tQL = character_table(Q.L);
        GroupHom phiL = restrict_hom(phi, T.L, Q.L);
        for (std::size_t s = 0; s < tQL->size(); ++s) {
            auto m = irreducible_module(*tQL, s);
            auto lhs = module_character(*pind(*c, inflate_module(m, phiL), in.budget).output, tG);
            auto rhs = inflate(module_character(*pind(*cq, m, in.budget).output, *tQG), phi, tG.classes);
            p5.check(lhs == rhs, "quotient sigma#" + std::to_string(s));
        }
        for (std::size_t k = 0; k < tQG->size(); ++k) {
            auto m = irreducible_module(*tQG, k);
            auto lhs = module_character(*pres(*c, inflate_module(m, phi)).output, tL);
            auto rhs = inflate(module_character(*pres(*cq, m).output, *tQL), phiL, tL.classes);
            p5.check(lhs == rhs, "quotient tau#" + std::to_string(k));
        }
    }
    {
        Tally p6(rep, "P6-nonzero", "pind of a nonzero module is nonzero");
        Tally bound(rep, "dim-bound", "dim pind M <= [G:LU] dim M");
        std::vector<std::int64_t> d;
        for (std::size_t s = 0; s < ns; ++s) {
            p6.check(so[s].dim > 0, "sigma#" + std::to_string(s));
            bound.check(so[s].dim <= so[s].bound, "sigma#" + std::to_string(s));
            d.push_back(so[s].dim);
        }
        p6.record().data["dims"] = d;
    }
    if (in.inner) {
        Tally p7(rep, "P7-stages", "pind_{U,V} o pind_{X,Y} = pind_{UX,YV}");
        const auto& X = *in.inner;
        auto ci = functor_context(X);
        std::vector<int> ok(tH->size(), 0);
        parallel_for(tH->size(), [&](std::size_t h) {
            auto m = irreducible_module(*tH, h);
            auto mid = pind(*ci, m, in.budget).output;
            auto composed = decompose_module(*pind(*c, mid, in.budget).output, tG);
            auto straight = decompose_module(*pind(*direct, m, in.budget).output, tG);
            ok[h] = composed == straight;
        });
        for (std::size_t h = 0; h < ok.size(); ++h) p7.check(ok[h], "H-irreducible#" + std::to_string(h));
    }
    {
        Tally z(rep, "z-spectrum", "nonzero spectrum of e_U e_V e_U in (0,1], z^{-1} e_U e_V idempotent");
        double worst = 0;
        for (std::size_t s = 0; s < ns; ++s) {
            z.check(so[s].z.ok(), "pind sigma#" + std::to_string(s));
            worst = std::max({worst, so[s].z.max_excess, so[s].z.idempotent_defect});
        }
        for (std::size_t k = 0; k < nt; ++k) {
            if (!to[k].realized) continue;
            z.check(to[k].z.ok(), "tau#" + std::to_string(k));
            worst = std::max({worst, to[k].z.max_excess, to[k].z.idempotent_defect});
        }
        double lo = 1, hi = 0;
        auto range = [&](const ZSpectrum& sp) {
            for (double e : sp.eigenvalues) lo = std::min(lo, e), hi = std::max(hi, e);
        };
        for (const auto& o : so) range(o.z);
        for (const auto& o : to)
            if (o.realized) range(o.z);
        z.record().data["within_1e-8"] = worst <= 1e-8;
        z.record().data["worst_defect"] = worst;
        z.record().data["min_eigenvalue"] = lo;
        z.record().data["max_eigenvalue"] = hi;
    }
    std::int64_t nonzero = 0;
    for (const auto& o : to)
        for (auto x : o.pres) nonzero += x ? 1 : 0;
    rep.records.front().data["irr_L"] = ns;
    rep.records.front().data["irr_G"] = nt;
    rep.records.front().data["nonzero_pres_entries"] = nonzero;
    return rep;
}

Report verify_actual_decomposition_properties(const IwahoriTriple& t, const TablePtr& tGp, const TablePtr& tLp) {
    if (!t.actual) throw std::invalid_argument("verify_actual_decomposition_properties: triple is not actual");
    const auto& tG = *tGp;
    const auto& tL = *tLp;
    auto c = functor_context(t);
    const std::size_t ns = tL.size(), nt = tG.size();
    std::vector<ModulePtr> sig(ns), tau(nt);
    for (std::size_t s = 0; s < ns; ++s) sig[s] = irreducible_module(tL, s);
    for (std::size_t k = 0; k < nt; ++k) tau[k] = irreducible_module(tG, k);

    struct SigmaOut {
        std::optional<std::size_t> image;
        bool round_trip = false;
    };
    struct TauOut {
        std::vector<std::int64_t> pres, fix_u, fix_v;
        std::int64_t pres_dim = 0;
        bool back = true;
        std::int64_t hom = 0;
        bool iso_ok = true;
        ZSpectrum z;
        Mat pu, pv;
        std::vector<Mat> e_sigma;
    };
    std::vector<SigmaOut> so(ns);
    std::vector<TauOut> to(nt);

    parallel_for(ns, [&](std::size_t s) {
        auto r = pind(*c, sig[s]);
        auto chi = module_character(*r.output, tG);
        so[s].image = tG.find(chi);
        auto back = decompose_module(*pres(*c, r.output).output, tL);
        std::vector<std::int64_t> want(ns, 0);
        want[s] = 1;
        so[s].round_trip = back == want;
    });

    parallel_for(nt, [&](std::size_t k) {
        auto& o = to[k];
        const auto& n = tau[k];
        Mat bu = fixed_space(*n, *t.U);
        Mat bv = fixed_space(*n, *t.V);
        o.pu = bu * bu.adjoint();
        o.pv = bv * bv.adjoint();
        auto nl = restrict_module(n, t.L);
        for (std::size_t s = 0; s < ns; ++s) o.e_sigma.push_back(isotypic_projector(*nl, tL.irr[s]));
        auto r = pres(*c, n);
        o.pres_dim = r.output->dim();
        o.pres = decompose_module(*r.output, tL);
        CompressedModule mu(nl, bu), mv(nl, bv);
        o.fix_u = decompose_module(mu, tL);
        o.fix_v = decompose_module(mv, tL);
        o.hom = inner_product(from_multiplicities(tL, o.fix_u), from_multiplicities(tL, o.fix_v));
        if (o.hom == 1) {
            auto rk = gap_checked_rank(bv.adjoint() * bu);
            o.iso_ok = rk == bu.cols() && rk == bv.cols() && o.pres == o.fix_u && o.pres == o.fix_v;
        }
        if (o.pres_dim > 0) {
            auto again = decompose_module(*pind(*c, r.output).output, tG);
            std::vector<std::int64_t> want(nt, 0);
            want[k] = 1;
            o.back = again == want;
        }
        o.z = z_spectrum(*n, *t.U, *t.V);
    });

    Report rep;
    {
        Tally a1(rep, "A1-irreducible", "pind sends Irr(L) into Irr(G), pres sends Irr(G) into Irr(L) or 0");
        for (std::size_t s = 0; s < ns; ++s) a1.check(so[s].image.has_value(), "sigma#" + std::to_string(s));
        for (std::size_t k = 0; k < nt; ++k) {
            std::int64_t total = 0;
            for (auto x : to[k].pres) total += x;
            a1.check(total <= 1, "tau#" + std::to_string(k) + " pres multiplicities " + dims(to[k].pres));
        }
    }
    {
        Tally a2(rep, "A2-pres-pind-identity", "pres o pind is the identity on Irr(L)");
        for (std::size_t s = 0; s < ns; ++s) a2.check(so[s].round_trip, "sigma#" + std::to_string(s));
    }
    {
        Tally a3(rep, "A3-pind-pres-identity", "pind pres tau = tau whenever pres tau is nonzero");
        for (std::size_t k = 0; k < nt; ++k) a3.check(to[k].back, "tau#" + std::to_string(k));
    }
    {
        Tally a4(rep, "A4-hom-spanned", "Hom_L(tau^U, tau^V) has dimension <= 1, spanned by e_V e_U");
        for (std::size_t k = 0; k < nt; ++k)
            a4.check((to[k].hom == 0 || to[k].hom == 1) && to[k].iso_ok,
                     "tau#" + std::to_string(k) + " hom " + std::to_string(to[k].hom));
    }
    {
        Tally a5(rep, "A5-common-subrepresentation", "tau = pind sigma iff sigma lies in tau^U and tau^V");
        for (std::size_t k = 0; k < nt; ++k)
            for (std::size_t s = 0; s < ns; ++s) {
                bool lhs = so[s].image && *so[s].image == k;
                bool rhs = to[k].fix_u[s] > 0 && to[k].fix_v[s] > 0;
                a5.check(lhs == rhs, "sigma#" + std::to_string(s) + " tau#" + std::to_string(k));
            }
    }
    {
        // both sides compared through the Fourier isomorphism H(G) = prod End(tau')
        Tally a6(rep, "A6-idempotent-proportional", "e_U e_phi e_V is a nonzero multiple of e_U e_{pres phi} e_V");
        for (std::size_t k = 0; k < nt; ++k) {
            std::optional<std::size_t> psi;
            for (std::size_t s = 0; s < ns; ++s)
                if (to[k].pres[s] == 1) psi = s;
            double xx = 0, yy = 0, res = 0;
            cplx xy = 0;
            std::vector<Mat> xs(nt), ys(nt);
            for (std::size_t j = 0; j < nt; ++j) {
                Index d = Index(tau[j]->dim());
                xs[j] = j == k ? Mat(to[j].pu * to[j].pv) : Mat(Mat::Zero(d, d));
                ys[j] = psi ? Mat(to[j].pu * to[j].e_sigma[*psi] * to[j].pv) : Mat(Mat::Zero(d, d));
                xx += xs[j].squaredNorm();
                yy += ys[j].squaredNorm();
                xy += (ys[j].adjoint() * xs[j]).trace();
            }
            bool ok;
            if (!psi) {
                ok = std::sqrt(xx) <= 1e-8;
            } else {
                cplx cc = yy > 0 ? xy / yy : cplx(0);
                for (std::size_t j = 0; j < nt; ++j) res += (xs[j] - cc * ys[j]).squaredNorm();
                ok = std::abs(cc) > 1e-8 && std::sqrt(res) <= 1e-8 * std::max(1.0, std::sqrt(xx));
            }
            a6.check(ok, "phi#" + std::to_string(k));
        }
    }
    {
        Tally z(rep, "z-scalar", "z_M is the scalar dim pres M / dim M on irreducible M");
        for (std::size_t k = 0; k < nt; ++k) {
            std::int64_t num = to[k].pres_dim ? to[k].pres_dim : tau[k]->dim();
            z.check(to[k].z.ok() && to[k].z.scalar(num, tau[k]->dim()), "tau#" + std::to_string(k));
        }
    }
    rep.records.front().data["irr_L"] = ns;
    rep.records.front().data["irr_G"] = nt;
    return rep;
}

}  // namespace hfl
