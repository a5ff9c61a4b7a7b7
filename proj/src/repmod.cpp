#include "hfl/repmod.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/SVD>

namespace hfl {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(3);
    os << v;
    return os.str();
}

Index locate(const FiniteGroup& g, const ZmodMatrix& x, const char* what) {
    auto i = g.find(x);
    if (!i) throw std::invalid_argument(std::string(what) + ": element outside the module's group");
    return *i;
}

void same_group(const FiniteGroup& a, const FiniteGroup& b, const char* what) {
    if (&a != &b && a.digest() != b.digest()) throw std::invalid_argument(std::string(what) + ": group mismatch");
}

}  // namespace

Mat image_basis(const Mat& t, double threshold, double gap) {
    if (t.rows() == 0 || t.cols() == 0) return Mat(t.rows(), 0);
    Eigen::BDCSVD<Mat> svd(t, Eigen::ComputeThinU);
    const auto& s = svd.singularValues();
    double ref = std::max(s(0), 1.0);
    Eigen::Index r = 0;
    while (r < s.size() && s(r) > threshold * ref) ++r;
    if (r > 0 && r < s.size() && s(r) > 0 && s(r - 1) / s(r) < gap)
        throw RankAmbiguity("rank ambiguity: kept singular value " + fmt(s(r - 1)) + " vs dropped " + fmt(s(r)));
    return svd.matrixU().leftCols(r);
}

Eigen::Index gap_checked_rank(const Mat& t, double threshold, double gap) {
    return image_basis(t, threshold, gap).cols();
}

Mat common_kernel(const std::vector<Mat>& ms, Eigen::Index dim) {
    Eigen::Index rows = 0;
    for (const auto& m : ms) rows += m.rows();
    if (rows == 0) return Mat::Identity(dim, dim);
    Mat a(rows, dim);
    Eigen::Index r0 = 0;
    for (const auto& m : ms) {
        a.middleRows(r0, m.rows()) = m;
        r0 += m.rows();
    }
    Eigen::BDCSVD<Mat> svd(a, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    double ref = std::max(s.size() ? s(0) : 0.0, 1.0);
    Eigen::Index r = 0;
    while (r < s.size() && s(r) > kRankThreshold * ref) ++r;
    if (r > 0 && r < s.size() && s(r) > 0 && s(r - 1) / s(r) < kRankGap)
        throw RankAmbiguity("rank ambiguity in kernel: " + fmt(s(r - 1)) + " vs " + fmt(s(r)));
    return svd.matrixV().rightCols(dim - r);
}

Mat ModuleRep::matrix(Index g) const {
    Mat out;
    apply(g, Mat::Identity(dim(), dim()), out);
    return out;
}

cplx ModuleRep::trace(Index g) const { return matrix(g).trace(); }

void ModuleRep::accumulate(Index g, cplx c, Mat& acc) const { acc += c * matrix(g); }

MatrixModule::MatrixModule(GroupPtr g, std::vector<Mat> gens) : ModuleRep(std::move(g)), gens_(std::move(gens)) {
    const auto& grp = *group();
    if (gens_.size() != grp.generators().size()) throw std::invalid_argument("MatrixModule: wrong number of matrices");
    d_ = gens_.empty() ? 1 : gens_[0].rows();
    for (const auto& m : gens_)
        if (m.rows() != d_ || m.cols() != d_) throw std::invalid_argument("MatrixModule: matrix size mismatch");
    if (gens_.empty() && grp.order() > 1) throw std::invalid_argument("MatrixModule: no generators");
    if (double(grp.order()) * double(d_ * d_) <= double(1 << 22)) {
        table_.assign(grp.order(), Mat());
        table_[0] = Mat::Identity(d_, d_);
        std::vector<Index> stack;
        for (Index i = 0; i < grp.order(); ++i) {
            Index x = i;
            while (table_[x].size() == 0) {
                stack.push_back(x);
                x = grp.parent(x);
            }
            while (!stack.empty()) {
                Index y = stack.back();
                stack.pop_back();
                table_[y] = table_[grp.parent(y)] * gens_[grp.step(y)];
            }
        }
    }
}

Mat MatrixModule::matrix(Index g) const {
    if (!table_.empty()) return table_[g];
    Mat m = Mat::Identity(d_, d_);
    for (int s : group()->word(g)) m = m * gens_[s];
    return m;
}

void MatrixModule::apply(Index g, const Mat& x, Mat& out) const {
    if (!table_.empty())
        out.noalias() = table_[g] * x;
    else
        out.noalias() = matrix(g) * x;
}

InducedModule::InducedModule(GroupPtr g, GroupPtr h, ModulePtr m, std::vector<Index> to_m)
    : ModuleRep(std::move(g)), h_(std::move(h)), m_(std::move(m)), to_m_(std::move(to_m)) {
    if (to_m_.size() != h_->order()) throw std::invalid_argument("InducedModule: projection table size");
    table_ = coset_table(*group(), *h_, Side::Right);
    dm_ = m_->dim();
}

std::pair<Index, Index> InducedModule::move(Index i, Index g) const {
    Index x = group()->mul(table_.reps[i], g);
    return {table_.coset_of[x], table_.h_part[x]};
}

void InducedModule::apply(Index g, const Mat& x, Mat& out) const {
    out.resize(dim(), x.cols());
    Mat tmp;
    for (Index i = 0; i < table_.index(); ++i) {
        auto [j, h] = move(i, g);
        if (dm_ == 1) {
            out.row(i) = m_->trace(to_m_[h]) * x.row(j);
        } else {
            m_->apply(to_m_[h], x.middleRows(Eigen::Index(j) * dm_, dm_), tmp);
            out.middleRows(Eigen::Index(i) * dm_, dm_) = tmp;
        }
    }
}

cplx InducedModule::trace(Index g) const {
    cplx t = 0;
    for (Index i = 0; i < table_.index(); ++i) {
        auto [j, h] = move(i, g);
        if (j == i) t += m_->trace(to_m_[h]);
    }
    return t;
}

void InducedModule::accumulate(Index g, cplx c, Mat& acc) const {
    Mat tmp;
    for (Index i = 0; i < table_.index(); ++i) {
        auto [j, h] = move(i, g);
        if (dm_ == 1) {
            acc(i, j) += c * m_->trace(to_m_[h]);
        } else {
            tmp.setZero(dm_, dm_);
            m_->accumulate(to_m_[h], c, tmp);
            acc.block(Eigen::Index(i) * dm_, Eigen::Index(j) * dm_, dm_, dm_) += tmp;
        }
    }
}

PullbackModule::PullbackModule(GroupPtr g, ModulePtr m, std::vector<Index> table)
    : ModuleRep(std::move(g)), m_(std::move(m)), table_(std::move(table)) {
    if (table_.size() != group()->order()) throw std::invalid_argument("PullbackModule: table size");
}

CompressedModule::CompressedModule(ModulePtr parent, Mat q)
    : ModuleRep(parent->group()), parent_(std::move(parent)), q_(std::move(q)) {
    if (q_.rows() != parent_->dim()) throw std::invalid_argument("CompressedModule: basis size");
}

void CompressedModule::apply(Index g, const Mat& x, Mat& out) const {
    Mat y;
    parent_->apply(g, q_ * x, y);
    out.noalias() = q_.adjoint() * y;
}

void RegularModule::apply(Index g, const Mat& x, Mat& out) const {
    const auto& grp = *group();
    out.resize(x.rows(), x.cols());
    for (Index i = 0; i < grp.order(); ++i) out.row(grp.mul(g, i)) = x.row(i);
}

void RegularModule::accumulate(Index g, cplx c, Mat& acc) const {
    const auto& grp = *group();
    for (Index i = 0; i < grp.order(); ++i) acc(grp.mul(g, i), i) += c;
}

ModulePtr trivial_module(const GroupPtr& g) {
    return std::make_shared<MatrixModule>(g, std::vector<Mat>(g->generators().size(), Mat::Identity(1, 1)));
}

ModulePtr linear_module(const Character& chi) {
    if (chi.degree_int() != 1) throw std::invalid_argument("linear_module: character is not linear");
    const auto& g = chi.classes->group;
    std::vector<Mat> gens;
    for (Index s : g->generator_indices()) gens.push_back(Mat::Constant(1, 1, chi.at(s).to_complex()));
    return std::make_shared<MatrixModule>(g, std::move(gens));
}

ModulePtr permutation_module(const GroupPtr& g, const GroupPtr& h) {
    if (!is_subgroup(*h, *g)) throw std::invalid_argument("permutation_module: subgroup not contained");
    std::vector<Index> id(h->order());
    for (Index i = 0; i < id.size(); ++i) id[i] = i;
    return std::make_shared<InducedModule>(g, h, trivial_module(h), std::move(id));
}

ModulePtr restrict_module(const ModulePtr& m, const GroupPtr& h) {
    const auto& g = *m->group();
    if (h.get() == m->group().get()) return m;
    std::vector<Index> table(h->order());
    if (h->ambient().get() == &g)
        table = h->embedding();
    else
        for (Index i = 0; i < h->order(); ++i) table[i] = locate(g, h->element(i), "restrict_module");
    return std::make_shared<PullbackModule>(h, m, std::move(table));
}

ModulePtr conjugate_module(const ModulePtr& m, const ZmodMatrix& x, const GroupPtr& target) {
    ZmodMatrix xi = x.inverse();
    std::vector<Index> table(target->order());
    for (Index i = 0; i < target->order(); ++i)
        table[i] = locate(*m->group(), xi * target->element(i) * x, "conjugate_module");
    return std::make_shared<PullbackModule>(target, m, std::move(table));
}

ModulePtr inflate_module(const ModulePtr& m, const GroupHom& hom) {
    same_group(*hom.target(), *m->group(), "inflate_module");
    std::vector<Index> table(hom.source()->order());
    for (Index i = 0; i < table.size(); ++i) table[i] = hom(i);
    return std::make_shared<PullbackModule>(hom.source(), m, std::move(table));
}

GAElement GAElement::delta(const GroupPtr& g, Index x) { return GAElement{g, {{x, cplx(1)}}}; }

GAElement GAElement::average(const GroupPtr& g, const FiniteGroup& h) {
    GAElement e{g, {}};
    cplx c = 1.0 / double(h.order());
    for (Index i = 0; i < h.order(); ++i)
        e.coeff[h.ambient().get() == g.get() ? h.embedding()[i] : locate(*g, h.element(i), "GAElement::average")] = c;
    return e;
}

GAElement GAElement::isotypic(const Character& chi) {
    const auto& g = chi.classes->group;
    GAElement e{g, {}};
    double s = double(chi.degree_int()) / double(g->order());
    std::vector<cplx> vals;
    for (const auto& v : chi.values) vals.push_back(std::conj(v.to_complex()) * s);
    for (Index x = 0; x < g->order(); ++x) e.coeff[x] = vals[chi.classes->class_of(x)];
    return e;
}

GAElement GAElement::operator*(const GAElement& o) const {
    same_group(*group, *o.group, "GAElement product");
    std::vector<cplx> acc(group->order(), 0.0);
    std::vector<bool> hit(group->order(), false);
    for (const auto& [x, a] : coeff)
        for (const auto& [y, b] : o.coeff) {
            Index z = group->mul(x, y);
            acc[z] += a * b;
            hit[z] = true;
        }
    GAElement r{group, {}};
    for (Index z = 0; z < acc.size(); ++z)
        if (hit[z]) r.coeff[z] = acc[z];
    return r;
}

GAElement GAElement::operator+(const GAElement& o) const {
    GAElement r = *this;
    for (const auto& [x, a] : o.coeff) r.coeff[x] += a;
    return r;
}

GAElement GAElement::scaled(cplx c) const {
    GAElement r = *this;
    for (auto& [x, a] : r.coeff) a *= c;
    return r;
}

double GAElement::distance(const GAElement& o) const {
    double d = 0;
    for (const auto& [x, a] : coeff) {
        auto it = o.coeff.find(x);
        d = std::max(d, std::abs(a - (it == o.coeff.end() ? cplx(0) : it->second)));
    }
    for (const auto& [x, b] : o.coeff)
        if (!coeff.count(x)) d = std::max(d, std::abs(b));
    return d;
}

Mat apply_element(const ModuleRep& m, Index g) { return m.matrix(g); }

Mat apply_element(const ModuleRep& m, const GAElement& f) {
    same_group(*f.group, *m.group(), "apply_element");
    Mat acc = Mat::Zero(m.dim(), m.dim());
    for (const auto& [x, c] : f.coeff)
        if (c != cplx(0)) m.accumulate(x, c, acc);
    return acc;
}

Mat averaging_projector(const ModuleRep& m, const FiniteGroup& h) {
    const auto& g = *m.group();
    Mat acc = Mat::Zero(m.dim(), m.dim());
    cplx c = 1.0 / double(h.order());
    bool embedded = h.ambient().get() == &g;
    for (Index i = 0; i < h.order(); ++i)
        m.accumulate(embedded ? h.embedding()[i] : locate(g, h.element(i), "averaging_projector"), c, acc);
    return acc;
}

Mat fixed_space(const ModuleRep& m, const FiniteGroup& h) {
    const auto& g = *m.group();
    std::vector<Mat> ms;
    Mat id = Mat::Identity(m.dim(), m.dim());
    for (const auto& s : h.generators()) ms.push_back(m.matrix(locate(g, s, "fixed_space")) - id);
    return common_kernel(ms, m.dim());
}

Mat isotypic_projector(const ModuleRep& m, const Character& chi) {
    same_group(*chi.classes->group, *m.group(), "isotypic_projector");
    const auto& c = *chi.classes;
    double s = double(chi.degree_int()) / double(c.order());
    std::vector<cplx> vals;
    for (const auto& v : chi.values) vals.push_back(std::conj(v.to_complex()) * s);
    Mat acc = Mat::Zero(m.dim(), m.dim());
    for (Index x = 0; x < c.order(); ++x) m.accumulate(x, vals[c.class_of(x)], acc);
    return acc;
}

std::vector<cplx> class_traces(const ModuleRep& m, const ClassData& c) {
    same_group(*c.group, *m.group(), "class_traces");
    std::vector<cplx> t;
    for (Index r : c.cc.reps) t.push_back(m.trace(r));
    return t;
}

std::vector<std::int64_t> decompose_module(const ModuleRep& m, const CharacterTable& t) {
    return decompose_numeric(class_traces(m, *t.classes), t);
}

std::int64_t multiplicity(const ModuleRep& m, const CharacterTable& t, std::size_t k) {
    return decompose_module(m, t).at(k);
}

Character module_character(const ModuleRep& m, const CharacterTable& t) {
    return from_multiplicities(t, decompose_module(m, t));
}

ModulePtr image_module(const ModulePtr& m, const Mat& t, const GroupPtr& h) {
    const auto& g = *m->group();
    double scale = std::max(1.0, t.norm());
    for (const auto& s : h->generators()) {
        Mat r = m->matrix(locate(g, s, "image_module"));
        double err = (r * t - t * r).norm();
        if (err > 1e-8 * scale) throw std::invalid_argument("image_module: operator does not commute with the action");
    }
    Mat q = image_basis(t);
    return std::make_shared<CompressedModule>(restrict_module(m, h), std::move(q));
}

namespace {

// (delta_s * f)(z) = f(s^{-1} z)
Vec left_translate(const FiniteGroup& g, Index s, const Vec& f) {
    Vec out(f.size());
    for (Index z = 0; z < g.order(); ++z) out(g.mul(s, z)) = f(z);
    return out;
}

// (f * a)(z) = sum_y f(z y^{-1}) a(y)
Vec right_multiply(const FiniteGroup& g, const Vec& f, const GAElement& a) {
    Vec out = Vec::Zero(f.size());
    for (const auto& [y, c] : a.coeff)
        for (Index x = 0; x < g.order(); ++x) out(g.mul(x, y)) += f(x) * c;
    return out;
}

bool add_direction(Mat& basis, Eigen::Index& n, Vec w) {
    for (int pass = 0; pass < 2; ++pass)
        if (n > 0) w -= basis.leftCols(n) * (basis.leftCols(n).adjoint() * w);
    double nw = w.norm();
    if (nw < 1e-8) return false;
    if (n == basis.cols()) basis.conservativeResize(Eigen::NoChange, n + 8);
    basis.col(n++) = w / nw;
    return true;
}

}  // namespace

ModulePtr irreducible_module(const CharacterTable& t, std::size_t k) {
    const Character& chi = t.irr.at(k);
    const ClassData& c = *t.classes;
    const auto& gp = c.group;
    const FiniteGroup& g = *gp;
    std::int64_t d = chi.degree_int();
    if (d == 1) return linear_module(chi);

    // cyclic subgroup <x> and linear lambda with the smallest positive multiplicity in chi
    std::int64_t best_m = 0;
    Index best_x = 0;
    std::uint64_t best_o = 1, best_a = 0;
    for (std::uint32_t cls = 0; cls < c.count(); ++cls) {
        std::uint64_t o = c.rep_order[cls];
        std::vector<cplx> v(o);
        for (std::uint64_t j = 0; j < o; ++j) v[j] = chi.values[c.power_class(cls, std::int64_t(j))].to_complex();
        for (std::uint64_t a = 0; a < o; ++a) {
            cplx s = 0;
            for (std::uint64_t j = 0; j < o; ++j)
                s += v[j] * std::polar(1.0, -2 * std::numbers::pi * double(a * j % o) / double(o));
            auto m = std::llround((s / double(o)).real());
            if (m >= 1 && (best_m == 0 || m < best_m)) {
                best_m = m;
                best_x = c.cc.reps[cls];
                best_o = o;
                best_a = a;
            }
        }
        if (best_m == 1) break;
    }
    GAElement el{gp, {}};
    {
        Index p = 0;
        for (std::uint64_t j = 0; j < best_o; ++j) {
            el.coeff[p] = std::polar(1.0 / double(best_o), -2 * std::numbers::pi * double(best_a * j % best_o) / double(best_o));
            p = g.mul(p, best_x);
        }
    }
    GAElement ec = GAElement::isotypic(chi);
    GAElement f = ec * el;
    Vec fv = Vec::Zero(Eigen::Index(g.order()));
    for (const auto& [x, a] : f.coeff) fv(x) = a;

    Eigen::Index target = best_m * d, n = 0;
    Mat basis(fv.size(), 8);
    add_direction(basis, n, fv);
    for (Eigen::Index q = 0; q < n; ++q)
        for (Index s : g.generator_indices()) add_direction(basis, n, left_translate(g, s, basis.col(q)));
    if (n != target) throw CharacterTableError("irreducible_module: left ideal has unexpected dimension");
    Mat w = basis.leftCols(n);

    Mat q = w;
    if (best_m > 1) {
        std::mt19937_64 rng(0x5eed);
        std::uniform_real_distribution<double> coef(-1.0, 1.0);
        std::uniform_int_distribution<Index> pick(0, Index(g.order() - 1));
        bool done = false;
        for (int terms = 4; terms <= 256 && !done; terms *= 2) {
            GAElement b{gp, {}};
            for (int r = 0; r < terms; ++r) {
                Index y = pick(rng);
                double a = coef(rng);
                b.coeff[y] += a;
                b.coeff[g.inv(y)] += a;
            }
            GAElement a = el * b * el;
            Mat r(n, n);
            for (Eigen::Index i = 0; i < n; ++i) r.col(i) = w.adjoint() * right_multiply(g, w.col(i), a);
            r = 0.5 * (r + r.adjoint()).eval();
            Eigen::SelfAdjointEigenSolver<Mat> es(r);
            const auto& ev = es.eigenvalues();
            double spread = std::max(1e-12, ev.cwiseAbs().maxCoeff());
            std::vector<Eigen::Index> starts{0};
            for (Eigen::Index i = 1; i < n; ++i)
                if (ev(i) - ev(i - 1) > 1e-6 * spread) starts.push_back(i);
            bool ok = std::int64_t(starts.size()) == best_m;
            for (std::size_t i = 0; ok && i < starts.size(); ++i) {
                Eigen::Index end = i + 1 < starts.size() ? starts[i + 1] : n;
                ok = end - starts[i] == d;
            }
            if (ok) {
                q = w * es.eigenvectors().leftCols(d);
                done = true;
            }
        }
        if (!done) throw CharacterTableError("irreducible_module: could not split the isotypic left ideal");
    }
    std::vector<Mat> gens;
    for (Index s : g.generator_indices()) {
        Mat img(q.rows(), q.cols());
        for (Eigen::Index i = 0; i < q.cols(); ++i) img.col(i) = left_translate(g, s, q.col(i));
        gens.push_back(q.adjoint() * img);
    }
    auto mod = std::make_shared<MatrixModule>(gp, std::move(gens));
    auto mult = decompose_module(*mod, t);
    for (std::size_t i = 0; i < mult.size(); ++i)
        if (mult[i] != (i == k ? 1 : 0)) throw CharacterTableError("irreducible_module: realized character mismatch");
    return mod;
}

double representation_defect(const ModuleRep& m, int samples, std::uint64_t seed) {
    const auto& g = *m.group();
    double worst = 0;
    Mat id = Mat::Identity(m.dim(), m.dim());
    for (Index s : g.generator_indices()) {
        Mat r = m.matrix(s);
        worst = std::max(worst, (r.adjoint() * r - id).norm());
    }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<Index> pick(0, Index(g.order() - 1));
    for (int i = 0; i < samples; ++i) {
        Index a = pick(rng), b = pick(rng);
        worst = std::max(worst, (m.matrix(a) * m.matrix(b) - m.matrix(g.mul(a, b))).norm());
    }
    return worst;
}

namespace {

ZmodMatrix sub_block(const ZmodMatrix& x, int off, int n) {
    ZmodMatrix r(n, x.modulus());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) r.set(i, j, x(off + i, off + j));
    return r;
}

}  // namespace

Index ProductEmbedding::combine(Index a, Index b) const {
    return whole->index_of(block_diag(left->element(a), right->element(b)));
}

std::pair<Index, Index> ProductEmbedding::split(Index g) const {
    ZmodMatrix x = whole->element(g);
    return {left->index_of(sub_block(x, 0, n1)), right->index_of(sub_block(x, n1, x.size() - n1))};
}

ProductEmbedding product_embedding(const GroupPtr& whole, const GroupPtr& left, const GroupPtr& right, int n1) {
    ProductEmbedding e{whole, left, right, n1};
    if (left->degree() != n1 || right->degree() != whole->degree() - n1)
        throw std::invalid_argument("product_embedding: block sizes");
    if (whole->order() != left->order() * right->order())
        throw std::invalid_argument("product_embedding: group is not a recognized product");
    for (Index g = 0; g < whole->order(); ++g) {
        ZmodMatrix x = whole->element(g);
        for (int i = 0; i < x.size(); ++i)
            for (int j = 0; j < x.size(); ++j)
                if ((i < n1) != (j < n1) && x(i, j) != 0)
                    throw std::invalid_argument("product_embedding: group is not block diagonal");
        e.split(g);
    }
    return e;
}

Character tensor_character(const ProductEmbedding& e, const Character& a, const Character& b, const ClassDataPtr& whole) {
    Character chi{whole, {}};
    for (Index r : whole->cc.reps) {
        auto [x, y] = e.split(r);
        chi.values.push_back(a.at(x) * b.at(y));
    }
    return chi;
}

std::pair<std::size_t, std::size_t> tensor_factor(const ProductEmbedding& e, const Character& chi,
                                                  const CharacterTable& left, const CharacterTable& right) {
    std::optional<std::pair<std::size_t, std::size_t>> found;
    for (std::size_t i = 0; i < left.size(); ++i)
        for (std::size_t j = 0; j < right.size(); ++j) {
            if (left[i].degree_int() * right[j].degree_int() != chi.degree_int()) continue;
            if (tensor_character(e, left[i], right[j], chi.classes) == chi) {
                if (found) throw std::invalid_argument("tensor_factor: factorization not unique");
                found = std::make_pair(i, j);
            }
        }
    if (!found) throw std::invalid_argument("tensor_factor: character is not an irreducible tensor product");
    return *found;
}

}  // namespace hfl
