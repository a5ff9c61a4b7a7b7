#include <atomic>
#include "hfl/group.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

namespace hfl {

namespace {

constexpr Index kUnset = 0xffffffffu;

int level_of(std::uint32_t modulus, std::uint32_t p) {
    int ell = 0;
    std::uint32_t m = modulus;
    while (m % p == 0) {
        m /= p;
        ++ell;
    }
    if (m != 1) throw std::invalid_argument("modulus is not a prime power");
    return ell;
}

std::uint64_t fnv(std::uint64_t h, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
        h ^= (v >> (8 * i)) & 0xff;
        h *= 1099511628211ull;
    }
    return h;
}

// Greedy generating set of a set of matrices that is known to be a group.
std::vector<ZmodMatrix> greedy_generators(const std::vector<ZmodMatrix>& elems) {
    std::vector<ZmodMatrix> gens;
    if (elems.empty()) return gens;
    int n = elems[0].size();
    std::uint32_t m = elems[0].modulus();
    std::unordered_set<std::uint64_t> closure;
    std::vector<ZmodMatrix> members;
    ZmodMatrix one = ZmodMatrix::identity(n, m);
    closure.insert(one.key());
    members.push_back(one);
    for (const auto& x : elems) {
        if (closure.count(x.key())) continue;
        gens.push_back(x);
        for (std::size_t i = 0; i < members.size(); ++i) {
            for (const auto& g : gens) {
                ZmodMatrix y = members[i] * g;
                if (closure.insert(y.key()).second) members.push_back(y);
            }
        }
    }
    return gens;
}

std::atomic<std::size_t> element_budget{kDefaultElementBudget};

}  // namespace

std::size_t default_element_budget() { return element_budget.load(); }
void set_default_element_budget(std::size_t budget) { element_budget = budget; }

GroupPtr FiniteGroup::generate(const std::vector<ZmodMatrix>& gens, int n, std::uint32_t modulus,
                               std::optional<std::size_t> limit) {
    const std::size_t budget = limit.value_or(default_element_budget());
    check_key_width(n, modulus);
    if (modulus > 256) throw std::invalid_argument("generate: modulus above 256 unsupported");
    if (gens.size() > 255) throw std::invalid_argument("generate: too many generators");
    for (const auto& g : gens) {
        if (g.size() != n || g.modulus() != modulus)
            throw std::invalid_argument("generate: generator of wrong size or modulus");
        if (!g.is_invertible()) throw std::invalid_argument("generate: non-invertible generator " + g.to_string());
    }
    std::unordered_map<std::uint64_t, Index> pos;
    std::vector<std::uint64_t> bfs_keys;
    std::vector<Index> bfs_parent;
    std::vector<std::uint8_t> bfs_step;
    ZmodMatrix one = ZmodMatrix::identity(n, modulus);
    pos.emplace(one.key(), 0);
    bfs_keys.push_back(one.key());
    bfs_parent.push_back(0);
    bfs_step.push_back(0);
    for (std::size_t i = 0; i < bfs_keys.size(); ++i) {
        ZmodMatrix x = ZmodMatrix::from_key(bfs_keys[i], n, modulus);
        for (std::size_t j = 0; j < gens.size(); ++j) {
            ZmodMatrix y = x * gens[j];
            std::uint64_t k = y.key();
            if (pos.find(k) != pos.end()) continue;
            if (bfs_keys.size() >= budget)
                throw BudgetExceeded("group enumeration exceeds element budget of " + std::to_string(budget));
            pos.emplace(k, static_cast<Index>(bfs_keys.size()));
            bfs_keys.push_back(k);
            bfs_parent.push_back(static_cast<Index>(i));
            bfs_step.push_back(static_cast<std::uint8_t>(j));
        }
    }
    pos.clear();
    std::size_t N = bfs_keys.size();
    std::vector<Index> order(N);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin() + 1, order.end(), [&](Index a, Index b) { return bfs_keys[a] < bfs_keys[b]; });
    std::vector<Index> newpos(N);
    for (std::size_t i = 0; i < N; ++i) newpos[order[i]] = static_cast<Index>(i);

    auto* G = new FiniteGroup();
    G->n_ = n;
    G->modulus_ = modulus;
    G->p_ = prime_of(modulus);
    G->ell_ = level_of(modulus, G->p_);
    G->gens_ = gens;
    G->keys_.resize(N);
    G->parent_.resize(N);
    G->step_.resize(N);
    for (std::size_t i = 0; i < N; ++i) {
        Index old = order[i];
        G->keys_[i] = bfs_keys[old];
        G->parent_[i] = newpos[bfs_parent[old]];
        G->step_[i] = bfs_step[old];
    }
    G->finish();
    return GroupPtr(G);
}

GroupPtr FiniteGroup::from_table(int n, std::uint32_t modulus, std::vector<ZmodMatrix> gens,
                                 std::vector<std::uint64_t> keys, std::vector<Index> parent,
                                 std::vector<std::uint8_t> step) {
    std::size_t N = keys.size();
    if (N == 0 || parent.size() != N || step.size() != N) throw std::runtime_error("from_table: inconsistent sizes");
    auto* G = new FiniteGroup();
    GroupPtr holder(G);
    G->n_ = n;
    G->modulus_ = modulus;
    G->p_ = prime_of(modulus);
    G->ell_ = level_of(modulus, G->p_);
    G->gens_ = std::move(gens);
    G->keys_ = std::move(keys);
    G->parent_ = std::move(parent);
    G->step_ = std::move(step);
    if (G->keys_[0] != ZmodMatrix::identity(n, modulus).key()) throw std::runtime_error("from_table: identity not first");
    for (std::size_t i = 2; i < N; ++i)
        if (G->keys_[i - 1] >= G->keys_[i]) throw std::runtime_error("from_table: keys not sorted");
    G->finish();
    for (Index i = 1; i < N; ++i) {
        if (G->parent_[i] >= N || G->step_[i] >= G->gens_.size()) throw std::runtime_error("from_table: bad word");
        if (G->element(G->parent_[i]) * G->gens_[G->step_[i]] != G->element(i))
            throw std::runtime_error("from_table: word mismatch");
    }
    for (Index i = 0; i < N; ++i)
        for (const auto& g : G->gens_)
            if (!G->find(G->element(i) * g)) throw std::runtime_error("from_table: not closed");
    return holder;
}

void FiniteGroup::finish() {
    std::size_t N = keys_.size();
    int nn = n_ * n_;
    entries_.resize(N * nn);
    for (std::size_t i = 0; i < N; ++i) {
        std::uint64_t k = keys_[i];
        for (int e = nn - 1; e >= 0; --e) {
            entries_[i * nn + e] = static_cast<std::uint8_t>(k % modulus_);
            k /= modulus_;
        }
    }
    inverse_.assign(N, kUnset);
    for (Index i = 0; i < N; ++i) {
        if (inverse_[i] != kUnset) continue;
        Index j = index_of(element(i).inverse());
        inverse_[i] = j;
        inverse_[j] = i;
    }
    gen_idx_.clear();
    for (const auto& g : gens_) gen_idx_.push_back(index_of(g));
}

ZmodMatrix FiniteGroup::element(Index i) const {
    ZmodMatrix m(n_, modulus_);
    int nn = n_ * n_;
    const std::uint8_t* e = &entries_[std::size_t(i) * nn];
    for (int r = 0; r < n_; ++r)
        for (int c = 0; c < n_; ++c) m.set(r, c, e[r * n_ + c]);
    return m;
}

std::optional<Index> FiniteGroup::find_key(std::uint64_t k) const {
    if (keys_.empty()) return std::nullopt;
    if (keys_[0] == k) return 0;
    auto it = std::lower_bound(keys_.begin() + 1, keys_.end(), k);
    if (it == keys_.end() || *it != k) return std::nullopt;
    return static_cast<Index>(it - keys_.begin());
}

std::optional<Index> FiniteGroup::find(const ZmodMatrix& m) const {
    if (m.size() != n_ || m.modulus() != modulus_) return std::nullopt;
    return find_key(m.key());
}

Index FiniteGroup::index_of(const ZmodMatrix& m) const {
    auto r = find(m);
    if (!r) throw std::out_of_range("element not in group: " + m.to_string());
    return *r;
}

Index FiniteGroup::mul(Index a, Index b) const {
    int nn = n_ * n_;
    const std::uint8_t* x = &entries_[std::size_t(a) * nn];
    const std::uint8_t* y = &entries_[std::size_t(b) * nn];
    std::uint64_t k = 0;
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) {
            std::uint32_t s = 0;
            for (int t = 0; t < n_; ++t) s += std::uint32_t(x[i * n_ + t]) * y[t * n_ + j];
            k = k * modulus_ + s % modulus_;
        }
    auto r = find_key(k);
    if (!r) throw std::logic_error("group not closed under multiplication");
    return *r;
}

std::uint64_t FiniteGroup::element_order(Index a) const {
    std::uint64_t o = 1;
    Index x = a;
    while (x != 0) {
        x = mul(x, a);
        ++o;
    }
    return o;
}

std::vector<int> FiniteGroup::word(Index i) const {
    std::vector<int> w;
    while (i != 0) {
        w.push_back(step_[i]);
        i = parent_[i];
    }
    std::reverse(w.begin(), w.end());
    return w;
}

std::uint64_t FiniteGroup::digest() const {
    std::uint64_t h = 1469598103934665603ull;
    h = fnv(h, 0x314c4648ull);  // "HFL1"
    h = fnv(h, static_cast<std::uint64_t>(n_));
    h = fnv(h, modulus_);
    h = fnv(h, gens_.size());
    for (const auto& g : gens_) h = fnv(h, g.key());
    h = fnv(h, keys_.size());
    for (std::size_t i = 0; i < keys_.size(); ++i) {
        h = fnv(h, keys_[i]);
        h = fnv(h, (std::uint64_t(parent_[i]) << 8) | step_[i]);
    }
    return h;
}

std::vector<Index> embed(const FiniteGroup& h, const FiniteGroup& g) {
    std::vector<Index> out(h.order());
    for (Index i = 0; i < h.order(); ++i) {
        auto r = g.find(h.element(i));
        if (!r) throw std::invalid_argument("embed: subgroup not contained in group");
        out[i] = *r;
    }
    return out;
}

GroupPtr attach_ambient(GroupPtr h, GroupPtr g) {
    auto* copy = new FiniteGroup(*h);
    copy->embedding_ = embed(*h, *g);
    copy->ambient_ = std::move(g);
    return GroupPtr(copy);
}

GroupPtr subgroup_generated(const GroupPtr& g, const std::vector<ZmodMatrix>& gens) {
    for (const auto& x : gens)
        if (!g->contains(x)) throw std::invalid_argument("subgroup_generated: generator outside group");
    return attach_ambient(FiniteGroup::generate(gens, g->degree(), g->modulus()), g);
}

GroupPtr subgroup_where(const GroupPtr& g, const std::function<bool(const ZmodMatrix&)>& pred) {
    std::vector<Index> sel;
    for (Index i = 0; i < g->order(); ++i)
        if (pred(g->element(i))) sel.push_back(i);
    return subgroup_of_elements(g, sel);
}

GroupPtr subgroup_of_elements(const GroupPtr& g, const std::vector<Index>& elems) {
    std::vector<ZmodMatrix> mats;
    mats.reserve(elems.size());
    for (Index i : elems) mats.push_back(g->element(i));
    return attach_ambient(FiniteGroup::generate(greedy_generators(mats), g->degree(), g->modulus()), g);
}

GroupPtr intersect(const GroupPtr& a, const GroupPtr& b) {
    std::vector<ZmodMatrix> mats;
    for (Index i = 0; i < a->order(); ++i) {
        ZmodMatrix x = a->element(i);
        if (b->contains(x)) mats.push_back(x);
    }
    auto h = FiniteGroup::generate(greedy_generators(mats), a->degree(), a->modulus());
    return a->ambient() ? attach_ambient(h, a->ambient()) : h;
}

GroupPtr join(const GroupPtr& g, const GroupPtr& a, const GroupPtr& b) {
    std::vector<ZmodMatrix> gens = a->generators();
    gens.insert(gens.end(), b->generators().begin(), b->generators().end());
    return subgroup_generated(g, gens);
}

GroupPtr conjugate_group(const GroupPtr& a, const ZmodMatrix& x) {
    ZmodMatrix xi = x.inverse();
    std::vector<ZmodMatrix> gens;
    for (const auto& h : a->generators()) gens.push_back(x * h * xi);
    return FiniteGroup::generate(gens, a->degree(), a->modulus());
}

bool is_subgroup(const FiniteGroup& h, const FiniteGroup& g) {
    for (const auto& x : h.generators())
        if (!g.contains(x)) return false;
    return true;
}

bool normalizes(const FiniteGroup& n, const FiniteGroup& h) {
    for (const auto& x : n.generators()) {
        ZmodMatrix xi = x.inverse();
        for (const auto& y : h.generators())
            if (!h.contains(x * y * xi)) return false;
    }
    return true;
}

bool is_normal(const FiniteGroup& h, const FiniteGroup& g) { return is_subgroup(h, g) && normalizes(g, h); }

std::size_t product_set_size(const FiniteGroup& a, const FiniteGroup& b) {
    std::unordered_set<std::uint64_t> s;
    s.reserve(a.order() * b.order());
    for (Index i = 0; i < a.order(); ++i) {
        ZmodMatrix x = a.element(i);
        for (Index j = 0; j < b.order(); ++j) s.insert((x * b.element(j)).key());
    }
    return s.size();
}

bool elementwise_commute(const FiniteGroup& a, const FiniteGroup& b) {
    for (const auto& x : a.generators())
        for (const auto& y : b.generators())
            if (x * y != y * x) return false;
    return true;
}

CosetTable coset_table(const FiniteGroup& g, const FiniteGroup& h, Side side) {
    CosetTable t;
    t.side = side;
    t.coset_of.assign(g.order(), kUnset);
    t.h_part.assign(g.order(), kUnset);
    std::vector<ZmodMatrix> hm;
    hm.reserve(h.order());
    for (Index i = 0; i < h.order(); ++i) hm.push_back(h.element(i));
    for (Index x = 0; x < g.order(); ++x) {
        if (t.coset_of[x] != kUnset) continue;
        Index c = static_cast<Index>(t.reps.size());
        t.reps.push_back(x);
        ZmodMatrix r = g.element(x);
        for (Index j = 0; j < hm.size(); ++j) {
            ZmodMatrix y = side == Side::Right ? hm[j] * r : r * hm[j];
            auto yi = g.find(y);
            if (!yi) throw std::invalid_argument("coset_table: subgroup not contained in group");
            t.coset_of[*yi] = c;
            t.h_part[*yi] = j;
        }
    }
    return t;
}

std::vector<Index> coset_transversal(const FiniteGroup& g, const FiniteGroup& h, Side side) {
    return coset_table(g, h, side).reps;
}

std::vector<DoubleCoset> double_cosets_in(const FiniteGroup& a, const FiniteGroup& g, const FiniteGroup& b,
                                          const std::vector<bool>& subset) {
    CosetTable t = coset_table(g, a, Side::Right);
    std::vector<Index> bgen;
    for (const auto& x : b.generators()) bgen.push_back(g.index_of(x));
    std::vector<bool> seen(t.index(), false);
    std::vector<DoubleCoset> out;
    for (Index c = 0; c < t.index(); ++c) {
        if (seen[c] || !subset[t.reps[c]]) continue;
        seen[c] = true;
        std::vector<Index> orbit{c};
        Index best = t.reps[c];
        for (std::size_t i = 0; i < orbit.size(); ++i) {
            for (Index bg : bgen) {
                Index d = t.coset_of[g.mul(t.reps[orbit[i]], bg)];
                if (!seen[d]) {
                    seen[d] = true;
                    orbit.push_back(d);
                    best = std::min(best, t.reps[d]);
                }
            }
        }
        out.push_back({best, orbit.size() * a.order()});
    }
    std::sort(out.begin(), out.end(), [](const DoubleCoset& x, const DoubleCoset& y) { return x.rep < y.rep; });
    return out;
}

std::vector<DoubleCoset> double_cosets(const FiniteGroup& a, const FiniteGroup& g, const FiniteGroup& b) {
    return double_cosets_in(a, g, b, std::vector<bool>(g.order(), true));
}

ConjugacyClasses conjugacy_classes(const FiniteGroup& g) {
    ConjugacyClasses cc;
    cc.class_of.assign(g.order(), kUnset);
    const auto& gi = g.generator_indices();
    for (Index x = 0; x < g.order(); ++x) {
        if (cc.class_of[x] != kUnset) continue;
        std::uint32_t c = static_cast<std::uint32_t>(cc.reps.size());
        cc.class_of[x] = c;
        std::vector<Index> orbit{x};
        for (std::size_t i = 0; i < orbit.size(); ++i)
            for (Index s : gi) {
                Index y = g.conj(s, orbit[i]);
                if (cc.class_of[y] == kUnset) {
                    cc.class_of[y] = c;
                    orbit.push_back(y);
                }
            }
        cc.reps.push_back(x);
        cc.sizes.push_back(orbit.size());
    }
    return cc;
}

GroupPtr centralizer(const GroupPtr& g, const ZmodMatrix& x) {
    return subgroup_where(g, [&](const ZmodMatrix& m) { return m * x == x * m; });
}

GroupPtr normalizer(const GroupPtr& g, const FiniteGroup& h) {
    return subgroup_where(g, [&](const ZmodMatrix& m) {
        ZmodMatrix mi = m.inverse();
        for (const auto& y : h.generators())
            if (!h.contains(m * y * mi)) return false;
        return true;
    });
}

GroupPtr stabilizer(const GroupPtr& g, const std::function<bool(const ZmodMatrix&)>& fixes) {
    return subgroup_where(g, fixes);
}

std::vector<Index> transporter(const FiniteGroup& g, const std::function<bool(const ZmodMatrix&)>& pred) {
    std::vector<Index> out;
    for (Index i = 0; i < g.order(); ++i)
        if (pred(g.element(i))) out.push_back(i);
    return out;
}

GroupHom::GroupHom(GroupPtr source, GroupPtr target, std::vector<Index> images)
    : src_(std::move(source)), tgt_(std::move(target)) {
    if (images.size() != src_->generators().size()) throw std::invalid_argument("GroupHom: wrong number of images");
    std::size_t N = src_->order();
    table_.assign(N, kUnset);
    table_[0] = 0;
    std::vector<Index> stack;
    for (Index i = 0; i < N; ++i) {
        Index x = i;
        while (table_[x] == kUnset) {
            stack.push_back(x);
            x = src_->parent(x);
        }
        while (!stack.empty()) {
            Index y = stack.back();
            stack.pop_back();
            table_[y] = tgt_->mul(table_[src_->parent(y)], images[src_->step(y)]);
        }
    }
    const auto& gi = src_->generator_indices();
    for (std::size_t j = 0; j < gi.size(); ++j)
        if (table_[gi[j]] != images[j]) throw std::invalid_argument("GroupHom: generator image inconsistent");
    for (Index x = 0; x < N; ++x)
        for (std::size_t j = 0; j < gi.size(); ++j)
            if (table_[src_->mul(x, gi[j])] != tgt_->mul(table_[x], images[j]))
                throw std::invalid_argument("GroupHom: images do not define a homomorphism");
}

GroupHom GroupHom::reduction(GroupPtr source, GroupPtr target) {
    std::vector<Index> images;
    for (const auto& g : source->generators()) images.push_back(target->index_of(g.reduce(target->modulus())));
    return GroupHom(std::move(source), std::move(target), std::move(images));
}

GroupPtr GroupHom::kernel() const {
    std::vector<Index> k;
    for (Index i = 0; i < table_.size(); ++i)
        if (table_[i] == 0) k.push_back(i);
    return subgroup_of_elements(src_, k);
}

bool GroupHom::surjective() const {
    std::vector<bool> hit(tgt_->order(), false);
    for (Index v : table_) hit[v] = true;
    return std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
}

}  // namespace hfl
