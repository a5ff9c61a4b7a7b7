#include "hfl/chartab.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "hfl/cache.hpp"
#include "hfl/modp.hpp"

namespace hfl {

using modp::u64;

std::uint32_t ClassData::power_class(std::uint32_t k, std::int64_t j) const {
    std::int64_t o = static_cast<std::int64_t>(rep_order[k]);
    std::int64_t e = ((j % o) + o) % o;
    Index base = cc.reps[k];
    Index acc = 0;
    while (e) {
        if (e & 1) acc = group->mul(acc, base);
        base = group->mul(base, base);
        e >>= 1;
    }
    return cc.class_of[acc];
}

ClassDataPtr class_data(const GroupPtr& g) {
    auto c = std::make_shared<ClassData>();
    c->group = g;
    c->cc = conjugacy_classes(*g);
    c->inverse_class.resize(c->cc.count());
    c->rep_order.resize(c->cc.count());
    int e = 1;
    for (std::uint32_t k = 0; k < c->cc.count(); ++k) {
        Index r = c->cc.reps[k];
        c->inverse_class[k] = c->cc.class_of[g->inv(r)];
        c->rep_order[k] = g->element_order(r);
        e = lcm_int(e, static_cast<int>(c->rep_order[k]));
    }
    c->exponent = e;
    return c;
}

namespace {

void same_classes(const ClassFunction& a, const ClassFunction& b) {
    if (a.classes != b.classes) throw std::invalid_argument("class functions on different class data");
}

}  // namespace

ClassFunction ClassFunction::operator+(const ClassFunction& o) const {
    same_classes(*this, o);
    ClassFunction r = *this;
    for (std::size_t i = 0; i < values.size(); ++i) r.values[i] = values[i] + o.values[i];
    return r;
}

ClassFunction ClassFunction::operator-(const ClassFunction& o) const { return *this + o.scaled(-1); }

ClassFunction ClassFunction::operator*(const ClassFunction& o) const {
    same_classes(*this, o);
    ClassFunction r = *this;
    for (std::size_t i = 0; i < values.size(); ++i) r.values[i] = values[i] * o.values[i];
    return r;
}

ClassFunction ClassFunction::scaled(std::int64_t k) const {
    ClassFunction r = *this;
    for (auto& v : r.values) v = v.scaled(k);
    return r;
}

ClassFunction ClassFunction::conj() const {
    ClassFunction r = *this;
    for (auto& v : r.values) v = v.conj();
    return r;
}

bool ClassFunction::operator==(const ClassFunction& o) const {
    if (classes != o.classes || values.size() != o.values.size()) return false;
    for (std::size_t i = 0; i < values.size(); ++i)
        if (values[i] != o.values[i]) return false;
    return true;
}

bool ClassFunction::is_zero() const {
    return std::all_of(values.begin(), values.end(), [](const Cyclotomic& v) { return v.is_zero(); });
}

ClassFunction zero_function(const ClassDataPtr& c) { return ClassFunction{c, std::vector<Cyclotomic>(c->count())}; }

ClassFunction trivial_character(const ClassDataPtr& c) {
    return ClassFunction{c, std::vector<Cyclotomic>(c->count(), Cyclotomic(1))};
}

std::size_t CharacterTable::trivial_index() const {
    auto t = trivial_character(classes);
    for (std::size_t i = 0; i < irr.size(); ++i)
        if (irr[i] == t) return i;
    throw std::logic_error("character table without trivial character");
}

std::optional<std::size_t> CharacterTable::find(const ClassFunction& chi) const {
    for (std::size_t i = 0; i < irr.size(); ++i)
        if (irr[i] == chi) return i;
    return std::nullopt;
}

std::vector<std::complex<double>> CharacterTable::numeric() const {
    std::size_t r = classes->count();
    std::vector<std::complex<double>> out(irr.size() * r);
    for (std::size_t i = 0; i < irr.size(); ++i)
        for (std::size_t k = 0; k < r; ++k) out[i * r + k] = irr[i].values[k].to_complex();
    return out;
}

Cyclotomic inner_product_exact(const ClassFunction& a, const ClassFunction& b) {
    same_classes(a, b);
    Cyclotomic s;
    for (std::size_t k = 0; k < a.values.size(); ++k) {
        if (a.values[k].is_zero() || b.values[k].is_zero()) continue;
        s += (a.values[k] * b.values[k].conj()).scaled(static_cast<std::int64_t>(a.classes->cc.sizes[k]));
    }
    std::int64_t n = static_cast<std::int64_t>(a.classes->order());
    if (!s.divisible_by(n)) throw std::domain_error("inner product is not an algebraic integer");
    return s.divided(n);
}

std::int64_t inner_product(const ClassFunction& a, const ClassFunction& b) {
    return inner_product_exact(a, b).to_integer();
}

ClassFunction restrict_to(const ClassFunction& chi, const ClassDataPtr& h) {
    ClassFunction r = zero_function(h);
    const FiniteGroup& G = *chi.classes->group;
    for (std::uint32_t k = 0; k < h->count(); ++k) {
        auto gi = G.find(h->group->element(h->cc.reps[k]));
        if (!gi) throw std::invalid_argument("restrict_to: subgroup element outside group");
        r.values[k] = chi.at(*gi);
    }
    return r;
}

ClassFunction induce(const ClassFunction& chi, const ClassDataPtr& g) {
    const FiniteGroup& H = *chi.classes->group;
    std::vector<Cyclotomic> acc(g->count());
    for (Index i = 0; i < H.order(); ++i) {
        auto gi = g->group->find(H.element(i));
        if (!gi) throw std::invalid_argument("induce: subgroup element outside group");
        acc[g->class_of(*gi)] += chi.at(i);
    }
    ClassFunction r = zero_function(g);
    std::int64_t h = static_cast<std::int64_t>(H.order());
    for (std::uint32_t k = 0; k < g->count(); ++k)
        r.values[k] = acc[k].scaled(static_cast<std::int64_t>(g->centralizer_order(k))).divided(h);
    return r;
}

ClassFunction inflate(const ClassFunction& chi, const GroupHom& hom, const ClassDataPtr& source) {
    if (hom.target() != chi.classes->group && hom.target()->digest() != chi.classes->group->digest())
        throw std::invalid_argument("inflate: homomorphism target differs from character group");
    ClassFunction r = zero_function(source);
    for (std::uint32_t k = 0; k < source->count(); ++k) r.values[k] = chi.at(hom(source->cc.reps[k]));
    return r;
}

ClassFunction conjugate_function(const ClassFunction& chi, const ZmodMatrix& x, const ClassDataPtr& target) {
    ZmodMatrix xi = x.inverse();
    const FiniteGroup& H = *chi.classes->group;
    ClassFunction r = zero_function(target);
    for (std::uint32_t k = 0; k < target->count(); ++k) {
        auto hi = H.find(xi * target->group->element(target->cc.reps[k]) * x);
        if (!hi) throw std::invalid_argument("conjugate_function: target is not the conjugate group");
        r.values[k] = chi.at(*hi);
    }
    return r;
}

std::vector<std::int64_t> decompose(const ClassFunction& chi, const CharacterTable& t) {
    std::vector<std::int64_t> m(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) m[i] = inner_product(chi, t.irr[i]);
    return m;
}

ClassFunction from_multiplicities(const CharacterTable& t, const std::vector<std::int64_t>& m) {
    ClassFunction r = zero_function(t.classes);
    for (std::size_t i = 0; i < t.size(); ++i)
        if (m[i]) r = r + t.irr[i].scaled(m[i]);
    return r;
}

ClassFunction permutation_character(const ClassDataPtr& g, const FiniteGroup& h) {
    ClassFunction r = zero_function(g);
    std::vector<std::int64_t> cnt(g->count(), 0);
    for (Index i = 0; i < h.order(); ++i) {
        auto gi = g->group->find(h.element(i));
        if (!gi) throw std::invalid_argument("permutation_character: subgroup not contained");
        ++cnt[g->class_of(*gi)];
    }
    std::int64_t ho = static_cast<std::int64_t>(h.order());
    for (std::uint32_t k = 0; k < g->count(); ++k) {
        std::int64_t v = cnt[k] * static_cast<std::int64_t>(g->centralizer_order(k));
        if (v % ho) throw std::logic_error("permutation character not integral");
        r.values[k] = Cyclotomic(v / ho);
    }
    return r;
}

ClassFunction regular_character(const ClassDataPtr& g) {
    ClassFunction r = zero_function(g);
    r.values[0] = Cyclotomic(static_cast<std::int64_t>(g->order()));
    return r;
}

std::vector<std::int64_t> decompose_numeric(const std::vector<std::complex<double>>& traces, const CharacterTable& t,
                                            double tol) {
    const ClassData& c = *t.classes;
    std::size_t r = c.count();
    if (traces.size() != r) throw std::invalid_argument("decompose_numeric: wrong number of traces");
    auto num = t.numeric();
    std::vector<std::int64_t> m(t.size());
    double scale = 1.0;
    for (auto& v : traces) scale = std::max(scale, std::abs(v));
    for (std::size_t i = 0; i < t.size(); ++i) {
        std::complex<double> s = 0;
        for (std::size_t k = 0; k < r; ++k) s += static_cast<double>(c.cc.sizes[k]) * traces[k] * std::conj(num[i * r + k]);
        s /= static_cast<double>(c.order());
        double rr = std::round(s.real());
        if (std::abs(s - std::complex<double>(rr, 0)) > tol * scale)
            throw std::runtime_error("non-integral multiplicity " + std::to_string(s.real()) + "+" +
                                     std::to_string(s.imag()) + "i");
        m[i] = static_cast<std::int64_t>(rr);
    }
    for (std::size_t k = 0; k < r; ++k) {
        std::complex<double> v = 0;
        for (std::size_t i = 0; i < t.size(); ++i) v += static_cast<double>(m[i]) * num[i * r + k];
        if (std::abs(v - traces[k]) > tol * scale) throw std::runtime_error("character reconstruction mismatch");
    }
    return m;
}

bool verify_orthogonality(const CharacterTable& t, std::string* why) {
    const ClassData& c = *t.classes;
    std::size_t r = c.count();
    if (t.size() != r) {
        if (why) *why = "row count differs from class count";
        return false;
    }
    std::int64_t sumsq = 0;
    for (const auto& chi : t.irr) sumsq += chi.degree_int() * chi.degree_int();
    if (sumsq != static_cast<std::int64_t>(c.order())) {
        if (why) *why = "sum of squared degrees differs from group order";
        return false;
    }
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = i; j < r; ++j) {
            Cyclotomic ip = inner_product_exact(t.irr[i], t.irr[j]);
            if (ip != Cyclotomic(i == j ? 1 : 0)) {
                if (why) *why = "row orthogonality fails at " + std::to_string(i) + "," + std::to_string(j);
                return false;
            }
        }
    std::vector<std::vector<Cyclotomic>> conjs(r);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t k = 0; k < r; ++k) conjs[i].push_back(t.irr[i].values[k].conj());
    for (std::size_t k = 0; k < r; ++k)
        for (std::size_t l = k; l < r; ++l) {
            Cyclotomic s;
            for (std::size_t i = 0; i < r; ++i) s += t.irr[i].values[k] * conjs[i][l];
            Cyclotomic expect(k == l ? static_cast<std::int64_t>(c.centralizer_order(static_cast<std::uint32_t>(k))) : 0);
            if (s != expect) {
                if (why) *why = "column orthogonality fails at " + std::to_string(k) + "," + std::to_string(l);
                return false;
            }
        }
    return true;
}

namespace {

struct Subspace {
    modp::Mat rows;  // d x r, reduced row echelon
    std::vector<int> piv;
};

Subspace make_subspace(modp::Mat m, u64 q) {
    Subspace s;
    s.piv = modp::rref(m, q);
    modp::Mat t(static_cast<int>(s.piv.size()), m.cols);
    for (int i = 0; i < t.rows; ++i)
        for (int j = 0; j < m.cols; ++j) t(i, j) = m(i, j);
    s.rows = std::move(t);
    return s;
}

u64 choose_prime(std::size_t order, int exponent) {
    double bound = 2.0 * std::sqrt(static_cast<double>(order));
    u64 q = 1 + static_cast<u64>(exponent);
    while (static_cast<double>(q) <= bound || !modp::is_prime(q)) q += exponent;
    if (q >= (u64(1) << 31)) throw CharacterTableError("no auxiliary prime below 2^31");
    return q;
}

TablePtr dixon(const ClassDataPtr& cd) {
    const ClassData& c = *cd;
    const FiniteGroup& G = *c.group;
    int r = static_cast<int>(c.count());
    std::size_t N = c.order();
    int e = c.exponent;
    u64 q = choose_prime(N, e);

    std::vector<std::vector<Index>> members(r);
    for (Index x = 0; x < N; ++x) members[c.class_of(x)].push_back(x);

    std::vector<Subspace> spaces;
    {
        modp::Mat id(r, r);
        for (int i = 0; i < r; ++i) id(i, i) = 1;
        spaces.push_back(make_subspace(id, q));
    }
    for (int j = 1; j < r; ++j) {
        bool need = std::any_of(spaces.begin(), spaces.end(), [](const Subspace& s) { return s.rows.rows > 1; });
        if (!need) break;
        modp::Mat M(r, r);
        for (int l = 0; l < r; ++l) {
            Index gl = c.cc.reps[l];
            for (Index x : members[j]) {
                std::uint32_t k = c.class_of(G.mul(G.inv(x), gl));
                M(static_cast<int>(k), l) += 1;
            }
        }
        for (auto& v : M.a) v %= q;
        std::vector<Subspace> next;
        for (auto& S : spaces) {
            int d = S.rows.rows;
            if (d == 1) {
                next.push_back(std::move(S));
                continue;
            }
            // images of basis vectors, expressed in the basis through pivot coordinates
            modp::Mat X(d, d);
            std::vector<std::vector<u64>> img(d, std::vector<u64>(r, 0));
            for (int b = 0; b < d; ++b) {
                for (int k = 0; k < r; ++k) {
                    u64 s = 0;
                    for (int l = 0; l < r; ++l) s = (s + M(k, l) * S.rows(b, l)) % q;
                    img[b][k] = s;
                }
                for (int a = 0; a < d; ++a) X(a, b) = img[b][S.piv[a]];
            }
            auto lambdas = modp::roots(modp::charpoly(X, q), q);
            if (lambdas.size() <= 1) {
                next.push_back(std::move(S));
                continue;
            }
            int total = 0;
            for (u64 lam : lambdas) {
                modp::Mat Y = X;
                for (int a = 0; a < d; ++a) Y(a, a) = (Y(a, a) + q - lam) % q;
                auto ns = modp::nullspace(Y, q);
                modp::Mat piece(static_cast<int>(ns.size()), r);
                for (std::size_t t = 0; t < ns.size(); ++t)
                    for (int k = 0; k < r; ++k) {
                        u64 s = 0;
                        for (int a = 0; a < d; ++a) s = (s + ns[t][a] * S.rows(a, k)) % q;
                        piece(static_cast<int>(t), k) = s;
                    }
                total += piece.rows;
                next.push_back(make_subspace(std::move(piece), q));
            }
            if (total != d) throw CharacterTableError("class matrix not diagonalizable modulo auxiliary prime");
        }
        spaces = std::move(next);
    }
    if (static_cast<int>(spaces.size()) != r)
        throw CharacterTableError("class matrices failed to separate characters");

    u64 z = modp::powmod(modp::primitive_root(q), (q - 1) / e, q);
    u64 zinv = modp::invmod(z, q);
    std::vector<std::vector<std::uint32_t>> powers(r);
    for (int k = 0; k < r; ++k) {
        std::uint64_t o = c.rep_order[k];
        Index x = 0;
        for (std::uint64_t i = 0; i < o; ++i) {
            powers[k].push_back(c.class_of(x));
            x = G.mul(x, c.cc.reps[k]);
        }
    }
    auto t = std::make_shared<CharacterTable>();
    t->classes = cd;
    t->auxiliary_prime = q;
    for (auto& S : spaces) {
        std::vector<u64> w(r);
        u64 lead = S.rows(0, 0);
        if (!lead) throw CharacterTableError("central character vanishes at identity");
        u64 li = modp::invmod(lead, q);
        for (int k = 0; k < r; ++k) w[k] = S.rows(0, k) * li % q;
        u64 ssum = 0;
        for (int k = 0; k < r; ++k) {
            u64 term = w[k] * w[c.inverse_class[k]] % q;
            term = term * modp::invmod(c.cc.sizes[k] % q, q) % q;
            ssum = (ssum + term) % q;
        }
        u64 target = (N % q) * modp::invmod(ssum, q) % q;
        std::int64_t deg = -1;
        for (u64 d = 1; d * d <= N; ++d)
            if (d * d % q == target) {
                deg = static_cast<std::int64_t>(d);
                break;
            }
        if (deg < 0) throw CharacterTableError("degree recovery failed");
        std::vector<u64> chi(r);
        for (int k = 0; k < r; ++k)
            chi[k] = w[k] * (static_cast<u64>(deg) % q) % q * modp::invmod(c.cc.sizes[k] % q, q) % q;
        Character row{cd, std::vector<Cyclotomic>(r)};
        for (int k = 0; k < r; ++k) {
            std::uint64_t o = c.rep_order[k];
            std::uint64_t step = e / o;
            u64 oinv = modp::invmod(o % q, q);
            std::vector<std::int64_t> a(e, 0);
            std::int64_t total = 0;
            for (std::uint64_t j = 0; j < o; ++j) {
                u64 s = 0;
                u64 base = modp::powmod(zinv, step * j % e, q);
                u64 f = 1;
                for (std::uint64_t i = 0; i < o; ++i) {
                    s = (s + chi[powers[k][i]] * f) % q;
                    f = f * base % q;
                }
                u64 mj = s * oinv % q;
                if (mj > static_cast<u64>(deg)) throw CharacterTableError("eigenvalue multiplicity out of range");
                a[step * j] += static_cast<std::int64_t>(mj);
                total += static_cast<std::int64_t>(mj);
            }
            if (total != deg) throw CharacterTableError("eigenvalue multiplicities do not sum to degree");
            row.values[k] = Cyclotomic::from_powers(e, a);
        }
        t->irr.push_back(std::move(row));
    }
    std::sort(t->irr.begin(), t->irr.end(), [](const Character& a, const Character& b) {
        std::int64_t da = a.degree_int(), db = b.degree_int();
        if (da != db) return da < db;
        for (std::size_t k = 0; k < a.values.size(); ++k) {
            if (a.values[k] == b.values[k]) continue;
            return a.values[k].lex_less(b.values[k]);
        }
        return false;
    });
    std::int64_t sumsq = 0;
    for (const auto& chi : t->irr) sumsq += chi.degree_int() * chi.degree_int();
    if (sumsq != static_cast<std::int64_t>(N)) throw CharacterTableError("sum of squared degrees differs from |G|");
    // numeric orthogonality guard (exact check available via verify_orthogonality)
    auto num = t->numeric();
    for (int i = 0; i < r; ++i)
        for (int j = i; j < r; ++j) {
            std::complex<double> s = 0;
            for (int k = 0; k < r; ++k)
                s += static_cast<double>(c.cc.sizes[k]) * num[i * r + k] * std::conj(num[j * r + k]);
            s /= static_cast<double>(N);
            if (std::abs(s - std::complex<double>(i == j ? 1.0 : 0.0)) > 1e-6)
                throw CharacterTableError("orthogonality check failed");
        }
    return t;
}

}  // namespace

TablePtr character_table(const GroupPtr& g, const std::optional<std::filesystem::path>& cache_dir) {
    return character_table(class_data(g), cache_dir);
}

TablePtr character_table(const ClassDataPtr& c, const std::optional<std::filesystem::path>& explicit_dir) {
    const auto cache_dir = explicit_dir ? explicit_dir : default_cache_dir();
    if (cache_dir) {
        if (auto t = load_table(*cache_dir, c)) return t;
    }
    TablePtr t = dixon(c);
    if (cache_dir) store_table(*cache_dir, *t);
    return t;
}

}  // namespace hfl
