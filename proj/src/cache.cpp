#include <mutex>
#include "hfl/cache.hpp"

#include <algorithm>
#include <atomic>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <unistd.h>

namespace hfl {

namespace fs = std::filesystem;

namespace {

constexpr char kGroupMagic[4] = {'H', 'F', 'L', '1'};
constexpr char kTableMagic[4] = {'H', 'F', 'T', '1'};

std::uint64_t fnv_bytes(const std::uint8_t* p, std::size_t n) {
    std::uint64_t h = 1469598103934665603ull;
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

class Writer {
public:
    void raw(const void* p, std::size_t n) {
        auto* b = static_cast<const std::uint8_t*>(p);
        buf.insert(buf.end(), b, b + n);
    }
    template <class T>
    void put(T v) {
        for (std::size_t i = 0; i < sizeof(T); ++i) buf.push_back(static_cast<std::uint8_t>(static_cast<std::uint64_t>(v) >> (8 * i)));
    }
    void finish_to(const fs::path& file) {
        std::uint64_t d = fnv_bytes(buf.data(), buf.size());
        put(d);
        static std::atomic<unsigned> counter{0};
        fs::path tmp = file;
        tmp += ".tmp" + std::to_string(::getpid()) + "_" + std::to_string(counter++);
        {
            std::ofstream os(tmp, std::ios::binary);
            if (!os) throw CacheError("cannot write " + tmp.string());
            os.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
        }
        fs::rename(tmp, file);
    }
    std::vector<std::uint8_t> buf;
};

class Reader {
public:
    explicit Reader(const fs::path& file) {
        std::ifstream is(file, std::ios::binary);
        if (!is) throw CacheError("cannot read " + file.string());
        buf.assign(std::istreambuf_iterator<char>(is), {});
        if (buf.size() < 12) throw CacheError("truncated cache file " + file.string());
        std::uint64_t stored = 0;
        for (int i = 0; i < 8; ++i) stored |= std::uint64_t(buf[buf.size() - 8 + i]) << (8 * i);
        if (stored != fnv_bytes(buf.data(), buf.size() - 8)) throw CacheError("digest mismatch in " + file.string());
        end = buf.size() - 8;
    }
    bool magic(const char* m) {
        need(4);
        bool ok = std::memcmp(buf.data() + pos, m, 4) == 0;
        pos += 4;
        return ok;
    }
    template <class T>
    T get() {
        need(sizeof(T));
        std::uint64_t v = 0;
        for (std::size_t i = 0; i < sizeof(T); ++i) v |= std::uint64_t(buf[pos + i]) << (8 * i);
        pos += sizeof(T);
        return static_cast<T>(v);
    }
    bool done() const { return pos == end; }

private:
    void need(std::size_t n) {
        if (pos + n > end) throw CacheError("truncated cache payload");
    }
    std::vector<std::uint8_t> buf;
    std::size_t pos = 0, end = 0;
};

std::string hex(std::uint64_t v) {
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << v;
    return os.str();
}

void write_group_header(Writer& w, const std::vector<ZmodMatrix>& gens, int n, std::uint32_t modulus) {
    w.raw(kGroupMagic, 4);
    std::uint32_t p = prime_of(modulus);
    int ell = 0;
    for (std::uint32_t m = modulus; m > 1; m /= p) ++ell;
    w.put<std::uint32_t>(p);
    w.put<std::uint32_t>(static_cast<std::uint32_t>(ell));
    w.put<std::uint32_t>(static_cast<std::uint32_t>(n));
    w.put<std::uint32_t>(static_cast<std::uint32_t>(gens.size()));
    for (const auto& g : gens) w.put<std::uint64_t>(g.key());
}

}  // namespace

namespace {
std::mutex cache_dir_mutex;
std::optional<fs::path> cache_dir_default;
}  // namespace

std::optional<fs::path> default_cache_dir() {
    std::lock_guard<std::mutex> lock(cache_dir_mutex);
    return cache_dir_default;
}

void set_default_cache_dir(std::optional<fs::path> dir) {
    std::lock_guard<std::mutex> lock(cache_dir_mutex);
    cache_dir_default = std::move(dir);
}

void store_group(const fs::path& file, const FiniteGroup& g) {
    Writer w;
    write_group_header(w, g.generators(), g.degree(), g.modulus());
    w.put<std::uint64_t>(g.order());
    for (auto k : g.keys()) w.put<std::uint64_t>(k);
    for (auto p : g.parents()) w.put<std::uint32_t>(p);
    for (auto s : g.steps()) w.put<std::uint8_t>(s);
    w.finish_to(file);
}

GroupPtr load_group(const fs::path& file) {
    Reader r(file);
    if (!r.magic(kGroupMagic)) throw CacheError("bad group magic in " + file.string());
    auto p = r.get<std::uint32_t>();
    auto ell = r.get<std::uint32_t>();
    auto n = static_cast<int>(r.get<std::uint32_t>());
    std::uint32_t modulus = 1;
    for (std::uint32_t i = 0; i < ell; ++i) modulus *= p;
    auto ng = r.get<std::uint32_t>();
    std::vector<ZmodMatrix> gens;
    for (std::uint32_t i = 0; i < ng; ++i) gens.push_back(ZmodMatrix::from_key(r.get<std::uint64_t>(), n, modulus));
    auto N = r.get<std::uint64_t>();
    std::vector<std::uint64_t> keys(N);
    std::vector<Index> parent(N);
    std::vector<std::uint8_t> step(N);
    for (auto& k : keys) k = r.get<std::uint64_t>();
    for (auto& x : parent) x = r.get<std::uint32_t>();
    for (auto& s : step) s = r.get<std::uint8_t>();
    if (!r.done()) throw CacheError("trailing bytes in " + file.string());
    try {
        return FiniteGroup::from_table(n, modulus, std::move(gens), std::move(keys), std::move(parent), std::move(step));
    } catch (const std::exception& e) {
        throw CacheError("inconsistent group table in " + file.string() + ": " + e.what());
    }
}

GroupPtr cached_generate(const std::vector<ZmodMatrix>& gens, int n, std::uint32_t modulus, std::size_t budget,
                         const std::optional<fs::path>& dir) {
    if (!dir) return FiniteGroup::generate(gens, n, modulus, budget);
    Writer header;
    write_group_header(header, gens, n, modulus);
    fs::create_directories(*dir);
    fs::path file = *dir / ("group-" + hex(fnv_bytes(header.buf.data(), header.buf.size())) + ".hflg");
    if (fs::exists(file)) {
        GroupPtr g = load_group(file);
        if (g->generators() != gens) throw CacheError("group cache header collision in " + file.string());
        if (g->order() > budget)
            throw BudgetExceeded("group enumeration exceeds element budget of " + std::to_string(budget));
        return g;
    }
    GroupPtr g = FiniteGroup::generate(gens, n, modulus, budget);
    store_group(file, *g);
    return g;
}

void store_table(const fs::path& dir, const CharacterTable& t) {
    const ClassData& c = *t.classes;
    Writer w;
    w.raw(kTableMagic, 4);
    w.put<std::uint64_t>(c.group->digest());
    w.put<std::uint64_t>(t.auxiliary_prime);
    w.put<std::uint32_t>(static_cast<std::uint32_t>(c.count()));
    for (std::uint32_t k = 0; k < c.count(); ++k) {
        w.put<std::uint64_t>(c.group->key(c.cc.reps[k]));
        w.put<std::uint64_t>(c.cc.sizes[k]);
    }
    w.put<std::uint32_t>(static_cast<std::uint32_t>(t.size()));
    for (const auto& chi : t.irr)
        for (const auto& v : chi.values) {
            w.put<std::int32_t>(v.conductor());
            w.put<std::uint32_t>(static_cast<std::uint32_t>(v.coeffs().size()));
            for (auto a : v.coeffs()) w.put<std::int64_t>(a);
        }
    fs::create_directories(dir);
    w.finish_to(dir / ("table-" + hex(c.group->digest()) + ".hflt"));
}

TablePtr load_table(const fs::path& dir, const ClassDataPtr& cd) {
    const ClassData& c = *cd;
    fs::path file = dir / ("table-" + hex(c.group->digest()) + ".hflt");
    if (!fs::exists(file)) return nullptr;
    Reader r(file);
    if (!r.magic(kTableMagic)) throw CacheError("bad table magic in " + file.string());
    if (r.get<std::uint64_t>() != c.group->digest()) throw CacheError("table keyed to another group: " + file.string());
    auto t = std::make_shared<CharacterTable>();
    t->classes = cd;
    t->auxiliary_prime = r.get<std::uint64_t>();
    auto nc = r.get<std::uint32_t>();
    if (nc != c.count()) throw CacheError("class count mismatch in " + file.string());
    for (std::uint32_t k = 0; k < nc; ++k) {
        auto key = r.get<std::uint64_t>();
        auto size = r.get<std::uint64_t>();
        if (key != c.group->key(c.cc.reps[k]) || size != c.cc.sizes[k])
            throw CacheError("class data mismatch in " + file.string());
    }
    auto rows = r.get<std::uint32_t>();
    for (std::uint32_t i = 0; i < rows; ++i) {
        Character chi{cd, {}};
        for (std::uint32_t k = 0; k < nc; ++k) {
            int m = r.get<std::int32_t>();
            auto len = r.get<std::uint32_t>();
            if (m < 1 || static_cast<int>(len) != euler_phi(m)) throw CacheError("bad cyclotomic in " + file.string());
            std::vector<std::int64_t> a(len);
            for (auto& x : a) x = r.get<std::int64_t>();
            chi.values.push_back(Cyclotomic::from_powers(m, a));
        }
        t->irr.push_back(std::move(chi));
    }
    if (!r.done()) throw CacheError("trailing bytes in " + file.string());
    return t;
}

namespace {

std::string kind_of(const fs::path& p) {
    auto ext = p.extension().string();
    if (ext == ".hflg") return "group";
    if (ext == ".hflt") return "table";
    return {};
}

CacheEntry check_file(const fs::path& p) {
    CacheEntry e;
    e.file = p.filename().string();
    e.kind = kind_of(p);
    e.bytes = fs::file_size(p);
    try {
        Reader r(p);
        if (!r.magic(e.kind == "group" ? kGroupMagic : kTableMagic)) throw CacheError("bad magic");
        if (e.kind == "group") load_group(p);
    } catch (const std::exception& ex) {
        e.ok = false;
        e.detail = ex.what();
    }
    return e;
}

std::vector<fs::path> cache_files(const fs::path& dir) {
    std::vector<fs::path> out;
    if (!fs::exists(dir)) return out;
    for (const auto& ent : fs::directory_iterator(dir))
        if (ent.is_regular_file() && !kind_of(ent.path()).empty()) out.push_back(ent.path());
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

std::vector<CacheEntry> cache_list(const fs::path& dir) {
    std::vector<CacheEntry> out;
    for (const auto& p : cache_files(dir)) {
        CacheEntry e;
        e.file = p.filename().string();
        e.kind = kind_of(p);
        e.bytes = fs::file_size(p);
        out.push_back(e);
    }
    return out;
}

std::vector<CacheEntry> cache_verify(const fs::path& dir) {
    std::vector<CacheEntry> out;
    for (const auto& p : cache_files(dir)) {
        CacheEntry e = check_file(p);
        if (!e.ok) {
            fs::path q = dir / "quarantine";
            fs::create_directories(q);
            fs::rename(p, q / p.filename());
            e.detail += " (quarantined)";
        }
        out.push_back(e);
    }
    return out;
}

std::size_t cache_purge(const fs::path& dir) {
    std::size_t n = 0;
    for (const auto& p : cache_files(dir)) {
        fs::remove(p);
        ++n;
    }
    return n;
}

}  // namespace hfl
