#include "pptcert/cache.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <optional>
#include <sstream>
#include <thread>

#include "pptcert/error.hpp"

namespace pptcert {

namespace {

constexpr char kMagic[8] = {'P', 'P', 'T', 'C', 'E', 'I', 'G', '1'};

template <class T>
void put(std::ostream& out, const T& value)
{
    out.write(reinterpret_cast<const char*>(&value), sizeof value);
}

template <class T>
bool get(std::istream& in, T& value)
{
    return static_cast<bool>(in.read(reinterpret_cast<char*>(&value), sizeof value));
}

std::optional<SpectralDecomposition> load(const std::filesystem::path& path, const std::string& key)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        return std::nullopt;
    }
    char magic[8];
    if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof magic) != 0) {
        return std::nullopt;
    }
    std::uint64_t key_size = 0;
    if (!get(in, key_size) || key_size != key.size()) {
        return std::nullopt;
    }
    std::string stored(key_size, '\0');
    if (!in.read(stored.data(), static_cast<std::streamsize>(key_size)) || stored != key) {
        return std::nullopt;
    }
    std::uint64_t dim = 0;
    if (!get(in, dim) || dim == 0 || dim > (1u << 16)) {
        return std::nullopt;
    }
    const auto n = static_cast<Eigen::Index>(dim);
    SpectralDecomposition out;
    out.eigenvalues.resize(n);
    out.eigenvectors.resize(n, n);
    if (!in.read(reinterpret_cast<char*>(out.eigenvalues.data()), static_cast<std::streamsize>(n * sizeof(double)))) {
        return std::nullopt;
    }
    if (!in.read(reinterpret_cast<char*>(out.eigenvectors.data()),
                 static_cast<std::streamsize>(n * n * sizeof(Complex)))) {
        return std::nullopt;
    }
    return out;
}

void store(const std::filesystem::path& path, const std::string& key, const SpectralDecomposition& d)
{
    static std::atomic<std::uint64_t> counter{0};
    std::ostringstream suffix;
    suffix << ".tmp." << std::hash<std::thread::id>{}(std::this_thread::get_id()) << '.' << counter++;
    const std::filesystem::path tmp = path.string() + suffix.str();
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw NumericalError("cache: cannot write " + tmp.string());
        }
        out.write(kMagic, sizeof kMagic);
        put(out, static_cast<std::uint64_t>(key.size()));
        out.write(key.data(), static_cast<std::streamsize>(key.size()));
        const auto n = d.eigenvalues.size();
        put(out, static_cast<std::uint64_t>(n));
        out.write(reinterpret_cast<const char*>(d.eigenvalues.data()), static_cast<std::streamsize>(n * sizeof(double)));
        out.write(reinterpret_cast<const char*>(d.eigenvectors.data()),
                  static_cast<std::streamsize>(n * n * sizeof(Complex)));
        if (!out) {
            throw NumericalError("cache: write failed for " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw NumericalError("cache: cannot move entry into place at " + path.string());
    }
}

bool bit_identical(const SpectralDecomposition& x, const SpectralDecomposition& y)
{
    if (x.eigenvalues.size() != y.eigenvalues.size() || x.eigenvectors.size() != y.eigenvectors.size()) {
        return false;
    }
    return std::memcmp(x.eigenvalues.data(), y.eigenvalues.data(), x.eigenvalues.size() * sizeof(double)) == 0
           && std::memcmp(x.eigenvectors.data(), y.eigenvectors.data(), x.eigenvectors.size() * sizeof(Complex)) == 0;
}

} // namespace

std::uint64_t fnv1a64(std::string_view bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

DecompositionCache::DecompositionCache(std::filesystem::path dir, bool audit) : dir_(std::move(dir)), audit_(audit)
{
    if (dir_.empty()) {
        return;
    }
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec || !std::filesystem::is_directory(dir_)) {
        throw InputError("cache directory '" + dir_.string() + "' cannot be created: " + ec.message());
    }
}

std::filesystem::path DecompositionCache::path_for(const std::string& key) const
{
    char name[32];
    std::snprintf(name, sizeof name, "%016llx.eig", static_cast<unsigned long long>(fnv1a64(key)));
    return dir_ / name;
}

DecompositionCache::Stats DecompositionCache::stats() const
{
    std::lock_guard lock(mutex_);
    return stats_;
}

SpectralDecomposition DecompositionCache::get_or_compute(const std::string& key, const HermitianOperator& op)
{
    if (!enabled()) {
        std::lock_guard lock(mutex_);
        ++stats_.misses;
        return decompose(op);
    }
    const std::filesystem::path path = path_for(key);
    if (auto cached = load(path, key); cached && static_cast<std::size_t>(cached->eigenvalues.size()) == op.dim()) {
        if (audit_) {
            const SpectralDecomposition fresh = decompose(op);
            if (!bit_identical(*cached, fresh)) {
                throw NumericalError("cache audit: entry " + path.string() + " differs from recomputation");
            }
        }
        std::lock_guard lock(mutex_);
        ++stats_.hits;
        if (audit_) {
            ++stats_.audits;
        }
        return *std::move(cached);
    }
    SpectralDecomposition fresh = decompose(op);
    store(path, key, fresh);
    std::lock_guard lock(mutex_);
    ++stats_.misses;
    ++stats_.writes;
    return fresh;
}

std::string resolve_cache_dir(const std::string& cli_value, const std::string& config_value)
{
    if (!cli_value.empty()) {
        return cli_value;
    }
    if (const char* env = std::getenv("PPTCERT_CACHE_DIR"); env && *env) {
        return env;
    }
    return config_value;
}

} // namespace pptcert
