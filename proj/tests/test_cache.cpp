#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <thread>

#include "pptcert/cache.hpp"
#include "pptcert/error.hpp"
#include "pptcert/models.hpp"

using namespace pptcert;

namespace {

struct TempDir {
    std::filesystem::path path;
    explicit TempDir(const std::string& name) : path(std::filesystem::temp_directory_path() / name)
    {
        std::filesystem::remove_all(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

bool same_bits(const SpectralDecomposition& x, const SpectralDecomposition& y)
{
    return x.eigenvalues.size() == y.eigenvalues.size()
           && std::memcmp(x.eigenvalues.data(), y.eigenvalues.data(), x.eigenvalues.size() * sizeof(double)) == 0
           && std::memcmp(x.eigenvectors.data(), y.eigenvectors.data(), x.eigenvectors.size() * sizeof(Complex)) == 0;
}

} // namespace

TEST_CASE("FNV-1a reference values")
{
    CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
    CHECK(fnv1a64("foobar") == 0x85944171f73967e8ull);
}

TEST_CASE("cache hit is bit-identical to recomputation")
{
    TempDir dir("pptcert_cache_test");
    const ModelSpec spec = OscillatorStarCutoff{1.0, {0.8}, {0.05}, 2.0, 3};
    const BuiltModel m = build(spec);
    const std::string key = "H|" + canonical_key(spec);

    DecompositionCache cache(dir.path, true);
    const SpectralDecomposition first = cache.get_or_compute(key, m.hamiltonian());
    CHECK(cache.stats().misses == 1);
    CHECK(cache.stats().writes == 1);
    CHECK(std::filesystem::exists(cache.path_for(key)));

    DecompositionCache reopened(dir.path, true);
    const SpectralDecomposition second = reopened.get_or_compute(key, m.hamiltonian());
    CHECK(reopened.stats().hits == 1);
    CHECK(reopened.stats().audits == 1);
    CHECK(same_bits(first, second));
    CHECK(same_bits(second, decompose(m.hamiltonian())));
}

TEST_CASE("audit detects a tampered entry")
{
    TempDir dir("pptcert_cache_tamper");
    const BuiltModel m = build(TwoQubitXX{1.0, 0.5, 0.3});
    DecompositionCache cache(dir.path, false);
    cache.get_or_compute("k", m.hamiltonian());
    {
        std::fstream f(cache.path_for("k"), std::ios::in | std::ios::out | std::ios::binary);
        f.seekp(-3, std::ios::end);
        f.put('\x7f');
    }
    DecompositionCache trusting(dir.path, false);
    CHECK_NOTHROW(trusting.get_or_compute("k", m.hamiltonian()));
    DecompositionCache auditing(dir.path, true);
    CHECK_THROWS_AS(auditing.get_or_compute("k", m.hamiltonian()), NumericalError);
}

TEST_CASE("mismatched or corrupt entries are misses")
{
    TempDir dir("pptcert_cache_corrupt");
    const BuiltModel m = build(TwoQubitXX{1.0, 0.5, 0.3});
    DecompositionCache cache(dir.path, false);
    {
        std::ofstream f(cache.path_for("k"), std::ios::binary);
        f << "garbage";
    }
    const SpectralDecomposition d = cache.get_or_compute("k", m.hamiltonian());
    CHECK(cache.stats().misses == 1);
    CHECK(same_bits(d, decompose(m.hamiltonian())));
    // a different key never reads another key's file, even with a colliding name
    const auto other = cache.get_or_compute("k2", m.h0);
    CHECK(other.eigenvalues(0) == doctest::Approx(-0.75));
}

TEST_CASE("concurrent writers of one key")
{
    TempDir dir("pptcert_cache_concurrent");
    const BuiltModel m = build(JaynesCummingsCutoff{0.2, 1.0, 0.05, 6.0, 8});
    DecompositionCache cache(dir.path, true);
    std::vector<SpectralDecomposition> out(4);
    {
        std::vector<std::jthread> pool;
        for (int t = 0; t < 4; ++t) {
            pool.emplace_back([&, t] { out[static_cast<std::size_t>(t)] = cache.get_or_compute("jc", m.hamiltonian()); });
        }
    }
    for (const auto& d : out) {
        CHECK(same_bits(d, out[0]));
    }
    std::size_t files = 0;
    for (const auto& e : std::filesystem::directory_iterator(dir.path)) {
        (void)e;
        ++files;
    }
    CHECK(files == 1);
}

TEST_CASE("cache directory precedence")
{
    ::setenv("PPTCERT_CACHE_DIR", "/from/env", 1);
    CHECK(resolve_cache_dir("/from/cli", "/from/config") == "/from/cli");
    CHECK(resolve_cache_dir("", "/from/config") == "/from/env");
    ::unsetenv("PPTCERT_CACHE_DIR");
    CHECK(resolve_cache_dir("", "/from/config") == "/from/config");
    CHECK(resolve_cache_dir("", "").empty());
    DecompositionCache disabled;
    CHECK_FALSE(disabled.enabled());
}
