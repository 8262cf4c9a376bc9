#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <mutex>
#include <string>
#include <string_view>

#include "pptcert/operator.hpp"

namespace pptcert {

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);

/// On-disk store of spectral decompositions keyed by a content string.
///
/// Files are named by the FNV-1a hash of the key and carry the key itself, so
/// hash collisions are detected and treated as misses. Writes go to a unique
/// temporary file that is renamed into place; concurrent writers of the same
/// key produce identical bytes, so the last rename wins harmlessly.
/// An empty directory disables persistence.
class DecompositionCache {
public:
    struct Stats {
        std::size_t hits = 0;
        std::size_t misses = 0;
        std::size_t writes = 0;
        std::size_t audits = 0;
    };

    DecompositionCache() = default;
    DecompositionCache(std::filesystem::path dir, bool audit);

    bool enabled() const { return !dir_.empty(); }
    const std::filesystem::path& dir() const { return dir_; }

    /// Cached decomposition of `op` under `key`, computing and storing it on a miss.
    /// With auditing on, every hit is recomputed and must match bit for bit
    /// (NumericalError otherwise).
    SpectralDecomposition get_or_compute(const std::string& key, const HermitianOperator& op);

    std::filesystem::path path_for(const std::string& key) const;
    Stats stats() const;

private:
    std::filesystem::path dir_;
    bool audit_ = false;
    mutable std::mutex mutex_;
    Stats stats_;
};

/// Cache directory by precedence: command line, PPTCERT_CACHE_DIR, config file.
std::string resolve_cache_dir(const std::string& cli_value, const std::string& config_value);

} // namespace pptcert
