#pragma once

// On-disk cache of sector spectra. One JSON document per sector, named by the
// SHA-256 of a canonical (n, L, omega, alpha) string. The eigenvalues do not
// depend on beta, so one cache serves every temperature scan.

#include "symtherm/curie_weiss.hpp"
#include "symtherm/error.hpp"
#include "symtherm/format.hpp"

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include <array>
#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

namespace symtherm {

inline constexpr int kCacheFormatVersion = 1;

inline std::string sha256_hex(const std::string& text) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    if (EVP_Digest(text.data(), text.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1)
        throw Error("SHA-256 digest failed");
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xf];
    }
    return out;
}

/// Canonical key string for a sector.
inline std::string sector_key(int n, int two_l, double omega, double alpha) {
    std::ostringstream os;
    os << "symtherm-sector/v" << kCacheFormatVersion << "|n=" << n << "|two_l=" << two_l
       << "|omega=" << format_double(omega) << "|alpha=" << format_double(alpha);
    return os.str();
}

/// Directory from SYMTHERM_CACHE_DIR, else ./.symtherm-cache.
inline std::filesystem::path default_cache_dir() {
    if (const char* env = std::getenv("SYMTHERM_CACHE_DIR"); env && *env) return env;
    return ".symtherm-cache";
}

struct CacheSummary {
    std::size_t records = 0;
    std::size_t invalid = 0;
    std::uintmax_t bytes = 0;
};

class SectorCache final : public SpectraStore {
public:
    explicit SectorCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

    const std::filesystem::path& directory() const noexcept { return dir_; }

    std::filesystem::path record_path(int n, int two_l, double omega, double alpha) const {
        return dir_ / (sha256_hex(sector_key(n, two_l, omega, alpha)) + ".json");
    }

    std::optional<std::vector<double>> load(int n, int two_l, double omega, double alpha) override {
        const auto path = record_path(n, two_l, omega, alpha);
        std::ifstream in(path);
        if (!in) return std::nullopt;
        try {
            const auto doc = nlohmann::json::parse(in);
            if (doc.at("version").get<int>() != kCacheFormatVersion) return std::nullopt;
            if (doc.at("key").get<std::string>() != sector_key(n, two_l, omega, alpha)) return std::nullopt;
            auto eig = doc.at("eigenvalues").get<std::vector<double>>();
            if (eig.size() != static_cast<std::size_t>(two_l) + 1) return std::nullopt;
            return eig;
        } catch (const nlohmann::json::exception&) {
            return std::nullopt;
        }
    }

    void save(int n, int two_l, double omega, double alpha, std::span<const double> eigenvalues) override {
        std::error_code ec;
        std::filesystem::create_directories(dir_, ec);
        if (ec) throw IoError("cannot create cache directory " + dir_.string() + ": " + ec.message());

        nlohmann::json doc;
        doc["version"] = kCacheFormatVersion;
        doc["key"] = sector_key(n, two_l, omega, alpha);
        doc["n"] = n;
        doc["L"] = two_l / 2.0;
        doc["omega"] = omega;
        doc["alpha"] = alpha;
        doc["eigenvalues"] = std::vector<double>(eigenvalues.begin(), eigenvalues.end());

        // write-then-rename: concurrent writers of one key produce identical bytes
        const auto path = record_path(n, two_l, omega, alpha);
        const auto tmp = path.string() + ".tmp" + std::to_string(temp_suffix());
        {
            std::ofstream out(tmp, std::ios::trunc);
            out << doc.dump();
            if (!out) throw IoError("cannot write cache record " + tmp);
        }
        std::filesystem::rename(tmp, path, ec);
        if (ec) {
            std::filesystem::remove(tmp, ec);
            throw IoError("cannot write cache record " + path.string());
        }
    }

    CacheSummary inspect() const {
        CacheSummary s;
        std::error_code ec;
        if (!std::filesystem::is_directory(dir_, ec)) return s;
        for (const auto& entry : std::filesystem::directory_iterator(dir_)) {
            if (entry.path().extension() != ".json") continue;
            s.bytes += entry.file_size();
            std::ifstream in(entry.path());
            try {
                const auto doc = nlohmann::json::parse(in);
                if (doc.at("version").get<int>() == kCacheFormatVersion)
                    ++s.records;
                else
                    ++s.invalid;
            } catch (const nlohmann::json::exception&) {
                ++s.invalid;
            }
        }
        return s;
    }

    /// Removes every record; returns how many files were deleted.
    std::size_t clear() {
        std::size_t removed = 0;
        std::error_code ec;
        if (!std::filesystem::is_directory(dir_, ec)) return 0;
        for (const auto& entry : std::filesystem::directory_iterator(dir_)) {
            const auto ext = entry.path().extension().string();
            if (ext == ".json" || entry.path().string().find(".json.tmp") != std::string::npos) {
                std::filesystem::remove(entry.path(), ec);
                if (!ec) ++removed;
            }
        }
        return removed;
    }

private:
    static std::uint64_t temp_suffix() {
        thread_local std::mt19937_64 rng{std::random_device{}()};
        return rng();
    }

    std::filesystem::path dir_;
};

} // namespace symtherm
