#include "tsch/manifest.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>

#include "tsch/errors.hpp"

namespace tsch {

using nlohmann::json;

std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::uint8_t b : bytes) {
        h ^= b;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string hash_bytes(std::span<const std::uint8_t> bytes) {
    return "fnv1a64:" + hex64(fnv1a64(bytes));
}

std::string hash_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for hashing: " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return hash_bytes(bytes);
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json to_json(const std::vector<ArtifactRef>& artifacts) {
    json arr = json::array();
    for (const ArtifactRef& a : artifacts) arr.push_back({{"path", a.path}, {"hash", a.hash}});
    return arr;
}

std::vector<std::string> verify_artifacts(const std::string& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in) throw IoError("cannot open manifest: " + manifest_path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw IoError("bad manifest JSON: " + std::string(e.what()));
    }
    const std::filesystem::path base = std::filesystem::path(manifest_path).parent_path();
    std::vector<std::string> stale;
    if (!j.contains("artifacts")) return stale;
    for (const json& a : j.at("artifacts")) {
        const std::string rel = a.at("path").get<std::string>();
        const std::string full = (base / rel).string();
        if (!std::filesystem::exists(full)) {
            stale.push_back(rel + " (missing)");
            continue;
        }
        if (hash_file(full) != a.at("hash").get<std::string>()) stale.push_back(rel + " (hash mismatch)");
    }
    return stale;
}

} // namespace tsch
