#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace tsch {

// FNV-1a 64-bit over raw bytes; the manifest integrity hash.
std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes);
std::string hex64(std::uint64_t v);
std::string hash_file(const std::string& path);            // "fnv1a64:<hex>"
std::string hash_bytes(std::span<const std::uint8_t> bytes);

std::string utc_timestamp(); // ISO-8601, manifests only (reports stay byte-stable)

// Artifact listing used by both the run manifest and the pipeline manifest.
struct ArtifactRef {
    std::string path; // relative to the manifest's directory
    std::string hash;
};

nlohmann::json to_json(const std::vector<ArtifactRef>& artifacts);

// Recompute every artifact hash against the manifest; returns the paths that
// are missing or changed.
std::vector<std::string> verify_artifacts(const std::string& manifest_path);

} // namespace tsch
