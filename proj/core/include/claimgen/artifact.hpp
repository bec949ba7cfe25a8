#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "claimgen/jsonl.hpp"

namespace claimgen::artifact {

// Write-then-rename so an interrupted run never leaves a half-written file.
void atomic_write(const std::filesystem::path& path, std::string_view content);

void write_jsonl(const std::filesystem::path& path, const std::vector<json>& rows);
void write_json(const std::filesystem::path& path, const json& j);

// Run manifest: command, tool version, creation time (the one field exempt
// from byte-identity), inputs, effective config, and output counts.
json make_manifest(const std::string& command,
                   const std::map<std::string, std::string>& inputs, const json& effective_config,
                   const std::map<std::string, std::int64_t>& counts, std::uint64_t seed);

json read_json(const std::filesystem::path& path);

} // namespace claimgen::artifact
