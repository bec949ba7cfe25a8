#include "claimgen/artifact.hpp"

#include <chrono>
#include <ctime>
#include <fstream>

#include "claimgen/version.hpp"

namespace claimgen::artifact {

void atomic_write(const std::filesystem::path& path, std::string_view content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw Error("cannot write file: " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw Error("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

void write_jsonl(const std::filesystem::path& path, const std::vector<json>& rows) {
    atomic_write(path, jsonl::render(rows));
}

void write_json(const std::filesystem::path& path, const json& j) {
    atomic_write(path, j.dump(2) + "\n");
}

namespace {

std::string utc_now() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

} // namespace

json make_manifest(const std::string& command,
                   const std::map<std::string, std::string>& inputs, const json& effective_config,
                   const std::map<std::string, std::int64_t>& counts, std::uint64_t seed) {
    return json{{"command", command},
                {"tool_version", std::string(kVersion)},
                {"created_at", utc_now()},
                {"inputs", inputs},
                {"config", effective_config},
                {"counts", counts},
                {"seed", seed}};
}

json read_json(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open file: " + path.string());
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) throw ParseError("malformed JSON file: " + path.string());
    return j;
}

} // namespace claimgen::artifact
