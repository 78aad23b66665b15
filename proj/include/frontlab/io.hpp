#pragma once

// Output plumbing: 17-significant-digit CSV, atomic file writes, canonical
// config hashing, and run manifests.
//
// Result files (CSV, JSON summaries) are deterministic functions of
// (config, seed).  Wall-clock time lives only in the sidecar manifest, so
// reruns stay byte-identical.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "frontlab/errors.hpp"

namespace frontlab {

using json = nlohmann::json;

/// Shortest-round-trip-safe rendering of a double (17 significant digits).
inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// FNV-1a 64-bit over a byte string; stable across platforms and runs.
inline std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001B3ull;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

/// Canonical hash of a config object: nlohmann::json orders keys, so
/// dump() is a canonical form.
inline std::string config_hash(const json& config) { return hex64(fnv1a64(config.dump())); }

/// Writes content to path via temp file + rename.
inline void atomic_write(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    if (path.has_parent_path() && !path.parent_path().empty())
        fs::create_directories(path.parent_path());
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open " + tmp.string() + " for writing");
        out << content;
        if (!out.flush()) throw Error("write failed for " + tmp.string());
    }
    fs::rename(tmp, path);
}

/// Incremental CSV builder with a fixed header row.
class CsvBuilder {
public:
    explicit CsvBuilder(const std::vector<std::string>& header) {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (i) os_ << ',';
            os_ << header[i];
        }
        os_ << '\n';
        columns_ = header.size();
    }

    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) os_ << ',';
            os_ << cells[i];
        }
        os_ << '\n';
    }

    std::string str() const { return os_.str(); }
    std::size_t columns() const { return columns_; }

private:
    std::ostringstream os_;
    std::size_t columns_ = 0;
};

/// Minimal CSV reader: header row + numeric cells (as written by frontlab).
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return static_cast<int>(i);
        return -1;
    }
};

inline CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    CsvTable table;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::string cur;
        for (char c : line) {
            if (c == ',') {
                cells.push_back(cur);
                cur.clear();
            } else if (c != '\r') {
                cur.push_back(c);
            }
        }
        cells.push_back(cur);
        if (first) {
            table.header = cells;
            first = false;
        } else {
            table.rows.push_back(cells);
        }
    }
    return table;
}

#ifndef FRONTLAB_VERSION
#define FRONTLAB_VERSION "0.1.0"
#endif
#ifndef FRONTLAB_GIT_DESCRIBE
#define FRONTLAB_GIT_DESCRIBE "unknown"
#endif

/// Sidecar manifest for an output set; the only place wall time appears.
inline json make_manifest(const json& config, std::uint64_t seed, double wall_seconds) {
    json m;
    m["config"] = config;
    m["config_hash"] = config_hash(config);
    m["seed"] = seed;
    m["version"] = FRONTLAB_VERSION;
    m["git_describe"] = FRONTLAB_GIT_DESCRIBE;
    m["wall_time_seconds"] = wall_seconds;
    return m;
}

}  // namespace frontlab
