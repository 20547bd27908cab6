#pragma once

#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "clique/errors.hpp"

namespace clique {

/// Ordered key=value text file, one pair per line; '#' starts a comment.
using KvPairs = std::vector<std::pair<std::string, std::string>>;

inline void write_kv(const std::string& path, const KvPairs& pairs) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open '" + path + "' for writing");
    for (const auto& [key, value] : pairs) file << key << '=' << value << '\n';
    if (!file) throw std::runtime_error("write failed for '" + path + "'");
}

inline KvPairs read_kv(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw ValidationError("cannot open file '" + path + "'");
    KvPairs pairs;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(file, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ValidationError(path + ":" + std::to_string(line_no) + ": expected key=value");
        pairs.emplace_back(line.substr(0, eq), line.substr(eq + 1));
    }
    return pairs;
}

inline const std::string* kv_find(const KvPairs& pairs, const std::string& key) {
    for (const auto& [k, v] : pairs)
        if (k == key) return &v;
    return nullptr;
}

inline std::string kv_get(const KvPairs& pairs, const std::string& key) {
    const std::string* v = kv_find(pairs, key);
    if (!v) throw ValidationError("missing key '" + key + "'");
    return *v;
}

} // namespace clique
