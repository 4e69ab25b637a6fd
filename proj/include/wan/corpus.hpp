#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "wan/errors.hpp"
#include "wan/unicode_norm.hpp"

namespace wan {

enum class Language { Chinese, English, Other };

inline Language language_from_string(const std::string& s) {
    if (s == "Chinese" || s == "chinese" || s == "zh") return Language::Chinese;
    if (s == "English" || s == "english" || s == "en") return Language::English;
    if (s == "Other" || s == "other") return Language::Other;
    throw ParseError("unknown language tag: " + s);
}

inline const char* to_string(Language lang) {
    switch (lang) {
        case Language::Chinese: return "Chinese";
        case Language::English: return "English";
        default: return "Other";
    }
}

struct TextDocument {
    std::string id;
    Language language = Language::Other;
    std::string raw;  // NFC-normalized text, LF line endings, no BOM
    std::string source_path;
    std::optional<std::string> collection;
};

struct ManifestEntry {
    std::string id;
    std::string path;
    Language language = Language::Other;
    std::optional<std::string> collection;
    bool pre_segmented = false;
};

struct Manifest {
    std::vector<ManifestEntry> entries;
};

inline std::string read_file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("read failure: " + path);
    return buf.str();
}

// Normalizes raw bytes: BOM strip, CRLF/CR -> LF, canonical composition.
inline std::string normalize_text(std::string_view bytes) {
    std::string_view body = bytes;
    if (body.size() >= 3 && static_cast<unsigned char>(body[0]) == 0xEF &&
        static_cast<unsigned char>(body[1]) == 0xBB &&
        static_cast<unsigned char>(body[2]) == 0xBF) {
        body.remove_prefix(3);
    }
    std::u32string cps = decode_utf8(body);
    std::u32string lf;
    lf.reserve(cps.size());
    for (size_t i = 0; i < cps.size(); ++i) {
        if (cps[i] == U'\r') {
            lf.push_back(U'\n');
            if (i + 1 < cps.size() && cps[i + 1] == U'\n') ++i;
        } else {
            lf.push_back(cps[i]);
        }
    }
    return encode_utf8(nfc(lf));
}

inline TextDocument load_document(const std::string& path, Language language,
                                  bool pre_segmented = false,
                                  const std::string& id = "",
                                  std::optional<std::string> collection = std::nullopt) {
    (void)pre_segmented;  // segmentation mode is consumed by the tokenizer
    TextDocument doc;
    doc.id = id.empty() ? std::filesystem::path(path).stem().string() : id;
    doc.language = language;
    doc.source_path = path;
    doc.collection = std::move(collection);
    doc.raw = normalize_text(read_file_bytes(path));
    if (doc.raw.empty()) throw ParseError("document is empty after normalization: " + path);
    return doc;
}

// Line-oriented JSON, one entry per line. Blank lines are skipped.
inline Manifest load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open manifest: " + path);
    const std::filesystem::path base = std::filesystem::path(path).parent_path();

    Manifest manifest;
    std::unordered_set<std::string> seen;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        nlohmann::json obj;
        try {
            obj = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
        if (!obj.is_object() || !obj.contains("id") || !obj.contains("path") ||
            !obj.contains("language")) {
            throw ParseError(path + ":" + std::to_string(lineno) +
                             ": entry needs id, path and language keys");
        }
        ManifestEntry entry;
        entry.id = obj.at("id").get<std::string>();
        entry.language = language_from_string(obj.at("language").get<std::string>());
        entry.pre_segmented = obj.value("pre_segmented", false);
        if (obj.contains("collection") && !obj.at("collection").is_null())
            entry.collection = obj.at("collection").get<std::string>();

        std::filesystem::path p = obj.at("path").get<std::string>();
        if (p.is_relative()) p = base / p;
        entry.path = p.string();

        if (!seen.insert(entry.id).second)
            throw DuplicateIdError("duplicate manifest id: " + entry.id);
        if (!std::filesystem::exists(entry.path))
            throw IoError("manifest references missing file: " + entry.path);
        std::ifstream probe(entry.path);
        if (!probe) throw IoError("manifest references unreadable file: " + entry.path);
        manifest.entries.push_back(std::move(entry));
    }
    return manifest;
}

inline TextDocument load_document(const ManifestEntry& entry) {
    return load_document(entry.path, entry.language, entry.pre_segmented, entry.id,
                         entry.collection);
}

} // namespace wan
