#ifndef METEX_STORE_HPP
#define METEX_STORE_HPP

#include <cctype>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>
#include <sqlite3.h>

#include "metex/core.hpp"

// Index of MetadataRecords keyed by document name, with XML, JSON and
// embedded-table (SQLite) persistence and a linear-crawl substring search.
// The canonical persisted content is doc_id plus the six fields with their
// statuses; indexing timestamps and source paths are operational metadata.

namespace metex {

struct StorageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IndexEntry {
    std::string doc_id;
    MetadataRecord record;
    std::int64_t indexed_at = 0; // UTC epoch seconds
    std::string source_path;
};

class MetadataStore {
public:
    void put(IndexEntry entry) {
        if (entry.doc_id.empty()) throw StorageError("put: empty doc_id");
        entry.record.doc_id = entry.doc_id;
        entries_[entry.doc_id] = std::move(entry); // last write wins
    }

    const IndexEntry* get(const std::string& doc_id) const {
        auto it = entries_.find(doc_id);
        return it == entries_.end() ? nullptr : &it->second;
    }

    std::size_t size() const { return entries_.size(); }
    const std::map<std::string, IndexEntry>& entries() const { return entries_; }

    // Canonical-content equality: id plus the six fields.
    bool same_records(const MetadataStore& other) const {
        if (entries_.size() != other.entries_.size()) return false;
        for (const auto& [id, e] : entries_) {
            const IndexEntry* o = other.get(id);
            if (!o || !(o->record == e.record)) return false;
        }
        return true;
    }

private:
    std::map<std::string, IndexEntry> entries_; // sorted by doc_id
};

namespace detail {

inline std::string xml_escape(std::string_view s, bool attribute = false) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': if (attribute) { out += "&quot;"; break; } [[fallthrough]];
            default: out.push_back(c);
        }
    }
    return out;
}

inline std::string xml_unescape(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '&') { out.push_back(s[i]); continue; }
        auto rest = s.substr(i);
        if (rest.starts_with("&amp;")) { out.push_back('&'); i += 4; }
        else if (rest.starts_with("&lt;")) { out.push_back('<'); i += 3; }
        else if (rest.starts_with("&gt;")) { out.push_back('>'); i += 3; }
        else if (rest.starts_with("&quot;")) { out.push_back('"'); i += 5; }
        else if (rest.starts_with("&apos;")) { out.push_back('\''); i += 5; }
        else out.push_back(s[i]);
    }
    return out;
}

} // namespace detail

// ---------------------------------------------------------------------------
// XML: <articles><article id="..."><title status="...">...</title>...</article></articles>

inline std::string store_to_xml(const MetadataStore& store) {
    std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<articles>\n";
    for (const auto& [id, e] : store.entries()) {
        out += "  <article id=\"" + detail::xml_escape(id, true) + "\">\n";
        for (Field f : kAllFields) {
            const FieldValue& v = e.record.field(f);
            out += "    <";
            out += to_string(f);
            out += " status=\"";
            out += to_string(v.status);
            out += "\">";
            out += detail::xml_escape(v.value);
            out += "</";
            out += to_string(f);
            out += ">\n";
        }
        out += "  </article>\n";
    }
    out += "</articles>\n";
    return out;
}

inline void export_xml(const MetadataStore& store, const std::filesystem::path& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw StorageError("cannot open for writing: " + path.string());
    f << store_to_xml(store);
    if (!f) throw StorageError("write failed: " + path.string());
}

// Parser for exactly the schema store_to_xml emits.
inline MetadataStore store_from_xml(const std::string& xml) {
    MetadataStore store;
    std::size_t pos = 0;
    auto fail = [](const std::string& what) {
        return StorageError("malformed store XML: " + what);
    };
    while (true) {
        std::size_t a = xml.find("<article ", pos);
        if (a == std::string::npos) break;
        std::size_t id_at = xml.find("id=\"", a);
        if (id_at == std::string::npos) throw fail("article without id");
        id_at += 4;
        std::size_t id_end = xml.find('"', id_at);
        if (id_end == std::string::npos) throw fail("unterminated id attribute");
        IndexEntry entry;
        entry.doc_id = detail::xml_unescape(xml.substr(id_at, id_end - id_at));
        entry.record.doc_id = entry.doc_id;

        std::size_t article_end = xml.find("</article>", id_end);
        if (article_end == std::string::npos) throw fail("unterminated article");

        for (Field f : kAllFields) {
            std::string tag(to_string(f));
            std::size_t open = xml.find("<" + tag + " status=\"", id_end);
            if (open == std::string::npos || open > article_end)
                throw fail("missing <" + tag + "> element");
            std::size_t st = open + tag.size() + 10;
            std::size_t st_end = xml.find('"', st);
            std::size_t body = xml.find('>', st_end) + 1;
            std::size_t close = xml.find("</" + tag + ">", body);
            if (st_end == std::string::npos || close == std::string::npos || close > article_end)
                throw fail("malformed <" + tag + "> element");
            FieldValue& v = entry.record.field(f);
            auto status = field_status_from_string(xml.substr(st, st_end - st));
            if (!status) throw fail("bad status on <" + tag + ">");
            v.status = *status;
            v.value = detail::xml_unescape(xml.substr(body, close - body));
        }
        store.put(std::move(entry));
        pos = article_end + 10;
    }
    if (xml.find("<articles>") == std::string::npos) throw fail("missing <articles> root");
    return store;
}

inline MetadataStore import_xml(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw StorageError("cannot open: " + path.string());
    std::ostringstream ss;
    ss << f.rdbuf();
    return store_from_xml(ss.str());
}

// ---------------------------------------------------------------------------
// JSON: array of { "id", "<field>": {"value","status"} x6 }, key order fixed.

inline std::string store_to_json(const MetadataStore& store) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& [id, e] : store.entries()) {
        nlohmann::ordered_json obj;
        obj["id"] = id;
        for (Field f : kAllFields) {
            const FieldValue& v = e.record.field(f);
            obj[std::string(to_string(f))] = {{"value", v.value},
                                              {"status", std::string(to_string(v.status))}};
        }
        arr.push_back(std::move(obj));
    }
    return arr.dump(2) + "\n";
}

inline void export_json(const MetadataStore& store, const std::filesystem::path& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw StorageError("cannot open for writing: " + path.string());
    f << store_to_json(store);
    if (!f) throw StorageError("write failed: " + path.string());
}

inline MetadataStore store_from_json(const std::string& text) {
    MetadataStore store;
    nlohmann::json arr;
    try {
        arr = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw StorageError(std::string("malformed store JSON: ") + e.what());
    }
    if (!arr.is_array()) throw StorageError("malformed store JSON: root must be an array");
    for (const auto& obj : arr) {
        IndexEntry entry;
        entry.doc_id = obj.at("id").get<std::string>();
        entry.record.doc_id = entry.doc_id;
        for (Field f : kAllFields) {
            const auto& fv = obj.at(std::string(to_string(f)));
            FieldValue& v = entry.record.field(f);
            v.value = fv.at("value").get<std::string>();
            auto status = field_status_from_string(fv.at("status").get<std::string>());
            if (!status) throw StorageError("malformed store JSON: bad status");
            v.status = *status;
        }
        store.put(std::move(entry));
    }
    return store;
}

inline MetadataStore import_json(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw StorageError("cannot open: " + path.string());
    std::ostringstream ss;
    ss << f.rdbuf();
    return store_from_json(ss.str());
}

// ---------------------------------------------------------------------------
// Embedded table: one SQLite table, columns doc_id + six value/status pairs
// + indexed_at + source_path.

inline void export_db(const MetadataStore& store, const std::filesystem::path& path) {
    std::error_code ec;
    std::filesystem::remove(path, ec); // rewrite wholesale

    sqlite3* db = nullptr;
    if (sqlite3_open(path.string().c_str(), &db) != SQLITE_OK) {
        std::string msg = db ? sqlite3_errmsg(db) : "open failed";
        sqlite3_close(db);
        throw StorageError("sqlite open: " + msg);
    }
    auto exec = [&](const char* sql) {
        char* err = nullptr;
        if (sqlite3_exec(db, sql, nullptr, nullptr, &err) != SQLITE_OK) {
            std::string msg = err ? err : "exec failed";
            sqlite3_free(err);
            sqlite3_close(db);
            throw StorageError("sqlite: " + msg);
        }
    };
    exec("CREATE TABLE articles ("
         "doc_id TEXT PRIMARY KEY,"
         "title TEXT, title_status TEXT,"
         "abstract TEXT, abstract_status TEXT,"
         "keywords TEXT, keywords_status TEXT,"
         "body_text TEXT, body_text_status TEXT,"
         "conclusions TEXT, conclusions_status TEXT,"
         "refs TEXT, refs_status TEXT,"
         "indexed_at INTEGER, source_path TEXT)");
    exec("BEGIN");
    sqlite3_stmt* stmt = nullptr;
    const char* sql = "INSERT INTO articles VALUES (?,?,?,?,?,?,?,?,?,?,?,?,?,?,?)";
    if (sqlite3_prepare_v2(db, sql, -1, &stmt, nullptr) != SQLITE_OK) {
        std::string msg = sqlite3_errmsg(db);
        sqlite3_close(db);
        throw StorageError("sqlite prepare: " + msg);
    }
    for (const auto& [id, e] : store.entries()) {
        int col = 1;
        sqlite3_bind_text(stmt, col++, id.c_str(), -1, SQLITE_TRANSIENT);
        for (Field f : kAllFields) {
            const FieldValue& v = e.record.field(f);
            sqlite3_bind_text(stmt, col++, v.value.c_str(), -1, SQLITE_TRANSIENT);
            sqlite3_bind_text(stmt, col++, std::string(to_string(v.status)).c_str(), -1,
                              SQLITE_TRANSIENT);
        }
        sqlite3_bind_int64(stmt, col++, e.indexed_at);
        sqlite3_bind_text(stmt, col++, e.source_path.c_str(), -1, SQLITE_TRANSIENT);
        if (sqlite3_step(stmt) != SQLITE_DONE) {
            std::string msg = sqlite3_errmsg(db);
            sqlite3_finalize(stmt);
            sqlite3_close(db);
            throw StorageError("sqlite insert: " + msg);
        }
        sqlite3_reset(stmt);
    }
    sqlite3_finalize(stmt);
    exec("COMMIT");
    sqlite3_close(db);
}

// ---------------------------------------------------------------------------
// Search: case-insensitive substring crawl over normalized field values.

struct SearchResult {
    std::string doc_id;
    Field field = Field::Title;
    std::string snippet; // 80 chars centered on the first match

    bool operator==(const SearchResult&) const = default;
};

namespace detail {

inline std::string snippet_around(const std::string& text, std::size_t at,
                                  std::size_t query_len, std::size_t width = 80) {
    if (text.size() <= width) return text;
    std::size_t center = at + query_len / 2;
    std::size_t start = center > width / 2 ? center - width / 2 : 0;
    if (start + width > text.size()) start = text.size() - width;
    return text.substr(start, width);
}

} // namespace detail

inline std::vector<SearchResult> search(const MetadataStore& store, const std::string& query,
                                        const std::vector<Field>& fields = {
                                            kAllFields, kAllFields + 6}) {
    std::vector<SearchResult> out;
    if (query.empty()) return out; // empty query is rejected, not match-all
    std::string q = detail::ascii_lower(normalize_text(query));
    if (q.empty()) return out;
    for (const auto& [id, e] : store.entries()) {
        for (Field f : kAllFields) {
            if (std::find(fields.begin(), fields.end(), f) == fields.end()) continue;
            const std::string& value = e.record.field(f).value;
            std::size_t at = detail::ascii_lower(value).find(q);
            if (at == std::string::npos) continue;
            out.push_back({id, f, detail::snippet_around(value, at, q.size())});
        }
    }
    return out; // entries() is doc_id sorted, kAllFields fixes field order
}

} // namespace metex

#endif // METEX_STORE_HPP
