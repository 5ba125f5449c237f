#ifndef METEX_PIPELINE_HPP
#define METEX_PIPELINE_HPP

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "metex/classifier.hpp"
#include "metex/core.hpp"
#include "metex/extractor.hpp"
#include "metex/ingest.hpp"
#include "metex/pdf.hpp"
#include "metex/store.hpp"

// Batch driver: ingest -> classify -> extract -> store, parallel across
// documents with output deterministic in doc_id order.

namespace metex {

struct Config {
    MarkerConfig markers = default_marker_config();
    bool strict_title = true;
    PageSelection pages;
    DecisionRule classifier_rule;
    double eval_jaccard_threshold = 0.95;
    int workers = 0; // 0 = hardware concurrency
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::vector<std::string> split_on(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

inline std::string strip(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && is_space_byte(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && is_space_byte(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

} // namespace detail

// Key-value config file: `key = value` lines, `#` comments, marker lists
// separated by `|`. Unknown keys are an error.
inline Config load_config(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config: " + path.string());
    Config cfg;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(f, line)) {
        ++line_no;
        std::string s = detail::strip(line);
        if (s.empty() || s[0] == '#') continue;
        std::size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path.string() + ":" + std::to_string(line_no) +
                              ": expected key = value");
        std::string key = detail::strip(s.substr(0, eq));
        std::string value = detail::strip(s.substr(eq + 1));

        auto markers = [&]() {
            std::vector<std::string> out;
            for (const auto& m : detail::split_on(value, '|')) {
                std::string t = detail::strip(m);
                if (!t.empty()) out.push_back(t);
            }
            if (out.empty())
                throw ConfigError(path.string() + ":" + std::to_string(line_no) +
                                  ": empty marker list");
            return out;
        };
        auto boolean = [&]() {
            if (value == "true" || value == "1") return true;
            if (value == "false" || value == "0") return false;
            throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": expected bool");
        };

        if (key == "abstract_markers") cfg.markers.abstract_markers = markers();
        else if (key == "keywords_markers") cfg.markers.keywords_markers = markers();
        else if (key == "intro_markers") cfg.markers.intro_markers = markers();
        else if (key == "conclusion_markers") cfg.markers.conclusion_markers = markers();
        else if (key == "reference_markers") cfg.markers.reference_markers = markers();
        else if (key == "acknowledgment_markers") cfg.markers.acknowledgment_markers = markers();
        else if (key == "strict_title") cfg.strict_title = boolean();
        else if (key == "short_tail_pages") cfg.pages.short_tail_pages = std::stoi(value);
        else if (key == "long_tail_pages") cfg.pages.long_tail_pages = std::stoi(value);
        else if (key == "page_threshold") cfg.pages.page_threshold = std::stoi(value);
        else if (key == "classifier_rule") {
            if (value == "default") cfg.classifier_rule.kind = DecisionRule::Kind::Default;
            else if (value == "all_five") cfg.classifier_rule.kind = DecisionRule::Kind::AllFive;
            else if (value == "k_of_five") cfg.classifier_rule.kind = DecisionRule::Kind::KOfFive;
            else throw ConfigError(path.string() + ":" + std::to_string(line_no) +
                                   ": unknown classifier_rule");
        }
        else if (key == "classifier_k") cfg.classifier_rule.k = std::stoi(value);
        else if (key == "eval_jaccard_threshold") cfg.eval_jaccard_threshold = std::stod(value);
        else if (key == "workers") cfg.workers = std::stoi(value);
        else throw ConfigError(path.string() + ":" + std::to_string(line_no) +
                               ": unknown key '" + key + "'");
    }
    return cfg;
}

struct OutputFormats {
    bool xml = true;
    bool json = true;
    bool db = true;
};

struct ReviewEntry {
    std::string doc_id;
    std::string field;  // a metadata field name, or "document" for ingest errors
    std::string reason;

    bool operator==(const ReviewEntry&) const = default;
};

struct RunManifest {
    std::string input_dir;
    std::vector<std::string> inputs; // sorted file names
    std::size_t total = 0;
    std::size_t scientific = 0;
    std::size_t unscientific = 0;
    std::size_t extracted = 0;
    std::size_t flagged = 0; // documents with at least one review entry
    double wall_seconds = 0;
    double docs_per_minute = 0;
    std::map<std::string, std::size_t> flag_counts_per_field;
    int exit_code = 0;
};

struct PipelineOptions {
    OutputFormats formats;
    int workers = 0;                          // overrides config when > 0
    std::optional<std::int64_t> fixed_timestamp; // injectable clock for reproducible runs
};

namespace detail {

struct DocOutcome {
    std::string doc_id;
    std::string file_name;
    bool ingested = false;
    bool scientific = false;
    std::optional<IndexEntry> entry;
    std::vector<ReviewEntry> review;
};

inline DocOutcome process_one(const std::filesystem::path& path, const Config& cfg) {
    DocOutcome out;
    out.doc_id = path.stem().string();
    out.file_name = path.filename().string();
    DocumentText doc;
    try {
        if (path.extension() == ".spans") doc = load_span_file(path);
        else doc = extract_document_text(path);
    } catch (const UnreadablePdf&) {
        out.review.push_back({out.doc_id, "document", "UnreadablePdf"});
        return out;
    } catch (const NoTextContent&) {
        out.review.push_back({out.doc_id, "document", "NoTextContent"});
        return out;
    } catch (const MalformedSpanFile&) {
        out.review.push_back({out.doc_id, "document", "MalformedSpanFile"});
        return out;
    } catch (const IoError&) {
        out.review.push_back({out.doc_id, "document", "UnreadablePdf"});
        return out;
    }
    out.ingested = true;

    SelectedText sel = select_pages(doc, cfg.pages);
    ClassificationResult cls = classify(extract_features(sel, cfg.markers), cfg.classifier_rule);
    out.scientific = cls.verdict == Verdict::Scientific;
    if (!out.scientific) return out;

    ExtractorOptions opts;
    opts.strict_title = cfg.strict_title;
    opts.pages = cfg.pages;
    auto [record, flags] = extract_all(doc, cfg.markers, opts);
    for (const ReviewFlag& fl : flags)
        out.review.push_back({fl.doc_id, std::string(to_string(fl.field)),
                              std::string(to_string(fl.reason))});

    IndexEntry entry;
    entry.doc_id = out.doc_id;
    entry.record = std::move(record);
    entry.source_path = path.string();
    out.entry = std::move(entry);
    return out;
}

} // namespace detail

inline nlohmann::ordered_json manifest_to_json(const RunManifest& m) {
    nlohmann::ordered_json j;
    j["input_dir"] = m.input_dir;
    j["inputs"] = m.inputs;
    j["counts"] = {{"total", m.total},
                   {"scientific", m.scientific},
                   {"unscientific", m.unscientific},
                   {"extracted", m.extracted},
                   {"flagged", m.flagged}};
    j["wall_seconds"] = m.wall_seconds;
    j["docs_per_minute"] = m.docs_per_minute;
    j["flag_counts_per_field"] = m.flag_counts_per_field;
    j["exit_code"] = m.exit_code;
    return j;
}

inline RunManifest run_pipeline(const std::filesystem::path& input_dir,
                                const std::filesystem::path& output_dir, const Config& cfg,
                                const PipelineOptions& opts = {}) {
    namespace fs = std::filesystem;
    if (!fs::exists(input_dir) || !fs::is_directory(input_dir))
        throw std::runtime_error("input directory does not exist: " + input_dir.string());
    fs::create_directories(output_dir);

    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(input_dir)) {
        if (!e.is_regular_file()) continue;
        auto ext = e.path().extension();
        if (ext == ".pdf" || ext == ".spans") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());

    {
        std::set<std::string> stems;
        for (const auto& f : files)
            if (!stems.insert(f.stem().string()).second)
                throw std::runtime_error("duplicate document id: " + f.stem().string());
    }

    auto t0 = std::chrono::steady_clock::now();

    int workers = opts.workers > 0 ? opts.workers : cfg.workers;
    if (workers <= 0) workers = static_cast<int>(std::thread::hardware_concurrency());
    if (workers <= 0) workers = 1;
    workers = std::min<int>(workers, std::max<int>(1, static_cast<int>(files.size())));

    std::vector<detail::DocOutcome> outcomes(files.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        while (true) {
            std::size_t i = next.fetch_add(1);
            if (i >= files.size()) break;
            outcomes[i] = detail::process_one(files[i], cfg);
        }
    };
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    std::int64_t stamp = opts.fixed_timestamp
                             ? *opts.fixed_timestamp
                             : std::chrono::duration_cast<std::chrono::seconds>(
                                   std::chrono::system_clock::now().time_since_epoch())
                                   .count();

    RunManifest manifest;
    manifest.input_dir = input_dir.string();
    manifest.total = files.size();

    MetadataStore store;
    std::vector<ReviewEntry> review;
    std::set<std::string> flagged_docs;
    // outcomes follow the sorted file order, so everything downstream is
    // deterministic regardless of worker count
    for (auto& oc : outcomes) {
        manifest.inputs.push_back(oc.file_name);
        if (oc.ingested) {
            if (oc.scientific) ++manifest.scientific;
            else ++manifest.unscientific;
        } else {
            ++manifest.unscientific; // unreadable input is not a scientific doc
        }
        if (oc.entry) {
            oc.entry->indexed_at = stamp;
            store.put(std::move(*oc.entry));
            ++manifest.extracted;
        }
        for (auto& r : oc.review) {
            flagged_docs.insert(r.doc_id);
            ++manifest.flag_counts_per_field[r.field];
            review.push_back(std::move(r));
        }
    }
    manifest.flagged = flagged_docs.size();
    manifest.wall_seconds = opts.fixed_timestamp ? 0.0 : wall;
    manifest.docs_per_minute = manifest.wall_seconds > 0
                                   ? static_cast<double>(manifest.extracted) * 60.0 /
                                         manifest.wall_seconds
                                   : 0.0;
    manifest.exit_code = manifest.flagged > 0 ? 2 : 0;

    if (opts.formats.xml) export_xml(store, output_dir / "store.xml");
    if (opts.formats.json) export_json(store, output_dir / "store.json");
    if (opts.formats.db) export_db(store, output_dir / "store.sqlite");

    {
        std::ofstream rf(output_dir / "review.jsonl", std::ios::binary);
        if (!rf) throw std::runtime_error("cannot write review queue");
        for (const ReviewEntry& r : review) {
            nlohmann::ordered_json j;
            j["id"] = r.doc_id;
            j["field"] = r.field;
            j["reason"] = r.reason;
            rf << j.dump() << "\n";
        }
    }
    {
        std::ofstream mf(output_dir / "manifest.json", std::ios::binary);
        if (!mf) throw std::runtime_error("cannot write manifest");
        mf << manifest_to_json(manifest).dump(2) << "\n";
    }
    return manifest;
}

} // namespace metex

#endif // METEX_PIPELINE_HPP
