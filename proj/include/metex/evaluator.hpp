#ifndef METEX_EVALUATOR_HPP
#define METEX_EVALUATOR_HPP

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "metex/classifier.hpp"
#include "metex/core.hpp"

// Scoring against labeled ground truth: per-field accuracy over test
// splits, plus the A = (A1 + A2) / 2 classification accuracy.

namespace metex {

struct GroundTruthRecord {
    std::string doc_id;
    bool is_scientific = true;
    std::string expected[6]; // indexed by Field order

    const std::string& expected_for(Field f) const { return expected[static_cast<int>(f)]; }
    std::string& expected_for(Field f) { return expected[static_cast<int>(f)]; }
};

struct MissingTruth : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct MalformedTruth : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DegenerateTruthSet : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EvalOptions {
    double jaccard_threshold = 0.95; // long fields
};

namespace detail {

inline std::string canonical(std::string_view s) {
    return ascii_lower(normalize_text(s));
}

inline std::map<std::string, int> token_counts(const std::string& s) {
    std::map<std::string, int> counts;
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) ++counts[tok];
    return counts;
}

} // namespace detail

// Multiset Jaccard similarity of whitespace tokens.
inline double token_jaccard(const std::string& a, const std::string& b) {
    auto ca = detail::token_counts(a), cb = detail::token_counts(b);
    long long inter = 0, uni = 0;
    for (const auto& [tok, n] : ca) {
        auto it = cb.find(tok);
        int m = it == cb.end() ? 0 : it->second;
        inter += std::min(n, m);
        uni += std::max(n, m);
    }
    for (const auto& [tok, n] : cb)
        if (!ca.count(tok)) uni += n;
    if (uni == 0) return 1.0;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

inline bool is_long_field(Field f) {
    return f == Field::BodyText || f == Field::Conclusions || f == Field::References;
}

// Short fields compare as normalized case-folded strings; long fields pass
// at token-multiset Jaccard >= threshold. A Missing/Empty extraction is
// correct exactly when nothing was expected.
inline bool field_correct(const FieldValue& extracted, const std::string& expected, Field field,
                          const EvalOptions& opts = {}) {
    std::string want = detail::canonical(expected);
    if (extracted.status != FieldStatus::Extracted) return want.empty();
    std::string got = detail::canonical(extracted.value);
    if (is_long_field(field)) return token_jaccard(got, want) >= opts.jaccard_threshold;
    return got == want;
}

struct ClassificationAccuracy {
    double a1 = 0, a2 = 0, a = 0; // percentages
};

inline ClassificationAccuracy
classification_accuracy(const std::vector<std::pair<Verdict, bool>>& preds_vs_truth) {
    long long sci_total = 0, sci_correct = 0, uns_total = 0, uns_correct = 0;
    for (const auto& [verdict, truly_scientific] : preds_vs_truth) {
        if (truly_scientific) {
            ++sci_total;
            if (verdict == Verdict::Scientific) ++sci_correct;
        } else {
            ++uns_total;
            if (verdict == Verdict::Unscientific) ++uns_correct;
        }
    }
    if (sci_total == 0 || uns_total == 0)
        throw DegenerateTruthSet("classification_accuracy: a class has zero members");
    ClassificationAccuracy r;
    r.a1 = 100.0 * static_cast<double>(sci_correct) / static_cast<double>(sci_total);
    r.a2 = 100.0 * static_cast<double>(uns_correct) / static_cast<double>(uns_total);
    r.a = (r.a1 + r.a2) / 2.0;
    return r;
}

struct SplitResult {
    std::size_t split_size = 0;
    double field_accuracy[6] = {0, 0, 0, 0, 0, 0}; // percentages, Field order
};

struct EvaluationReport {
    std::vector<SplitResult> splits;
    double overall[6] = {0, 0, 0, 0, 0, 0}; // mean of split accuracies
    std::optional<ClassificationAccuracy> classification;
    std::optional<double> docs_per_minute;
    std::optional<double> seconds_per_doc;
};

// Splits are deterministic prefixes of the doc_id-sorted record order.
inline EvaluationReport
run_evaluation(const std::map<std::string, MetadataRecord>& records,
               const std::map<std::string, GroundTruthRecord>& truth,
               const std::vector<std::size_t>& split_sizes, const EvalOptions& opts = {}) {
    std::vector<const MetadataRecord*> ordered;
    ordered.reserve(records.size());
    for (const auto& [id, rec] : records) {
        if (!truth.count(id)) throw MissingTruth("no ground truth for doc_id: " + id);
        ordered.push_back(&rec);
    }
    EvaluationReport report;
    for (std::size_t size : split_sizes) {
        if (size == 0 || size > ordered.size())
            throw std::invalid_argument("split size " + std::to_string(size) +
                                        " exceeds corpus size " +
                                        std::to_string(ordered.size()));
        SplitResult split;
        split.split_size = size;
        for (std::size_t i = 0; i < size; ++i) {
            const MetadataRecord& rec = *ordered[i];
            const GroundTruthRecord& gt = truth.at(rec.doc_id);
            for (Field f : kAllFields)
                if (field_correct(rec.field(f), gt.expected_for(f), f, opts))
                    split.field_accuracy[static_cast<int>(f)] += 1.0;
        }
        for (double& acc : split.field_accuracy)
            acc = 100.0 * acc / static_cast<double>(size);
        report.splits.push_back(split);
    }
    if (!report.splits.empty()) {
        for (int fi = 0; fi < 6; ++fi) {
            double sum = 0;
            for (const SplitResult& s : report.splits) sum += s.field_accuracy[fi];
            report.overall[fi] = sum / static_cast<double>(report.splits.size());
        }
    }
    return report;
}

// ---------------------------------------------------------------------------
// Ground-truth JSONL I/O

inline GroundTruthRecord truth_from_json(const nlohmann::json& obj) {
    GroundTruthRecord gt;
    try {
        gt.doc_id = obj.at("id").get<std::string>();
        gt.is_scientific = obj.at("is_scientific").get<bool>();
        for (Field f : kAllFields) {
            std::string key(to_string(f));
            if (obj.contains(key)) gt.expected_for(f) = obj.at(key).get<std::string>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw MalformedTruth(std::string("bad ground-truth record: ") + e.what());
    }
    return gt;
}

inline nlohmann::ordered_json truth_to_json(const GroundTruthRecord& gt) {
    nlohmann::ordered_json obj;
    obj["id"] = gt.doc_id;
    obj["is_scientific"] = gt.is_scientific;
    for (Field f : kAllFields) obj[std::string(to_string(f))] = gt.expected_for(f);
    return obj;
}

inline std::map<std::string, GroundTruthRecord>
load_truth_jsonl(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw MalformedTruth("cannot open: " + path.string());
    std::map<std::string, GroundTruthRecord> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(f, line)) {
        ++line_no;
        if (line.empty()) continue;
        nlohmann::json obj;
        try {
            obj = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw MalformedTruth(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
        GroundTruthRecord gt = truth_from_json(obj);
        out[gt.doc_id] = std::move(gt);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Report rendering

inline std::string render_report_text(const EvaluationReport& report) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(2);
    out << std::left << std::setw(14) << "Field";
    for (const SplitResult& s : report.splits)
        out << std::right << std::setw(12) << ("n=" + std::to_string(s.split_size));
    out << std::right << std::setw(12) << "Overall" << "\n";
    for (Field f : kAllFields) {
        out << std::left << std::setw(14) << std::string(to_string(f));
        for (const SplitResult& s : report.splits)
            out << std::right << std::setw(12) << s.field_accuracy[static_cast<int>(f)];
        out << std::right << std::setw(12) << report.overall[static_cast<int>(f)] << "\n";
    }
    if (report.classification) {
        out << "classification: A1=" << report.classification->a1
            << " A2=" << report.classification->a2 << " A=" << report.classification->a << "\n";
    }
    if (report.docs_per_minute)
        out << "throughput: " << *report.docs_per_minute << " docs/minute ("
            << (report.seconds_per_doc ? *report.seconds_per_doc : 0.0) << " s/doc)\n";
    return out.str();
}

inline nlohmann::ordered_json report_to_json(const EvaluationReport& report) {
    nlohmann::ordered_json j;
    j["splits"] = nlohmann::ordered_json::array();
    for (const SplitResult& s : report.splits) {
        nlohmann::ordered_json split;
        split["size"] = s.split_size;
        for (Field f : kAllFields)
            split[std::string(to_string(f))] = s.field_accuracy[static_cast<int>(f)];
        j["splits"].push_back(std::move(split));
    }
    nlohmann::ordered_json overall;
    for (Field f : kAllFields)
        overall[std::string(to_string(f))] = report.overall[static_cast<int>(f)];
    j["overall"] = std::move(overall);
    if (report.classification) {
        j["classification"] = {{"A1", report.classification->a1},
                               {"A2", report.classification->a2},
                               {"A", report.classification->a}};
    }
    if (report.docs_per_minute) j["docs_per_minute"] = *report.docs_per_minute;
    if (report.seconds_per_doc) j["seconds_per_doc"] = *report.seconds_per_doc;
    return j;
}

} // namespace metex

#endif // METEX_EVALUATOR_HPP
