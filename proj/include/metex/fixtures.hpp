#ifndef METEX_FIXTURES_HPP
#define METEX_FIXTURES_HPP

#include <cctype>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "metex/core.hpp"
#include "metex/evaluator.hpp"

// Synthetic span-format documents with known ground truth. The layout
// follows the rule set the extractor implements (title with the biggest
// font before the abstract marker, then the field windows in order), so
// extraction output is known by construction and the generator doubles as
// a test oracle.

namespace metex {

enum class Perturbation {
    DropKeywords,
    UnboldTitle,
    TieTitleSizes,
    DuplicateReferencesMarker,
    InlineConclusionWord,
};

inline std::string_view to_string(Perturbation p) {
    switch (p) {
        case Perturbation::DropKeywords: return "drop_keywords";
        case Perturbation::UnboldTitle: return "unbold_title";
        case Perturbation::TieTitleSizes: return "tie_title_sizes";
        case Perturbation::DuplicateReferencesMarker: return "duplicate_references_marker";
        case Perturbation::InlineConclusionWord: return "inline_conclusion_word";
    }
    return "drop_keywords";
}

inline std::optional<Perturbation> perturbation_from_string(std::string_view s) {
    for (Perturbation p : {Perturbation::DropKeywords, Perturbation::UnboldTitle,
                           Perturbation::TieTitleSizes, Perturbation::DuplicateReferencesMarker,
                           Perturbation::InlineConclusionWord})
        if (to_string(p) == s) return p;
    return std::nullopt;
}

inline constexpr Perturbation kAllPerturbations[] = {
    Perturbation::DropKeywords, Perturbation::UnboldTitle, Perturbation::TieTitleSizes,
    Perturbation::DuplicateReferencesMarker, Perturbation::InlineConclusionWord};

struct FixtureSpec {
    std::uint64_t seed = 1;
    int page_count = 0; // 0 = derive from seed, otherwise >= 3
    std::set<Perturbation> perturbations;
    bool scientific = true; // false: plain non-article document
};

struct InvalidSpec : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Fixture {
    DocumentText document;
    GroundTruthRecord truth;
};

namespace fixture_detail {

// splitmix64; the standard library distributions are not seed-stable
// across implementations, so everything below derives from raw draws.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
    std::uint64_t below(std::uint64_t n) { return next() % n; }
    int range(int lo, int hi) { return lo + static_cast<int>(below(hi - lo + 1)); } // inclusive
    bool chance(int pct) { return below(100) < static_cast<std::uint64_t>(pct); }

private:
    std::uint64_t state_;
};

inline const std::vector<std::string>& body_words() {
    static const std::vector<std::string> words = {
        "the",      "proposed", "method",   "achieves", "robust",   "parsing",  "across",
        "varied",   "layouts",  "while",    "keeping",  "latency",  "low",      "each",
        "document", "window",   "anchors",  "fields",   "between",  "phrases",  "and",
        "font",     "cues",     "measured", "results",  "indicate", "stable",   "recall",
        "under",    "noisy",    "input",    "segments", "spans",    "carry",    "size",
        "style",    "order",    "features", "used",     "by",       "rules",    "during",
        "batch",    "runs",     "over",     "large",    "corpora",  "with",     "modest",
        "memory",   "budgets",
    };
    return words;
}

inline const std::vector<std::string>& title_words() {
    static const std::vector<std::string> words = {
        "Adaptive", "Spectral", "Layered",  "Robust",    "Scalable", "Hybrid",
        "Semantic", "Parsing",  "Analysis", "Retrieval", "Modeling", "Learning",
        "Systems",  "Networks", "Pipeline", "Documents", "Corpora",  "Signals",
    };
    return words;
}

inline std::string sentence(Rng& rng, int min_words, int max_words) {
    int n = rng.range(min_words, max_words);
    std::string out;
    const auto& words = body_words();
    for (int i = 0; i < n; ++i) {
        if (i) out.push_back(' ');
        out += words[rng.below(words.size())];
    }
    out.push_back('.');
    out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
    return out;
}

struct PageWriter {
    DocumentText& doc;
    int page = 1;
    int order = 0;
    double y = 72.0;

    void new_page() {
        ++page;
        order = 0;
        y = 72.0;
    }
    void line(std::string text, const std::string& font, double size, bool bold) {
        TextSpan s;
        s.text = normalize_text(text);
        s.page = page;
        s.order = order++;
        s.font_name = font;
        s.font_size = size;
        s.bold = bold;
        s.baseline_y = y;
        y += size * 1.3;
        doc.spans.push_back(std::move(s));
    }
};

} // namespace fixture_detail

inline Fixture generate(const FixtureSpec& spec, const MarkerConfig& cfg = default_marker_config()) {
    using namespace fixture_detail;
    if (spec.page_count != 0 && spec.page_count < 3)
        throw InvalidSpec("page_count must be 0 (derived) or >= 3");
    (void)cfg;

    Rng rng(spec.seed * 0x100000001B3ULL + 0x6D2B79F5ULL);
    Fixture fx;
    DocumentText& doc = fx.document;
    doc.doc_id = "fixture-" + std::to_string(spec.seed);
    doc.page_count = spec.page_count != 0 ? spec.page_count : rng.range(4, 12);
    fx.truth.doc_id = doc.doc_id;
    fx.truth.is_scientific = spec.scientific;

    PageWriter w{doc};

    if (!spec.scientific) {
        // a plain multi-page document: uniform font, no marker phrases
        for (int p = 1; p <= doc.page_count; ++p) {
            int lines = rng.range(4, 8);
            for (int i = 0; i < lines; ++i) w.line(sentence(rng, 6, 12), "Times-Roman", 10, false);
            if (p < doc.page_count) w.new_page();
        }
        return fx;
    }

    auto has = [&](Perturbation p) { return spec.perturbations.count(p) > 0; };

    // --- page 1: title block
    if (has(Perturbation::TieTitleSizes))
        w.line("Journal of Synthetic Results", "Courier-Bold", 18, true);

    int title_lines = rng.chance(35) ? 2 : 1;
    std::string title_text;
    bool title_bold = !has(Perturbation::UnboldTitle);
    std::string title_font = title_bold ? "Times-Bold" : "Times-Roman";
    for (int i = 0; i < title_lines; ++i) {
        std::string line;
        int n = rng.range(2, 4);
        for (int k = 0; k < n; ++k) {
            if (k) line.push_back(' ');
            line += title_words()[rng.below(title_words().size())];
        }
        if (!title_text.empty()) title_text.push_back(' ');
        title_text += line;
        w.line(line, title_font, 18, title_bold);
    }
    fx.truth.expected_for(Field::Title) = title_text;

    w.line("A. Author and B. Writer", "Times-Roman", 10, false);

    // --- abstract
    std::string abstract_marker = rng.chance(50) ? "Abstract" : "ABSTRACT";
    std::vector<std::string> abstract_sentences;
    for (int i = 0, n = rng.range(2, 3); i < n; ++i)
        abstract_sentences.push_back(sentence(rng, 8, 14));
    std::string abstract_text;
    for (const auto& s : abstract_sentences) {
        if (!abstract_text.empty()) abstract_text.push_back(' ');
        abstract_text += s;
    }
    fx.truth.expected_for(Field::Abstract) = abstract_text;
    if (rng.chance(50)) {
        // inline marker style: "Abstract— first sentence"
        w.line(abstract_marker + "— " + abstract_sentences[0], "Times-Roman", 10, false);
        for (std::size_t i = 1; i < abstract_sentences.size(); ++i)
            w.line(abstract_sentences[i], "Times-Roman", 10, false);
    } else {
        w.line(abstract_marker, "Times-Bold", 12, true);
        for (const auto& s : abstract_sentences) w.line(s, "Times-Roman", 10, false);
    }

    // --- keywords
    if (!has(Perturbation::DropKeywords)) {
        static const char* kw_variants[] = {"Keywords", "KEYWORDS", "Index Terms", "INDEX TERMS"};
        std::string kw_marker = kw_variants[rng.below(4)];
        const auto& words = body_words();
        int n = rng.range(3, 5);
        std::string kw_text;
        for (int i = 0; i < n; ++i) {
            if (i) kw_text += ", ";
            kw_text += words[rng.below(words.size())];
        }
        fx.truth.expected_for(Field::Keywords) = kw_text;
        if (rng.chance(50)) {
            w.line(kw_marker + ": " + kw_text, "Times-Roman", 10, false);
        } else {
            w.line(kw_marker, "Times-Bold", 12, true);
            w.line(kw_text, "Times-Roman", 10, false);
        }
    }

    // --- introduction heading + body across pages 1..n-2
    static const char* intro_variants[] = {"1. Introduction", "I. INTRODUCTION", "Introduction"};
    w.line(intro_variants[rng.below(3)], "Times-Bold", 12, true);

    std::vector<std::string> body_spans;
    int body_pages = doc.page_count - 2; // body occupies pages 1..n-2
    for (int p = 0; p < body_pages; ++p) {
        int lines = rng.range(4, 7);
        for (int i = 0; i < lines; ++i) body_spans.push_back(sentence(rng, 7, 12));
    }
    if (has(Perturbation::InlineConclusionWord)) {
        // a genuine body sentence that begins with the conclusion word;
        // the fixed rules anchor on it, truncating the body
        body_spans.insert(body_spans.begin() + 1,
                          "Conclusion drawing remains premature given the scope here.");
    }
    std::string body_text;
    std::size_t spans_per_page = body_spans.size() / static_cast<std::size_t>(body_pages) + 1;
    std::size_t written = 0;
    for (const auto& s : body_spans) {
        if (!body_text.empty()) body_text.push_back(' ');
        body_text += s;
        w.line(s, "Times-Roman", 10, false);
        if (++written % spans_per_page == 0 && w.page < doc.page_count - 1) w.new_page();
    }
    fx.truth.expected_for(Field::BodyText) = body_text;

    // --- conclusion on page n-1
    while (w.page < doc.page_count - 1) w.new_page();
    static const char* concl_variants[] = {"Conclusion", "CONCLUSIONS", "5. Conclusions",
                                           "VII. CONCLUSION"};
    w.line(concl_variants[rng.below(4)], "Times-Bold", 12, true);
    std::string concl_text;
    for (int i = 0, n = rng.range(2, 3); i < n; ++i) {
        std::string s = sentence(rng, 8, 13);
        if (!concl_text.empty()) concl_text.push_back(' ');
        concl_text += s;
        w.line(s, "Times-Roman", 10, false);
    }
    fx.truth.expected_for(Field::Conclusions) = concl_text;

    if (rng.chance(40)) {
        w.line("Acknowledgment", "Times-Bold", 12, true);
        w.line(sentence(rng, 6, 10), "Times-Roman", 10, false);
    }

    // --- references on the last page
    while (w.page < doc.page_count) w.new_page();
    static const char* ref_variants[] = {"References", "REFERENCES", "8. References"};
    std::string ref_marker = ref_variants[rng.below(3)];
    w.line(ref_marker, "Times-Bold", 12, true);
    int n_refs = rng.range(4, 6);
    int dup_at = has(Perturbation::DuplicateReferencesMarker) ? n_refs / 2 : -1;
    std::string ref_text;
    for (int i = 0; i < n_refs; ++i) {
        if (i == dup_at) w.line("References", "Times-Roman", 10, false);
        std::string entry = "[" + std::to_string(i + 1) + "] " + sentence(rng, 6, 10);
        if (!ref_text.empty()) ref_text.push_back(' ');
        ref_text += entry;
        w.line(entry, "Times-Roman", 10, false);
    }
    fx.truth.expected_for(Field::References) = ref_text;

    if (w.page != doc.page_count)
        throw InvalidSpec("internal: fixture page layout drifted"); // should not happen
    return fx;
}

} // namespace metex

#endif // METEX_FIXTURES_HPP
