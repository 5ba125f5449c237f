#ifndef METEX_CLASSIFIER_HPP
#define METEX_CLASSIFIER_HPP

#include "metex/core.hpp"
#include "metex/ingest.hpp"

// Scientific/unscientific gate: marker-presence features from the first
// page and the tail, plus a biggest-font title candidate check.

namespace metex {

enum class Verdict { Scientific, Unscientific };

struct ClassificationResult {
    std::string doc_id;
    bool has_abstract_marker = false;
    bool has_keywords_marker = false;
    bool has_conclusion_marker = false;
    bool has_references_marker = false;
    bool has_title_candidate = false;
    Verdict verdict = Verdict::Unscientific;

    int true_flag_count() const {
        return int(has_abstract_marker) + int(has_keywords_marker) +
               int(has_conclusion_marker) + int(has_references_marker) +
               int(has_title_candidate);
    }
};

struct DecisionRule {
    enum class Kind { Default, AllFive, KOfFive } kind = Kind::Default;
    int k = 3; // for KOfFive
};

namespace detail {

inline bool any_marker(const std::vector<TextSpan>& spans,
                       const std::vector<std::string>& markers) {
    for (const TextSpan& s : spans)
        if (match_marker(s.text, markers)) return true;
    return false;
}

} // namespace detail

// Flags computed over the selected pages; verdict left for classify().
// Title candidacy demands a strict font-size maximum before the abstract
// marker; ties disqualify here (the extractor tie-breaks instead).
inline ClassificationResult extract_features(const SelectedText& sel,
                                             const MarkerConfig& cfg) {
    ClassificationResult r;
    r.doc_id = sel.doc_id;
    r.has_abstract_marker = detail::any_marker(sel.first_page_spans, cfg.abstract_markers);
    r.has_keywords_marker = detail::any_marker(sel.first_page_spans, cfg.keywords_markers);
    r.has_conclusion_marker = detail::any_marker(sel.tail_spans, cfg.conclusion_markers);
    r.has_references_marker = detail::any_marker(sel.tail_spans, cfg.reference_markers);

    std::size_t limit = sel.first_page_spans.size();
    for (std::size_t i = 0; i < sel.first_page_spans.size(); ++i) {
        if (detail::match_marker(sel.first_page_spans[i].text, cfg.abstract_markers)) {
            limit = i;
            break;
        }
    }
    double max_size = 0;
    for (const TextSpan& s : sel.first_page_spans) max_size = std::max(max_size, s.font_size);

    // A wrapped title is several consecutive spans sharing size and style;
    // count such blocks at the maximum size, not raw spans.
    int blocks = 0;
    std::size_t first_block_at = 0;
    for (std::size_t i = 0; i < sel.first_page_spans.size(); ++i) {
        const TextSpan& s = sel.first_page_spans[i];
        if (std::abs(s.font_size - max_size) > 1e-9) continue;
        bool continues = i > 0 && std::abs(sel.first_page_spans[i - 1].font_size - max_size) <= 1e-9 &&
                         sel.first_page_spans[i - 1].font_name == s.font_name &&
                         sel.first_page_spans[i - 1].bold == s.bold;
        if (!continues) {
            if (++blocks == 1) first_block_at = i;
        }
    }
    bool dominates = false; // uniform-size pages have headings nowhere
    for (const TextSpan& s : sel.first_page_spans)
        if (s.font_size < max_size - 1e-9) dominates = true;
    r.has_title_candidate = blocks == 1 && dominates && first_block_at < limit;
    return r;
}

// Pure function of the flag vector. Default rule needs the three features
// extraction cannot proceed without.
inline ClassificationResult classify(ClassificationResult features,
                                     const DecisionRule& rule = {}) {
    bool scientific = false;
    switch (rule.kind) {
        case DecisionRule::Kind::Default:
            scientific = features.has_abstract_marker && features.has_references_marker &&
                         features.has_title_candidate;
            break;
        case DecisionRule::Kind::AllFive:
            scientific = features.true_flag_count() == 5;
            break;
        case DecisionRule::Kind::KOfFive:
            scientific = features.true_flag_count() >= rule.k;
            break;
    }
    features.verdict = scientific ? Verdict::Scientific : Verdict::Unscientific;
    return features;
}

} // namespace metex

#endif // METEX_CLASSIFIER_HPP
