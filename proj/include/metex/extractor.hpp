#ifndef METEX_EXTRACTOR_HPP
#define METEX_EXTRACTOR_HPP

#include <utility>

#include "metex/core.hpp"
#include "metex/ingest.hpp"

// The six fixed field rules. Marker windows are anchored on span starts;
// failures never throw, they surface as ReviewFlags plus Missing/Empty
// statuses so documents can be routed to manual review.

namespace metex {

enum class ReviewReason {
    MissingStartMarker,
    MissingEndMarker,
    NoTitleCandidate,
    EmptyWindow,
    NotBold,
};

inline std::string_view to_string(ReviewReason r) {
    switch (r) {
        case ReviewReason::MissingStartMarker: return "MissingStartMarker";
        case ReviewReason::MissingEndMarker: return "MissingEndMarker";
        case ReviewReason::NoTitleCandidate: return "NoTitleCandidate";
        case ReviewReason::EmptyWindow: return "EmptyWindow";
        case ReviewReason::NotBold: return "NotBold";
    }
    return "MissingStartMarker";
}

inline std::optional<ReviewReason> review_reason_from_string(std::string_view s) {
    for (ReviewReason r : {ReviewReason::MissingStartMarker, ReviewReason::MissingEndMarker,
                           ReviewReason::NoTitleCandidate, ReviewReason::EmptyWindow,
                           ReviewReason::NotBold})
        if (to_string(r) == s) return r;
    return std::nullopt;
}

struct ReviewFlag {
    std::string doc_id;
    Field field = Field::Title;
    ReviewReason reason = ReviewReason::MissingStartMarker;

    bool operator==(const ReviewFlag&) const = default;
};

struct ExtractorOptions {
    bool strict_title = true; // require bold per rule two
    PageSelection pages;
};

using FieldResult = std::pair<FieldValue, std::optional<ReviewFlag>>;

namespace detail {

inline FieldValue make_value(std::string text, std::optional<ReviewReason> flag_reason) {
    FieldValue v;
    v.value = std::move(text);
    if (!v.value.empty()) {
        v.status = FieldStatus::Extracted;
    } else {
        v.status = flag_reason == ReviewReason::EmptyWindow ? FieldStatus::Empty
                                                            : FieldStatus::Missing;
        v.value.clear();
    }
    return v;
}

inline FieldResult field_result(const std::string& doc_id, Field field, std::string text,
                                std::optional<ReviewReason> reason) {
    FieldValue v = make_value(std::move(text), reason);
    std::optional<ReviewFlag> flag;
    if (reason) flag = ReviewFlag{doc_id, field, *reason};
    return {std::move(v), std::move(flag)};
}

} // namespace detail

// Rule one: the title lies before the abstract marker on page one. Rule
// two: bold. Rule three: biggest font size on the page. Consecutive
// same-style winners concatenate into multi-line titles.
inline FieldResult extract_title(const DocumentText& doc, const SelectedText& sel,
                                 const MarkerConfig& cfg, const ExtractorOptions& opts = {}) {
    std::size_t region_end = sel.first_page_end;
    if (auto abs_hit = locate_marker(doc, cfg.abstract_markers, 0, sel.first_page_end))
        region_end = abs_hit->span_index;

    if (region_end == 0)
        return detail::field_result(doc.doc_id, Field::Title, "", ReviewReason::NoTitleCandidate);

    double max_size = 0;
    for (std::size_t i = 0; i < region_end; ++i)
        max_size = std::max(max_size, doc.spans[i].font_size);

    std::vector<std::size_t> candidates;
    bool any_bold = false;
    for (std::size_t i = 0; i < region_end; ++i) {
        if (std::abs(doc.spans[i].font_size - max_size) <= 1e-9) {
            candidates.push_back(i);
            any_bold = any_bold || doc.spans[i].bold;
        }
    }
    if (candidates.empty())
        return detail::field_result(doc.doc_id, Field::Title, "", ReviewReason::NoTitleCandidate);

    std::optional<ReviewReason> flag;
    if (!any_bold) {
        if (opts.strict_title)
            return detail::field_result(doc.doc_id, Field::Title, "", ReviewReason::NotBold);
        flag = ReviewReason::NotBold; // relaxed: keep the text, note the miss
    } else {
        std::erase_if(candidates, [&](std::size_t i) { return !doc.spans[i].bold; });
    }

    // earliest winner, extended over consecutive same-style lines
    std::size_t first = candidates.front();
    std::string title = doc.spans[first].text;
    std::size_t prev = first;
    for (std::size_t i = first + 1; i < region_end; ++i) {
        if (i != prev + 1) break;
        const TextSpan& a = doc.spans[prev];
        const TextSpan& b = doc.spans[i];
        if (b.font_name != a.font_name || std::abs(b.font_size - a.font_size) > 1e-9 ||
            b.bold != a.bold)
            break;
        title += " " + b.text;
        prev = i;
    }
    return detail::field_result(doc.doc_id, Field::Title, normalize_text(title), flag);
}

// Between the abstract marker and the keywords marker on page one; the
// intro marker (then page end) stands in when keywords are absent.
inline FieldResult extract_abstract(const DocumentText& doc, const SelectedText& sel,
                                    const MarkerConfig& cfg) {
    auto start = locate_marker(doc, cfg.abstract_markers, 0, sel.first_page_end);
    if (!start)
        return detail::field_result(doc.doc_id, Field::Abstract, "",
                                    ReviewReason::MissingStartMarker);
    std::optional<ReviewReason> flag;
    auto end = locate_marker(doc, cfg.keywords_markers, start->span_index + 1,
                             sel.first_page_end);
    if (!end) {
        flag = ReviewReason::MissingEndMarker;
        end = locate_marker(doc, cfg.intro_markers, start->span_index + 1, sel.first_page_end);
        if (!end) end = MarkerHit{"", doc.spans.empty() ? 1 : doc.spans[sel.first_page_end ? sel.first_page_end - 1 : 0].page, sel.first_page_end, 0};
    }
    std::string text = slice_text(doc, start, end, /*include_from_remainder=*/true);
    if (text.empty()) flag = ReviewReason::EmptyWindow;
    return detail::field_result(doc.doc_id, Field::Abstract, std::move(text), flag);
}

// Between the keywords marker and the intro marker on page one.
inline FieldResult extract_keywords(const DocumentText& doc, const SelectedText& sel,
                                    const MarkerConfig& cfg) {
    auto start = locate_marker(doc, cfg.keywords_markers, 0, sel.first_page_end);
    if (!start)
        return detail::field_result(doc.doc_id, Field::Keywords, "",
                                    ReviewReason::MissingStartMarker);
    std::optional<ReviewReason> flag;
    auto end = locate_marker(doc, cfg.intro_markers, start->span_index + 1, sel.first_page_end);
    if (!end) {
        flag = ReviewReason::MissingEndMarker;
        end = MarkerHit{"", 1, sel.first_page_end, 0};
    }
    std::string text = slice_text(doc, start, end, /*include_from_remainder=*/true);
    if (text.empty()) flag = ReviewReason::EmptyWindow;
    return detail::field_result(doc.doc_id, Field::Keywords, std::move(text), flag);
}

// The raw keywords string split on commas/semicolons, trimmed.
inline std::vector<std::string> split_keywords(std::string_view raw) {
    std::vector<std::string> out;
    std::string cur;
    auto flush = [&] {
        std::string t = normalize_text(cur);
        if (!t.empty()) out.push_back(std::move(t));
        cur.clear();
    };
    for (char c : raw) {
        if (c == ',' || c == ';') flush();
        else cur.push_back(c);
    }
    flush();
    return out;
}

// Full-document window from the intro marker to the first conclusion
// marker after it; the references marker (then document end) is the
// fallback end anchor.
inline FieldResult extract_body_text(const DocumentText& doc, const SelectedText& sel,
                                     const MarkerConfig& cfg) {
    (void)sel;
    auto start = locate_marker(doc, cfg.intro_markers, 0, doc.spans.size());
    if (!start)
        return detail::field_result(doc.doc_id, Field::BodyText, "",
                                    ReviewReason::MissingStartMarker);
    std::optional<ReviewReason> flag;
    auto end = locate_marker(doc, cfg.conclusion_markers, start->span_index + 1,
                             doc.spans.size());
    if (!end) {
        flag = ReviewReason::MissingEndMarker;
        end = locate_marker(doc, cfg.reference_markers, start->span_index + 1,
                            doc.spans.size());
    }
    std::string text = slice_text(doc, start, end, /*include_from_remainder=*/true);
    if (text.empty()) flag = ReviewReason::EmptyWindow;
    return detail::field_result(doc.doc_id, Field::BodyText, std::move(text), flag);
}

// Tail window from the conclusion marker to whichever of the reference or
// acknowledgment markers comes first.
inline FieldResult extract_conclusion(const DocumentText& doc, const SelectedText& sel,
                                      const MarkerConfig& cfg) {
    auto start = locate_marker(doc, cfg.conclusion_markers, sel.tail_begin, doc.spans.size());
    if (!start)
        return detail::field_result(doc.doc_id, Field::Conclusions, "",
                                    ReviewReason::MissingStartMarker);
    std::optional<ReviewReason> flag;
    auto ref_end = locate_marker(doc, cfg.reference_markers, start->span_index + 1,
                                 doc.spans.size());
    auto ack_end = locate_marker(doc, cfg.acknowledgment_markers, start->span_index + 1,
                                 doc.spans.size());
    std::optional<MarkerHit> end;
    if (ref_end && (!ack_end || ref_end->span_index < ack_end->span_index)) end = ref_end;
    else if (ack_end) end = ack_end;
    if (!end) flag = ReviewReason::MissingEndMarker;
    std::string text = slice_text(doc, start, end, /*include_from_remainder=*/true);
    if (text.empty()) flag = ReviewReason::EmptyWindow;
    return detail::field_result(doc.doc_id, Field::Conclusions, std::move(text), flag);
}

// Everything after the LAST reference marker in the tail; the last hit
// wins because "References" can also show up in list-of-contents text.
inline FieldResult extract_references(const DocumentText& doc, const SelectedText& sel,
                                      const MarkerConfig& cfg) {
    std::optional<MarkerHit> last;
    std::size_t from = sel.tail_begin;
    while (auto hit = locate_marker(doc, cfg.reference_markers, from, doc.spans.size())) {
        last = hit;
        from = hit->span_index + 1;
    }
    if (!last)
        return detail::field_result(doc.doc_id, Field::References, "",
                                    ReviewReason::MissingStartMarker);
    std::optional<ReviewReason> flag;
    std::string text = slice_text(doc, last, std::nullopt, /*include_from_remainder=*/true);
    if (text.empty()) flag = ReviewReason::EmptyWindow;
    return detail::field_result(doc.doc_id, Field::References, std::move(text), flag);
}

// Runs page selection plus all six field rules; deterministic for
// identical input.
inline std::pair<MetadataRecord, std::vector<ReviewFlag>>
extract_all(const DocumentText& doc, const MarkerConfig& cfg, const ExtractorOptions& opts = {}) {
    SelectedText sel = select_pages(doc, opts.pages);
    MetadataRecord rec;
    rec.doc_id = doc.doc_id;
    std::vector<ReviewFlag> flags;

    auto apply = [&](Field f, FieldResult r) {
        rec.field(f) = std::move(r.first);
        if (r.second) flags.push_back(std::move(*r.second));
    };
    apply(Field::Title, extract_title(doc, sel, cfg, opts));
    apply(Field::Abstract, extract_abstract(doc, sel, cfg));
    apply(Field::Keywords, extract_keywords(doc, sel, cfg));
    apply(Field::BodyText, extract_body_text(doc, sel, cfg));
    apply(Field::Conclusions, extract_conclusion(doc, sel, cfg));
    apply(Field::References, extract_references(doc, sel, cfg));
    return {std::move(rec), std::move(flags)};
}

} // namespace metex

#endif // METEX_EXTRACTOR_HPP
