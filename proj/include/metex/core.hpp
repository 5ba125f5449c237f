#ifndef METEX_CORE_HPP
#define METEX_CORE_HPP

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

// Shared domain types, text normalization and marker-phrase location.
// Everything here is an immutable value with pure functions over it.

namespace metex {

struct TextSpan {
    std::string text;        // normalized, non-empty
    int page = 1;            // 1-based
    int order = 0;           // 0-based reading order within the page
    std::string font_name;
    double font_size = 0.0;  // points, > 0
    bool bold = false;
    double baseline_y = 0.0; // top-of-page relative, smaller = higher

    bool operator==(const TextSpan&) const = default;
};

struct DocumentText {
    std::string doc_id;      // source file name stem
    int page_count = 0;
    std::vector<TextSpan> spans; // sorted by (page, order)

    bool operator==(const DocumentText&) const = default;
};

struct MarkerConfig {
    std::vector<std::string> abstract_markers;
    std::vector<std::string> keywords_markers;
    std::vector<std::string> intro_markers;
    std::vector<std::string> conclusion_markers;
    std::vector<std::string> reference_markers;
    std::vector<std::string> acknowledgment_markers;
};

// The marker variants the rules are built around. Case-exact, prefix
// matched against span starts; uppercase intro variants are included so
// headings like "I. INTRODUCTION" anchor.
inline MarkerConfig default_marker_config() {
    MarkerConfig cfg;
    cfg.abstract_markers = {"Abstract", "ABSTRACT"};
    cfg.keywords_markers = {"KEYWORDS", "Keywords", "INDEX TERMS", "Index Terms"};
    cfg.intro_markers = {"I. Intro", "1. Intro", "Intro", "INTRO"};
    cfg.conclusion_markers = {"Conclusion", "CONCLUSION", "Conclusions", "CONCLUSIONS"};
    cfg.reference_markers = {"Reference", "REFERENCES", "References", "REFERENCE"};
    cfg.acknowledgment_markers = {"Acknowledgment", "ACKNOWLEDGMENT", "Acknowledgement",
                                  "ACKNOWLEDGEMENT", "Acknowledgments", "Acknowledgements"};
    return cfg;
}

struct MarkerHit {
    std::string marker;   // the matched config entry
    int page = 0;
    std::size_t span_index = 0; // global index into DocumentText.spans
    std::size_t char_offset = 0; // where the marker starts within the span text
};

enum class FieldStatus { Extracted, Missing, Empty };

inline std::string_view to_string(FieldStatus s) {
    switch (s) {
        case FieldStatus::Extracted: return "extracted";
        case FieldStatus::Missing: return "missing";
        case FieldStatus::Empty: return "empty";
    }
    return "missing";
}

inline std::optional<FieldStatus> field_status_from_string(std::string_view s) {
    if (s == "extracted") return FieldStatus::Extracted;
    if (s == "missing") return FieldStatus::Missing;
    if (s == "empty") return FieldStatus::Empty;
    return std::nullopt;
}

struct FieldValue {
    std::string value;
    FieldStatus status = FieldStatus::Missing;

    bool operator==(const FieldValue&) const = default;
};

enum class Field { Title, Abstract, Keywords, BodyText, Conclusions, References };

inline constexpr Field kAllFields[] = {Field::Title, Field::Abstract, Field::Keywords,
                                       Field::BodyText, Field::Conclusions, Field::References};

inline std::string_view to_string(Field f) {
    switch (f) {
        case Field::Title: return "title";
        case Field::Abstract: return "abstract";
        case Field::Keywords: return "keywords";
        case Field::BodyText: return "body_text";
        case Field::Conclusions: return "conclusions";
        case Field::References: return "references";
    }
    return "title";
}

inline std::optional<Field> field_from_string(std::string_view s) {
    for (Field f : kAllFields)
        if (to_string(f) == s) return f;
    return std::nullopt;
}

struct MetadataRecord {
    std::string doc_id;
    FieldValue title, abstract, keywords, body_text, conclusions, references;

    FieldValue& field(Field f) {
        switch (f) {
            case Field::Title: return title;
            case Field::Abstract: return abstract;
            case Field::Keywords: return keywords;
            case Field::BodyText: return body_text;
            case Field::Conclusions: return conclusions;
            case Field::References: return references;
        }
        return title;
    }
    const FieldValue& field(Field f) const {
        return const_cast<MetadataRecord*>(this)->field(f);
    }

    bool operator==(const MetadataRecord&) const = default;
};

// ---------------------------------------------------------------------------
// Text normalization

namespace detail {

inline bool is_space_byte(unsigned char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

inline std::string ascii_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
        return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : static_cast<char>(c);
    });
    return out;
}

// Treats ASCII letters and any non-ASCII lead byte as alphabetic; good
// enough for deciding whether a hyphen break splits a word.
inline bool is_alpha_byte(unsigned char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c >= 0xC0;
}

inline void append_utf8(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

inline char32_t decode_utf8(std::string_view s, std::size_t& i) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    if (c < 0x80) { ++i; return c; }
    int extra = (c >= 0xF0) ? 3 : (c >= 0xE0) ? 2 : 1;
    char32_t cp = c & (0x3F >> extra);
    for (int k = 0; k < extra && i + 1 + static_cast<std::size_t>(k) < s.size(); ++k)
        cp = (cp << 6) | (static_cast<unsigned char>(s[i + 1 + k]) & 0x3F);
    i += 1 + static_cast<std::size_t>(extra);
    return cp;
}

// NFC composition for the Latin range: base ASCII letter + combining mark
// in U+0300..U+0327 -> precomposed codepoint where one exists. Text from
// PDF extraction is overwhelmingly precomposed already; this covers the
// decomposed stragglers without dragging in ICU.
inline char32_t compose_latin(char32_t base, char32_t mark) {
    struct Entry { char32_t base, mark, composed; };
    static constexpr Entry table[] = {
        {'A', 0x300, 0xC0}, {'A', 0x301, 0xC1}, {'A', 0x302, 0xC2}, {'A', 0x303, 0xC3},
        {'A', 0x308, 0xC4}, {'A', 0x30A, 0xC5}, {'C', 0x327, 0xC7}, {'E', 0x300, 0xC8},
        {'E', 0x301, 0xC9}, {'E', 0x302, 0xCA}, {'E', 0x308, 0xCB}, {'I', 0x300, 0xCC},
        {'I', 0x301, 0xCD}, {'I', 0x302, 0xCE}, {'I', 0x308, 0xCF}, {'N', 0x303, 0xD1},
        {'O', 0x300, 0xD2}, {'O', 0x301, 0xD3}, {'O', 0x302, 0xD4}, {'O', 0x303, 0xD5},
        {'O', 0x308, 0xD6}, {'U', 0x300, 0xD9}, {'U', 0x301, 0xDA}, {'U', 0x302, 0xDB},
        {'U', 0x308, 0xDC}, {'Y', 0x301, 0xDD}, {'a', 0x300, 0xE0}, {'a', 0x301, 0xE1},
        {'a', 0x302, 0xE2}, {'a', 0x303, 0xE3}, {'a', 0x308, 0xE4}, {'a', 0x30A, 0xE5},
        {'c', 0x327, 0xE7}, {'e', 0x300, 0xE8}, {'e', 0x301, 0xE9}, {'e', 0x302, 0xEA},
        {'e', 0x308, 0xEB}, {'i', 0x300, 0xEC}, {'i', 0x301, 0xED}, {'i', 0x302, 0xEE},
        {'i', 0x308, 0xEF}, {'n', 0x303, 0xF1}, {'o', 0x300, 0xF2}, {'o', 0x301, 0xF3},
        {'o', 0x302, 0xF4}, {'o', 0x303, 0xF5}, {'o', 0x308, 0xF6}, {'u', 0x300, 0xF9},
        {'u', 0x301, 0xFA}, {'u', 0x302, 0xFB}, {'u', 0x308, 0xFC}, {'y', 0x301, 0xFD},
        {'y', 0x308, 0xFF},
    };
    for (const auto& e : table)
        if (e.base == base && e.mark == mark) return e.composed;
    return 0;
}

} // namespace detail

// Unicode-NFC (Latin subset) + whitespace collapse + end-of-line hyphen
// joining. Idempotent and total.
inline std::string normalize_text(std::string_view raw) {
    // Pass 1: join "xy-\nzw" when both sides are alphabetic.
    std::string joined;
    joined.reserve(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        char c = raw[i];
        if (c == '-' && i > 0 && detail::is_alpha_byte(static_cast<unsigned char>(raw[i - 1]))) {
            std::size_t j = i + 1;
            bool saw_newline = false;
            while (j < raw.size() && detail::is_space_byte(static_cast<unsigned char>(raw[j]))) {
                if (raw[j] == '\n' || raw[j] == '\r') saw_newline = true;
                ++j;
            }
            if (saw_newline && j < raw.size() &&
                detail::is_alpha_byte(static_cast<unsigned char>(raw[j]))) {
                i = j - 1; // drop the hyphen and the line break
                continue;
            }
        }
        joined.push_back(c);
    }

    // Pass 2: compose combining marks, collapse whitespace, trim.
    std::string out;
    out.reserve(joined.size());
    bool pending_space = false;
    std::size_t i = 0;
    while (i < joined.size()) {
        char32_t cp = detail::decode_utf8(joined, i);
        if (cp < 0x80 && detail::is_space_byte(static_cast<unsigned char>(cp))) {
            pending_space = !out.empty();
            continue;
        }
        if (cp >= 0x300 && cp <= 0x36F && !out.empty() && !pending_space) {
            // try to compose with the previous ASCII letter
            char prev = out.back();
            if (detail::is_alpha_byte(static_cast<unsigned char>(prev)) &&
                static_cast<unsigned char>(prev) < 0x80) {
                if (char32_t composed = detail::compose_latin(static_cast<char32_t>(prev), cp)) {
                    out.pop_back();
                    detail::append_utf8(out, composed);
                    continue;
                }
            }
        }
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        detail::append_utf8(out, cp);
    }
    return out;
}

// Strips the separator punctuation that typically follows an inline marker
// ("Abstract— ...", "Keywords: ..."): em/en dashes, hyphen, colon, period.
inline std::string trim_leading_separators(std::string_view s) {
    std::size_t i = 0;
    while (i < s.size()) {
        if (detail::is_space_byte(static_cast<unsigned char>(s[i]))) { ++i; continue; }
        char c = s[i];
        if (c == '-' || c == ':' || c == '.') { ++i; continue; }
        if (s.substr(i).starts_with("—") || s.substr(i).starts_with("–")) {
            i += 3;
            continue;
        }
        break;
    }
    return std::string(s.substr(i));
}

namespace detail {

// A leading enumeration token like "7.", "VII.", "1)" or "A." before a
// heading word. Returns the number of characters to skip, 0 if none.
inline std::size_t enumeration_prefix_len(std::string_view s) {
    std::size_t i = 0;
    std::size_t digits = 0, romans = 0;
    while (i < s.size() && s[i] >= '0' && s[i] <= '9') { ++i; ++digits; }
    if (digits == 0) {
        while (i < s.size() && (s[i] == 'I' || s[i] == 'V' || s[i] == 'X' ||
                                s[i] == 'L' || s[i] == 'C')) { ++i; ++romans; }
        if (romans == 0 && i < s.size() && s[i] >= 'A' && s[i] <= 'Z') { ++i; romans = 1; }
    }
    if (digits == 0 && romans == 0) return 0;
    if (digits > 3 || romans > 6) return 0;
    if (i >= s.size() || (s[i] != '.' && s[i] != ')')) return 0;
    ++i;
    if (i >= s.size() || s[i] != ' ') return 0;
    while (i < s.size() && s[i] == ' ') ++i;
    return i;
}

// Longest marker that prefixes `text` at a span start, allowing one
// enumeration token before it ("8. References"). Returns (marker index,
// char offset) or nullopt.
inline std::optional<std::pair<std::size_t, std::size_t>>
match_marker(std::string_view text, const std::vector<std::string>& markers) {
    auto longest_at = [&](std::size_t off) -> std::optional<std::size_t> {
        std::optional<std::size_t> best;
        for (std::size_t m = 0; m < markers.size(); ++m) {
            if (text.substr(off).starts_with(markers[m]) &&
                (!best || markers[m].size() > markers[*best].size()))
                best = m;
        }
        return best;
    };
    if (auto m = longest_at(0)) return std::make_pair(*m, std::size_t{0});
    if (std::size_t skip = enumeration_prefix_len(text))
        if (auto m = longest_at(skip)) return std::make_pair(*m, skip);
    return std::nullopt;
}

} // namespace detail

// First hit in reading order within [search_from, search_to) whose span
// text starts with one of the marker strings. Absence is not an error.
inline std::optional<MarkerHit> locate_marker(const DocumentText& doc,
                                              const std::vector<std::string>& markers,
                                              std::size_t search_from,
                                              std::size_t search_to) {
    if (search_from > search_to || search_to > doc.spans.size())
        throw std::out_of_range("locate_marker: search range out of bounds");
    for (std::size_t i = search_from; i < search_to; ++i) {
        if (auto m = detail::match_marker(doc.spans[i].text, markers)) {
            return MarkerHit{markers[m->first], doc.spans[i].page, i, m->second};
        }
    }
    return std::nullopt;
}

struct InvalidRange : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Space-joined normalized text of the spans strictly between the two
// anchors. A nullopt `from` means document start, nullopt `to` means end.
// With include_from_remainder the from-span's text after the marker is
// prepended, leading separator punctuation trimmed.
inline std::string slice_text(const DocumentText& doc,
                              const std::optional<MarkerHit>& from,
                              const std::optional<MarkerHit>& to,
                              bool include_from_remainder = false) {
    std::size_t begin = from ? from->span_index + 1 : 0;
    std::size_t end = to ? to->span_index : doc.spans.size();
    if (from && to && from->span_index > to->span_index)
        throw InvalidRange("slice_text: from does not precede to");
    if (end > doc.spans.size()) throw InvalidRange("slice_text: anchor out of range");

    std::string out;
    if (include_from_remainder && from) {
        const std::string& t = doc.spans[from->span_index].text;
        std::size_t cut = from->char_offset + from->marker.size();
        // a marker that matched mid-word ("Intro" in "Introduction") owns
        // the rest of that word
        auto is_word = [](char c) {
            return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9');
        };
        while (cut < t.size() && is_word(t[cut])) ++cut;
        if (cut < t.size()) out = trim_leading_separators(std::string_view(t).substr(cut));
    }
    for (std::size_t i = begin; i < end && i < doc.spans.size(); ++i) {
        if (!out.empty()) out.push_back(' ');
        out += doc.spans[i].text;
    }
    return normalize_text(out);
}

} // namespace metex

#endif // METEX_CORE_HPP
