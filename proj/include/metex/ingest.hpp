#ifndef METEX_INGEST_HPP
#define METEX_INGEST_HPP

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "metex/core.hpp"

// DocumentText ingestion: the span-interchange file format and the
// page-selection rule that picks which pages the field rules see.

namespace metex {

struct SelectedText {
    std::string doc_id;
    std::vector<TextSpan> first_page_spans;
    std::vector<TextSpan> tail_spans;
    std::vector<int> tail_page_numbers;
    // Global index boundaries into the source DocumentText.spans, so the
    // extractor can anchor marker searches on the full document.
    std::size_t first_page_end = 0; // spans[0, first_page_end) are page 1
    std::size_t tail_begin = 0;     // spans[tail_begin, size) are the tail
};

struct PageSelection {
    int short_tail_pages = 2; // page_count <= threshold
    int long_tail_pages = 4;  // page_count > threshold
    int page_threshold = 7;
};

inline SelectedText select_pages(const DocumentText& doc,
                                 const PageSelection& rule = {}) {
    if (doc.page_count < 1) throw std::invalid_argument("select_pages: empty document");
    SelectedText sel;
    sel.doc_id = doc.doc_id;

    int tail_count = doc.page_count <= rule.page_threshold ? rule.short_tail_pages
                                                           : rule.long_tail_pages;
    tail_count = std::min(tail_count, doc.page_count - 1); // never re-include page 1
    int tail_first = doc.page_count - tail_count + 1;
    for (int p = tail_first; p <= doc.page_count; ++p) sel.tail_page_numbers.push_back(p);

    sel.first_page_end = doc.spans.size();
    sel.tail_begin = doc.spans.size();
    for (std::size_t i = 0; i < doc.spans.size(); ++i) {
        const TextSpan& s = doc.spans[i];
        if (s.page == 1) {
            sel.first_page_spans.push_back(s);
            sel.first_page_end = i + 1;
        }
        if (tail_count > 0 && s.page >= tail_first) {
            if (sel.tail_spans.empty()) sel.tail_begin = i;
            sel.tail_spans.push_back(s);
        }
    }
    if (sel.first_page_spans.empty()) sel.first_page_end = 0;
    return sel;
}

struct MalformedSpanFile : std::runtime_error {
    MalformedSpanFile(const std::string& path, std::size_t line, const std::string& what)
        : std::runtime_error(path + ":" + std::to_string(line) + ": " + what),
          line_number(line) {}
    std::size_t line_number;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string escape_field(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        if (c == '\\') out += "\\\\";
        else if (c == '\t') out += "\\t";
        else if (c == '\n') out += "\\n";
        else out.push_back(c);
    }
    return out;
}

inline std::string unescape_field(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '\\' && i + 1 < s.size()) {
            char n = s[++i];
            if (n == 't') out.push_back('\t');
            else if (n == 'n') out.push_back('\n');
            else out.push_back(n);
        } else {
            out.push_back(s[i]);
        }
    }
    return out;
}

inline std::string format_double(double v) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, end);
}

inline std::vector<std::string_view> split_tabs(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == '\t') {
            out.push_back(line.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

} // namespace detail

// Serializes to the span-interchange format: header `doc_id<TAB>page_count`,
// then one `page order font_name font_size bold baseline_y text` record per
// span, tab separated, text backslash-escaped. Byte-deterministic.
inline std::string span_file_to_string(const DocumentText& doc) {
    std::string out = detail::escape_field(doc.doc_id) + "\t" +
                      std::to_string(doc.page_count) + "\n";
    for (const TextSpan& s : doc.spans) {
        out += std::to_string(s.page);
        out += '\t';
        out += std::to_string(s.order);
        out += '\t';
        out += detail::escape_field(s.font_name);
        out += '\t';
        out += detail::format_double(s.font_size);
        out += '\t';
        out += s.bold ? '1' : '0';
        out += '\t';
        out += detail::format_double(s.baseline_y);
        out += '\t';
        out += detail::escape_field(s.text);
        out += '\n';
    }
    return out;
}

inline void save_span_file(const DocumentText& doc, const std::filesystem::path& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open for writing: " + path.string());
    f << span_file_to_string(doc);
    if (!f) throw IoError("write failed: " + path.string());
}

inline DocumentText span_file_from_string(const std::string& content,
                                          const std::string& origin = "<string>") {
    DocumentText doc;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    int last_page = 0, last_order = -1;
    while (pos <= content.size()) {
        std::size_t nl = content.find('\n', pos);
        if (nl == std::string::npos) nl = content.size();
        std::string_view line(content.data() + pos, nl - pos);
        pos = nl + 1;
        ++line_no;
        if (line.empty() && pos > content.size()) break;
        if (line.empty()) continue;

        auto cols = detail::split_tabs(line);
        if (line_no == 1) {
            if (cols.size() != 2)
                throw MalformedSpanFile(origin, line_no, "header must be doc_id<TAB>page_count");
            doc.doc_id = detail::unescape_field(cols[0]);
            int pc = 0;
            auto r = std::from_chars(cols[1].data(), cols[1].data() + cols[1].size(), pc);
            if (r.ec != std::errc{} || pc < 1)
                throw MalformedSpanFile(origin, line_no, "bad page_count");
            doc.page_count = pc;
            continue;
        }
        if (cols.size() != 7)
            throw MalformedSpanFile(origin, line_no, "expected 7 tab-separated columns");
        TextSpan s;
        auto parse_int = [&](std::string_view v, const char* name) {
            int out = 0;
            auto r = std::from_chars(v.data(), v.data() + v.size(), out);
            if (r.ec != std::errc{} || r.ptr != v.data() + v.size())
                throw MalformedSpanFile(origin, line_no, std::string("bad ") + name);
            return out;
        };
        auto parse_double = [&](std::string_view v, const char* name) {
            double out = 0;
            auto r = std::from_chars(v.data(), v.data() + v.size(), out);
            if (r.ec != std::errc{} || r.ptr != v.data() + v.size())
                throw MalformedSpanFile(origin, line_no, std::string("bad ") + name);
            return out;
        };
        s.page = parse_int(cols[0], "page");
        s.order = parse_int(cols[1], "order");
        s.font_name = detail::unescape_field(cols[2]);
        s.font_size = parse_double(cols[3], "font_size");
        if (cols[4] != "0" && cols[4] != "1")
            throw MalformedSpanFile(origin, line_no, "bold must be 0 or 1");
        s.bold = cols[4] == "1";
        s.baseline_y = parse_double(cols[5], "baseline_y");
        s.text = detail::unescape_field(cols[6]);

        if (doc.page_count == 0)
            throw MalformedSpanFile(origin, line_no, "record before header");
        if (s.font_size <= 0)
            throw MalformedSpanFile(origin, line_no, "font_size must be positive");
        if (s.page < 1 || s.page > doc.page_count)
            throw MalformedSpanFile(origin, line_no, "page out of range");
        if (s.text.empty())
            throw MalformedSpanFile(origin, line_no, "empty span text");
        if (s.page < last_page || (s.page == last_page && s.order <= last_order))
            throw MalformedSpanFile(origin, line_no, "spans not sorted by (page, order)");
        last_page = s.page;
        last_order = s.order;
        doc.spans.push_back(std::move(s));
    }
    if (doc.page_count == 0)
        throw MalformedSpanFile(origin, 1, "missing header");
    return doc;
}

inline DocumentText load_span_file(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open: " + path.string());
    std::ostringstream ss;
    ss << f.rdbuf();
    return span_file_from_string(ss.str(), path.string());
}

} // namespace metex

#endif // METEX_INGEST_HPP
