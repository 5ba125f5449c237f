#ifndef METEX_PDF_HPP
#define METEX_PDF_HPP

#include <cctype>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <zlib.h>

#include "metex/core.hpp"

// Minimal PDF text-extraction backend. Scope: unencrypted PDFs with classic
// indirect objects, Flate/ASCII85 stream filters and simple-font text
// operators (Tf/Td/TD/Tm/T*/TL/Tj/TJ/'/"). That covers the output of the
// common report generators; anything fancier is routed to manual review via
// UnreadablePdf.

namespace metex {

struct UnreadablePdf : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NoTextContent : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace pdf_detail {

struct Object;
using ObjectPtr = std::shared_ptr<Object>;
using Dict = std::map<std::string, ObjectPtr>;
using Array = std::vector<ObjectPtr>;

struct Ref {
    int num = 0, gen = 0;
    bool operator<(const Ref& o) const { return std::tie(num, gen) < std::tie(o.num, o.gen); }
};

struct Object {
    // monostate = null
    std::variant<std::monostate, bool, double, std::string /*string*/, Dict, Array, Ref> v;
    std::string name;   // set when the object is a /Name
    bool is_name = false;
    std::string stream; // raw stream bytes when this is a stream object

    bool is_dict() const { return std::holds_alternative<Dict>(v); }
    bool is_array() const { return std::holds_alternative<Array>(v); }
    bool is_number() const { return std::holds_alternative<double>(v); }
    bool is_ref() const { return std::holds_alternative<Ref>(v); }
};

inline bool is_ws(unsigned char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == 0;
}
inline bool is_delim(unsigned char c) {
    return c == '(' || c == ')' || c == '<' || c == '>' || c == '[' || c == ']' ||
           c == '{' || c == '}' || c == '/' || c == '%';
}

// Tokenizer/parser over a byte range; used both for indirect objects and
// for content streams.
class Lexer {
public:
    Lexer(std::string_view data, std::size_t pos = 0) : data_(data), pos_(pos) {}

    std::size_t pos() const { return pos_; }
    void seek(std::size_t p) { pos_ = p; }
    bool eof() { skip_ws(); return pos_ >= data_.size(); }

    void skip_ws() {
        while (pos_ < data_.size()) {
            unsigned char c = data_[pos_];
            if (is_ws(c)) { ++pos_; continue; }
            if (c == '%') { // comment to end of line
                while (pos_ < data_.size() && data_[pos_] != '\n' && data_[pos_] != '\r') ++pos_;
                continue;
            }
            break;
        }
    }

    // Next raw token: name (/X), number, string literal, hex string, dict or
    // array delimiters, or a bare keyword.
    std::string next_token() {
        skip_ws();
        if (pos_ >= data_.size()) return {};
        unsigned char c = data_[pos_];
        if (c == '<' && pos_ + 1 < data_.size() && data_[pos_ + 1] == '<') { pos_ += 2; return "<<"; }
        if (c == '>' && pos_ + 1 < data_.size() && data_[pos_ + 1] == '>') { pos_ += 2; return ">>"; }
        if (c == '[' || c == ']' || c == '{' || c == '}') { ++pos_; return std::string(1, char(c)); }
        if (c == '/') {
            std::size_t start = pos_++;
            while (pos_ < data_.size() && !is_ws(data_[pos_]) && !is_delim(data_[pos_])) ++pos_;
            return std::string(data_.substr(start, pos_ - start));
        }
        if (c == '(') return read_string_literal();
        if (c == '<') return read_hex_string();
        std::size_t start = pos_;
        while (pos_ < data_.size() && !is_ws(data_[pos_]) && !is_delim(data_[pos_])) ++pos_;
        if (pos_ == start) ++pos_; // lone delimiter, consume to make progress
        return std::string(data_.substr(start, pos_ - start));
    }

    // Parses a full object starting at the current position. String-valued
    // tokens starting with '(' sentinel are produced by read_string_literal.
    ObjectPtr parse_object() {
        skip_ws();
        std::size_t save = pos_;
        std::string tok = next_token();
        return parse_from_token(tok, save);
    }

    ObjectPtr parse_from_token(const std::string& tok, std::size_t tok_start) {
        auto obj = std::make_shared<Object>();
        if (tok.empty()) return obj;
        if (tok == "<<") {
            Dict d;
            while (true) {
                skip_ws();
                std::string key = next_token();
                if (key.empty() || key == ">>") break;
                if (key[0] != '/') continue; // skip junk
                d[key.substr(1)] = parse_object();
            }
            obj->v = std::move(d);
            return obj;
        }
        if (tok == "[") {
            Array a;
            while (true) {
                skip_ws();
                std::size_t save = pos_;
                std::string t = next_token();
                if (t.empty() || t == "]") break;
                a.push_back(parse_from_token(t, save));
            }
            obj->v = std::move(a);
            return obj;
        }
        if (tok[0] == '/') {
            obj->is_name = true;
            obj->name = tok.substr(1);
            return obj;
        }
        if (tok[0] == '\x01') { // decoded string sentinel
            obj->v = tok.substr(1);
            return obj;
        }
        if (tok == "true") { obj->v = true; return obj; }
        if (tok == "false") { obj->v = false; return obj; }
        if (tok == "null") return obj;
        // number, possibly an indirect reference "N G R"
        char* endp = nullptr;
        double num = std::strtod(tok.c_str(), &endp);
        if (endp != tok.c_str()) {
            skip_ws();
            std::size_t p2 = pos_;
            std::string t2 = next_token();
            if (!t2.empty() && std::isdigit(static_cast<unsigned char>(t2[0]))) {
                std::string t3 = next_token();
                if (t3 == "R") {
                    obj->v = Ref{static_cast<int>(num), std::stoi(t2)};
                    return obj;
                }
            }
            pos_ = p2;
            obj->v = num;
            return obj;
        }
        (void)tok_start;
        return obj; // unknown keyword -> null
    }

private:
    std::string read_string_literal() {
        // pos_ at '('; returns "\x01" + decoded bytes
        std::string out = "\x01";
        ++pos_;
        int depth = 1;
        while (pos_ < data_.size() && depth > 0) {
            char c = data_[pos_++];
            if (c == '\\') {
                if (pos_ >= data_.size()) break;
                char e = data_[pos_++];
                switch (e) {
                    case 'n': out.push_back('\n'); break;
                    case 'r': out.push_back('\r'); break;
                    case 't': out.push_back('\t'); break;
                    case 'b': out.push_back('\b'); break;
                    case 'f': out.push_back('\f'); break;
                    case '\r':
                        if (pos_ < data_.size() && data_[pos_] == '\n') ++pos_;
                        break; // line continuation
                    case '\n': break;
                    default:
                        if (e >= '0' && e <= '7') {
                            int val = e - '0';
                            for (int k = 0; k < 2 && pos_ < data_.size() &&
                                            data_[pos_] >= '0' && data_[pos_] <= '7'; ++k)
                                val = val * 8 + (data_[pos_++] - '0');
                            out.push_back(static_cast<char>(val));
                        } else {
                            out.push_back(e);
                        }
                }
                continue;
            }
            if (c == '(') { ++depth; out.push_back(c); continue; }
            if (c == ')') { if (--depth > 0) out.push_back(c); continue; }
            out.push_back(c);
        }
        return out;
    }

    std::string read_hex_string() {
        std::string out = "\x01";
        ++pos_; // '<'
        int hi = -1;
        while (pos_ < data_.size() && data_[pos_] != '>') {
            char c = data_[pos_++];
            int v;
            if (c >= '0' && c <= '9') v = c - '0';
            else if (c >= 'a' && c <= 'f') v = c - 'a' + 10;
            else if (c >= 'A' && c <= 'F') v = c - 'A' + 10;
            else continue;
            if (hi < 0) hi = v;
            else { out.push_back(static_cast<char>(hi * 16 + v)); hi = -1; }
        }
        if (hi >= 0) out.push_back(static_cast<char>(hi * 16));
        if (pos_ < data_.size()) ++pos_; // '>'
        return out;
    }

    std::string_view data_;
    std::size_t pos_ = 0;
};

inline std::string flate_decode(const std::string& in) {
    z_stream zs{};
    if (inflateInit(&zs) != Z_OK) throw UnreadablePdf("zlib init failed");
    std::string out;
    out.resize(std::max<std::size_t>(in.size() * 4, 4096));
    zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(in.data()));
    zs.avail_in = static_cast<uInt>(in.size());
    std::size_t written = 0;
    int ret = Z_OK;
    while (ret != Z_STREAM_END) {
        if (written == out.size()) out.resize(out.size() * 2);
        zs.next_out = reinterpret_cast<Bytef*>(out.data() + written);
        zs.avail_out = static_cast<uInt>(out.size() - written);
        ret = inflate(&zs, Z_NO_FLUSH);
        written = out.size() - zs.avail_out;
        if (ret == Z_BUF_ERROR && zs.avail_in == 0) break;
        if (ret != Z_OK && ret != Z_STREAM_END) {
            inflateEnd(&zs);
            throw UnreadablePdf("corrupt flate stream");
        }
    }
    inflateEnd(&zs);
    out.resize(written);
    return out;
}

inline std::string ascii85_decode(const std::string& in) {
    std::string out;
    out.reserve(in.size() * 4 / 5);
    std::uint32_t tuple = 0;
    int count = 0;
    for (std::size_t i = 0; i < in.size(); ++i) {
        char c = in[i];
        if (is_ws(static_cast<unsigned char>(c))) continue;
        if (c == '~') break; // "~>" terminator
        if (c == 'z' && count == 0) { out.append(4, '\0'); continue; }
        if (c < '!' || c > 'u') throw UnreadablePdf("bad ascii85 byte");
        tuple = tuple * 85 + static_cast<std::uint32_t>(c - '!');
        if (++count == 5) {
            for (int k = 3; k >= 0; --k) out.push_back(static_cast<char>((tuple >> (8 * k)) & 0xFF));
            tuple = 0;
            count = 0;
        }
    }
    if (count > 0) {
        for (int k = count; k < 5; ++k) tuple = tuple * 85 + 84;
        for (int k = 3; k >= 4 - (count - 1); --k)
            out.push_back(static_cast<char>((tuple >> (8 * k)) & 0xFF));
    }
    return out;
}

// WinAnsi/Latin-1 bytes -> UTF-8.
inline std::string latin1_to_utf8(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (unsigned char c : s) {
        if (c < 0x80) out.push_back(static_cast<char>(c));
        else metex::detail::append_utf8(out, c);
    }
    return out;
}

class Document {
public:
    explicit Document(std::string bytes) : bytes_(std::move(bytes)) {
        if (bytes_.size() < 8 || bytes_.compare(0, 5, "%PDF-") != 0)
            throw UnreadablePdf("missing %PDF header");
        scan_objects();
        if (objects_.empty()) throw UnreadablePdf("no indirect objects found");
        check_not_encrypted();
    }

    ObjectPtr resolve(const ObjectPtr& o) const {
        ObjectPtr cur = o;
        int hops = 0;
        while (cur && cur->is_ref() && hops++ < 32) {
            auto it = objects_.find(std::get<Ref>(cur->v));
            if (it == objects_.end()) {
                // generation mismatch fallback: match on number only
                for (const auto& [ref, obj] : objects_)
                    if (ref.num == std::get<Ref>(cur->v).num) return obj;
                return nullptr;
            }
            cur = it->second;
        }
        return cur;
    }

    ObjectPtr dict_get(const Dict& d, const std::string& key) const {
        auto it = d.find(key);
        return it == d.end() ? nullptr : resolve(it->second);
    }

    // Ordered leaf page objects of the page tree.
    std::vector<ObjectPtr> pages() const {
        ObjectPtr root;
        for (const auto& [ref, obj] : objects_) {
            if (!obj->is_dict()) continue;
            auto it = std::get<Dict>(obj->v).find("Type");
            if (it != std::get<Dict>(obj->v).end() && it->second->is_name &&
                it->second->name == "Catalog") {
                root = dict_get(std::get<Dict>(obj->v), "Pages");
                break;
            }
        }
        std::vector<ObjectPtr> out;
        std::set<const Object*> seen;
        collect_pages(root, out, seen);
        if (out.empty()) throw UnreadablePdf("no pages in document");
        return out;
    }

    std::string page_content(const ObjectPtr& page) const {
        const Dict& d = std::get<Dict>(page->v);
        ObjectPtr contents = dict_get(d, "Contents");
        std::string out;
        if (!contents) return out;
        if (contents->is_array()) {
            for (const auto& part : std::get<Array>(contents->v)) {
                ObjectPtr s = resolve(part);
                if (s) out += decode_stream(*s) + "\n";
            }
        } else {
            out = decode_stream(*contents);
        }
        return out;
    }

    // Inheritable page attribute (Resources, MediaBox live on Pages nodes).
    ObjectPtr page_attr(const ObjectPtr& page, const std::string& key) const {
        ObjectPtr cur = page;
        int hops = 0;
        while (cur && cur->is_dict() && hops++ < 64) {
            if (ObjectPtr v = dict_get(std::get<Dict>(cur->v), key)) return v;
            cur = dict_get(std::get<Dict>(cur->v), "Parent");
        }
        return nullptr;
    }

    // font resource name (without slash) -> BaseFont name
    std::map<std::string, std::string> page_fonts(const ObjectPtr& page) const {
        std::map<std::string, std::string> out;
        ObjectPtr res = page_attr(page, "Resources");
        if (!res || !res->is_dict()) return out;
        ObjectPtr fonts = dict_get(std::get<Dict>(res->v), "Font");
        if (!fonts || !fonts->is_dict()) return out;
        for (const auto& [name, ref] : std::get<Dict>(fonts->v)) {
            ObjectPtr f = resolve(ref);
            if (!f || !f->is_dict()) continue;
            ObjectPtr base = dict_get(std::get<Dict>(f->v), "BaseFont");
            out[name] = base && base->is_name ? base->name : name;
        }
        return out;
    }

    double page_height(const ObjectPtr& page) const {
        ObjectPtr mb = page_attr(page, "MediaBox");
        if (mb && mb->is_array() && std::get<Array>(mb->v).size() == 4) {
            const Array& a = std::get<Array>(mb->v);
            ObjectPtr y0 = resolve(a[1]), y1 = resolve(a[3]);
            if (y0 && y1 && y0->is_number() && y1->is_number())
                return std::get<double>(y1->v) - std::get<double>(y0->v);
        }
        return 792.0; // letter default
    }

    std::string decode_stream(const Object& obj) const {
        if (!obj.is_dict()) return {};
        std::string data = obj.stream;
        const Dict& d = std::get<Dict>(obj.v);
        ObjectPtr len = dict_get(d, "Length");
        if (len && len->is_number()) {
            auto n = static_cast<std::size_t>(std::get<double>(len->v));
            if (n <= data.size()) data.resize(n);
        }
        std::vector<std::string> filters;
        auto it = d.find("Filter");
        if (it != d.end()) {
            ObjectPtr f = resolve(it->second);
            if (f && f->is_name) filters.push_back(f->name);
            else if (f && f->is_array())
                for (const auto& e : std::get<Array>(f->v)) {
                    ObjectPtr fe = resolve(e);
                    if (fe && fe->is_name) filters.push_back(fe->name);
                }
        }
        for (const std::string& f : filters) {
            if (f == "FlateDecode" || f == "Fl") data = flate_decode(data);
            else if (f == "ASCII85Decode" || f == "A85") data = ascii85_decode(data);
            else if (f == "ASCIIHexDecode") data = ascii_hex_decode(data);
            else throw UnreadablePdf("unsupported stream filter /" + f);
        }
        return data;
    }

private:
    static std::string ascii_hex_decode(const std::string& in) {
        std::string out;
        int hi = -1;
        for (char c : in) {
            if (c == '>') break;
            int v;
            if (c >= '0' && c <= '9') v = c - '0';
            else if (c >= 'a' && c <= 'f') v = c - 'a' + 10;
            else if (c >= 'A' && c <= 'F') v = c - 'A' + 10;
            else continue;
            if (hi < 0) hi = v;
            else { out.push_back(static_cast<char>(hi * 16 + v)); hi = -1; }
        }
        if (hi >= 0) out.push_back(static_cast<char>(hi * 16));
        return out;
    }

    void scan_objects() {
        // Scan for "N G obj ... endobj" directly; sidesteps xref parsing and
        // tolerates mildly damaged tables.
        std::size_t pos = 0;
        while (true) {
            std::size_t at = bytes_.find(" obj", pos);
            std::size_t at2 = bytes_.find("\nobj", pos);
            at = std::min(at, at2);
            if (at == std::string::npos) break;
            // backtrack over "N G"
            std::size_t p = at;
            while (p > 0 && is_ws(static_cast<unsigned char>(bytes_[p - 1]))) --p;
            std::size_t gen_end = p;
            while (p > 0 && std::isdigit(static_cast<unsigned char>(bytes_[p - 1]))) --p;
            std::size_t gen_start = p;
            while (p > 0 && is_ws(static_cast<unsigned char>(bytes_[p - 1]))) --p;
            std::size_t num_end = p;
            while (p > 0 && std::isdigit(static_cast<unsigned char>(bytes_[p - 1]))) --p;
            std::size_t num_start = p;
            if (num_start == num_end || gen_start == gen_end) { pos = at + 4; continue; }

            std::size_t body = at + 4;
            std::size_t end = bytes_.find("endobj", body);
            if (end == std::string::npos) end = bytes_.size();

            Ref ref{std::stoi(bytes_.substr(num_start, num_end - num_start)),
                    std::stoi(bytes_.substr(gen_start, gen_end - gen_start))};
            Lexer lex(std::string_view(bytes_).substr(0, end), body);
            ObjectPtr obj = lex.parse_object();

            // stream payload, if any
            std::size_t sp = bytes_.find("stream", body);
            if (sp != std::string::npos && sp < end) {
                std::size_t data_start = sp + 6;
                if (data_start < bytes_.size() && bytes_[data_start] == '\r') ++data_start;
                if (data_start < bytes_.size() && bytes_[data_start] == '\n') ++data_start;
                std::size_t data_end = bytes_.find("endstream", data_start);
                if (data_end == std::string::npos || data_end > end) data_end = end;
                obj->stream = bytes_.substr(data_start, data_end - data_start);
                while (!obj->stream.empty() &&
                       (obj->stream.back() == '\n' || obj->stream.back() == '\r'))
                    obj->stream.pop_back();
            }
            objects_[ref] = obj;
            pos = end + 6;
        }
    }

    void check_not_encrypted() const {
        std::size_t t = bytes_.rfind("trailer");
        if (t != std::string::npos && bytes_.find("/Encrypt", t) != std::string::npos)
            throw UnreadablePdf("encrypted document");
    }

    void collect_pages(const ObjectPtr& node, std::vector<ObjectPtr>& out,
                       std::set<const Object*>& seen) const {
        if (!node || !node->is_dict() || seen.count(node.get())) return;
        seen.insert(node.get());
        const Dict& d = std::get<Dict>(node->v);
        auto type_it = d.find("Type");
        std::string type = (type_it != d.end() && type_it->second->is_name)
                               ? type_it->second->name : "";
        if (type == "Page") { out.push_back(node); return; }
        ObjectPtr kids = dict_get(d, "Kids");
        if (kids && kids->is_array())
            for (const auto& k : std::get<Array>(kids->v)) collect_pages(resolve(k), out, seen);
    }

    std::string bytes_;
    std::map<Ref, ObjectPtr> objects_;
};

struct TextChunk {
    double x = 0, y = 0; // text-space baseline position (PDF y grows upward)
    std::string font;
    double size = 0;
    std::string text;
};

// Runs the text operators of one content stream and collects positioned
// chunks. Graphics state beyond the text matrix translation is ignored.
inline std::vector<TextChunk> run_content(const std::string& content,
                                          const std::map<std::string, std::string>& fonts) {
    std::vector<TextChunk> chunks;
    Lexer lex(content);
    std::vector<ObjectPtr> stack; // operands
    std::string cur_font;
    double cur_size = 0, leading = 0;
    double tx = 0, ty = 0;       // current text position
    double lx = 0, ly = 0;       // line start

    auto num = [&](std::size_t idx_from_end) -> double {
        if (stack.size() < idx_from_end + 1) return 0;
        const ObjectPtr& o = stack[stack.size() - 1 - idx_from_end];
        return o->is_number() ? std::get<double>(o->v) : 0;
    };
    auto show = [&](const std::string& raw) {
        if (raw.empty() || cur_size <= 0) return;
        chunks.push_back({tx, ty, cur_font, cur_size, latin1_to_utf8(raw)});
    };

    while (!lex.eof()) {
        std::size_t save = lex.pos();
        std::string tok = lex.next_token();
        if (tok.empty()) break;
        bool operand = tok == "<<" || tok == "[" || tok[0] == '/' || tok[0] == '\x01' ||
                       tok == "true" || tok == "false" || tok == "null" ||
                       (std::strtod(tok.c_str(), nullptr) != 0) || tok == "0" ||
                       tok == "0.0" || (!tok.empty() && (std::isdigit(static_cast<unsigned char>(tok[0])) ||
                        tok[0] == '-' || tok[0] == '+' || tok[0] == '.'));
        if (operand) {
            lex.seek(save);
            Lexer sub(content, save);
            stack.push_back(sub.parse_object());
            lex.seek(sub.pos());
            continue;
        }
        // operator
        if (tok == "BT") { tx = ty = lx = ly = 0; }
        else if (tok == "Tf") {
            cur_size = num(0);
            if (stack.size() >= 2 && stack[stack.size() - 2]->is_name) {
                const std::string& res = stack[stack.size() - 2]->name;
                auto it = fonts.find("/" + res);
                if (it == fonts.end()) it = fonts.find(res);
                cur_font = it != fonts.end() ? it->second : res;
            }
        }
        else if (tok == "TL") { leading = num(0); }
        else if (tok == "Td") { lx += num(1); ly += num(0); tx = lx; ty = ly; }
        else if (tok == "TD") { leading = -num(0); lx += num(1); ly += num(0); tx = lx; ty = ly; }
        else if (tok == "Tm") { lx = num(1); ly = num(0); tx = lx; ty = ly; }
        else if (tok == "T*") { ly -= leading; tx = lx; ty = ly; }
        else if (tok == "Tj") {
            if (!stack.empty() && std::holds_alternative<std::string>(stack.back()->v))
                show(std::get<std::string>(stack.back()->v));
        }
        else if (tok == "'") {
            ly -= leading; tx = lx; ty = ly;
            if (!stack.empty() && std::holds_alternative<std::string>(stack.back()->v))
                show(std::get<std::string>(stack.back()->v));
        }
        else if (tok == "\"") {
            ly -= leading; tx = lx; ty = ly;
            if (!stack.empty() && std::holds_alternative<std::string>(stack.back()->v))
                show(std::get<std::string>(stack.back()->v));
        }
        else if (tok == "TJ") {
            if (!stack.empty() && stack.back()->is_array()) {
                std::string joined;
                for (const auto& e : std::get<Array>(stack.back()->v))
                    if (std::holds_alternative<std::string>(e->v))
                        joined += std::get<std::string>(e->v);
                show(joined);
            }
        }
        if (!tok.empty() && tok != "BT") stack.clear();
        if (tok == "BT") stack.clear();
    }
    return chunks;
}

} // namespace pdf_detail

inline bool font_name_is_bold(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return lower.find("bold") != std::string::npos ||
           lower.find("black") != std::string::npos ||
           lower.find("heavy") != std::string::npos;
}

inline DocumentText document_text_from_pdf_bytes(std::string bytes, std::string doc_id) {
    pdf_detail::Document pdf(std::move(bytes));
    auto pages = pdf.pages();

    DocumentText doc;
    doc.doc_id = std::move(doc_id);
    doc.page_count = static_cast<int>(pages.size());

    for (std::size_t pi = 0; pi < pages.size(); ++pi) {
        auto fonts = pdf.page_fonts(pages[pi]);
        double height = pdf.page_height(pages[pi]);
        auto chunks = pdf_detail::run_content(pdf.page_content(pages[pi]), fonts);

        // reading order: top-to-bottom, then left-to-right
        std::stable_sort(chunks.begin(), chunks.end(),
                         [height](const pdf_detail::TextChunk& a, const pdf_detail::TextChunk& b) {
                             double ya = height - a.y, yb = height - b.y;
                             if (std::abs(ya - yb) > 0.5) return ya < yb;
                             return a.x < b.x;
                         });

        int order = 0;
        for (std::size_t i = 0; i < chunks.size(); ++i) {
            // merge same-line chunks sharing font and size
            std::string text = chunks[i].text;
            std::size_t j = i;
            while (j + 1 < chunks.size() && std::abs(chunks[j + 1].y - chunks[i].y) <= 0.5 &&
                   chunks[j + 1].font == chunks[i].font &&
                   std::abs(chunks[j + 1].size - chunks[i].size) < 1e-6) {
                ++j;
                text += " " + chunks[j].text;
            }
            std::string norm = normalize_text(text);
            if (!norm.empty()) {
                TextSpan s;
                s.text = std::move(norm);
                s.page = static_cast<int>(pi + 1);
                s.order = order++;
                s.font_name = chunks[i].font;
                s.font_size = chunks[i].size;
                s.bold = font_name_is_bold(chunks[i].font);
                s.baseline_y = height - chunks[i].y;
                doc.spans.push_back(std::move(s));
            }
            i = j;
        }
    }
    if (doc.spans.empty()) throw NoTextContent("no extractable text: " + doc.doc_id);
    return doc;
}

inline DocumentText extract_document_text(const std::filesystem::path& pdf_path) {
    std::ifstream f(pdf_path, std::ios::binary);
    if (!f) throw UnreadablePdf("cannot open: " + pdf_path.string());
    std::ostringstream ss;
    ss << f.rdbuf();
    std::string bytes = ss.str();
    if (bytes.empty()) throw UnreadablePdf("empty file: " + pdf_path.string());
    return document_text_from_pdf_bytes(std::move(bytes), pdf_path.stem().string());
}

} // namespace metex

#endif // METEX_PDF_HPP
