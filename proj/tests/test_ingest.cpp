#include "doctest.h"

#include <filesystem>
#include <fstream>

#include "metex/ingest.hpp"
#include "test_util.hpp"

using namespace metex;
using test_util::make_doc;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
    return fs::temp_directory_path() / ("metex_ingest_" + name);
}

} // namespace

TEST_CASE("span file round-trips a small fixture") {
    auto doc = make_doc({{1, "Title", 18, true, "Times-Bold"},
                         {1, "Abstract"},
                         {2, "body text here"}},
                        3, "fix");
    auto path = temp_file("small.spans");
    save_span_file(doc, path);
    CHECK(load_span_file(path) == doc);
    fs::remove(path);
}

TEST_CASE("span file round-trips random documents (property)") {
    test_util::Rng rng(123);
    for (int iter = 0; iter < 200; ++iter) {
        auto doc = test_util::random_document(rng, "doc-" + std::to_string(iter));
        auto loaded = span_file_from_string(span_file_to_string(doc));
        CHECK(loaded == doc);
    }
}

TEST_CASE("span file output is byte-deterministic") {
    test_util::Rng rng(5);
    auto doc = test_util::random_document(rng, "d");
    CHECK(span_file_to_string(doc) == span_file_to_string(doc));
}

TEST_CASE("empty-span document serializes to the header line only") {
    DocumentText doc;
    doc.doc_id = "empty";
    doc.page_count = 2;
    CHECK(span_file_to_string(doc) == "empty\t2\n");
    CHECK(span_file_from_string("empty\t2\n") == doc);
}

TEST_CASE("one-span document serializes to header plus one record") {
    auto doc = make_doc({{1, "hello"}}, 1, "one");
    std::string text = span_file_to_string(doc);
    CHECK(std::count(text.begin(), text.end(), '\n') == 2);
}

TEST_CASE("malformed span files are rejected with a line number") {
    auto expect_line = [](const std::string& content, std::size_t line) {
        try {
            span_file_from_string(content);
            FAIL("expected MalformedSpanFile");
        } catch (const MalformedSpanFile& e) {
            CHECK(e.line_number == line);
        }
    };
    expect_line("d\t1\n1\t0\tF\t0\t0\t10\ttext\n", 2);   // font_size <= 0
    expect_line("d\t1\n1\t0\tF\t-2\t0\t10\ttext\n", 2);  // negative size
    expect_line("d\t1\nnot a record\n", 2);              // wrong column count
    expect_line("d\t0\n", 1);                            // bad page_count
    expect_line("", 1);                                  // missing header
    expect_line("d\t1\n2\t0\tF\t10\t0\t10\ttext\n", 2);  // page out of range
    expect_line("d\t2\n2\t0\tF\t10\t0\t10\ta\n1\t0\tF\t10\t0\t10\tb\n", 3); // unsorted
    expect_line("d\t1\n1\t0\tF\t10\t2\t10\ttext\n", 2);  // bold not 0/1
}

TEST_CASE("select_pages follows the 2/4 tail rule") {
    auto tail_of = [](int pages) {
        DocumentText doc;
        doc.doc_id = "d";
        doc.page_count = pages;
        return select_pages(doc).tail_page_numbers;
    };
    CHECK(tail_of(6) == std::vector<int>{5, 6});
    CHECK(tail_of(12) == std::vector<int>{9, 10, 11, 12});
    CHECK(tail_of(1) == std::vector<int>{});
    CHECK(tail_of(2) == std::vector<int>{2});
    CHECK(tail_of(7) == std::vector<int>{6, 7});
    CHECK(tail_of(8) == std::vector<int>{5, 6, 7, 8});
}

TEST_CASE("select_pages tail is a suffix disjoint from page 1, size <= 4") {
    for (int pages = 1; pages <= 50; ++pages) {
        DocumentText doc;
        doc.doc_id = "d";
        doc.page_count = pages;
        auto sel = select_pages(doc);
        CHECK(sel.tail_page_numbers.size() <= 4);
        int expect = pages;
        for (auto it = sel.tail_page_numbers.rbegin(); it != sel.tail_page_numbers.rend(); ++it)
            CHECK(*it == expect--);
        for (int p : sel.tail_page_numbers) CHECK(p > 1);
    }
}

TEST_CASE("select_pages splits spans and records global offsets") {
    auto doc = make_doc({{1, "a"}, {1, "b"}, {2, "c"}, {5, "d"}, {6, "e"}}, 6);
    auto sel = select_pages(doc);
    CHECK(sel.first_page_spans.size() == 2);
    CHECK(sel.first_page_end == 2);
    CHECK(sel.tail_page_numbers == std::vector<int>{5, 6});
    CHECK(sel.tail_spans.size() == 2);
    CHECK(sel.tail_begin == 3);
}

TEST_CASE("select_pages honors configured tail counts") {
    DocumentText doc;
    doc.doc_id = "d";
    doc.page_count = 10;
    PageSelection rule;
    rule.long_tail_pages = 6; // architecture-prose variant
    auto sel = select_pages(doc, rule);
    CHECK(sel.tail_page_numbers == std::vector<int>{5, 6, 7, 8, 9, 10});
}
