#include "doctest.h"

#include "metex/extractor.hpp"
#include "metex/fixtures.hpp"
#include "test_util.hpp"

using namespace metex;
using test_util::make_doc;

namespace {

const MarkerConfig cfg = default_marker_config();

DocumentText article() {
    return make_doc({{1, "Deep Parsing", 18, true, "Times-Bold"},
                     {1, "J. Doe", 10},
                     {1, "Abstract", 12, true, "Times-Bold"},
                     {1, "We propose X.", 10},
                     {1, "Keywords: parsing; indexing", 10},
                     {1, "1. Introduction", 12, true, "Times-Bold"},
                     {1, "intro text starts here", 10},
                     {2, "body continues", 10},
                     {5, "7. Conclusion", 12, true, "Times-Bold"},
                     {5, "We built Y.", 10},
                     {6, "References", 12, true, "Times-Bold"},
                     {6, "[1] A. Author, Some Paper.", 10},
                     {6, "[2] B. Author, Other Paper.", 10}},
                    6);
}

} // namespace

TEST_CASE("extract_title: unique max-size bold span before the abstract marker") {
    auto doc = article();
    auto sel = select_pages(doc);
    auto [value, flag] = extract_title(doc, sel, cfg);
    CHECK(value.value == "Deep Parsing");
    CHECK(value.status == FieldStatus::Extracted);
    CHECK_FALSE(flag.has_value());
}

TEST_CASE("extract_title: non-bold title in strict mode is Missing with NotBold") {
    auto doc = make_doc({{1, "Deep Parsing", 18, false},
                         {1, "J. Doe", 10},
                         {1, "Abstract", 12}},
                        2);
    auto sel = select_pages(doc);
    auto [value, flag] = extract_title(doc, sel, cfg);
    CHECK(value.status == FieldStatus::Missing);
    CHECK(value.value.empty());
    REQUIRE(flag.has_value());
    CHECK(flag->reason == ReviewReason::NotBold);
    CHECK(flag->field == Field::Title);

    ExtractorOptions relaxed;
    relaxed.strict_title = false;
    auto [rvalue, rflag] = extract_title(doc, sel, cfg, relaxed);
    CHECK(rvalue.value == "Deep Parsing");
    CHECK(rvalue.status == FieldStatus::Extracted);
    REQUIRE(rflag.has_value());
    CHECK(rflag->reason == ReviewReason::NotBold);
}

TEST_CASE("extract_title: consecutive same-style max lines concatenate") {
    auto doc = make_doc({{1, "Rule Based Metadata", 18, true, "Times-Bold"},
                         {1, "Extraction Framework", 18, true, "Times-Bold"},
                         {1, "J. Doe", 10},
                         {1, "Abstract", 12}},
                        2);
    auto sel = select_pages(doc);
    auto [value, flag] = extract_title(doc, sel, cfg);
    CHECK(value.value == "Rule Based Metadata Extraction Framework");
    CHECK_FALSE(flag.has_value());

    // oracle: enumerate maximal same-style runs of max-size spans
    double max_size = 0;
    for (std::size_t i = 0; i < 2; ++i) max_size = std::max(max_size, doc.spans[i].font_size);
    std::string expect;
    for (std::size_t i = 0; i < doc.spans.size() && doc.spans[i].font_size == max_size; ++i) {
        if (!expect.empty()) expect.push_back(' ');
        expect += doc.spans[i].text;
    }
    CHECK(value.value == expect);
}

TEST_CASE("extract_title: ties prefer bold spans") {
    auto doc = make_doc({{1, "Banner", 18, false, "Helvetica"},
                         {1, "Real Title", 18, true, "Times-Bold"},
                         {1, "Abstract", 12}},
                        2);
    auto sel = select_pages(doc);
    auto [value, flag] = extract_title(doc, sel, cfg);
    CHECK(value.value == "Real Title");
}

TEST_CASE("extract_abstract: between abstract and keywords markers") {
    auto doc = article();
    auto sel = select_pages(doc);
    auto [value, flag] = extract_abstract(doc, sel, cfg);
    CHECK(value.value == "We propose X.");
    CHECK(value.status == FieldStatus::Extracted);
    CHECK_FALSE(flag.has_value());
}

TEST_CASE("extract_abstract: missing start marker") {
    auto doc = make_doc({{1, "Title", 18, true}, {1, "no markers here"}}, 2);
    auto sel = select_pages(doc);
    auto [value, flag] = extract_abstract(doc, sel, cfg);
    CHECK(value.status == FieldStatus::Missing);
    REQUIRE(flag.has_value());
    CHECK(flag->reason == ReviewReason::MissingStartMarker);
}

TEST_CASE("extract_abstract: inline marker with Index Terms end anchor") {
    auto doc = make_doc({{1, "Abstract— We propose X.", 10}, {1, "Index Terms—a, b", 10}}, 2);
    auto sel = select_pages(doc);
    auto [value, flag] = extract_abstract(doc, sel, cfg);
    CHECK(value.value == "We propose X.");
    CHECK_FALSE(flag.has_value());
}

TEST_CASE("extract_abstract: keywords absent falls back to intro with a flag") {
    auto doc = make_doc({{1, "Abstract"}, {1, "the abstract."}, {1, "1. Introduction"}}, 2);
    auto sel = select_pages(doc);
    auto [value, flag] = extract_abstract(doc, sel, cfg);
    CHECK(value.value == "the abstract.");
    CHECK(value.status == FieldStatus::Extracted);
    REQUIRE(flag.has_value());
    CHECK(flag->reason == ReviewReason::MissingEndMarker);
}

TEST_CASE("extract_keywords: value and split list") {
    auto doc = article();
    auto sel = select_pages(doc);
    auto [value, flag] = extract_keywords(doc, sel, cfg);
    CHECK(value.value == "parsing; indexing");
    CHECK_FALSE(flag.has_value());
    CHECK(split_keywords(value.value) == std::vector<std::string>{"parsing", "indexing"});
}

TEST_CASE("extract_keywords: missing marker") {
    auto doc = make_doc({{1, "Abstract"}, {1, "text"}, {1, "1. Introduction"}}, 2);
    auto sel = select_pages(doc);
    auto [value, flag] = extract_keywords(doc, sel, cfg);
    CHECK(value.status == FieldStatus::Missing);
    REQUIRE(flag.has_value());
    CHECK(flag->reason == ReviewReason::MissingStartMarker);
}

TEST_CASE("extract_keywords: Index Terms list of three") {
    auto doc = make_doc({{1, "Index Terms—A, B, C"}, {1, "I. INTRODUCTION"}}, 2);
    auto sel = select_pages(doc);
    auto [value, flag] = extract_keywords(doc, sel, cfg);
    CHECK(split_keywords(value.value) == std::vector<std::string>{"A", "B", "C"});
    CHECK_FALSE(flag.has_value());
}

TEST_CASE("split_keywords trims and drops empties") {
    CHECK(split_keywords("a, b; c") == std::vector<std::string>{"a", "b", "c"});
    CHECK(split_keywords(" a ,, b ") == std::vector<std::string>{"a", "b"});
    CHECK(split_keywords("") == std::vector<std::string>{});
}

TEST_CASE("extract_body_text: full-document window intro..conclusion") {
    auto doc = article();
    auto sel = select_pages(doc);
    auto [value, flag] = extract_body_text(doc, sel, cfg);
    CHECK(value.value == "intro text starts here body continues");
    CHECK_FALSE(flag.has_value());
}

TEST_CASE("extract_body_text: no intro marker anywhere") {
    auto doc = make_doc({{1, "Abstract"}, {1, "text"}, {2, "Conclusion"}}, 2);
    auto sel = select_pages(doc);
    auto [value, flag] = extract_body_text(doc, sel, cfg);
    CHECK(value.status == FieldStatus::Missing);
    REQUIRE(flag.has_value());
    CHECK(flag->reason == ReviewReason::MissingStartMarker);
}

TEST_CASE("extract_body_text: mid-sentence 'conclusion' is not an anchor") {
    auto doc = make_doc({{1, "1. Introduction"},
                         {1, "we reach the conclusion that parsing works"},
                         {2, "more body"},
                         {5, "Conclusions", 12, true},
                         {5, "done."},
                         {6, "References"},
                         {6, "[1] x"}},
                        6);
    auto sel = select_pages(doc);
    auto [value, flag] = extract_body_text(doc, sel, cfg);
    CHECK(value.value == "we reach the conclusion that parsing works more body");
    CHECK_FALSE(flag.has_value());
}

TEST_CASE("extract_conclusion: between conclusion and references in the tail") {
    auto doc = article();
    auto sel = select_pages(doc);
    auto [value, flag] = extract_conclusion(doc, sel, cfg);
    CHECK(value.value == "We built Y.");
    CHECK_FALSE(flag.has_value());
}

TEST_CASE("extract_conclusion: absent marker in the tail") {
    auto doc = make_doc({{1, "1. Introduction"}, {5, "tail text"}, {6, "References"}}, 6);
    auto sel = select_pages(doc);
    auto [value, flag] = extract_conclusion(doc, sel, cfg);
    CHECK(value.status == FieldStatus::Missing);
    REQUIRE(flag.has_value());
    CHECK(flag->reason == ReviewReason::MissingStartMarker);
}

TEST_CASE("extract_conclusion: earliest of references/acknowledgment ends the window") {
    auto doc = make_doc({{5, "Conclusion"},
                         {5, "wrap up."},
                         {5, "Acknowledgment"},
                         {5, "thanks everyone"},
                         {6, "References"},
                         {6, "[1] x"}},
                        6);
    auto sel = select_pages(doc);
    auto [value, flag] = extract_conclusion(doc, sel, cfg);
    CHECK(value.value == "wrap up.");
    CHECK_FALSE(flag.has_value());

    // positional-minimum oracle
    auto ref = locate_marker(doc, cfg.reference_markers, 1, doc.spans.size());
    auto ack = locate_marker(doc, cfg.acknowledgment_markers, 1, doc.spans.size());
    REQUIRE(ref);
    REQUIRE(ack);
    CHECK(ack->span_index < ref->span_index);
}

TEST_CASE("extract_references: everything after the marker") {
    auto doc = article();
    auto sel = select_pages(doc);
    auto [value, flag] = extract_references(doc, sel, cfg);
    CHECK(value.value == "[1] A. Author, Some Paper. [2] B. Author, Other Paper.");
    CHECK_FALSE(flag.has_value());
}

TEST_CASE("extract_references: marker on the last span yields Empty") {
    auto doc = make_doc({{5, "body"}, {6, "References"}}, 6);
    auto sel = select_pages(doc);
    auto [value, flag] = extract_references(doc, sel, cfg);
    CHECK(value.status == FieldStatus::Empty);
    CHECK(value.value.empty());
    REQUIRE(flag.has_value());
    CHECK(flag->reason == ReviewReason::EmptyWindow);
}

TEST_CASE("extract_references: the last marker hit wins") {
    auto doc = make_doc({{5, "References"},
                         {5, "see the references section below"},
                         {6, "References"},
                         {6, "[1] real entry"}},
                        6);
    auto sel = select_pages(doc);
    auto [value, flag] = extract_references(doc, sel, cfg);
    CHECK(value.value == "[1] real entry");

    // enumerate-all-hits oracle
    std::vector<std::size_t> hits;
    std::size_t from = sel.tail_begin;
    while (auto h = locate_marker(doc, cfg.reference_markers, from, doc.spans.size())) {
        hits.push_back(h->span_index);
        from = h->span_index + 1;
    }
    CHECK(hits == std::vector<std::size_t>{0, 2});
}

TEST_CASE("extract_all: happy path has six Extracted fields and no flags") {
    auto doc = article();
    auto [rec, flags] = extract_all(doc, cfg);
    for (Field f : kAllFields) CHECK(rec.field(f).status == FieldStatus::Extracted);
    CHECK(flags.empty());
}

TEST_CASE("extract_all: a missing keywords section flags exactly one field") {
    auto doc = make_doc({{1, "Deep Parsing", 18, true, "Times-Bold"},
                         {1, "Abstract"},
                         {1, "We propose X."},
                         {1, "1. Introduction"},
                         {1, "body here"},
                         {5, "Conclusion"},
                         {5, "done."},
                         {6, "References"},
                         {6, "[1] x"}},
                        6);
    auto [rec, flags] = extract_all(doc, cfg);
    CHECK(rec.keywords.status == FieldStatus::Missing);
    int extracted = 0;
    for (Field f : kAllFields)
        if (rec.field(f).status == FieldStatus::Extracted) ++extracted;
    CHECK(extracted == 5);
    // abstract end-anchor fallback also flags, by design
    REQUIRE(flags.size() == 2);
    CHECK(flags[0].field == Field::Abstract);
    CHECK(flags[0].reason == ReviewReason::MissingEndMarker);
    CHECK(flags[1].field == Field::Keywords);
    CHECK(flags[1].reason == ReviewReason::MissingStartMarker);
}

TEST_CASE("extract_all is deterministic") {
    auto doc = article();
    auto a = extract_all(doc, cfg);
    auto b = extract_all(doc, cfg);
    CHECK(a.first == b.first);
    CHECK(a.second == b.second);
}

TEST_CASE("every Missing/Empty status pairs with exactly one flag") {
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
        for (auto perturb : kAllPerturbations) {
            FixtureSpec spec;
            spec.seed = seed;
            spec.perturbations = {perturb};
            auto fx = generate(spec);
            auto [rec, flags] = extract_all(fx.document, cfg);
            for (Field f : kAllFields) {
                bool bad = rec.field(f).status != FieldStatus::Extracted;
                int n = 0;
                for (const auto& fl : flags)
                    if (fl.field == f) ++n;
                if (bad) CHECK(n == 1);
                CHECK(n <= 1);
            }
        }
    }
}

TEST_CASE("window ordering on well-formed documents") {
    for (std::uint64_t seed = 100; seed < 160; ++seed) {
        auto fx = generate(FixtureSpec{seed});
        const auto& doc = fx.document;
        auto sel = select_pages(doc);
        auto abs_hit = locate_marker(doc, cfg.abstract_markers, 0, sel.first_page_end);
        auto intro = locate_marker(doc, cfg.intro_markers, 0, doc.spans.size());
        auto concl = locate_marker(doc, cfg.conclusion_markers, sel.tail_begin, doc.spans.size());
        auto refs = locate_marker(doc, cfg.reference_markers, sel.tail_begin, doc.spans.size());
        REQUIRE(abs_hit);
        REQUIRE(intro);
        REQUIRE(concl);
        REQUIRE(refs);
        CHECK(abs_hit->span_index < intro->span_index);
        CHECK(intro->span_index < concl->span_index);
        CHECK(concl->span_index < refs->span_index);

        // title rule three: returned title size >= every first-page span size
        auto [title, flag] = extract_title(doc, sel, cfg);
        REQUIRE(title.status == FieldStatus::Extracted);
        double title_size = 0;
        for (const auto& s : doc.spans)
            if (s.page == 1 && title.value.find(s.text) != std::string::npos)
                title_size = std::max(title_size, s.font_size);
        for (const auto& s : sel.first_page_spans) CHECK(title_size >= s.font_size);
    }
}
