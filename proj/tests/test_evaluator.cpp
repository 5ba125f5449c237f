#include "doctest.h"

#include <filesystem>
#include <fstream>

#include "metex/evaluator.hpp"
#include "test_util.hpp"

using namespace metex;
namespace fs = std::filesystem;

namespace {

FieldValue extracted(std::string v) { return {std::move(v), FieldStatus::Extracted}; }

} // namespace

TEST_CASE("token_jaccard on hand-checked multisets") {
    CHECK(token_jaccard("a b c", "a b c") == 1.0);
    CHECK(token_jaccard("a b", "c d") == 0.0);
    CHECK(token_jaccard("a a b", "a b") == doctest::Approx(2.0 / 3.0));
    CHECK(token_jaccard("", "") == 1.0);
    CHECK(token_jaccard("a", "") == 0.0);
}

TEST_CASE("token_jaccard is symmetric and bounded (property)") {
    test_util::Rng rng(9);
    for (int iter = 0; iter < 200; ++iter) {
        std::string a = test_util::random_text(rng, 0, 15);
        std::string b = test_util::random_text(rng, 0, 15);
        double j = token_jaccard(a, b);
        CHECK(j == token_jaccard(b, a));
        CHECK(j >= 0.0);
        CHECK(j <= 1.0);
        CHECK(token_jaccard(a, a) == 1.0);
    }
}

TEST_CASE("field_correct: short fields need exact normalized equality") {
    CHECK(field_correct(extracted("Deep  Parsing"), "deep parsing", Field::Title));
    CHECK_FALSE(field_correct(extracted("Deep Parsing Now"), "deep parsing", Field::Title));
    CHECK(field_correct(extracted("A, B"), "a, b", Field::Keywords));
}

TEST_CASE("field_correct: long fields pass at Jaccard >= 0.95") {
    // 100 shared tokens of 104 unioned: 100/104 > 0.95 passes
    std::string base, extra4;
    for (int i = 0; i < 100; ++i) base += "w" + std::to_string(i) + " ";
    extra4 = base + "x1 x2 x3 x4";
    CHECK(field_correct(extracted(extra4), base, Field::BodyText));
    // 96 shared of 104: 96/104 ~= 0.923 fails
    std::string swapped8 = base;
    for (int i = 0; i < 4; ++i) {
        auto at = swapped8.find("w" + std::to_string(i) + " ");
        swapped8.replace(at, 3 + (i >= 10 ? 1 : 0), "y" + std::to_string(i) + " ");
    }
    CHECK(token_jaccard(detail::canonical(swapped8), detail::canonical(base)) <
          0.95);
    CHECK_FALSE(field_correct(extracted(swapped8), base, Field::BodyText));
    // threshold is configurable
    EvalOptions loose;
    loose.jaccard_threshold = 0.9;
    CHECK(field_correct(extracted(swapped8), base, Field::BodyText, loose));
}

TEST_CASE("field_correct: Missing/Empty are correct iff nothing was expected") {
    FieldValue missing{"", FieldStatus::Missing};
    FieldValue empty{"", FieldStatus::Empty};
    CHECK(field_correct(missing, "", Field::Keywords));
    CHECK(field_correct(empty, "  ", Field::Keywords));
    CHECK_FALSE(field_correct(missing, "expected text", Field::Keywords));
    CHECK_FALSE(field_correct(extracted("stuff"), "", Field::Keywords));
}

TEST_CASE("classification_accuracy on a hand-checked confusion matrix") {
    std::vector<std::pair<Verdict, bool>> preds;
    // 8 of 10 scientific right, 9 of 10 unscientific right
    for (int i = 0; i < 8; ++i) preds.push_back({Verdict::Scientific, true});
    for (int i = 0; i < 2; ++i) preds.push_back({Verdict::Unscientific, true});
    for (int i = 0; i < 9; ++i) preds.push_back({Verdict::Unscientific, false});
    preds.push_back({Verdict::Scientific, false});
    auto acc = classification_accuracy(preds);
    CHECK(acc.a1 == doctest::Approx(80.0));
    CHECK(acc.a2 == doctest::Approx(90.0));
    CHECK(acc.a == doctest::Approx(85.0));
}

TEST_CASE("classification_accuracy matches a confusion-matrix oracle (property)") {
    test_util::Rng rng(17);
    for (int iter = 0; iter < 300; ++iter) {
        int tp = rng.range(0, 20), fn = rng.range(0, 20);
        int tn = rng.range(0, 20), fp = rng.range(0, 20);
        if (tp + fn == 0 || tn + fp == 0) continue;
        std::vector<std::pair<Verdict, bool>> preds;
        for (int i = 0; i < tp; ++i) preds.push_back({Verdict::Scientific, true});
        for (int i = 0; i < fn; ++i) preds.push_back({Verdict::Unscientific, true});
        for (int i = 0; i < tn; ++i) preds.push_back({Verdict::Unscientific, false});
        for (int i = 0; i < fp; ++i) preds.push_back({Verdict::Scientific, false});
        auto acc = classification_accuracy(preds);
        double a1 = 100.0 * tp / (tp + fn);
        double a2 = 100.0 * tn / (tn + fp);
        CHECK(acc.a1 == doctest::Approx(a1));
        CHECK(acc.a2 == doctest::Approx(a2));
        CHECK(acc.a == doctest::Approx((a1 + a2) / 2.0));
    }
}

TEST_CASE("classification_accuracy is invariant under input permutation") {
    std::vector<std::pair<Verdict, bool>> preds = {
        {Verdict::Scientific, true},    {Verdict::Unscientific, true},
        {Verdict::Unscientific, false}, {Verdict::Scientific, false},
        {Verdict::Scientific, true},
    };
    auto base = classification_accuracy(preds);
    std::sort(preds.begin(), preds.end());
    do {
        auto acc = classification_accuracy(preds);
        CHECK(acc.a == doctest::Approx(base.a));
    } while (std::next_permutation(preds.begin(), preds.end()));
}

TEST_CASE("a truth set without both classes is degenerate") {
    std::vector<std::pair<Verdict, bool>> only_sci = {{Verdict::Scientific, true}};
    std::vector<std::pair<Verdict, bool>> only_uns = {{Verdict::Unscientific, false}};
    CHECK_THROWS_AS(classification_accuracy(only_sci), DegenerateTruthSet);
    CHECK_THROWS_AS(classification_accuracy(only_uns), DegenerateTruthSet);
    CHECK_THROWS_AS(classification_accuracy({}), DegenerateTruthSet);
}

namespace {

std::pair<std::map<std::string, MetadataRecord>, std::map<std::string, GroundTruthRecord>>
small_corpus() {
    std::map<std::string, MetadataRecord> records;
    std::map<std::string, GroundTruthRecord> truth;
    for (int i = 0; i < 4; ++i) {
        std::string id = "doc" + std::to_string(i);
        MetadataRecord r;
        r.doc_id = id;
        r.title = extracted("Title " + std::to_string(i));
        r.abstract = extracted("Abstract " + std::to_string(i));
        r.keywords = extracted("k1, k2");
        r.body_text = extracted("body body body");
        r.conclusions = extracted("we conclude");
        r.references = extracted("[1] ref");
        GroundTruthRecord gt;
        gt.doc_id = id;
        for (Field f : kAllFields) gt.expected_for(f) = r.field(f).value;
        records[id] = r;
        truth[id] = gt;
    }
    // doc1 has a wrong title, doc3 a wrong body
    records["doc1"].title = extracted("Wrong");
    records["doc3"].body_text = extracted("entirely different words here");
    return {records, truth};
}

} // namespace

TEST_CASE("run_evaluation scores prefix splits and averages them") {
    auto [records, truth] = small_corpus();
    auto report = run_evaluation(records, truth, {2, 4});
    REQUIRE(report.splits.size() == 2);
    // split of 2 = doc0, doc1: title 50%, body 100%
    CHECK(report.splits[0].split_size == 2);
    CHECK(report.splits[0].field_accuracy[int(Field::Title)] == doctest::Approx(50.0));
    CHECK(report.splits[0].field_accuracy[int(Field::BodyText)] == doctest::Approx(100.0));
    // split of 4: title 75%, body 75%
    CHECK(report.splits[1].field_accuracy[int(Field::Title)] == doctest::Approx(75.0));
    CHECK(report.splits[1].field_accuracy[int(Field::BodyText)] == doctest::Approx(75.0));
    // overall = mean of splits
    CHECK(report.overall[int(Field::Title)] == doctest::Approx(62.5));
    CHECK(report.overall[int(Field::BodyText)] == doctest::Approx(87.5));
    CHECK(report.overall[int(Field::Abstract)] == doctest::Approx(100.0));
}

TEST_CASE("run_evaluation rejects bad splits and missing truth") {
    auto [records, truth] = small_corpus();
    CHECK_THROWS_AS(run_evaluation(records, truth, {0}), std::invalid_argument);
    CHECK_THROWS_AS(run_evaluation(records, truth, {5}), std::invalid_argument);
    truth.erase("doc2");
    CHECK_THROWS_AS(run_evaluation(records, truth, {2}), MissingTruth);
}

TEST_CASE("ground-truth JSONL round-trips") {
    GroundTruthRecord gt;
    gt.doc_id = "d1";
    gt.is_scientific = false;
    gt.expected_for(Field::Title) = "A Title";
    gt.expected_for(Field::References) = "[1] x";
    auto back = truth_from_json(truth_to_json(gt));
    CHECK(back.doc_id == "d1");
    CHECK_FALSE(back.is_scientific);
    CHECK(back.expected_for(Field::Title) == "A Title");
    CHECK(back.expected_for(Field::References) == "[1] x");
    CHECK(back.expected_for(Field::Keywords) == "");

    fs::path p = fs::temp_directory_path() / "metex_truth_test.jsonl";
    {
        std::ofstream f(p);
        f << truth_to_json(gt).dump() << "\n\n"; // blank lines are skipped
        gt.doc_id = "d2";
        gt.is_scientific = true;
        f << truth_to_json(gt).dump() << "\n";
    }
    auto loaded = load_truth_jsonl(p);
    CHECK(loaded.size() == 2);
    CHECK_FALSE(loaded.at("d1").is_scientific);
    CHECK(loaded.at("d2").is_scientific);
    fs::remove(p);
}

TEST_CASE("malformed ground truth raises MalformedTruth") {
    CHECK_THROWS_AS(truth_from_json(nlohmann::json::parse("{\"id\": 3}")), MalformedTruth);
    CHECK_THROWS_AS(truth_from_json(nlohmann::json::parse("{}")), MalformedTruth);
    fs::path p = fs::temp_directory_path() / "metex_truth_bad.jsonl";
    {
        std::ofstream f(p);
        f << "{not json}\n";
    }
    CHECK_THROWS_AS(load_truth_jsonl(p), MalformedTruth);
    fs::remove(p);
    CHECK_THROWS_AS(load_truth_jsonl("/nonexistent/truth.jsonl"), MalformedTruth);
}

TEST_CASE("report renders a row per field and a column per split") {
    auto [records, truth] = small_corpus();
    auto report = run_evaluation(records, truth, {2, 4});
    std::string text = render_report_text(report);
    CHECK(text.find("n=2") != std::string::npos);
    CHECK(text.find("n=4") != std::string::npos);
    CHECK(text.find("title") != std::string::npos);
    CHECK(text.find("references") != std::string::npos);
    CHECK(std::count(text.begin(), text.end(), '\n') == 7); // header + 6 fields

    auto j = report_to_json(report);
    CHECK(j["splits"].size() == 2);
    CHECK(j["overall"]["title"] == doctest::Approx(62.5));
    CHECK_FALSE(j.contains("classification"));
}
