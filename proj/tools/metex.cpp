// metex - rule-based metadata extraction for scholarly PDFs.
//
// Subcommands: pipeline, classify, extract, search, eval, fixtures.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "metex/classifier.hpp"
#include "metex/core.hpp"
#include "metex/evaluator.hpp"
#include "metex/extractor.hpp"
#include "metex/fixtures.hpp"
#include "metex/ingest.hpp"
#include "metex/pdf.hpp"
#include "metex/pipeline.hpp"
#include "metex/store.hpp"

namespace fs = std::filesystem;

namespace {

metex::Config load_config_or_default(const std::string& path) {
    if (path.empty()) return metex::Config{};
    return metex::load_config(path);
}

metex::DocumentText ingest_file(const fs::path& path) {
    if (path.extension() == ".spans") return metex::load_span_file(path);
    return metex::extract_document_text(path);
}

std::vector<fs::path> list_inputs(const fs::path& input) {
    std::vector<fs::path> files;
    if (fs::is_directory(input)) {
        for (const auto& e : fs::directory_iterator(input)) {
            if (!e.is_regular_file()) continue;
            auto ext = e.path().extension();
            if (ext == ".pdf" || ext == ".spans") files.push_back(e.path());
        }
        std::sort(files.begin(), files.end());
    } else {
        files.push_back(input);
    }
    return files;
}

nlohmann::ordered_json record_to_json(const metex::MetadataRecord& rec) {
    nlohmann::ordered_json obj;
    obj["id"] = rec.doc_id;
    for (metex::Field f : metex::kAllFields) {
        const metex::FieldValue& v = rec.field(f);
        obj[std::string(metex::to_string(f))] = {
            {"value", v.value}, {"status", std::string(metex::to_string(v.status))}};
    }
    return obj;
}

metex::OutputFormats parse_formats(const std::string& format) {
    metex::OutputFormats out{false, false, false};
    if (format == "all") return {true, true, true};
    if (format == "xml") out.xml = true;
    else if (format == "json") out.json = true;
    else if (format == "db") out.db = true;
    else throw CLI::ValidationError("--format", "must be xml, json, db or all");
    return out;
}

metex::MetadataStore load_store_file(const fs::path& path) {
    if (path.extension() == ".xml") return metex::import_xml(path);
    return metex::import_json(path);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rule-based metadata extraction for scholarly PDFs"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "Config file (key = value)")
        ->envname("METEX_CONFIG");

    // --- pipeline
    auto* pipeline = app.add_subcommand("pipeline", "Ingest, classify, extract and store a directory");
    std::string pl_input, pl_output, pl_format = "all";
    int pl_workers = 0;
    bool pl_strict = true, pl_relaxed = false;
    std::optional<std::int64_t> pl_timestamp;
    pipeline->add_option("--input", pl_input, "Input directory of .pdf/.spans files")->required();
    pipeline->add_option("--output", pl_output, "Output directory")->required();
    pipeline->add_option("--format", pl_format, "Store export format: xml|json|db|all");
    pipeline->add_option("--workers", pl_workers, "Worker threads (default: CPUs)");
    pipeline->add_flag("--strict-title", pl_strict, "Require bold titles (default)");
    pipeline->add_flag("--relaxed-title", pl_relaxed, "Accept non-bold titles");
    pipeline->add_option("--timestamp", pl_timestamp,
                         "Fixed UTC epoch timestamp for reproducible output");

    // --- classify
    auto* classify_cmd = app.add_subcommand("classify", "Report scientific/unscientific verdicts");
    std::string cl_input;
    classify_cmd->add_option("--input", cl_input, "File or directory")->required();

    // --- extract
    auto* extract_cmd = app.add_subcommand("extract", "Extract the six fields from one document");
    std::string ex_input;
    bool ex_strict = true, ex_relaxed = false;
    extract_cmd->add_option("--input", ex_input, "A .pdf or .spans file")->required();
    extract_cmd->add_flag("--strict-title", ex_strict, "Require bold titles (default)");
    extract_cmd->add_flag("--relaxed-title", ex_relaxed, "Accept non-bold titles");

    // --- search
    auto* search_cmd = app.add_subcommand("search", "Substring search over a store export");
    std::string se_store, se_query, se_fields;
    search_cmd->add_option("--store", se_store, "store.json or store.xml")->required();
    search_cmd->add_option("--query", se_query, "Query string")->required();
    search_cmd->add_option("--fields", se_fields, "Comma-separated field subset");

    // --- eval
    auto* eval_cmd = app.add_subcommand("eval", "Score extracted records against ground truth");
    std::string ev_records, ev_truth, ev_splits, ev_output;
    eval_cmd->add_option("--records", ev_records, "store.json/store.xml of extracted records")
        ->required();
    eval_cmd->add_option("--truth", ev_truth, "Ground-truth .truth.jsonl")->required();
    eval_cmd->add_option("--splits", ev_splits, "Comma-separated split sizes (default: all)");
    eval_cmd->add_option("--output", ev_output, "Write the JSON report here");

    // --- fixtures
    auto* fixtures_cmd = app.add_subcommand("fixtures", "Generate synthetic span documents");
    std::string fx_output, fx_perturb;
    int fx_count = 10, fx_unscientific = 0;
    std::uint64_t fx_seed = 1;
    fixtures_cmd->add_option("--output", fx_output, "Output directory")->required();
    fixtures_cmd->add_option("--count", fx_count, "Number of scientific fixtures");
    fixtures_cmd->add_option("--seed", fx_seed, "First seed");
    fixtures_cmd->add_option("--perturb", fx_perturb,
                             "Apply one perturbation to every fixture: drop_keywords, "
                             "unbold_title, tie_title_sizes, duplicate_references_marker, "
                             "inline_conclusion_word");
    fixtures_cmd->add_option("--unscientific", fx_unscientific,
                             "Additionally generate this many non-article documents");

    CLI11_PARSE(app, argc, argv);

    try {
        metex::Config cfg = load_config_or_default(config_path);

        if (*pipeline) {
            if (pl_relaxed) pl_strict = false;
            cfg.strict_title = pl_strict;
            metex::PipelineOptions opts;
            opts.formats = parse_formats(pl_format);
            opts.workers = pl_workers;
            opts.fixed_timestamp = pl_timestamp;
            metex::RunManifest m = metex::run_pipeline(pl_input, pl_output, cfg, opts);
            std::cout << "total " << m.total << ", scientific " << m.scientific
                      << ", unscientific " << m.unscientific << ", extracted " << m.extracted
                      << ", flagged " << m.flagged << "\n";
            if (m.wall_seconds > 0)
                std::cout << "wall " << m.wall_seconds << " s, " << m.docs_per_minute
                          << " docs/minute\n";
            return m.exit_code;
        }

        if (*classify_cmd) {
            for (const fs::path& p : list_inputs(cl_input)) {
                try {
                    metex::DocumentText doc = ingest_file(p);
                    auto sel = metex::select_pages(doc, cfg.pages);
                    auto result = metex::classify(metex::extract_features(sel, cfg.markers),
                                                  cfg.classifier_rule);
                    std::cout << doc.doc_id << "\t"
                              << (result.verdict == metex::Verdict::Scientific ? "scientific"
                                                                               : "unscientific")
                              << "\n";
                } catch (const std::exception& e) {
                    std::cout << p.stem().string() << "\tunreadable\t" << e.what() << "\n";
                }
            }
            return 0;
        }

        if (*extract_cmd) {
            if (ex_relaxed) ex_strict = false;
            metex::DocumentText doc = ingest_file(ex_input);
            metex::ExtractorOptions opts;
            opts.strict_title = ex_strict;
            opts.pages = cfg.pages;
            auto [record, flags] = metex::extract_all(doc, cfg.markers, opts);
            nlohmann::ordered_json out = record_to_json(record);
            out["review_flags"] = nlohmann::ordered_json::array();
            for (const metex::ReviewFlag& fl : flags)
                out["review_flags"].push_back({{"field", std::string(metex::to_string(fl.field))},
                                               {"reason", std::string(metex::to_string(fl.reason))}});
            std::cout << out.dump(2) << "\n";
            return flags.empty() ? 0 : 2;
        }

        if (*search_cmd) {
            metex::MetadataStore store = load_store_file(se_store);
            std::vector<metex::Field> fields(std::begin(metex::kAllFields),
                                             std::end(metex::kAllFields));
            if (!se_fields.empty()) {
                fields.clear();
                for (const auto& name : metex::detail::split_on(se_fields, ',')) {
                    auto f = metex::field_from_string(metex::detail::strip(name));
                    if (!f) throw CLI::ValidationError("--fields", "unknown field: " + name);
                    fields.push_back(*f);
                }
            }
            for (const auto& r : metex::search(store, se_query, fields))
                std::cout << r.doc_id << "\t" << metex::to_string(r.field) << "\t" << r.snippet
                          << "\n";
            return 0;
        }

        if (*eval_cmd) {
            metex::MetadataStore store = load_store_file(ev_records);
            auto truth = metex::load_truth_jsonl(ev_truth);
            std::map<std::string, metex::MetadataRecord> records;
            for (const auto& [id, e] : store.entries()) records[id] = e.record;

            std::vector<std::size_t> splits;
            if (!ev_splits.empty()) {
                for (const auto& s : metex::detail::split_on(ev_splits, ','))
                    splits.push_back(std::stoull(metex::detail::strip(s)));
            } else {
                splits.push_back(records.size());
            }
            metex::EvalOptions eopts;
            eopts.jaccard_threshold = cfg.eval_jaccard_threshold;
            metex::EvaluationReport report = metex::run_evaluation(records, truth, splits, eopts);
            std::cout << metex::render_report_text(report);
            if (!ev_output.empty()) {
                std::ofstream f(ev_output, std::ios::binary);
                f << metex::report_to_json(report).dump(2) << "\n";
            }
            return 0;
        }

        if (*fixtures_cmd) {
            fs::create_directories(fx_output);
            std::optional<metex::Perturbation> perturb;
            if (!fx_perturb.empty()) {
                perturb = metex::perturbation_from_string(fx_perturb);
                if (!perturb)
                    throw CLI::ValidationError("--perturb", "unknown perturbation: " + fx_perturb);
            }
            std::ofstream truth_file(fs::path(fx_output) / "corpus.truth.jsonl",
                                     std::ios::binary);
            for (int i = 0; i < fx_count + fx_unscientific; ++i) {
                metex::FixtureSpec spec;
                spec.seed = fx_seed + static_cast<std::uint64_t>(i);
                spec.scientific = i < fx_count;
                if (perturb && spec.scientific) spec.perturbations.insert(*perturb);
                metex::Fixture fx = metex::generate(spec, cfg.markers);
                metex::save_span_file(fx.document,
                                      fs::path(fx_output) / (fx.document.doc_id + ".spans"));
                truth_file << metex::truth_to_json(fx.truth).dump() << "\n";
            }
            std::cout << "wrote " << (fx_count + fx_unscientific) << " fixtures to " << fx_output
                      << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
