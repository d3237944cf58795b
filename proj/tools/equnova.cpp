#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "equnova/bm25.hpp"
#include "equnova/corpus.hpp"
#include "equnova/error.hpp"
#include "equnova/ndns.hpp"
#include "equnova/pipeline.hpp"
#include "equnova/run_file.hpp"

namespace {

int cmd_index(const std::string& corpus_path, const std::string& config_path,
              const std::string& out_path)
{
    auto corpus = equnova::load_corpus(corpus_path);
    equnova::IndexConfig index_config;
    if (!config_path.empty()) {
        index_config = equnova::load_pipeline_config(config_path).index;
    }
    auto index = equnova::InvertedIndex::build(corpus, index_config);
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        throw equnova::not_found_error("cannot write " + out_path);
    }
    equnova::save_index_bundle(out, corpus, index);
    std::cerr << "indexed " << corpus.documents().size() << " documents, " << index.n_contexts()
              << " contexts, " << corpus.sentence_count() << " sentences, "
              << index.vocabulary_size() << " terms\n";
    return 0;
}

struct RunOptions {
    std::string index_path;
    std::string questions_path;
    std::string config_path;
    std::string out_path = "-";
    std::string dump_dir;
    std::string relevance;
    std::string qgen;
    std::string entail;
    std::string bridge_url;
    std::string variant;
    std::string run_tag;
    unsigned workers = 0;
    bool no_rerank = false;
    bool strict = false;
};

int cmd_run(const RunOptions& opt)
{
    auto config = opt.config_path.empty() ? equnova::PipelineConfig{}
                                          : equnova::load_pipeline_config(opt.config_path);
    if (!opt.relevance.empty()) config.relevance = opt.relevance;
    if (!opt.qgen.empty()) config.qgen = opt.qgen;
    if (!opt.entail.empty()) config.entail = opt.entail;
    if (!opt.bridge_url.empty()) config.bridge.url = opt.bridge_url;
    if (!opt.variant.empty()) config.variant = equnova::parse_variant(opt.variant);
    if (!opt.run_tag.empty()) config.run_tag = opt.run_tag;
    if (opt.workers > 0) config.workers = opt.workers;
    if (opt.no_rerank) config.rerank = false;
    config.validate();

    auto [corpus, index] = equnova::load_index_bundle(opt.index_path);
    auto questions = equnova::load_questions(opt.questions_path);
    equnova::ScorerSet scorer_set(config, index);
    bool dump = !opt.dump_dir.empty();
    auto runs = equnova::run_batch(questions, corpus, index, config, scorer_set.scorers(),
                                   opt.strict, dump);

    std::ostringstream text;
    std::size_t failures = 0;
    for (const auto& r : runs) {
        if (!r.error.empty()) {
            ++failures;
            std::cerr << "question " << r.question_id << " failed: " << r.error << '\n';
            continue;
        }
        equnova::write_run(text, r.lines);
    }
    if (opt.out_path == "-") {
        std::cout << text.str();
    } else {
        std::ofstream out(opt.out_path, std::ios::binary);
        if (!out) {
            throw equnova::not_found_error("cannot write " + opt.out_path);
        }
        out << text.str();
    }
    if (dump) {
        std::filesystem::create_directories(opt.dump_dir);
        for (const auto& r : runs) {
            if (r.eqg_dump) {
                std::ofstream out(std::filesystem::path(opt.dump_dir) / (r.question_id + ".eqg.json"));
                out << r.eqg_dump->dump(2) << '\n';
            }
        }
    }
    return failures == 0 ? 0 : 1;
}

int cmd_eval(const std::string& run_path, const std::string& judgments_path,
             const std::string& corpus_path, const std::string& variant, bool json, bool table,
             bool strict)
{
    std::ifstream run_in(run_path);
    if (!run_in) {
        throw equnova::not_found_error("cannot open run " + run_path);
    }
    std::ifstream judgments_in(judgments_path);
    if (!judgments_in) {
        throw equnova::not_found_error("cannot open judgments " + judgments_path);
    }
    auto run = equnova::parse_run(run_in);
    auto judgments = equnova::load_judgments(judgments_in);
    auto corpus = equnova::load_corpus(corpus_path);

    auto report = equnova::evaluate_report(run, judgments, corpus);
    if (variant != "all") {
        auto v = equnova::parse_variant(variant);
        std::erase_if(report.details, [v](const auto& d) { return d.variant != v; });
    }
    if (json) {
        std::cout << equnova::report_to_json(report).dump(2) << '\n';
    }
    if (table || !json) {
        std::cout << equnova::report_table(report);
    }
    if (report.unresolved > 0) {
        std::cerr << report.unresolved << " run answers could not be resolved in the corpus\n";
        if (strict) {
            return 2;
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Entailed-question novelty re-ranking for question answering"};
    app.require_subcommand(1);

    std::string corpus_path, config_path, out_path;
    auto* index_cmd = app.add_subcommand("index", "Build a BM25 index over a corpus");
    index_cmd->add_option("--corpus", corpus_path, "Corpus JSONL")->required();
    index_cmd->add_option("--out", out_path, "Index file to write")->required();
    index_cmd->add_option("--config", config_path, "Pipeline config (uses its index section)");

    RunOptions run_opt;
    auto* run_cmd = app.add_subcommand("run", "Answer questions and write a run file");
    run_cmd->add_option("--index", run_opt.index_path, "Index file")->required();
    run_cmd->add_option("--questions", run_opt.questions_path, "Questions JSONL")->required();
    run_cmd->add_option("--config", run_opt.config_path, "Pipeline config JSON");
    run_cmd->add_option("--out", run_opt.out_path, "Run file ('-' for stdout)");
    run_cmd->add_flag("--no-rerank", run_opt.no_rerank, "Emit the relevance ranking only");
    run_cmd->add_option("--dump-eqg", run_opt.dump_dir, "Directory for per-question EQG dumps");
    run_cmd->add_option("--relevance", run_opt.relevance, "lexical|bridge")
        ->check(CLI::IsMember({"lexical", "bridge"}));
    run_cmd->add_option("--qgen", run_opt.qgen, "template|bridge")
        ->check(CLI::IsMember({"template", "bridge"}));
    run_cmd->add_option("--entail", run_opt.entail, "lexical|bridge")
        ->check(CLI::IsMember({"lexical", "bridge"}));
    run_cmd->add_option("--bridge-url", run_opt.bridge_url, "Model bridge base URL");
    run_cmd->add_option("--variant", run_opt.variant, "Novelty variant for re-ranking")
        ->check(CLI::IsMember({"relaxed", "partial", "exact"}));
    run_cmd->add_option("--run-tag", run_opt.run_tag, "Run tag column");
    run_cmd->add_option("--workers", run_opt.workers, "Questions processed concurrently");
    run_cmd->add_flag("--strict", run_opt.strict, "Abort on the first failing question");

    std::string run_path, judgments_path, eval_corpus, variant = "all";
    bool json = false, table = false, strict = false;
    auto* eval_cmd = app.add_subcommand("eval", "Score a run with NDNS");
    eval_cmd->add_option("--run", run_path, "Run file")->required();
    eval_cmd->add_option("--judgments", judgments_path, "Judgments file")->required();
    eval_cmd->add_option("--corpus", eval_corpus, "Corpus JSONL")->required();
    eval_cmd->add_option("--variant", variant, "relaxed|partial|exact|all (trace filter)")
        ->check(CLI::IsMember({"relaxed", "partial", "exact", "all"}));
    eval_cmd->add_flag("--json", json, "Print the JSON report");
    eval_cmd->add_flag("--table", table, "Print the text table");
    eval_cmd->add_flag("--strict", strict, "Fail when run answers cannot be resolved");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*index_cmd) {
            return cmd_index(corpus_path, config_path, out_path);
        }
        if (*run_cmd) {
            return cmd_run(run_opt);
        }
        if (*eval_cmd) {
            return cmd_eval(run_path, judgments_path, eval_corpus, variant, json, table, strict);
        }
    } catch (const std::exception& e) {
        std::cerr << "equnova: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
