#pragma once

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "equnova/bm25.hpp"
#include "equnova/bridge_client.hpp"
#include "equnova/corpus.hpp"
#include "equnova/eqg.hpp"
#include "equnova/novelty.hpp"
#include "equnova/run_file.hpp"
#include "equnova/scoring.hpp"

namespace equnova {

struct PipelineConfig {
    IndexConfig index;
    GenerationConfig generation;
    EqgConfig eqg;
    Variant variant = Variant::exact;
    std::size_t top_contexts = 200;
    std::size_t top_sentences = 1000;
    std::size_t max_questions_for_eqg = 500;
    std::string relevance = "lexical";  // lexical | bridge
    std::string qgen = "template";      // template | bridge
    std::string entail = "lexical";     // lexical | bridge
    BridgeConfig bridge;
    std::string run_tag = "equnova";
    bool rerank = true;
    unsigned workers = 1;      // questions in flight
    unsigned eqg_workers = 1;  // threads scoring EQG pairs per question

    void validate() const;

    /// Missing keys keep their defaults; unknown keys are rejected.
    static PipelineConfig from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

PipelineConfig load_pipeline_config(const std::string& path);

enum class Task { expert, consumer };

struct QuestionSet {
    std::vector<Question> questions;
    Task task = Task::expert;
};

/// JSONL `{"qid": str, "text": str}` with an optional `"task"` of
/// "expert" or "consumer" that must agree across lines.
QuestionSet parse_questions(std::istream& in);
QuestionSet load_questions(const std::string& path);

/// Index file: the BM25 index plus the corpus it was built from, so a run
/// needs a single path.
void save_index_bundle(std::ostream& out, const Corpus& corpus, const InvertedIndex& index);
std::pair<Corpus, InvertedIndex> load_index_bundle(std::istream& in);
std::pair<Corpus, InvertedIndex> load_index_bundle(const std::string& path);

/// Borrowed scorer set used by one pipeline run.
struct Scorers {
    const RelevanceScorer* relevance = nullptr;
    const QuestionGenerator* generator = nullptr;
    const EntailmentScorer* entail = nullptr;
};

/// Owns the backends named in a PipelineConfig.
class ScorerSet {
  public:
    ScorerSet(const PipelineConfig& config, const InvertedIndex& index);
    Scorers scorers() const;

  private:
    std::unique_ptr<LexicalRelevance> m_relevance;
    std::unique_ptr<TemplateGenerator> m_generator;
    std::unique_ptr<LexicalEntailment> m_entail;
    std::unique_ptr<BridgeClient> m_bridge;
    Scorers m_scorers;
};

struct QuestionRun {
    std::string question_id;
    std::vector<RunLine> lines;
    std::optional<nlohmann::json> eqg_dump;
    std::string error;  // non-empty when the question failed
    std::size_t candidates = 0;
    std::size_t generated = 0;
    std::size_t nugget_questions = 0;
};

/// Retrieve, select, generate, build the EQG, pick nugget questions, re-rank.
/// With config.rerank off the selected sentences are emitted by relevance.
/// Scorer errors propagate.
QuestionRun run_pipeline(const Question& question, const Corpus& corpus,
                         const InvertedIndex& index, const PipelineConfig& config,
                         const Scorers& scorers, bool dump_eqg = false);

/// Runs every question, up to config.workers at a time; output keeps input
/// order. A failing question is recorded in its QuestionRun unless `strict`,
/// in which case the first failure is rethrown.
std::vector<QuestionRun> run_batch(const QuestionSet& questions, const Corpus& corpus,
                                   const InvertedIndex& index, const PipelineConfig& config,
                                   const Scorers& scorers, bool strict = false,
                                   bool dump_eqg = false);

}  // namespace equnova
