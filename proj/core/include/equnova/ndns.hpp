#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "equnova/corpus.hpp"
#include "equnova/novelty.hpp"
#include "equnova/run_file.hpp"

namespace equnova {

/// question_id -> sentence_id -> nugget labels
using Judgments = std::map<std::string, std::map<std::string, std::set<std::string>>>;

/// Whitespace-separated `question_id sentence_id nugget_label` lines; `#`
/// starts a comment. Duplicate triples collapse.
Judgments load_judgments(std::istream& in);

/// An answer to score: id plus interned nuggets per sentence.
struct EvalAnswer {
    std::string answer_id;
    std::vector<NuggetSet> per_sentence;
};

/// Sum of gain[r] / log2(r + 2) over 0-based ranks r.
double discounted_gain(std::span<const double> gains);

/// Novelty scores of the answers taken in the given order.
std::vector<double> novelty_gains(std::span<const EvalAnswer> ranked, Variant variant);

/// Greedy max-novelty ordering of the pool; ties and the zero tail go by
/// answer id. Returns indices into `pool`.
std::vector<std::size_t> ideal_ranking(std::span<const EvalAnswer> pool, Variant variant);

struct AnswerTrace {
    std::string answer_id;
    int rank = 0;
    double novelty = 0.0;
    NoveltyCounts counts;
    bool resolved = true;
};

struct QuestionEval {
    std::string question_id;
    Variant variant = Variant::exact;
    double dcg = 0.0;
    double idcg = 0.0;
    double ndns = 0.0;  // 0 when idcg is 0
    std::size_t unresolved = 0;
    std::vector<AnswerTrace> trace;
};

/// Scores one question: run answers in rank order against the ideal ranking
/// of (run answers + every judged sentence as a single-sentence answer).
QuestionEval evaluate_question(const std::string& question_id, const std::vector<RunLine>& answers,
                               const Judgments& judgments, const Corpus& corpus, Variant variant);

/// Every question that appears in the run or the judgments, sorted by id.
/// Judged questions missing from the run score 0.
std::vector<QuestionEval> evaluate_run(const std::vector<RunLine>& run, const Judgments& judgments,
                                       const Corpus& corpus, Variant variant);

struct QuestionScores {
    std::string question_id;
    double relaxed = 0.0;
    double partial = 0.0;
    double exact = 0.0;
};

struct EvalReport {
    std::vector<QuestionScores> questions;
    QuestionScores mean{"all"};
    std::vector<QuestionEval> details;  // all variants, for the per-answer trace
    std::size_t unresolved = 0;
};

/// Macro averages over the given questions.
EvalReport report(std::vector<QuestionScores> per_question);

/// All three variants plus traces.
EvalReport evaluate_report(const std::vector<RunLine>& run, const Judgments& judgments,
                           const Corpus& corpus);

nlohmann::json report_to_json(const EvalReport& report, bool with_trace = true);
/// Aligned text table, one row per question plus the mean row.
std::string report_table(const EvalReport& report);

}  // namespace equnova
