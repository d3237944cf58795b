#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "equnova/corpus.hpp"
#include "equnova/eqg.hpp"
#include "equnova/novelty.hpp"

namespace equnova {

struct RankedAnswer {
    AnswerSpan answer;
    std::vector<std::string> sentence_ids;  // sentences of the span, in order
    int original_rank = 0;                  // 1-based, unique
    double relevance = 0.0;
    int final_rank = 0;   // set by greedy_rerank
    double score = 0.0;   // novelty score at selection, relevance in the zero tail
};

struct NuggetProvenance {
    std::size_t answer = 0;  // index into the answer list
    std::string gqid;
    std::string answer_snippet;
};

/// Nugget ids are EQG component ids; an answer carries a nugget when one of
/// its generated questions sits in a component that produced a nugget question.
struct NuggetAssignment {
    std::vector<std::vector<NuggetSet>> per_sentence;  // [answer][sentence]
    std::map<int, std::vector<NuggetProvenance>> provenance;
    std::size_t skipped = 0;  // questions whose source sentence is not a candidate

    NuggetSet answer_nuggets(std::size_t answer) const;
};

/// `components` index into `generated` (the EQG node order).
NuggetAssignment assign_nuggets(const std::vector<RankedAnswer>& answers,
                                const std::vector<GeneratedQuestion>& generated,
                                const std::vector<NuggetQuestion>& nugget_questions,
                                const std::vector<Component>& components);

/// Counts for answer `answer` of the assignment against `seen`.
NoveltyCounts novelty_counts(const NuggetAssignment& assignment, std::size_t answer,
                             const NuggetSet& seen);

/// Greedy novelty ordering; ties and the zero-score tail follow original_rank.
/// Returns a permutation of `answers` with final_rank and score filled in.
std::vector<RankedAnswer> greedy_rerank(const std::vector<RankedAnswer>& answers,
                                        const NuggetAssignment& assignment, Variant variant);

}  // namespace equnova
