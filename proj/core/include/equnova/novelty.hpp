#pragma once

#include <cstddef>
#include <set>
#include <span>
#include <string_view>
#include <vector>

namespace equnova {

/// Sentence-factor variant of the novelty score.
enum class Variant { relaxed, partial, exact };

std::string_view to_string(Variant v);
/// "relaxed" | "partial" | "exact"; throws invalid_argument_error otherwise.
Variant parse_variant(std::string_view name);

/// Nugget ids present in one sentence.
using NuggetSet = std::set<int>;

struct NoveltyCounts {
    int novel = 0;            // distinct nuggets of the answer not seen before
    int no_nugget = 0;        // sentences without nuggets
    int seen_only = 0;        // sentences whose nuggets were all seen before
    int novel_sentences = 0;  // sentences with at least one unseen nugget

    bool operator==(const NoveltyCounts&) const = default;
};

/// Counts for an answer given its per-sentence nuggets and the nuggets of
/// every earlier-ranked answer.
NoveltyCounts novelty_counts(std::span<const NuggetSet> per_sentence, const NuggetSet& seen);

/// relaxed: na + sn + min(nn, 1); partial: na + min(nn, 1); exact: na + sn + nn.
int sentence_factor(const NoveltyCounts& counts, Variant variant);

/// n (n + 1) / (n + SF) with n the novel nugget count; 0 when n is 0.
/// Throws invalid_argument_error on negative counts.
double novelty_score(const NoveltyCounts& counts, Variant variant);

struct GreedyStep {
    std::size_t item = 0;  // index into the input
    double score = 0.0;    // novelty score at selection time
};

/// Repeatedly takes the answer with the highest novelty score given the
/// nuggets already placed; ties go to the lowest input index. Once no answer
/// scores above zero the rest follow in input order with score 0.
std::vector<GreedyStep> greedy_novelty_order(std::span<const std::vector<NuggetSet>> answers,
                                             Variant variant);

}  // namespace equnova
