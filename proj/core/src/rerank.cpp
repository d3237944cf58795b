#include "equnova/rerank.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

#include "equnova/error.hpp"

namespace equnova {

NuggetSet NuggetAssignment::answer_nuggets(std::size_t answer) const
{
    NuggetSet out;
    for (const auto& s : per_sentence.at(answer)) {
        out.insert(s.begin(), s.end());
    }
    return out;
}

NuggetAssignment assign_nuggets(const std::vector<RankedAnswer>& answers,
                                const std::vector<GeneratedQuestion>& generated,
                                const std::vector<NuggetQuestion>& nugget_questions,
                                const std::vector<Component>& components)
{
    NuggetAssignment out;
    out.per_sentence.resize(answers.size());
    // sentence id -> (answer, position in span)
    std::unordered_map<std::string, std::pair<std::size_t, std::size_t>> where;
    for (std::size_t a = 0; a < answers.size(); ++a) {
        out.per_sentence[a].resize(answers[a].sentence_ids.size());
        for (std::size_t s = 0; s < answers[a].sentence_ids.size(); ++s) {
            where.emplace(answers[a].sentence_ids[s], std::make_pair(a, s));
        }
    }

    NuggetSet nugget_components;
    for (const auto& nq : nugget_questions) {
        nugget_components.insert(nq.component_id);
    }
    for (const auto& comp : components) {
        if (nugget_components.count(comp.component_id) == 0) {
            continue;
        }
        for (auto node : comp.members) {
            if (node >= generated.size()) {
                throw invalid_argument_error("component member outside the generated questions");
            }
            const auto& q = generated[node];
            auto it = where.find(q.source_sentence);
            if (it == where.end()) {
                ++out.skipped;
                continue;
            }
            auto [answer, position] = it->second;
            out.per_sentence[answer][position].insert(comp.component_id);
            out.provenance[comp.component_id].push_back({answer, q.gqid, q.answer_snippet});
        }
    }
    return out;
}

NoveltyCounts novelty_counts(const NuggetAssignment& assignment, std::size_t answer,
                             const NuggetSet& seen)
{
    return novelty_counts(std::span<const NuggetSet>(assignment.per_sentence.at(answer)), seen);
}

std::vector<RankedAnswer> greedy_rerank(const std::vector<RankedAnswer>& answers,
                                        const NuggetAssignment& assignment, Variant variant)
{
    if (assignment.per_sentence.size() != answers.size()) {
        throw invalid_argument_error("nugget assignment does not match the answer list");
    }
    std::vector<std::size_t> by_rank(answers.size());
    std::iota(by_rank.begin(), by_rank.end(), std::size_t{0});
    std::stable_sort(by_rank.begin(), by_rank.end(), [&](std::size_t a, std::size_t b) {
        return answers[a].original_rank < answers[b].original_rank;
    });
    std::vector<std::vector<NuggetSet>> items;
    items.reserve(answers.size());
    for (auto i : by_rank) {
        items.push_back(assignment.per_sentence[i]);
    }

    std::vector<RankedAnswer> out;
    out.reserve(answers.size());
    for (const auto& step : greedy_novelty_order(items, variant)) {
        auto answer = answers[by_rank[step.item]];
        answer.final_rank = static_cast<int>(out.size()) + 1;
        answer.score = step.score > 0.0 ? step.score : answer.relevance;
        out.push_back(std::move(answer));
    }
    return out;
}

}  // namespace equnova
