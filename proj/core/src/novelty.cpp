#include "equnova/novelty.hpp"

#include <algorithm>
#include <string>

#include "equnova/error.hpp"

namespace equnova {

std::string_view to_string(Variant v)
{
    switch (v) {
    case Variant::relaxed:
        return "relaxed";
    case Variant::partial:
        return "partial";
    case Variant::exact:
        return "exact";
    }
    return "exact";
}

Variant parse_variant(std::string_view name)
{
    if (name == "relaxed") {
        return Variant::relaxed;
    }
    if (name == "partial") {
        return Variant::partial;
    }
    if (name == "exact") {
        return Variant::exact;
    }
    throw invalid_argument_error("unknown variant '" + std::string(name) + "'");
}

NoveltyCounts novelty_counts(std::span<const NuggetSet> per_sentence, const NuggetSet& seen)
{
    NoveltyCounts counts;
    NuggetSet novel;
    for (const auto& sentence : per_sentence) {
        if (sentence.empty()) {
            ++counts.no_nugget;
            continue;
        }
        bool any_novel = false;
        for (int n : sentence) {
            if (seen.count(n) == 0) {
                novel.insert(n);
                any_novel = true;
            }
        }
        if (any_novel) {
            ++counts.novel_sentences;
        } else {
            ++counts.seen_only;
        }
    }
    counts.novel = static_cast<int>(novel.size());
    return counts;
}

int sentence_factor(const NoveltyCounts& c, Variant variant)
{
    switch (variant) {
    case Variant::relaxed:
        return c.no_nugget + c.seen_only + std::min(c.novel_sentences, 1);
    case Variant::partial:
        return c.no_nugget + std::min(c.novel_sentences, 1);
    case Variant::exact:
        return c.no_nugget + c.seen_only + c.novel_sentences;
    }
    return 0;
}

double novelty_score(const NoveltyCounts& c, Variant variant)
{
    if (c.novel < 0 || c.no_nugget < 0 || c.seen_only < 0 || c.novel_sentences < 0) {
        throw invalid_argument_error("novelty counts must be non-negative");
    }
    if (c.novel == 0) {
        return 0.0;
    }
    auto n = static_cast<long long>(c.novel);
    auto sf = static_cast<long long>(sentence_factor(c, variant));
    return static_cast<double>(n * (n + 1)) / static_cast<double>(n + sf);
}

std::vector<GreedyStep> greedy_novelty_order(std::span<const std::vector<NuggetSet>> answers,
                                             Variant variant)
{
    std::vector<GreedyStep> order;
    order.reserve(answers.size());
    std::vector<bool> placed(answers.size(), false);
    NuggetSet seen;
    while (order.size() < answers.size()) {
        std::size_t best = answers.size();
        double best_score = 0.0;
        for (std::size_t i = 0; i < answers.size(); ++i) {
            if (placed[i]) {
                continue;
            }
            double s = novelty_score(novelty_counts(answers[i], seen), variant);
            if (s > best_score) {
                best_score = s;
                best = i;
            }
        }
        if (best == answers.size()) {
            break;
        }
        placed[best] = true;
        order.push_back({best, best_score});
        for (const auto& sentence : answers[best]) {
            seen.insert(sentence.begin(), sentence.end());
        }
    }
    for (std::size_t i = 0; i < answers.size(); ++i) {
        if (!placed[i]) {
            order.push_back({i, 0.0});
        }
    }
    return order;
}

}  // namespace equnova
