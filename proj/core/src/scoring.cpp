#include "equnova/scoring.hpp"

#include <algorithm>
#include <set>

#include "equnova/error.hpp"

namespace equnova {

void GenerationConfig::validate() const
{
    if (k < 1) {
        throw invalid_argument_error("k must be >= 1");
    }
}

double relevance_score(const RelevanceScorer& scorer, const Question& question,
                       const Sentence& sentence)
{
    std::string_view text = sentence.text;
    auto scores = scorer.score(question, std::span<const std::string_view>(&text, 1));
    if (scores.size() != 1) {
        throw transport_error("relevance scorer returned " + std::to_string(scores.size())
                              + " scores for 1 sentence");
    }
    return scores.front();
}

double entailment_probability(const EntailmentScorer& scorer, std::string_view premise,
                              std::string_view hypothesis)
{
    TextPair pair{premise, hypothesis};
    auto probs = scorer.entail(std::span<const TextPair>(&pair, 1));
    if (probs.size() != 1) {
        throw transport_error("entailment scorer returned " + std::to_string(probs.size())
                              + " probabilities for 1 pair");
    }
    return probs.front();
}

namespace {

std::set<std::string> term_set(std::string_view text, const IndexConfig& config)
{
    auto terms = tokenize(text, config);
    return {std::make_move_iterator(terms.begin()), std::make_move_iterator(terms.end())};
}

/// Idf mass of `terms` that is also in `other`, over the idf mass of `terms`.
double covered_fraction(const std::set<std::string>& terms, const std::set<std::string>& other,
                        const InvertedIndex& index)
{
    double total = 0.0;
    double shared = 0.0;
    for (const auto& t : terms) {
        double w = index.idf(t);
        total += w;
        if (other.count(t) != 0) {
            shared += w;
        }
    }
    if (total <= 0.0) {
        return 0.0;
    }
    return std::clamp(shared / total, 0.0, 1.0);
}

}  // namespace

double lexical_relevance(std::string_view question, std::string_view sentence,
                         const InvertedIndex& index)
{
    auto q = term_set(question, index.config());
    if (q.empty()) {
        throw invalid_argument_error("empty query");
    }
    return covered_fraction(q, term_set(sentence, index.config()), index);
}

WhClass wh_class(std::string_view question)
{
    auto words = split_terms(question, true);
    for (std::size_t i = 0; i < words.size(); ++i) {
        const auto& w = words[i];
        if (w == "what" || w == "which") {
            return WhClass::what;
        }
        if (w == "where") {
            return WhClass::where;
        }
        if (w == "who" || w == "whom" || w == "whose") {
            return WhClass::who;
        }
        if (w == "when") {
            return WhClass::when;
        }
        if (w == "why") {
            return WhClass::why;
        }
        if (w == "how") {
            if (i + 1 < words.size() && (words[i + 1] == "many" || words[i + 1] == "much")) {
                return WhClass::quantity;
            }
            return WhClass::how;
        }
    }
    return WhClass::none;
}

bool wh_compatible(WhClass a, WhClass b)
{
    return a == b || a == WhClass::none || b == WhClass::none;
}

double lexical_entailment(std::string_view premise, std::string_view hypothesis,
                          const InvertedIndex& index)
{
    auto h = term_set(hypothesis, index.config());
    if (h.empty()) {
        throw invalid_argument_error("hypothesis has no content terms");
    }
    double coverage = covered_fraction(h, term_set(premise, index.config()), index);
    if (!wh_compatible(wh_class(premise), wh_class(hypothesis))) {
        coverage *= 0.5;
    }
    return coverage;
}

std::vector<double> LexicalRelevance::score(const Question& question,
                                            std::span<const std::string_view> sentences) const
{
    auto q = term_set(question.text, m_index.config());
    if (q.empty()) {
        throw invalid_argument_error("empty query");
    }
    std::vector<double> out;
    out.reserve(sentences.size());
    for (auto s : sentences) {
        out.push_back(covered_fraction(q, term_set(s, m_index.config()), m_index));
    }
    return out;
}

std::vector<double> LexicalEntailment::entail(std::span<const TextPair> pairs) const
{
    std::vector<double> out;
    out.reserve(pairs.size());
    for (const auto& [premise, hypothesis] : pairs) {
        out.push_back(lexical_entailment(premise, hypothesis, m_index));
    }
    return out;
}

std::vector<GeneratedQuestion> TemplateGenerator::generate(const Sentence& sentence,
                                                           const GenerationConfig& config) const
{
    config.validate();
    return template_generate(sentence, config.k, m_index);
}

std::vector<ScoredCandidate> select_top_sentences(const std::vector<CandidateSentence>& candidates,
                                                  const std::vector<double>& scores,
                                                  std::size_t limit)
{
    if (candidates.size() != scores.size()) {
        throw invalid_argument_error("select_top_sentences: " + std::to_string(candidates.size())
                                     + " candidates but " + std::to_string(scores.size())
                                     + " scores");
    }
    std::vector<ScoredCandidate> out;
    out.reserve(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        out.push_back({candidates[i], scores[i], i});
    }
    std::stable_sort(out.begin(), out.end(), [](const ScoredCandidate& a, const ScoredCandidate& b) {
        return a.relevance > b.relevance;
    });
    if (out.size() > limit) {
        out.resize(limit);
    }
    return out;
}

}  // namespace equnova
