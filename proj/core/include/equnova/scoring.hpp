#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "equnova/bm25.hpp"
#include "equnova/corpus.hpp"

namespace equnova {

struct Question {
    std::string qid;
    std::string text;
};

/// A question synthesized from one candidate sentence. `answer_snippet` is a
/// substring of the source sentence text.
struct GeneratedQuestion {
    std::string gqid;
    std::string text;
    std::string source_sentence;
    std::string answer_snippet;

    bool operator==(const GeneratedQuestion&) const = default;
};

struct GenerationConfig {
    int k = 3;

    void validate() const;
};

/// (premise, hypothesis): probability that the premise entails the hypothesis.
using TextPair = std::pair<std::string_view, std::string_view>;

// Scoring ports. Implementations must be safe to call concurrently and must
// report backend failures as transport_error rather than returning zeros.

class RelevanceScorer {
  public:
    virtual ~RelevanceScorer() = default;
    /// One score in [0, 1] per sentence text, higher is more relevant.
    virtual std::vector<double> score(const Question& question,
                                      std::span<const std::string_view> sentences) const = 0;
};

class QuestionGenerator {
  public:
    virtual ~QuestionGenerator() = default;
    /// At most config.k questions with source_sentence set.
    virtual std::vector<GeneratedQuestion> generate(const Sentence& sentence,
                                                    const GenerationConfig& config) const = 0;
};

class EntailmentScorer {
  public:
    virtual ~EntailmentScorer() = default;
    /// One probability in [0, 1] per pair. Not assumed symmetric.
    virtual std::vector<double> entail(std::span<const TextPair> pairs) const = 0;
};

double relevance_score(const RelevanceScorer& scorer, const Question& question,
                       const Sentence& sentence);
double entailment_probability(const EntailmentScorer& scorer, std::string_view premise,
                              std::string_view hypothesis);

// -- Lexical baselines ------------------------------------------------------

/// Sum of idf over the distinct question terms present in the sentence,
/// divided by the sum of idf over all distinct question terms, clamped to
/// [0, 1]. No stemming. Throws invalid_argument_error("empty query") when the
/// question has no terms.
double lexical_relevance(std::string_view question, std::string_view sentence,
                         const InvertedIndex& index);

/// Answer-type class of a question, from its first wh-word.
enum class WhClass { none, what, where, who, when, why, how, quantity };

/// what/which -> what, where -> where, who/whom/whose -> who, when -> when,
/// why -> why, "how many"/"how much" -> quantity, other how -> how.
WhClass wh_class(std::string_view question);

/// Equal classes are compatible; a question without a wh-word is compatible
/// with every class.
bool wh_compatible(WhClass a, WhClass b);

/// Idf-weighted fraction of the distinct hypothesis terms that also occur in
/// the premise, halved when the wh-classes are incompatible. Throws
/// invalid_argument_error when the hypothesis has no terms.
double lexical_entailment(std::string_view premise, std::string_view hypothesis,
                          const InvertedIndex& index);

/// Rule-based question generation; see the README for the rules.
std::vector<GeneratedQuestion> template_generate(const Sentence& sentence, int k,
                                                 const InvertedIndex& index);

class LexicalRelevance final : public RelevanceScorer {
  public:
    explicit LexicalRelevance(const InvertedIndex& index) : m_index(index) {}
    std::vector<double> score(const Question& question,
                              std::span<const std::string_view> sentences) const override;

  private:
    const InvertedIndex& m_index;
};

class TemplateGenerator final : public QuestionGenerator {
  public:
    explicit TemplateGenerator(const InvertedIndex& index) : m_index(index) {}
    std::vector<GeneratedQuestion> generate(const Sentence& sentence,
                                            const GenerationConfig& config) const override;

  private:
    const InvertedIndex& m_index;
};

class LexicalEntailment final : public EntailmentScorer {
  public:
    explicit LexicalEntailment(const InvertedIndex& index) : m_index(index) {}
    std::vector<double> entail(std::span<const TextPair> pairs) const override;

  private:
    const InvertedIndex& m_index;
};

// -- Top sentence selection -------------------------------------------------

struct ScoredCandidate {
    CandidateSentence candidate;
    double relevance = 0.0;
    std::size_t original_position = 0;
};

/// Stable sort by descending score, truncated to `limit`. Throws
/// invalid_argument_error when the lengths differ.
std::vector<ScoredCandidate> select_top_sentences(const std::vector<CandidateSentence>& candidates,
                                                  const std::vector<double>& scores,
                                                  std::size_t limit = 1000);

}  // namespace equnova
