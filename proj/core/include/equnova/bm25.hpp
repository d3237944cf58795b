#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "equnova/corpus.hpp"
#include "equnova/tokenizer.hpp"

namespace equnova {

struct Posting {
    std::uint32_t ordinal = 0;  // context ordinal
    std::uint32_t tf = 0;

    bool operator==(const Posting&) const = default;
};

struct ScoredContext {
    std::string context_id;
    double score = 0.0;
};

/// Okapi BM25 over contexts. One indexed unit per context, ordinals follow
/// corpus order (document, then context).
class InvertedIndex {
  public:
    InvertedIndex() = default;

    static InvertedIndex build(const Corpus& corpus, IndexConfig config = {});

    const IndexConfig& config() const noexcept { return m_config; }
    std::uint32_t n_contexts() const noexcept { return static_cast<std::uint32_t>(m_doc_lengths.size()); }
    double avg_doc_length() const noexcept { return m_avg_doc_length; }
    const std::vector<std::uint32_t>& doc_lengths() const noexcept { return m_doc_lengths; }
    const std::vector<std::string>& context_ids() const noexcept { return m_context_ids; }

    /// Postings sorted by ordinal; empty for unknown terms.
    const std::vector<Posting>& postings(std::string_view term) const;
    std::uint32_t document_frequency(std::string_view term) const;
    std::uint32_t term_frequency(std::string_view term, std::uint32_t ordinal) const;
    std::size_t vocabulary_size() const noexcept { return m_postings.size(); }

    /// ln(1 + (N - df + 0.5) / (df + 0.5)); non-negative for every df <= N.
    double idf(std::string_view term) const;

    /// Sum over query terms (duplicates counted) of
    /// idf(t) * tf * (k1 + 1) / (tf + k1 * (1 - b + b * len / avglen)).
    /// Throws invalid_argument_error when ordinal >= n_contexts.
    double score(const std::vector<std::string>& query_terms, std::uint32_t ordinal) const;

    /// Contexts with score > 0, by descending score then ascending ordinal.
    std::vector<ScoredContext> search(std::string_view question, std::size_t top_n) const;

    /// Versioned JSON; identical corpus and config give byte-identical output.
    void save(std::ostream& out) const;
    static InvertedIndex load(std::istream& in);
    nlohmann::json to_json() const;
    static InvertedIndex from_json(const nlohmann::json& j);

    bool operator==(const InvertedIndex& other) const;

  private:
    double term_weight(double idf, std::uint32_t tf, std::uint32_t length) const;

    IndexConfig m_config;
    std::unordered_map<std::string, std::vector<Posting>> m_postings;
    std::vector<std::uint32_t> m_doc_lengths;
    std::vector<std::string> m_context_ids;
    double m_avg_doc_length = 0.0;
};

/// A candidate answer sentence drawn from a ranked context.
struct CandidateSentence {
    const Sentence* sentence = nullptr;
    std::string context_id;
    std::uint32_t sentence_index = 0;
    std::uint32_t context_rank = 0;  // 0-based
    double context_score = 0.0;

    AnswerSpan span() const { return {context_id, sentence_index, sentence_index}; }
};

/// All sentences of the ranked contexts, in context-rank then sentence order.
/// Throws not_found_error for unknown context ids.
std::vector<CandidateSentence> candidate_sentences(const Corpus& corpus,
                                                   const std::vector<ScoredContext>& ranked);

}  // namespace equnova
