#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace equnova {

struct Sentence {
    std::string sentence_id;
    std::string text;
    // Byte offsets into the parent context text, half-open.
    std::size_t char_start = 0;
    std::size_t char_end = 0;

    bool operator==(const Sentence&) const = default;
};

struct Context {
    std::string context_id;
    std::string text;
    std::vector<Sentence> sentences;

    bool operator==(const Context&) const = default;
};

struct Document {
    std::string document_id;
    std::string title;
    std::vector<Context> contexts;

    bool operator==(const Document&) const = default;
};

/// An answer: consecutive sentences [first_sentence, last_sentence] of one context.
struct AnswerSpan {
    std::string context_id;
    std::uint32_t first_sentence = 0;
    std::uint32_t last_sentence = 0;

    bool operator==(const AnswerSpan&) const = default;
    auto operator<=>(const AnswerSpan&) const = default;
};

/// `<context_id>:<first>-<last>`, the answer identifier used in run files.
std::string to_string(const AnswerSpan& span);
/// Inverse of to_string; splits on the last ':' so context ids may contain ':'.
AnswerSpan parse_answer_span(std::string_view text);

struct SentenceCoord {
    std::uint32_t document = 0;
    std::uint32_t context = 0;
    std::uint32_t sentence = 0;
};

struct ContextCoord {
    std::uint32_t document = 0;
    std::uint32_t context = 0;
};

/// Resolved sentence: the sentence plus the context it lives in.
struct SentenceRef {
    const Document* document = nullptr;
    const Context* context = nullptr;
    const Sentence* sentence = nullptr;
    std::uint32_t index = 0;  // position within context
};

/// Immutable document -> context -> sentence hierarchy with global id lookup.
class Corpus {
  public:
    Corpus() = default;
    /// Validates the hierarchy and builds the id index. Throws on duplicate ids
    /// or inconsistent offsets.
    explicit Corpus(std::vector<Document> documents);

    const std::vector<Document>& documents() const noexcept { return m_documents; }
    std::size_t sentence_count() const noexcept { return m_sentences.size(); }
    std::size_t context_count() const noexcept { return m_contexts.size(); }

    /// `sentence` is null for unknown ids.
    SentenceRef find_sentence(std::string_view sentence_id) const;
    /// Throws not_found_error.
    const Sentence& lookup_sentence(std::string_view sentence_id) const;
    const Context* find_context(std::string_view context_id) const;

    /// Sentence texts of the span joined by a single space.
    std::string resolve_span(const AnswerSpan& span) const;
    /// Sentence ids covered by the span, in order. Throws like resolve_span.
    std::vector<std::string> span_sentence_ids(const AnswerSpan& span) const;

    bool operator==(const Corpus& other) const { return m_documents == other.m_documents; }

  private:
    const Context& checked_span_context(const AnswerSpan& span) const;

    std::vector<Document> m_documents;
    std::unordered_map<std::string, SentenceCoord> m_sentences;
    std::unordered_map<std::string, ContextCoord> m_contexts;
};

/// One JSON document per line; blank lines are ignored.
Corpus parse_corpus(std::istream& in);
Corpus load_corpus(const std::string& path);
void write_corpus(std::ostream& out, const Corpus& corpus);

}  // namespace equnova
