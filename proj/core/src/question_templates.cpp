// Deterministic stand-in for a neural question generator.
//
// Words are whitespace-separated chunks with surrounding ASCII punctuation
// trimmed; a chunk ending in , ; : . ! ? or a bracket closes a clause.
//
//   1. Title-case runs (uppercase ASCII initial plus a lowercase letter) with
//      leading/trailing stopwords dropped. Preceded by a location preposition:
//      "Where <clause text before the preposition>?". Otherwise
//      "Who <clause text after the run>?", falling back to the text before it.
//      Snippet: the run.
//   2. Numbers (digits with optional , . and trailing %): "How many <clause
//      text after the number>?", falling back to the text before it. Snippet:
//      the number plus the following word when there is one.
//   3. The highest-idf term (earliest on ties): "What <up to three words on
//      either side within the clause, including the word>?". Snippet: the word.
//
// Questions are emitted in that order, duplicates dropped, first k kept.
// A sentence with no index terms yields nothing.

#include <algorithm>
#include <cctype>
#include <set>

#include "equnova/scoring.hpp"

namespace equnova {

namespace {

struct Word {
    std::string_view text;
    std::size_t start = 0;  // byte offsets into the sentence text
    std::size_t end = 0;
    std::size_t clause = 0;
};

bool is_trim_char(char c)
{
    auto u = static_cast<unsigned char>(c);
    return u < 0x80 && !std::isalnum(u) && c != '%';
}

bool closes_clause(char c)
{
    return c == ',' || c == ';' || c == ':' || c == '.' || c == '!' || c == '?' || c == ')'
        || c == ']';
}

std::vector<Word> split_words(std::string_view text)
{
    std::vector<Word> words;
    std::size_t clause = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) {
            ++pos;
        }
        auto chunk_start = pos;
        while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos]))) {
            ++pos;
        }
        auto chunk_end = pos;
        if (chunk_start == chunk_end) {
            break;
        }
        bool opens = text[chunk_start] == '(' || text[chunk_start] == '[';
        bool closes = closes_clause(text[chunk_end - 1]);
        auto s = chunk_start;
        auto e = chunk_end;
        while (s < e && is_trim_char(text[s])) {
            ++s;
        }
        while (e > s && is_trim_char(text[e - 1])) {
            --e;
        }
        if (opens && !words.empty()) {
            ++clause;
        }
        if (s < e) {
            words.push_back({text.substr(s, e - s), s, e, clause});
        }
        if (closes) {
            ++clause;
        }
    }
    return words;
}

std::string lower_ascii(std::string_view w)
{
    std::string out(w);
    for (auto& c : out) {
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return out;
}

bool is_title_case(std::string_view w)
{
    if (w.empty() || !std::isupper(static_cast<unsigned char>(w[0]))) {
        return false;
    }
    return std::any_of(w.begin() + 1, w.end(),
                       [](char c) { return std::islower(static_cast<unsigned char>(c)) != 0; });
}

bool is_number(std::string_view w)
{
    if (w.empty() || !std::isdigit(static_cast<unsigned char>(w[0]))) {
        return false;
    }
    if (w.back() == '%') {
        w.remove_suffix(1);
    }
    return !w.empty() && std::isdigit(static_cast<unsigned char>(w.back()))
        && std::all_of(w.begin(), w.end(), [](char c) {
               return std::isdigit(static_cast<unsigned char>(c)) || c == ',' || c == '.';
           });
}

const std::set<std::string>& location_prepositions()
{
    static const std::set<std::string> preps{"across", "at", "from", "in", "inside", "into",
                                             "near", "outside", "throughout", "to", "within"};
    return preps;
}

class Builder {
  public:
    Builder(const Sentence& sentence, const InvertedIndex& index)
        : m_sentence(sentence), m_index(index), m_words(split_words(sentence.text))
    {}

    std::vector<GeneratedQuestion> run(int k)
    {
        if (tokenize(m_sentence.text, m_index.config()).empty()) {
            return {};
        }
        capitalized_runs();
        numbers();
        highest_idf_term();

        std::vector<GeneratedQuestion> out;
        std::set<std::string> seen;
        for (auto& [text, snippet] : m_candidates) {
            if (static_cast<int>(out.size()) >= k) {
                break;
            }
            if (!seen.insert(text).second) {
                continue;
            }
            GeneratedQuestion q;
            q.gqid = m_sentence.sentence_id + "-Q" + std::to_string(out.size());
            q.text = std::move(text);
            q.source_sentence = m_sentence.sentence_id;
            q.answer_snippet = std::move(snippet);
            out.push_back(std::move(q));
        }
        return out;
    }

  private:
    bool is_stopword(const Word& w) const
    {
        return m_index.config().stopwords.count(lower_ascii(w.text)) != 0;
    }

    /// Sentence text covering words [first, last), or empty.
    std::string slice(std::size_t first, std::size_t last) const
    {
        if (first >= last) {
            return {};
        }
        std::string out(m_sentence.text.substr(m_words[first].start,
                                               m_words[last - 1].end - m_words[first].start));
        // Sentence-initial "The", "In", ... read better lowercased mid-question.
        if (is_title_case(m_words[first].text) && is_stopword(m_words[first])) {
            out[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(out[0])));
        }
        return out;
    }

    std::size_t clause_begin(std::size_t i) const
    {
        while (i > 0 && m_words[i - 1].clause == m_words[i].clause) {
            --i;
        }
        return i;
    }

    std::size_t clause_end(std::size_t i) const
    {
        while (i + 1 < m_words.size() && m_words[i + 1].clause == m_words[i].clause) {
            ++i;
        }
        return i + 1;
    }

    void add(std::string stem, std::string body, std::size_t snippet_first, std::size_t snippet_last)
    {
        if (body.empty()) {
            return;
        }
        auto start = m_words[snippet_first].start;
        auto end = m_words[snippet_last - 1].end;
        m_candidates.emplace_back(stem + " " + body + "?",
                                  std::string(m_sentence.text.substr(start, end - start)));
    }

    void capitalized_runs()
    {
        std::size_t i = 0;
        while (i < m_words.size()) {
            if (!is_title_case(m_words[i].text)) {
                ++i;
                continue;
            }
            auto first = i;
            auto last = i + 1;
            while (last < m_words.size() && m_words[last].clause == m_words[first].clause
                   && is_title_case(m_words[last].text)) {
                ++last;
            }
            i = last;
            while (first < last && is_stopword(m_words[first])) {
                ++first;
            }
            while (last > first && is_stopword(m_words[last - 1])) {
                --last;
            }
            if (first == last) {
                continue;
            }
            auto begin = clause_begin(first);
            auto end = clause_end(last - 1);
            bool after_location = first > begin
                && location_prepositions().count(lower_ascii(m_words[first - 1].text)) != 0;
            if (after_location) {
                add("Where", slice(begin, first - 1), first, last);
            } else {
                auto body = slice(last, end);
                add("Who", body.empty() ? slice(begin, first) : body, first, last);
            }
        }
    }

    void numbers()
    {
        for (std::size_t i = 0; i < m_words.size(); ++i) {
            if (!is_number(m_words[i].text)) {
                continue;
            }
            auto end = clause_end(i);
            if (i + 1 < end) {
                add("How many", slice(i + 1, end), i, i + 2);
            } else {
                add("How many", slice(clause_begin(i), i), i, i + 1);
            }
        }
    }

    void highest_idf_term()
    {
        std::size_t best_word = m_words.size();
        double best_idf = -1.0;
        for (std::size_t i = 0; i < m_words.size(); ++i) {
            for (const auto& term : tokenize(m_words[i].text, m_index.config())) {
                double w = m_index.idf(term);
                if (w > best_idf) {
                    best_idf = w;
                    best_word = i;
                }
            }
        }
        if (best_word == m_words.size()) {
            return;
        }
        auto begin = std::max(clause_begin(best_word), best_word >= 3 ? best_word - 3 : 0);
        auto end = std::min(clause_end(best_word), best_word + 4);
        add("What", slice(begin, end), best_word, best_word + 1);
    }

    const Sentence& m_sentence;
    const InvertedIndex& m_index;
    std::vector<Word> m_words;
    std::vector<std::pair<std::string, std::string>> m_candidates;
};

}  // namespace

std::vector<GeneratedQuestion> template_generate(const Sentence& sentence, int k,
                                                 const InvertedIndex& index)
{
    if (k < 1) {
        return {};
    }
    return Builder(sentence, index).run(k);
}

}  // namespace equnova
