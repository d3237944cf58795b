#pragma once

#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "equnova/corpus.hpp"
#include "equnova/error.hpp"
#include "equnova/scoring.hpp"

#ifndef EQUNOVA_TEST_DATA_DIR
#define EQUNOVA_TEST_DATA_DIR "tests/data"
#endif

namespace fixtures {

inline std::string data_path(const std::string& name)
{
    return std::string(EQUNOVA_TEST_DATA_DIR) + "/" + name;
}

/// Context whose text is the sentences joined by single spaces.
inline equnova::Context make_context(const std::string& id, const std::vector<std::string>& sentences)
{
    equnova::Context ctx;
    ctx.context_id = id;
    for (std::size_t i = 0; i < sentences.size(); ++i) {
        if (i > 0) {
            ctx.text += ' ';
        }
        equnova::Sentence s;
        s.sentence_id = id + "-S" + std::to_string(i);
        s.char_start = ctx.text.size();
        ctx.text += sentences[i];
        s.char_end = ctx.text.size();
        ctx.sentences.push_back(s);
    }
    return ctx;
}

inline equnova::Document make_document(const std::string& id, std::vector<equnova::Context> contexts)
{
    return {id, "", std::move(contexts)};
}

class ScriptedRelevance final : public equnova::RelevanceScorer {
  public:
    explicit ScriptedRelevance(std::map<std::string, double> by_text) : m_scores(std::move(by_text)) {}
    std::vector<double> score(const equnova::Question&,
                              std::span<const std::string_view> sentences) const override
    {
        std::vector<double> out;
        for (auto s : sentences) {
            auto it = m_scores.find(std::string(s));
            out.push_back(it == m_scores.end() ? 0.0 : it->second);
        }
        return out;
    }

  private:
    std::map<std::string, double> m_scores;
};

class ScriptedGenerator final : public equnova::QuestionGenerator {
  public:
    using Script = std::map<std::string, std::vector<std::pair<std::string, std::string>>>;
    explicit ScriptedGenerator(Script by_sentence_id) : m_script(std::move(by_sentence_id)) {}
    std::vector<equnova::GeneratedQuestion> generate(const equnova::Sentence& sentence,
                                                     const equnova::GenerationConfig& config) const override
    {
        std::vector<equnova::GeneratedQuestion> out;
        auto it = m_script.find(sentence.sentence_id);
        if (it == m_script.end()) {
            return out;
        }
        for (const auto& [text, snippet] : it->second) {
            if (static_cast<int>(out.size()) >= config.k) {
                break;
            }
            out.push_back({sentence.sentence_id + "-Q" + std::to_string(out.size()), text,
                           sentence.sentence_id, snippet});
        }
        return out;
    }

  private:
    Script m_script;
};

class ScriptedEntailment final : public equnova::EntailmentScorer {
  public:
    using Script = std::map<std::pair<std::string, std::string>, double>;
    explicit ScriptedEntailment(Script pairs, double fallback = 0.0)
        : m_pairs(std::move(pairs)), m_fallback(fallback)
    {}
    std::vector<double> entail(std::span<const equnova::TextPair> pairs) const override
    {
        std::vector<double> out;
        for (const auto& [p, h] : pairs) {
            auto it = m_pairs.find({std::string(p), std::string(h)});
            out.push_back(it == m_pairs.end() ? m_fallback : it->second);
        }
        return out;
    }

  private:
    Script m_pairs;
    double m_fallback;
};

class FailingEntailment final : public equnova::EntailmentScorer {
  public:
    std::vector<double> entail(std::span<const equnova::TextPair>) const override
    {
        throw equnova::transport_error("bridge unreachable");
    }
};

/// Five candidate answers a1..a5 to "What is the origin of COVID-19?" in
/// relevance order. a5 yields three q0-entailed questions in separate
/// components; a3 and a4 yield mutually entailing questions (one shared
/// nugget); a1 and a2 yield questions q0 does not entail.
struct WorkedExample {
    equnova::Question q0{"Q0", "What is the origin of COVID-19?"};
    std::vector<std::string> sentences{
        "COVID-19 is a respiratory disease whose origin was studied widely.",          // a1
        "Researchers debated the origin of COVID-19 for months.",                     // a2
        "Early COVID-19 cases were linked to a seafood market, pointing to its origin.",  // a3
        "Market surveys on COVID-19 origin sampled many animal stalls.",             // a4
        "The origin of COVID-19 was Wuhan City in December 2019, likely via bats.",  // a5
    };
    equnova::Corpus corpus;

    ScriptedRelevance relevance{{}};
    ScriptedGenerator generator{{}};
    ScriptedEntailment entailment{{}};

    WorkedExample()
        : corpus([this] {
              std::vector<equnova::Document> docs;
              for (std::size_t i = 0; i < sentences.size(); ++i) {
                  auto id = "A" + std::to_string(i + 1);
                  docs.push_back(make_document(id, {make_context(id + "-C0", {sentences[i]})}));
              }
              return equnova::Corpus(std::move(docs));
          }()),
          relevance({{sentences[0], 0.9}, {sentences[1], 0.8}, {sentences[2], 0.7},
                     {sentences[3], 0.6}, {sentences[4], 0.5}}),
          generator({
              {"A1-C0-S0", {{"What kind of disease is COVID-19?", "respiratory disease"}}},
              {"A2-C0-S0", {{"How long did researchers debate?", "for months"}}},
              {"A3-C0-S0", {{"Which market was linked to early cases?", "a seafood market"}}},
              {"A4-C0-S0", {{"What market did the surveys sample?", "Market surveys"}}},
              {"A5-C0-S0",
               {{"Where did COVID-19 originate?", "Wuhan City"},
                {"When did COVID-19 first appear?", "December 2019"},
                {"Which animal carried the virus?", "bats"}}},
          }),
          entailment(ScriptedEntailment::Script{
              {{q0.text, "Where did COVID-19 originate?"}, 0.95},
              {{q0.text, "When did COVID-19 first appear?"}, 0.8},
              {{q0.text, "Which animal carried the virus?"}, 0.7},
              {{q0.text, "Which market was linked to early cases?"}, 0.75},
              {{q0.text, "What market did the surveys sample?"}, 0.6},
              {{q0.text, "What kind of disease is COVID-19?"}, 0.2},
              {{q0.text, "How long did researchers debate?"}, 0.1},
              {{"Which market was linked to early cases?", "What market did the surveys sample?"}, 0.9},
              {{"What market did the surveys sample?", "Which market was linked to early cases?"}, 0.85},
          })
    {}
};

}  // namespace fixtures
