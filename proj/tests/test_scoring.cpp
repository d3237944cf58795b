#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "equnova/bm25.hpp"
#include "equnova/error.hpp"
#include "equnova/scoring.hpp"
#include "support/fixtures.hpp"

using namespace equnova;
using fixtures::make_context;
using fixtures::make_document;

namespace {

struct CovidIndex {
    Corpus corpus = load_corpus(fixtures::data_path("covid_corpus.jsonl"));
    InvertedIndex index = InvertedIndex::build(corpus);
};

Sentence sentence_of(const std::string& id, const std::string& text)
{
    return {id, text, 0, text.size()};
}

}  // namespace

TEST(LexicalRelevance, Extremes)
{
    CovidIndex f;
    const std::string q = "Where did COVID-19 originate?";
    EXPECT_DOUBLE_EQ(lexical_relevance(q, q, f.index), 1.0);
    EXPECT_DOUBLE_EQ(lexical_relevance(q, "Masks reduce transmission.", f.index), 0.0);
    EXPECT_THROW(lexical_relevance("what is the", "anything", f.index), invalid_argument_error);
}

TEST(LexicalRelevance, HandComputedOnFixture)
{
    CovidIndex f;
    ASSERT_EQ(f.index.n_contexts(), 6u);
    // question terms: origin (df 0), covid (df 1), 19 (df 1); sentence shares covid and 19
    double idf0 = std::log(1 + 6.5 / 0.5);
    double idf1 = std::log(1 + 5.5 / 1.5);
    double expected = 2 * idf1 / (2 * idf1 + idf0);
    EXPECT_NEAR(lexical_relevance("what is the origin of covid 19",
                                  "the outbreak of covid-19 originated from wuhan", f.index),
                expected, 1e-12);
}

TEST(LexicalRelevance, HalfOfEqualIdfMass)
{
    auto corpus = Corpus({make_document("D", {make_context("D-C0", {"alpha gamma"}),
                                              make_context("D-C1", {"beta delta"})})});
    auto index = InvertedIndex::build(corpus);
    ASSERT_DOUBLE_EQ(index.idf("alpha"), index.idf("beta"));
    EXPECT_DOUBLE_EQ(lexical_relevance("alpha beta", "alpha epsilon", index), 0.5);
}

TEST(LexicalRelevance, PortAgreesWithFunction)
{
    CovidIndex f;
    LexicalRelevance port(f.index);
    Question q{"Q1", "What is the origin of COVID-19?"};
    const auto& s = f.corpus.lookup_sentence("D1-C1-S0");
    EXPECT_DOUBLE_EQ(relevance_score(port, q, s), lexical_relevance(q.text, s.text, f.index));
}

TEST(LexicalEntailment, Examples)
{
    CovidIndex f;
    const std::string where = "Where did COVID-19 originate?";
    EXPECT_DOUBLE_EQ(lexical_entailment(where, where, f.index), 1.0);
    EXPECT_DOUBLE_EQ(lexical_entailment(where, "Which vaccines were authorized?", f.index), 0.0);
    // hypothesis terms contained in premise terms
    EXPECT_DOUBLE_EQ(lexical_entailment("Where in Hubei did COVID-19 originate?", where, f.index), 1.0);
    // full coverage, mismatched class
    EXPECT_DOUBLE_EQ(lexical_entailment(where, "Who did COVID-19 originate?", f.index), 0.5);
    // not symmetric
    EXPECT_LT(lexical_entailment(where, "Where in Hubei did COVID-19 originate?", f.index), 1.0);
    EXPECT_THROW(lexical_entailment(where, "what is it?", f.index), invalid_argument_error);
}

TEST(LexicalEntailment, WhClasses)
{
    EXPECT_EQ(wh_class("Which vaccines?"), WhClass::what);
    EXPECT_EQ(wh_class("what is it"), WhClass::what);
    EXPECT_EQ(wh_class("Where did it start?"), WhClass::where);
    EXPECT_EQ(wh_class("Whose idea?"), WhClass::who);
    EXPECT_EQ(wh_class("How many cases?"), WhClass::quantity);
    EXPECT_EQ(wh_class("How much money?"), WhClass::quantity);
    EXPECT_EQ(wh_class("How does it spread?"), WhClass::how);
    EXPECT_EQ(wh_class("Is it airborne?"), WhClass::none);
    EXPECT_TRUE(wh_compatible(WhClass::none, WhClass::where));
    EXPECT_TRUE(wh_compatible(WhClass::who, WhClass::who));
    EXPECT_FALSE(wh_compatible(WhClass::how, WhClass::quantity));
}

TEST(LexicalEntailment, SelfEntailmentIsOne)
{
    CovidIndex f;
    for (const auto& doc : f.corpus.documents()) {
        for (const auto& ctx : doc.contexts) {
            for (const auto& s : ctx.sentences) {
                EXPECT_DOUBLE_EQ(lexical_entailment(s.text, s.text, f.index), 1.0) << s.text;
            }
        }
    }
    LexicalEntailment port(f.index);
    EXPECT_DOUBLE_EQ(entailment_probability(port, "Where is Wuhan?", "Where is Wuhan?"), 1.0);
}

TEST(TemplateGenerate, WhereQuestionForPlace)
{
    CovidIndex f;
    auto s = sentence_of("X-S0", "The outbreak of COVID-19 originated from Wuhan City.");
    auto qs = template_generate(s, 3, f.index);
    ASSERT_FALSE(qs.empty());
    EXPECT_LE(qs.size(), 3u);
    EXPECT_EQ(qs[0].answer_snippet, "Wuhan City");
    EXPECT_EQ(wh_class(qs[0].text), WhClass::where);
    EXPECT_EQ(qs[0].gqid, "X-S0-Q0");
    for (const auto& q : qs) {
        EXPECT_EQ(q.source_sentence, "X-S0");
        EXPECT_FALSE(q.answer_snippet.empty());
        EXPECT_NE(s.text.find(q.answer_snippet), std::string::npos);
        EXPECT_EQ(q.text.back(), '?');
    }
}

TEST(TemplateGenerate, NumbersAndFallback)
{
    CovidIndex f;
    auto s = sentence_of("Y", "Genome sequencing identified a novel coronavirus in 41 patients.");
    auto qs = template_generate(s, 3, f.index);
    ASSERT_GE(qs.size(), 2u);
    bool has_quantity = false;
    for (const auto& q : qs) {
        if (wh_class(q.text) == WhClass::quantity) {
            has_quantity = true;
            EXPECT_EQ(q.answer_snippet, "41 patients");
        }
    }
    EXPECT_TRUE(has_quantity);
    EXPECT_EQ(wh_class(qs.back().text), WhClass::what);
}

TEST(TemplateGenerate, DegenerateAndBounds)
{
    CovidIndex f;
    EXPECT_TRUE(template_generate(sentence_of("Z", "The of and it was."), 3, f.index).empty());
    EXPECT_TRUE(template_generate(sentence_of("Z", ""), 3, f.index).empty());
    auto s = sentence_of("W", "The mRNA vaccine developed by Pfizer showed 95% efficacy in trials.");
    EXPECT_LE(template_generate(s, 1, f.index).size(), 1u);
    EXPECT_EQ(template_generate(s, 3, f.index), template_generate(s, 3, f.index));
    TemplateGenerator port(f.index);
    EXPECT_EQ(port.generate(s, GenerationConfig{2}), template_generate(s, 2, f.index));
    GenerationConfig bad{0};
    EXPECT_THROW(bad.validate(), invalid_argument_error);
}

TEST(SelectTop, SortsStablyAndCuts)
{
    CovidIndex f;
    auto cands = candidate_sentences(f.corpus, {{"D1-C0", 1.0}, {"D1-C1", 0.5}});
    ASSERT_EQ(cands.size(), 5u);
    auto top = select_top_sentences(cands, {0.2, 0.9, 0.2, 0.5, 0.9});
    ASSERT_EQ(top.size(), 5u);
    std::vector<std::size_t> order;
    for (const auto& t : top) {
        order.push_back(t.original_position);
    }
    EXPECT_EQ(order, (std::vector<std::size_t>{1, 4, 3, 0, 2}));
    EXPECT_EQ(top[0].candidate.sentence->sentence_id, "D1-C0-S1");
    EXPECT_THROW(select_top_sentences(cands, {0.1}), invalid_argument_error);
}

TEST(SelectTop, CutMatchesFullSortPrefix)
{
    // 1500 synthetic candidates sharing one sentence pointer.
    Sentence s{"S", "text", 0, 4};
    std::vector<CandidateSentence> cands(1500);
    std::vector<double> scores;
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> bucket(0, 20);
    for (auto& c : cands) {
        c.sentence = &s;
        scores.push_back(bucket(rng) / 20.0);
    }
    auto cut = select_top_sentences(cands, scores);
    auto all = select_top_sentences(cands, scores, cands.size());
    ASSERT_EQ(cut.size(), 1000u);
    ASSERT_EQ(all.size(), 1500u);
    for (std::size_t i = 0; i < cut.size(); ++i) {
        EXPECT_EQ(cut[i].original_position, all[i].original_position);
    }
    for (std::size_t i = 1; i < all.size(); ++i) {
        ASSERT_TRUE(all[i - 1].relevance > all[i].relevance
                    || (all[i - 1].relevance == all[i].relevance
                        && all[i - 1].original_position < all[i].original_position));
    }
}
