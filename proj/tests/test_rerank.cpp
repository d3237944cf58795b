#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "equnova/error.hpp"
#include "equnova/novelty.hpp"
#include "equnova/rerank.hpp"
#include "support/oracles.hpp"

using namespace equnova;

namespace {

oracle::Sf to_oracle(Variant v)
{
    switch (v) {
    case Variant::relaxed:
        return oracle::Sf::relaxed;
    case Variant::partial:
        return oracle::Sf::partial;
    case Variant::exact:
        break;
    }
    return oracle::Sf::exact;
}

const Variant all_variants[] = {Variant::relaxed, Variant::partial, Variant::exact};

std::vector<RankedAnswer> answers(std::size_t n)
{
    std::vector<RankedAnswer> out;
    for (std::size_t i = 0; i < n; ++i) {
        RankedAnswer a;
        auto ctx = "A" + std::to_string(i + 1) + "-C0";
        a.answer = {ctx, 0, 0};
        a.sentence_ids = {ctx + "-S0"};
        a.original_rank = static_cast<int>(i) + 1;
        a.relevance = 1.0 - 0.1 * static_cast<double>(i);
        out.push_back(a);
    }
    return out;
}

NuggetAssignment single_sentence(const std::vector<NuggetSet>& nuggets)
{
    NuggetAssignment a;
    for (const auto& n : nuggets) {
        a.per_sentence.push_back({n});
    }
    return a;
}

std::vector<int> ranks(const std::vector<RankedAnswer>& out)
{
    std::vector<int> r;
    for (const auto& a : out) {
        r.push_back(a.original_rank);
    }
    return r;
}

}  // namespace

TEST(NoveltyCounts, Definitions)
{
    std::vector<NuggetSet> one{{7}};
    EXPECT_EQ(novelty_counts(one, {}), (NoveltyCounts{1, 0, 0, 1}));
    EXPECT_EQ(novelty_counts(one, {7}), (NoveltyCounts{0, 0, 1, 0}));
    std::vector<NuggetSet> two{{1, 2}, {}};
    EXPECT_EQ(novelty_counts(two, {}), (NoveltyCounts{2, 1, 0, 1}));
    // a nugget repeated across sentences counts once
    std::vector<NuggetSet> repeat{{1}, {1, 2}, {3}};
    EXPECT_EQ(novelty_counts(repeat, {3}), (NoveltyCounts{2, 0, 1, 2}));
}

TEST(NoveltyScore, HandValues)
{
    EXPECT_DOUBLE_EQ(novelty_score({1, 0, 0, 1}, Variant::exact), 1.0);
    EXPECT_DOUBLE_EQ(novelty_score({2, 1, 0, 1}, Variant::relaxed), 1.5);
    for (auto v : all_variants) {
        EXPECT_EQ(novelty_score({0, 3, 2, 0}, v), 0.0);
        EXPECT_EQ(novelty_score({0, 0, 0, 0}, v), 0.0);
    }
    EXPECT_THROW(novelty_score({-1, 0, 0, 0}, Variant::exact), invalid_argument_error);
    EXPECT_THROW(novelty_score({1, 0, -2, 1}, Variant::partial), invalid_argument_error);
    EXPECT_EQ(sentence_factor({2, 1, 3, 2}, Variant::relaxed), 5);
    EXPECT_EQ(sentence_factor({2, 1, 3, 2}, Variant::partial), 2);
    EXPECT_EQ(sentence_factor({2, 1, 3, 2}, Variant::exact), 6);
    EXPECT_EQ(parse_variant("partial"), Variant::partial);
    EXPECT_EQ(to_string(Variant::relaxed), "relaxed");
    EXPECT_THROW(parse_variant("strict"), invalid_argument_error);
}

TEST(NoveltyScore, BoundedByNPlusOne)
{
    for (int n = 0; n <= 10; ++n)
        for (int na = 0; na <= 10; ++na)
            for (int sn = 0; sn <= 10; ++sn)
                for (int nn = 0; nn <= 10; ++nn)
                    for (auto v : all_variants) {
                        double s = novelty_score({n, na, sn, nn}, v);
                        ASSERT_GE(s, 0.0);
                        ASSERT_LE(s, n + 1.0);
                        ASSERT_EQ(s, oracle::novelty(n, na, sn, nn, to_oracle(v)));
                    }
}

TEST(AssignNuggets, ComponentMembership)
{
    auto as = answers(3);
    std::vector<GeneratedQuestion> gen{
        {"A1-C0-S0-Q0", "q a", "A1-C0-S0", "snip a"},
        {"A3-C0-S0-Q0", "q b", "A3-C0-S0", "snip b"},
        {"A2-C0-S0-Q0", "q c", "A2-C0-S0", "snip c"},
        {"X-Q0", "q d", "X", "snip d"},
    };
    std::vector<Component> comps{{0, {0, 1, 3}}, {1, {2}}};

    auto none = assign_nuggets(as, gen, {}, comps);
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_TRUE(none.answer_nuggets(i).empty());
    }
    EXPECT_TRUE(none.provenance.empty());

    NuggetQuestion nq;
    nq.node = 0;
    nq.gqid = gen[0].gqid;
    nq.component_id = 0;
    auto a = assign_nuggets(as, gen, {nq}, comps);
    EXPECT_EQ(a.answer_nuggets(0), (NuggetSet{0}));
    EXPECT_EQ(a.answer_nuggets(2), (NuggetSet{0}));
    EXPECT_TRUE(a.answer_nuggets(1).empty());  // component 1 has no nugget question
    EXPECT_EQ(a.skipped, 1u);
    ASSERT_EQ(a.provenance.at(0).size(), 2u);
    EXPECT_EQ(a.provenance.at(0)[1].answer_snippet, "snip b");
}

TEST(GreedyRerank, WorkedExampleOrder)
{
    // a5 holds three novel nuggets, a3 and a4 share one more, a1 and a2 none
    auto as = answers(5);
    auto assignment = single_sentence({{}, {}, {3}, {3}, {0, 1, 2}});
    for (auto v : all_variants) {
        auto out = greedy_rerank(as, assignment, v);
        EXPECT_EQ(ranks(out), (std::vector<int>{5, 3, 1, 2, 4})) << to_string(v);
        EXPECT_EQ(out[0].final_rank, 1);
        EXPECT_DOUBLE_EQ(out[0].score, 3.0 * 4 / (3 + 1));
        EXPECT_DOUBLE_EQ(out[1].score, 1.0);
        EXPECT_DOUBLE_EQ(out[2].score, as[0].relevance);  // zero tail keeps relevance
        EXPECT_EQ(out[4].final_rank, 5);
    }
}

TEST(GreedyRerank, IdentityWithoutNuggets)
{
    auto as = answers(6);
    auto out = greedy_rerank(as, single_sentence(std::vector<NuggetSet>(6)), Variant::exact);
    EXPECT_EQ(ranks(out), (std::vector<int>{1, 2, 3, 4, 5, 6}));
    EXPECT_THROW(greedy_rerank(as, single_sentence({{}}), Variant::exact), invalid_argument_error);
}

TEST(GreedyRerank, EachStepTakesTheMaximum)
{
    std::mt19937 rng(23);
    std::uniform_int_distribution<int> nugget(0, 5), count(0, 3), sentences(1, 3);
    for (int round = 0; round < 300; ++round) {
        std::size_t n = std::uniform_int_distribution<std::size_t>(1, 8)(rng);
        auto as = answers(n);
        std::shuffle(as.begin(), as.end(), rng);  // input order differs from original_rank
        NuggetAssignment assignment;
        std::vector<oracle::Answer> oracle_answers;
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<NuggetSet> per;
            for (int s = sentences(rng); s > 0; --s) {
                NuggetSet set;
                for (int c = count(rng); c > 0; --c) {
                    set.insert(nugget(rng));
                }
                per.push_back(set);
            }
            as[i].sentence_ids.resize(per.size());
            assignment.per_sentence.push_back(per);
            oracle_answers.emplace_back(per.begin(), per.end());
        }
        auto v = all_variants[round % 3];
        auto out = greedy_rerank(as, assignment, v);

        ASSERT_EQ(out.size(), n);
        auto got = ranks(out), want = ranks(as);
        std::sort(got.begin(), got.end());
        std::sort(want.begin(), want.end());
        ASSERT_EQ(got, want);

        std::set<int> seen;
        std::vector<bool> placed(n, false);
        auto index_of = [&](int rank) {
            for (std::size_t i = 0; i < n; ++i) {
                if (as[i].original_rank == rank) {
                    return i;
                }
            }
            return n;
        };
        for (const auto& chosen : out) {
            auto c = index_of(chosen.original_rank);
            double best = -1;
            for (std::size_t i = 0; i < n; ++i) {
                if (!placed[i]) {
                    best = std::max(best, oracle::answer_novelty(oracle_answers[i], seen, to_oracle(v)));
                }
            }
            double mine = oracle::answer_novelty(oracle_answers[c], seen, to_oracle(v));
            ASSERT_EQ(mine, best);
            if (best > 0) {
                ASSERT_EQ(chosen.score, mine);
            }
            placed[c] = true;
            for (const auto& s : oracle_answers[c]) {
                seen.insert(s.begin(), s.end());
            }
        }
    }
}

TEST(GreedyOrder, ZeroTailKeepsInputOrder)
{
    std::vector<std::vector<NuggetSet>> items{{{}}, {{1}}, {{1}}, {{}}, {{2}}};
    auto steps = greedy_novelty_order(items, Variant::exact);
    std::vector<std::size_t> order;
    for (const auto& s : steps) {
        order.push_back(s.item);
    }
    EXPECT_EQ(order, (std::vector<std::size_t>{1, 4, 0, 2, 3}));
    EXPECT_EQ(steps[2].score, 0.0);
}
