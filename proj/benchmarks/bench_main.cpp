#include <random>
#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "equnova/bm25.hpp"
#include "equnova/eqg.hpp"
#include "equnova/novelty.hpp"
#include "equnova/scoring.hpp"

using namespace equnova;

namespace {

Corpus random_corpus(int n_contexts, int vocab, unsigned seed)
{
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> word(0, vocab - 1), length(20, 120);
    std::vector<Document> docs;
    for (int d = 0; d < n_contexts; ++d) {
        Context ctx;
        ctx.context_id = "D" + std::to_string(d) + "-C0";
        Sentence s;
        s.sentence_id = ctx.context_id + "-S0";
        for (int i = length(rng); i > 0; --i) {
            ctx.text += (ctx.text.empty() ? "" : " ") + ("w" + std::to_string(word(rng)));
        }
        s.char_end = ctx.text.size();
        ctx.sentences.push_back(s);
        docs.push_back({"D" + std::to_string(d), "", {ctx}});
    }
    return Corpus(std::move(docs));
}

void BM_IndexBuild(benchmark::State& state)
{
    auto corpus = random_corpus(static_cast<int>(state.range(0)), 5000, 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(InvertedIndex::build(corpus));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_IndexBuild)->Arg(1000)->Arg(10000);

void BM_Search(benchmark::State& state)
{
    auto corpus = random_corpus(static_cast<int>(state.range(0)), 5000, 2);
    auto index = InvertedIndex::build(corpus);
    for (auto _ : state) {
        benchmark::DoNotOptimize(index.search("w1 w17 w230 w999", 200));
    }
}
BENCHMARK(BM_Search)->Arg(1000)->Arg(10000);

/// Entailment stub: cheap, deterministic, about 3% of pairs pass 0.5.
class HashEntailment final : public EntailmentScorer {
  public:
    std::vector<double> entail(std::span<const TextPair> pairs) const override
    {
        std::vector<double> out;
        out.reserve(pairs.size());
        for (const auto& [p, h] : pairs) {
            auto x = std::hash<std::string_view>{}(p) ^ (std::hash<std::string_view>{}(h) * 31);
            out.push_back(static_cast<double>(x % 1000) / 1000.0 * 0.515);
        }
        return out;
    }
};

void BM_BuildEqg(benchmark::State& state)
{
    std::vector<GeneratedQuestion> qs;
    for (int i = 0; i < state.range(0); ++i) {
        qs.push_back({"g" + std::to_string(i), "question number " + std::to_string(i), "S", "x"});
    }
    HashEntailment entail;
    auto workers = static_cast<unsigned>(state.range(1));
    for (auto _ : state) {
        auto g = build_eqg(qs, {"Q", "original"}, entail, {}, workers);
        auto comps = connected_components(g);
        benchmark::DoNotOptimize(select_nugget_questions(g, comps, {}));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}
BENCHMARK(BM_BuildEqg)->Args({100, 1})->Args({500, 1})->Args({500, 4});

void BM_GreedyNovelty(benchmark::State& state)
{
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> nugget(0, 199), count(0, 3);
    std::vector<std::vector<NuggetSet>> answers(static_cast<std::size_t>(state.range(0)));
    for (auto& a : answers) {
        NuggetSet s;
        for (int c = count(rng); c > 0; --c) {
            s.insert(nugget(rng));
        }
        a.push_back(s);
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(greedy_novelty_order(answers, Variant::exact));
    }
}
BENCHMARK(BM_GreedyNovelty)->Arg(100)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
