#include "equnova/ndns.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "equnova/error.hpp"

namespace equnova {

Judgments load_judgments(std::istream& in)
{
    Judgments judgments;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        auto hash = raw.find('#');
        if (hash != std::string::npos) {
            raw.erase(hash);
        }
        std::istringstream fields(raw);
        std::string qid, sentence, label, extra;
        if (!(fields >> qid)) {
            continue;
        }
        if (!(fields >> sentence >> label) || (fields >> extra)) {
            throw parse_error(line_no, "expected 'question_id sentence_id nugget_label'");
        }
        judgments[qid][sentence].insert(label);
    }
    return judgments;
}

double discounted_gain(std::span<const double> gains)
{
    double total = 0.0;
    for (std::size_t r = 0; r < gains.size(); ++r) {
        total += gains[r] / std::log2(static_cast<double>(r) + 2.0);
    }
    return total;
}

std::vector<double> novelty_gains(std::span<const EvalAnswer> ranked, Variant variant)
{
    std::vector<double> gains;
    gains.reserve(ranked.size());
    NuggetSet seen;
    for (const auto& a : ranked) {
        gains.push_back(novelty_score(novelty_counts(a.per_sentence, seen), variant));
        for (const auto& s : a.per_sentence) {
            seen.insert(s.begin(), s.end());
        }
    }
    return gains;
}

std::vector<std::size_t> ideal_ranking(std::span<const EvalAnswer> pool, Variant variant)
{
    std::vector<std::size_t> by_id(pool.size());
    std::iota(by_id.begin(), by_id.end(), std::size_t{0});
    std::stable_sort(by_id.begin(), by_id.end(), [&](std::size_t a, std::size_t b) {
        return pool[a].answer_id < pool[b].answer_id;
    });
    std::vector<std::vector<NuggetSet>> items;
    items.reserve(pool.size());
    for (auto i : by_id) {
        items.push_back(pool[i].per_sentence);
    }
    std::vector<std::size_t> order;
    order.reserve(pool.size());
    for (const auto& step : greedy_novelty_order(items, variant)) {
        order.push_back(by_id[step.item]);
    }
    return order;
}

namespace {

class LabelInterner {
  public:
    NuggetSet intern(const std::set<std::string>& labels)
    {
        NuggetSet out;
        for (const auto& l : labels) {
            auto [it, inserted] = m_ids.emplace(l, static_cast<int>(m_ids.size()));
            out.insert(it->second);
        }
        return out;
    }

  private:
    std::map<std::string, int> m_ids;
};

const std::map<std::string, std::set<std::string>>& question_judgments(const Judgments& judgments,
                                                                        const std::string& qid)
{
    static const std::map<std::string, std::set<std::string>> none;
    auto it = judgments.find(qid);
    return it == judgments.end() ? none : it->second;
}

}  // namespace

QuestionEval evaluate_question(const std::string& question_id, const std::vector<RunLine>& answers,
                               const Judgments& judgments, const Corpus& corpus, Variant variant)
{
    const auto& judged = question_judgments(judgments, question_id);
    LabelInterner interner;
    auto sentence_nuggets = [&](const std::string& sentence_id) {
        auto it = judged.find(sentence_id);
        return it == judged.end() ? NuggetSet{} : interner.intern(it->second);
    };

    std::vector<const RunLine*> ranked;
    for (const auto& line : answers) {
        ranked.push_back(&line);
    }
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const RunLine* a, const RunLine* b) { return a->rank < b->rank; });

    QuestionEval eval;
    eval.question_id = question_id;
    eval.variant = variant;

    std::vector<EvalAnswer> run_answers;
    std::vector<bool> resolved;
    for (const auto* line : ranked) {
        EvalAnswer answer{to_string(line->answer), {}};
        bool ok = true;
        try {
            for (const auto& sid : corpus.span_sentence_ids(line->answer)) {
                answer.per_sentence.push_back(sentence_nuggets(sid));
            }
        } catch (const error&) {
            ok = false;
            ++eval.unresolved;
            answer.per_sentence.assign(1, NuggetSet{});
        }
        run_answers.push_back(std::move(answer));
        resolved.push_back(ok);
    }

    // Ideal pool: resolvable run answers plus each judged sentence alone.
    std::map<std::string, EvalAnswer> pool;
    for (std::size_t i = 0; i < run_answers.size(); ++i) {
        if (resolved[i]) {
            pool.emplace(run_answers[i].answer_id, run_answers[i]);
        }
    }
    for (const auto& [sentence_id, labels] : judged) {
        auto ref = corpus.find_sentence(sentence_id);
        std::string id = ref.sentence == nullptr
            ? sentence_id
            : to_string(AnswerSpan{ref.context->context_id, ref.index, ref.index});
        pool.try_emplace(id, EvalAnswer{id, {interner.intern(labels)}});
    }
    std::vector<EvalAnswer> pool_list;
    for (auto& [id, answer] : pool) {
        pool_list.push_back(std::move(answer));
    }
    std::vector<EvalAnswer> ideal;
    for (auto i : ideal_ranking(pool_list, variant)) {
        ideal.push_back(pool_list[i]);
    }

    auto gains = novelty_gains(run_answers, variant);
    eval.dcg = discounted_gain(gains);
    eval.idcg = discounted_gain(novelty_gains(ideal, variant));
    eval.ndns = eval.idcg > 0.0 ? eval.dcg / eval.idcg : 0.0;

    NuggetSet seen;
    for (std::size_t i = 0; i < run_answers.size(); ++i) {
        AnswerTrace t;
        t.answer_id = run_answers[i].answer_id;
        t.rank = ranked[i]->rank;
        t.counts = novelty_counts(run_answers[i].per_sentence, seen);
        t.novelty = gains[i];
        t.resolved = resolved[i];
        for (const auto& s : run_answers[i].per_sentence) {
            seen.insert(s.begin(), s.end());
        }
        eval.trace.push_back(std::move(t));
    }
    return eval;
}

std::vector<QuestionEval> evaluate_run(const std::vector<RunLine>& run, const Judgments& judgments,
                                       const Corpus& corpus, Variant variant)
{
    std::map<std::string, std::vector<RunLine>> by_question;
    for (const auto& [qid, _] : judgments) {
        by_question[qid];
    }
    for (const auto& line : run) {
        by_question[line.question_id].push_back(line);
    }
    std::vector<QuestionEval> out;
    for (const auto& [qid, lines] : by_question) {
        out.push_back(evaluate_question(qid, lines, judgments, corpus, variant));
    }
    return out;
}

EvalReport report(std::vector<QuestionScores> per_question)
{
    EvalReport r;
    r.questions = std::move(per_question);
    if (!r.questions.empty()) {
        double n = static_cast<double>(r.questions.size());
        for (const auto& q : r.questions) {
            r.mean.relaxed += q.relaxed;
            r.mean.partial += q.partial;
            r.mean.exact += q.exact;
        }
        r.mean.relaxed /= n;
        r.mean.partial /= n;
        r.mean.exact /= n;
    }
    return r;
}

EvalReport evaluate_report(const std::vector<RunLine>& run, const Judgments& judgments,
                           const Corpus& corpus)
{
    auto relaxed = evaluate_run(run, judgments, corpus, Variant::relaxed);
    auto partial = evaluate_run(run, judgments, corpus, Variant::partial);
    auto exact = evaluate_run(run, judgments, corpus, Variant::exact);
    std::vector<QuestionScores> rows;
    for (std::size_t i = 0; i < exact.size(); ++i) {
        rows.push_back({exact[i].question_id, relaxed[i].ndns, partial[i].ndns, exact[i].ndns});
    }
    auto r = report(std::move(rows));
    for (const auto& q : exact) {
        r.unresolved += q.unresolved;
    }
    for (auto* list : {&relaxed, &partial, &exact}) {
        r.details.insert(r.details.end(), list->begin(), list->end());
    }
    return r;
}

nlohmann::json report_to_json(const EvalReport& report, bool with_trace)
{
    auto row = [](const QuestionScores& q) {
        return nlohmann::json{{"question_id", q.question_id},
                              {"ndns_relaxed", q.relaxed},
                              {"ndns_partial", q.partial},
                              {"ndns_exact", q.exact}};
    };
    nlohmann::json questions = nlohmann::json::array();
    for (const auto& q : report.questions) {
        questions.push_back(row(q));
    }
    nlohmann::json out{{"questions", std::move(questions)},
                       {"mean", row(report.mean)},
                       {"unresolved_answers", report.unresolved}};
    if (with_trace) {
        nlohmann::json details = nlohmann::json::array();
        for (const auto& d : report.details) {
            nlohmann::json trace = nlohmann::json::array();
            for (const auto& t : d.trace) {
                trace.push_back({{"answer", t.answer_id},
                                 {"rank", t.rank},
                                 {"novelty", t.novelty},
                                 {"novel_nuggets", t.counts.novel},
                                 {"no_nugget_sentences", t.counts.no_nugget},
                                 {"seen_sentences", t.counts.seen_only},
                                 {"novel_sentences", t.counts.novel_sentences},
                                 {"resolved", t.resolved}});
            }
            details.push_back({{"question_id", d.question_id},
                               {"variant", std::string(to_string(d.variant))},
                               {"dcg", d.dcg},
                               {"idcg", d.idcg},
                               {"ndns", d.ndns},
                               {"trace", std::move(trace)}});
        }
        out["details"] = std::move(details);
    }
    return out;
}

std::string report_table(const EvalReport& report)
{
    std::size_t width = 8;
    for (const auto& q : report.questions) {
        width = std::max(width, q.question_id.size());
    }
    std::string out;
    char buf[160];
    auto line = [&](const std::string& id, const std::string& a, const std::string& b,
                    const std::string& c) {
        std::snprintf(buf, sizeof(buf), "%-*s  %12s  %12s  %12s\n", static_cast<int>(width),
                      id.c_str(), a.c_str(), b.c_str(), c.c_str());
        out += buf;
    };
    auto num = [](double v) {
        char b[32];
        std::snprintf(b, sizeof(b), "%.4f", v);
        return std::string(b);
    };
    line("question", "NDNS-Relaxed", "NDNS-Partial", "NDNS-Exact");
    for (const auto& q : report.questions) {
        line(q.question_id, num(q.relaxed), num(q.partial), num(q.exact));
    }
    line("all", num(report.mean.relaxed), num(report.mean.partial), num(report.mean.exact));
    return out;
}

}  // namespace equnova
