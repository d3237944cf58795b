#include "equnova/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <istream>
#include <mutex>
#include <ostream>
#include <set>
#include <thread>

#include "equnova/error.hpp"
#include "equnova/json_io.hpp"
#include "equnova/rerank.hpp"

namespace equnova {

namespace {

void check_keys(const nlohmann::json& j, const std::set<std::string>& allowed, const char* where)
{
    if (!j.is_object()) {
        throw invalid_argument_error(std::string(where) + " must be a JSON object");
    }
    for (const auto& [key, _] : j.items()) {
        if (allowed.count(key) == 0) {
            throw invalid_argument_error(std::string("unknown key '") + key + "' in " + where);
        }
    }
}

template <class T>
void read(const nlohmann::json& j, const char* key, T& out)
{
    if (j.contains(key)) {
        out = j.at(key).get<T>();
    }
}

}  // namespace

void PipelineConfig::validate() const
{
    index.validate();
    generation.validate();
    eqg.validate();
    if (top_contexts == 0 || top_sentences == 0 || max_questions_for_eqg == 0) {
        throw invalid_argument_error("top_contexts, top_sentences and max_questions_for_eqg must be >= 1");
    }
    if (relevance != "lexical" && relevance != "bridge") {
        throw invalid_argument_error("relevance must be lexical or bridge");
    }
    if (qgen != "template" && qgen != "bridge") {
        throw invalid_argument_error("qgen must be template or bridge");
    }
    if (entail != "lexical" && entail != "bridge") {
        throw invalid_argument_error("entail must be lexical or bridge");
    }
    if (run_tag.empty() || run_tag.find_first_of(" \t\r\n") != std::string::npos) {
        throw invalid_argument_error("run_tag must be a non-empty word");
    }
    if (workers == 0 || eqg_workers == 0) {
        throw invalid_argument_error("workers must be >= 1");
    }
}

PipelineConfig PipelineConfig::from_json(const nlohmann::json& j)
{
    PipelineConfig c;
    try {
        check_keys(j,
                   {"index", "generation", "eqg", "variant", "top_contexts", "top_sentences",
                    "max_questions_for_eqg", "relevance", "qgen", "entail", "bridge", "run_tag",
                    "rerank", "workers", "eqg_workers"},
                   "config");
        if (j.contains("index")) {
            const auto& ji = j.at("index");
            check_keys(ji, {"k1", "b", "lowercase", "stopwords"}, "config.index");
            read(ji, "k1", c.index.k1);
            read(ji, "b", c.index.b);
            read(ji, "lowercase", c.index.lowercase);
            read(ji, "stopwords", c.index.stopwords);
        }
        if (j.contains("generation")) {
            check_keys(j.at("generation"), {"k"}, "config.generation");
            read(j.at("generation"), "k", c.generation.k);
        }
        if (j.contains("eqg")) {
            check_keys(j.at("eqg"), {"edge_threshold", "q0_threshold"}, "config.eqg");
            read(j.at("eqg"), "edge_threshold", c.eqg.edge_threshold);
            read(j.at("eqg"), "q0_threshold", c.eqg.q0_threshold);
        }
        if (j.contains("variant")) {
            c.variant = parse_variant(j.at("variant").get<std::string>());
        }
        read(j, "top_contexts", c.top_contexts);
        read(j, "top_sentences", c.top_sentences);
        read(j, "max_questions_for_eqg", c.max_questions_for_eqg);
        read(j, "relevance", c.relevance);
        read(j, "qgen", c.qgen);
        read(j, "entail", c.entail);
        if (j.contains("bridge")) {
            const auto& jb = j.at("bridge");
            check_keys(jb, {"url", "max_in_flight", "max_batch", "timeout_seconds"}, "config.bridge");
            read(jb, "url", c.bridge.url);
            read(jb, "max_in_flight", c.bridge.max_in_flight);
            read(jb, "max_batch", c.bridge.max_batch);
            read(jb, "timeout_seconds", c.bridge.timeout_seconds);
        }
        read(j, "run_tag", c.run_tag);
        read(j, "rerank", c.rerank);
        read(j, "workers", c.workers);
        read(j, "eqg_workers", c.eqg_workers);
    } catch (const nlohmann::json::exception& e) {
        throw invalid_argument_error(std::string("bad config: ") + e.what());
    }
    c.validate();
    return c;
}

nlohmann::json PipelineConfig::to_json() const
{
    return {
        {"index", {{"k1", index.k1}, {"b", index.b}, {"lowercase", index.lowercase}, {"stopwords", index.stopwords}}},
        {"generation", {{"k", generation.k}}},
        {"eqg", {{"edge_threshold", eqg.edge_threshold}, {"q0_threshold", eqg.q0_threshold}}},
        {"variant", std::string(equnova::to_string(variant))},
        {"top_contexts", top_contexts},
        {"top_sentences", top_sentences},
        {"max_questions_for_eqg", max_questions_for_eqg},
        {"relevance", relevance},
        {"qgen", qgen},
        {"entail", entail},
        {"bridge",
         {{"url", bridge.url},
          {"max_in_flight", bridge.max_in_flight},
          {"max_batch", bridge.max_batch},
          {"timeout_seconds", bridge.timeout_seconds}}},
        {"run_tag", run_tag},
        {"rerank", rerank},
        {"workers", workers},
        {"eqg_workers", eqg_workers},
    };
}

PipelineConfig load_pipeline_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw not_found_error("cannot open config " + path);
    }
    try {
        return PipelineConfig::from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::parse_error& e) {
        throw parse_error(std::string("config ") + path + ": " + e.what());
    }
}

QuestionSet parse_questions(std::istream& in)
{
    QuestionSet set;
    std::optional<Task> task;
    std::set<std::string> ids;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        try {
            auto j = nlohmann::json::parse(line);
            Question q{j.at("qid").get<std::string>(), j.at("text").get<std::string>()};
            if (q.qid.empty() || q.qid.find_first_of(" \t") != std::string::npos) {
                throw parse_error(line_no, "qid must be a non-empty word");
            }
            if (q.text.find_first_not_of(" \t\r\n") == std::string::npos) {
                throw parse_error(line_no, "question text is empty");
            }
            if (!ids.insert(q.qid).second) {
                throw parse_error(line_no, "duplicate qid " + q.qid);
            }
            if (j.contains("task")) {
                auto name = j.at("task").get<std::string>();
                Task t = name == "expert" ? Task::expert
                    : name == "consumer"  ? Task::consumer
                                          : throw parse_error(line_no, "unknown task " + name);
                if (task && *task != t) {
                    throw parse_error(line_no, "mixed tasks in one question set");
                }
                task = t;
            }
            set.questions.push_back(std::move(q));
        } catch (const nlohmann::json::exception& e) {
            throw parse_error(line_no, e.what());
        }
    }
    set.task = task.value_or(Task::expert);
    return set;
}

QuestionSet load_questions(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw not_found_error("cannot open questions " + path);
    }
    return parse_questions(in);
}

void save_index_bundle(std::ostream& out, const Corpus& corpus, const InvertedIndex& index)
{
    nlohmann::json docs = nlohmann::json::array();
    for (const auto& d : corpus.documents()) {
        docs.push_back(document_to_json(d));
    }
    nlohmann::json j{{"format", "equnova-bundle"},
                     {"version", 1},
                     {"index", index.to_json()},
                     {"corpus", std::move(docs)}};
    out << j.dump() << '\n';
}

std::pair<Corpus, InvertedIndex> load_index_bundle(std::istream& in)
{
    nlohmann::json j;
    try {
        in >> j;
        if (j.at("format").get<std::string>() != "equnova-bundle" || j.at("version").get<int>() != 1) {
            throw parse_error("not an equnova index file (version 1)");
        }
        std::vector<Document> docs;
        for (const auto& d : j.at("corpus")) {
            docs.push_back(document_from_json(d));
        }
        Corpus corpus(std::move(docs));
        auto index = InvertedIndex::from_json(j.at("index"));
        std::size_t ordinal = 0;
        for (const auto& d : corpus.documents()) {
            for (const auto& c : d.contexts) {
                if (ordinal >= index.n_contexts() || index.context_ids()[ordinal] != c.context_id) {
                    throw parse_error("index does not match the embedded corpus");
                }
                ++ordinal;
            }
        }
        if (ordinal != index.n_contexts()) {
            throw parse_error("index does not match the embedded corpus");
        }
        return {std::move(corpus), std::move(index)};
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(std::string("malformed index file: ") + e.what());
    }
}

std::pair<Corpus, InvertedIndex> load_index_bundle(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw not_found_error("cannot open index " + path);
    }
    return load_index_bundle(in);
}

ScorerSet::ScorerSet(const PipelineConfig& config, const InvertedIndex& index)
{
    config.validate();
    bool need_bridge = config.relevance == "bridge" || config.qgen == "bridge" || config.entail == "bridge";
    if (need_bridge) {
        m_bridge = std::make_unique<BridgeClient>(config.bridge);
    }
    if (config.relevance == "lexical") {
        m_relevance = std::make_unique<LexicalRelevance>(index);
        m_scorers.relevance = m_relevance.get();
    } else {
        m_scorers.relevance = m_bridge.get();
    }
    if (config.qgen == "template") {
        m_generator = std::make_unique<TemplateGenerator>(index);
        m_scorers.generator = m_generator.get();
    } else {
        m_scorers.generator = m_bridge.get();
    }
    if (config.entail == "lexical") {
        m_entail = std::make_unique<LexicalEntailment>(index);
        m_scorers.entail = m_entail.get();
    } else {
        m_scorers.entail = m_bridge.get();
    }
}

Scorers ScorerSet::scorers() const
{
    return m_scorers;
}

QuestionRun run_pipeline(const Question& question, const Corpus& corpus,
                         const InvertedIndex& index, const PipelineConfig& config,
                         const Scorers& scorers, bool dump_eqg)
{
    QuestionRun run;
    run.question_id = question.qid;

    // Context ranking and sentence selection.
    auto contexts = index.search(question.text, config.top_contexts);
    auto candidates = candidate_sentences(corpus, contexts);
    run.candidates = candidates.size();
    if (candidates.empty()) {
        return run;
    }
    std::vector<std::string_view> texts;
    texts.reserve(candidates.size());
    for (const auto& c : candidates) {
        texts.push_back(c.sentence->text);
    }
    auto relevance = scorers.relevance->score(question, texts);
    if (relevance.size() != candidates.size()) {
        throw transport_error("relevance scorer returned a misaligned score list");
    }
    for (double r : relevance) {
        if (!(r >= 0.0 && r <= 1.0)) {
            throw transport_error("relevance score outside [0, 1]");
        }
    }
    auto selected = select_top_sentences(candidates, relevance, config.top_sentences);

    std::vector<RankedAnswer> answers;
    answers.reserve(selected.size());
    for (std::size_t i = 0; i < selected.size(); ++i) {
        const auto& c = selected[i].candidate;
        answers.push_back({c.span(), {c.sentence->sentence_id}, static_cast<int>(i) + 1,
                           selected[i].relevance, static_cast<int>(i) + 1, selected[i].relevance});
    }

    auto emit = [&](const std::vector<RankedAnswer>& ranked) {
        for (const auto& a : ranked) {
            run.lines.push_back({question.qid, a.answer, a.final_rank, a.score, config.run_tag});
        }
    };
    if (!config.rerank) {
        emit(answers);
        return run;
    }

    // Question generation, most relevant sentences first. Questions without a
    // single index term cannot be scored lexically and are dropped.
    std::vector<GeneratedQuestion> generated;
    for (const auto& s : selected) {
        if (generated.size() >= config.max_questions_for_eqg) {
            break;
        }
        for (auto& q : scorers.generator->generate(*s.candidate.sentence, config.generation)) {
            if (tokenize(q.text, index.config()).empty()) {
                continue;
            }
            generated.push_back(std::move(q));
        }
    }
    if (generated.size() > config.max_questions_for_eqg) {
        generated.resize(config.max_questions_for_eqg);
    }
    run.generated = generated.size();

    auto graph = build_eqg(generated, question, *scorers.entail, config.eqg, config.eqg_workers,
                           config.bridge.max_batch);
    auto components = connected_components(graph);
    auto nuggets = select_nugget_questions(graph, components, config.eqg);
    run.nugget_questions = nuggets.size();
    if (dump_eqg) {
        run.eqg_dump = eqg_to_json(graph, components, nuggets);
        (*run.eqg_dump)["question"] = {{"qid", question.qid}, {"text", question.text}};
    }

    auto assignment = assign_nuggets(answers, graph.nodes(), nuggets, components);
    emit(greedy_rerank(answers, assignment, config.variant));
    return run;
}

std::vector<QuestionRun> run_batch(const QuestionSet& questions, const Corpus& corpus,
                                   const InvertedIndex& index, const PipelineConfig& config,
                                   const Scorers& scorers, bool strict, bool dump_eqg)
{
    const auto& qs = questions.questions;
    std::vector<QuestionRun> runs(qs.size());
    std::atomic<std::size_t> next{0};
    std::atomic<bool> abort{false};
    std::exception_ptr first_error;
    std::size_t first_error_index = qs.size();
    std::mutex error_mutex;

    auto work = [&] {
        while (!abort.load()) {
            auto i = next.fetch_add(1);
            if (i >= qs.size()) {
                return;
            }
            try {
                runs[i] = run_pipeline(qs[i], corpus, index, config, scorers, dump_eqg);
            } catch (const std::exception& e) {
                runs[i] = QuestionRun{};
                runs[i].question_id = qs[i].qid;
                runs[i].error = e.what();
                if (strict) {
                    std::lock_guard lock(error_mutex);
                    if (i < first_error_index) {
                        first_error_index = i;
                        first_error = std::current_exception();
                    }
                    abort = true;
                }
            }
        }
    };

    auto workers = std::max(1u, std::min<unsigned>(config.workers, static_cast<unsigned>(qs.size())));
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back(work);
        }
    }
    if (first_error) {
        std::rethrow_exception(first_error);
    }
    return runs;
}

}  // namespace equnova
