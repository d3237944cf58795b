#include "equnova/bridge_client.hpp"

#include <algorithm>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "equnova/error.hpp"

namespace equnova {

namespace {

class SemaphoreGuard {
  public:
    explicit SemaphoreGuard(std::counting_semaphore<>& sem) : m_sem(sem) { m_sem.acquire(); }
    ~SemaphoreGuard() { m_sem.release(); }
    SemaphoreGuard(const SemaphoreGuard&) = delete;
    SemaphoreGuard& operator=(const SemaphoreGuard&) = delete;

  private:
    std::counting_semaphore<>& m_sem;
};

std::vector<double> unit_interval_array(const nlohmann::json& body, const char* key,
                                        std::size_t expected)
{
    if (!body.is_object() || !body.contains(key) || !body[key].is_array()) {
        throw transport_error(std::string("bridge response lacks '") + key + "' array");
    }
    const auto& arr = body[key];
    if (arr.size() != expected) {
        throw transport_error(std::string("bridge returned ") + std::to_string(arr.size()) + " "
                              + key + " for " + std::to_string(expected) + " inputs");
    }
    std::vector<double> out;
    out.reserve(arr.size());
    for (const auto& v : arr) {
        if (!v.is_number()) {
            throw transport_error(std::string("non-numeric value in '") + key + "'");
        }
        double x = v.get<double>();
        if (!(x >= 0.0 && x <= 1.0)) {
            throw transport_error(std::string("value outside [0, 1] in '") + key + "'");
        }
        out.push_back(x);
    }
    return out;
}

}  // namespace

BridgeClient::BridgeClient(BridgeConfig config)
    : m_config(std::move(config)), m_in_flight(std::max(1, m_config.max_in_flight))
{
    if (m_config.max_batch == 0) {
        throw invalid_argument_error("bridge max_batch must be >= 1");
    }
}

BridgeClient::~BridgeClient() = default;

nlohmann::json BridgeClient::post(const std::string& path, const nlohmann::json& body) const
{
    SemaphoreGuard guard(m_in_flight);
    httplib::Client client(m_config.url);
    client.set_connection_timeout(m_config.timeout_seconds, 0);
    client.set_read_timeout(m_config.timeout_seconds, 0);
    auto res = client.Post(path, body.dump(), "application/json");
    if (!res) {
        throw transport_error("bridge " + m_config.url + path + ": "
                              + httplib::to_string(res.error()));
    }
    if (res->status != 200) {
        throw transport_error("bridge " + m_config.url + path + ": HTTP "
                              + std::to_string(res->status) + " " + res->body);
    }
    try {
        return nlohmann::json::parse(res->body);
    } catch (const nlohmann::json::exception& e) {
        throw transport_error("bridge " + path + ": malformed JSON: " + e.what());
    }
}

nlohmann::json BridgeClient::get(const std::string& path) const
{
    SemaphoreGuard guard(m_in_flight);
    httplib::Client client(m_config.url);
    client.set_connection_timeout(m_config.timeout_seconds, 0);
    client.set_read_timeout(m_config.timeout_seconds, 0);
    auto res = client.Get(path);
    if (!res) {
        throw transport_error("bridge " + m_config.url + path + ": "
                              + httplib::to_string(res.error()));
    }
    if (res->status != 200) {
        throw transport_error("bridge " + path + ": HTTP " + std::to_string(res->status));
    }
    try {
        return nlohmann::json::parse(res->body);
    } catch (const nlohmann::json::exception& e) {
        throw transport_error("bridge " + path + ": malformed JSON: " + e.what());
    }
}

nlohmann::json BridgeClient::health() const
{
    return get("/health");
}

std::vector<double> BridgeClient::score(const Question& question,
                                        std::span<const std::string_view> sentences) const
{
    std::vector<double> out;
    out.reserve(sentences.size());
    for (std::size_t off = 0; off < sentences.size(); off += m_config.max_batch) {
        auto batch = sentences.subspan(off, std::min(m_config.max_batch, sentences.size() - off));
        nlohmann::json texts = nlohmann::json::array();
        for (auto s : batch) {
            texts.push_back(s);
        }
        auto body = post("/relevance", {{"question", question.text}, {"sentences", texts}});
        auto scores = unit_interval_array(body, "scores", batch.size());
        out.insert(out.end(), scores.begin(), scores.end());
    }
    return out;
}

std::vector<GeneratedQuestion> BridgeClient::generate(const Sentence& sentence,
                                                      const GenerationConfig& config) const
{
    config.validate();
    auto body = post("/generate", {{"sentence", sentence.text}, {"k", config.k}});
    if (!body.is_object() || !body.contains("questions") || !body["questions"].is_array()) {
        throw transport_error("bridge response lacks 'questions' array");
    }
    const auto& arr = body["questions"];
    if (arr.size() > static_cast<std::size_t>(config.k)) {
        throw transport_error("bridge generated more than k questions");
    }
    std::vector<GeneratedQuestion> out;
    for (const auto& jq : arr) {
        if (!jq.is_object() || !jq.contains("text") || !jq["text"].is_string()
            || !jq.contains("answer_snippet") || !jq["answer_snippet"].is_string()) {
            throw transport_error("malformed generated question");
        }
        GeneratedQuestion q;
        q.gqid = sentence.sentence_id + "-Q" + std::to_string(out.size());
        q.text = jq["text"].get<std::string>();
        q.source_sentence = sentence.sentence_id;
        q.answer_snippet = jq["answer_snippet"].get<std::string>();
        if (q.text.empty() || q.answer_snippet.empty()
            || sentence.text.find(q.answer_snippet) == std::string::npos) {
            throw transport_error("generated question has an empty text or a snippet that is not "
                                  "part of the sentence");
        }
        out.push_back(std::move(q));
    }
    return out;
}

std::vector<double> BridgeClient::entail(std::span<const TextPair> pairs) const
{
    std::vector<double> out;
    out.reserve(pairs.size());
    for (std::size_t off = 0; off < pairs.size(); off += m_config.max_batch) {
        auto batch = pairs.subspan(off, std::min(m_config.max_batch, pairs.size() - off));
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& [premise, hypothesis] : batch) {
            arr.push_back({premise, hypothesis});
        }
        auto body = post("/entail", {{"pairs", arr}});
        auto probs = unit_interval_array(body, "probabilities", batch.size());
        out.insert(out.end(), probs.begin(), probs.end());
    }
    return out;
}

}  // namespace equnova
