#pragma once

#include <memory>
#include <semaphore>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "equnova/scoring.hpp"

namespace equnova {

struct BridgeConfig {
    std::string url = "http://127.0.0.1:8765";
    int max_in_flight = 8;
    std::size_t max_batch = 64;
    int timeout_seconds = 60;
};

/// HTTP/JSON client for the model bridge; implements all three scoring ports.
///
///   POST /relevance {question, sentences[]}  -> {scores[]}
///   POST /generate  {sentence, k}            -> {questions[{text, answer_snippet}]}
///   POST /entail    {pairs[[premise, hypothesis]]} -> {probabilities[]}
///   GET  /health                             -> {backend, version, ...}
///
/// Requests are split into batches of at most max_batch items and at most
/// max_in_flight requests are outstanding across all threads. Any non-200
/// status, misaligned array or out-of-range value raises transport_error.
class BridgeClient final : public RelevanceScorer, public QuestionGenerator, public EntailmentScorer {
  public:
    explicit BridgeClient(BridgeConfig config);
    ~BridgeClient() override;

    nlohmann::json health() const;

    std::vector<double> score(const Question& question,
                              std::span<const std::string_view> sentences) const override;
    std::vector<GeneratedQuestion> generate(const Sentence& sentence,
                                            const GenerationConfig& config) const override;
    std::vector<double> entail(std::span<const TextPair> pairs) const override;

    const BridgeConfig& config() const noexcept { return m_config; }

  private:
    nlohmann::json post(const std::string& path, const nlohmann::json& body) const;
    nlohmann::json get(const std::string& path) const;

    BridgeConfig m_config;
    mutable std::counting_semaphore<> m_in_flight;
};

}  // namespace equnova
