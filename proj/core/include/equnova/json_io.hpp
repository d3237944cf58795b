#pragma once

#include <nlohmann/json.hpp>

#include "equnova/corpus.hpp"

namespace equnova {

/// Corpus line schema:
/// {"document_id", "title", "contexts": [{"context_id", "text",
///   "sentences": [{"sentence_id", "start", "end"}]}]}
/// Sentence text is sliced from the context text, never stored.
Document document_from_json(const nlohmann::json& j);
nlohmann::json document_to_json(const Document& doc);

}  // namespace equnova
