#include "equnova/corpus.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

#include "equnova/error.hpp"
#include "equnova/json_io.hpp"

namespace equnova {

std::string to_string(const AnswerSpan& span)
{
    return span.context_id + ":" + std::to_string(span.first_sentence) + "-"
        + std::to_string(span.last_sentence);
}

namespace {

std::uint32_t parse_index(std::string_view text, std::string_view whole)
{
    std::uint32_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
        throw parse_error("bad answer span '" + std::string(whole) + "'");
    }
    return value;
}

}  // namespace

AnswerSpan parse_answer_span(std::string_view text)
{
    auto colon = text.rfind(':');
    if (colon == std::string_view::npos || colon == 0) {
        throw parse_error("bad answer span '" + std::string(text) + "'");
    }
    auto range = text.substr(colon + 1);
    auto dash = range.find('-');
    if (dash == std::string_view::npos) {
        throw parse_error("bad answer span '" + std::string(text) + "'");
    }
    AnswerSpan span;
    span.context_id = std::string(text.substr(0, colon));
    span.first_sentence = parse_index(range.substr(0, dash), text);
    span.last_sentence = parse_index(range.substr(dash + 1), text);
    return span;
}

Corpus::Corpus(std::vector<Document> documents) : m_documents(std::move(documents))
{
    std::unordered_map<std::string, bool> document_ids;
    for (std::uint32_t d = 0; d < m_documents.size(); ++d) {
        auto& doc = m_documents[d];
        if (!document_ids.emplace(doc.document_id, true).second) {
            throw duplicate_id_error(doc.document_id);
        }
        for (std::uint32_t c = 0; c < doc.contexts.size(); ++c) {
            auto& ctx = doc.contexts[c];
            if (!m_contexts.emplace(ctx.context_id, ContextCoord{d, c}).second) {
                throw duplicate_id_error(ctx.context_id);
            }
            if (ctx.sentences.empty()) {
                throw invalid_argument_error("context " + ctx.context_id + " has no sentences");
            }
            std::size_t previous_end = 0;
            for (std::uint32_t s = 0; s < ctx.sentences.size(); ++s) {
                auto& sent = ctx.sentences[s];
                if (sent.char_start >= sent.char_end || sent.char_end > ctx.text.size()) {
                    throw invalid_argument_error(
                        "sentence " + sent.sentence_id + " offsets [" + std::to_string(sent.char_start)
                        + ", " + std::to_string(sent.char_end) + ") out of bounds for context "
                        + ctx.context_id);
                }
                if (sent.char_start < previous_end) {
                    throw invalid_argument_error("sentence " + sent.sentence_id
                                                 + " overlaps or precedes its predecessor");
                }
                previous_end = sent.char_end;
                sent.text = ctx.text.substr(sent.char_start, sent.char_end - sent.char_start);
                if (!m_sentences.emplace(sent.sentence_id, SentenceCoord{d, c, s}).second) {
                    throw duplicate_id_error(sent.sentence_id);
                }
            }
        }
    }
}

SentenceRef Corpus::find_sentence(std::string_view sentence_id) const
{
    auto it = m_sentences.find(std::string(sentence_id));
    if (it == m_sentences.end()) {
        return {};
    }
    const auto& [d, c, s] = it->second;
    const auto& doc = m_documents[d];
    const auto& ctx = doc.contexts[c];
    return SentenceRef{&doc, &ctx, &ctx.sentences[s], s};
}

const Sentence& Corpus::lookup_sentence(std::string_view sentence_id) const
{
    auto ref = find_sentence(sentence_id);
    if (ref.sentence == nullptr) {
        throw not_found_error("unknown sentence id: " + std::string(sentence_id));
    }
    return *ref.sentence;
}

const Context* Corpus::find_context(std::string_view context_id) const
{
    auto it = m_contexts.find(std::string(context_id));
    if (it == m_contexts.end()) {
        return nullptr;
    }
    return &m_documents[it->second.document].contexts[it->second.context];
}

const Context& Corpus::checked_span_context(const AnswerSpan& span) const
{
    if (span.first_sentence > span.last_sentence) {
        throw invalid_argument_error("answer span " + to_string(span) + " has first > last");
    }
    const auto* ctx = find_context(span.context_id);
    if (ctx == nullptr) {
        throw not_found_error("unknown context id: " + span.context_id);
    }
    if (span.last_sentence >= ctx->sentences.size()) {
        throw invalid_argument_error("answer span " + to_string(span) + " exceeds "
                                     + std::to_string(ctx->sentences.size()) + " sentences");
    }
    return *ctx;
}

std::string Corpus::resolve_span(const AnswerSpan& span) const
{
    const auto& ctx = checked_span_context(span);
    std::string out;
    for (auto i = span.first_sentence; i <= span.last_sentence; ++i) {
        if (i != span.first_sentence) {
            out += ' ';
        }
        out += ctx.sentences[i].text;
    }
    return out;
}

std::vector<std::string> Corpus::span_sentence_ids(const AnswerSpan& span) const
{
    const auto& ctx = checked_span_context(span);
    std::vector<std::string> ids;
    for (auto i = span.first_sentence; i <= span.last_sentence; ++i) {
        ids.push_back(ctx.sentences[i].sentence_id);
    }
    return ids;
}

Document document_from_json(const nlohmann::json& j)
{
    Document doc;
    doc.document_id = j.at("document_id").get<std::string>();
    doc.title = j.value("title", std::string{});
    for (const auto& jc : j.at("contexts")) {
        Context ctx;
        ctx.context_id = jc.at("context_id").get<std::string>();
        ctx.text = jc.at("text").get<std::string>();
        for (const auto& js : jc.at("sentences")) {
            Sentence sent;
            sent.sentence_id = js.at("sentence_id").get<std::string>();
            auto start = js.at("start").get<std::int64_t>();
            auto end = js.at("end").get<std::int64_t>();
            if (start < 0 || end < 0) {
                throw invalid_argument_error("sentence " + sent.sentence_id
                                             + " has negative offsets");
            }
            sent.char_start = static_cast<std::size_t>(start);
            sent.char_end = static_cast<std::size_t>(end);
            ctx.sentences.push_back(std::move(sent));
        }
        doc.contexts.push_back(std::move(ctx));
    }
    return doc;
}

nlohmann::json document_to_json(const Document& doc)
{
    nlohmann::json contexts = nlohmann::json::array();
    for (const auto& ctx : doc.contexts) {
        nlohmann::json sentences = nlohmann::json::array();
        for (const auto& s : ctx.sentences) {
            sentences.push_back(
                {{"sentence_id", s.sentence_id}, {"start", s.char_start}, {"end", s.char_end}});
        }
        contexts.push_back(
            {{"context_id", ctx.context_id}, {"text", ctx.text}, {"sentences", std::move(sentences)}});
    }
    return {{"document_id", doc.document_id}, {"title", doc.title}, {"contexts", std::move(contexts)}};
}

Corpus parse_corpus(std::istream& in)
{
    std::vector<Document> documents;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        try {
            documents.push_back(document_from_json(nlohmann::json::parse(line)));
        } catch (const nlohmann::json::exception& e) {
            throw parse_error(line_no, e.what());
        } catch (const invalid_argument_error& e) {
            throw parse_error(line_no, e.what());
        }
    }
    return Corpus(std::move(documents));
}

Corpus load_corpus(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw not_found_error("cannot open corpus " + path);
    }
    return parse_corpus(in);
}

void write_corpus(std::ostream& out, const Corpus& corpus)
{
    for (const auto& doc : corpus.documents()) {
        out << document_to_json(doc).dump() << '\n';
    }
}

}  // namespace equnova
