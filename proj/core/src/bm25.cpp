#include "equnova/bm25.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>

#include <nlohmann/json.hpp>

#include "equnova/error.hpp"

namespace equnova {

namespace {

constexpr const char* index_format = "equnova-index";
constexpr int index_version = 1;

const std::vector<Posting> empty_postings;

}  // namespace

InvertedIndex InvertedIndex::build(const Corpus& corpus, IndexConfig config)
{
    config.validate();
    InvertedIndex index;
    index.m_config = std::move(config);
    std::uint64_t total_length = 0;
    for (const auto& doc : corpus.documents()) {
        for (const auto& ctx : doc.contexts) {
            auto ordinal = static_cast<std::uint32_t>(index.m_context_ids.size());
            auto terms = tokenize(ctx.text, index.m_config);
            std::map<std::string_view, std::uint32_t> counts;
            for (const auto& t : terms) {
                ++counts[t];
            }
            for (const auto& [term, tf] : counts) {
                index.m_postings[std::string(term)].push_back({ordinal, tf});
            }
            index.m_context_ids.push_back(ctx.context_id);
            index.m_doc_lengths.push_back(static_cast<std::uint32_t>(terms.size()));
            total_length += terms.size();
        }
    }
    if (!index.m_doc_lengths.empty()) {
        index.m_avg_doc_length =
            static_cast<double>(total_length) / static_cast<double>(index.m_doc_lengths.size());
    }
    return index;
}

const std::vector<Posting>& InvertedIndex::postings(std::string_view term) const
{
    auto it = m_postings.find(std::string(term));
    return it == m_postings.end() ? empty_postings : it->second;
}

std::uint32_t InvertedIndex::document_frequency(std::string_view term) const
{
    return static_cast<std::uint32_t>(postings(term).size());
}

std::uint32_t InvertedIndex::term_frequency(std::string_view term, std::uint32_t ordinal) const
{
    const auto& list = postings(term);
    auto it = std::lower_bound(list.begin(), list.end(), ordinal,
                               [](const Posting& p, std::uint32_t o) { return p.ordinal < o; });
    return (it != list.end() && it->ordinal == ordinal) ? it->tf : 0;
}

double InvertedIndex::idf(std::string_view term) const
{
    double n = n_contexts();
    double df = document_frequency(term);
    return std::log(1.0 + (n - df + 0.5) / (df + 0.5));
}

double InvertedIndex::term_weight(double idf, std::uint32_t tf, std::uint32_t length) const
{
    double f = tf;
    double norm = 1.0 - m_config.b + m_config.b * (length / m_avg_doc_length);
    return idf * (f * (m_config.k1 + 1.0)) / (f + m_config.k1 * norm);
}

double InvertedIndex::score(const std::vector<std::string>& query_terms, std::uint32_t ordinal) const
{
    if (ordinal >= n_contexts()) {
        throw invalid_argument_error("context ordinal " + std::to_string(ordinal)
                                     + " out of range");
    }
    double total = 0.0;
    for (const auto& term : query_terms) {
        auto tf = term_frequency(term, ordinal);
        if (tf == 0) {
            continue;
        }
        total += term_weight(idf(term), tf, m_doc_lengths[ordinal]);
    }
    return total;
}

std::vector<ScoredContext> InvertedIndex::search(std::string_view question, std::size_t top_n) const
{
    if (top_n == 0) {
        throw invalid_argument_error("top_n must be >= 1");
    }
    auto terms = tokenize(question, m_config);
    // Term-at-a-time; contributions are summed in query-term order so the
    // totals are bit-identical to score().
    std::vector<double> acc(n_contexts(), 0.0);
    for (const auto& term : terms) {
        const auto& list = postings(term);
        if (list.empty()) {
            continue;
        }
        double w = idf(term);
        for (const auto& p : list) {
            acc[p.ordinal] += term_weight(w, p.tf, m_doc_lengths[p.ordinal]);
        }
    }
    std::vector<std::uint32_t> hits;
    for (std::uint32_t o = 0; o < acc.size(); ++o) {
        if (acc[o] > 0.0) {
            hits.push_back(o);
        }
    }
    auto by_score = [&](std::uint32_t a, std::uint32_t b) {
        return acc[a] != acc[b] ? acc[a] > acc[b] : a < b;
    };
    auto keep = std::min(top_n, hits.size());
    std::partial_sort(hits.begin(), hits.begin() + static_cast<std::ptrdiff_t>(keep), hits.end(),
                      by_score);
    hits.resize(keep);

    std::vector<ScoredContext> out;
    out.reserve(keep);
    for (auto o : hits) {
        out.push_back({m_context_ids[o], acc[o]});
    }
    return out;
}

nlohmann::json InvertedIndex::to_json() const
{
    nlohmann::json postings = nlohmann::json::object();
    for (const auto& [term, list] : m_postings) {
        auto& arr = postings[term] = nlohmann::json::array();
        for (const auto& p : list) {
            arr.push_back({p.ordinal, p.tf});
        }
    }
    return {
        {"format", index_format},
        {"version", index_version},
        {"config",
         {{"k1", m_config.k1},
          {"b", m_config.b},
          {"lowercase", m_config.lowercase},
          {"stopwords", m_config.stopwords}}},
        {"context_ids", m_context_ids},
        {"doc_lengths", m_doc_lengths},
        {"postings", std::move(postings)},
    };
}

InvertedIndex InvertedIndex::from_json(const nlohmann::json& j)
{
    try {
        if (j.at("format").get<std::string>() != index_format) {
            throw parse_error("not an equnova index");
        }
        if (j.at("version").get<int>() != index_version) {
            throw parse_error("unsupported index version " + j.at("version").dump());
        }
        InvertedIndex index;
        const auto& cfg = j.at("config");
        index.m_config.k1 = cfg.at("k1").get<double>();
        index.m_config.b = cfg.at("b").get<double>();
        index.m_config.lowercase = cfg.at("lowercase").get<bool>();
        index.m_config.stopwords = cfg.at("stopwords").get<std::set<std::string>>();
        index.m_config.validate();
        index.m_context_ids = j.at("context_ids").get<std::vector<std::string>>();
        index.m_doc_lengths = j.at("doc_lengths").get<std::vector<std::uint32_t>>();
        if (index.m_context_ids.size() != index.m_doc_lengths.size()) {
            throw parse_error("context_ids and doc_lengths differ in length");
        }
        for (const auto& [term, arr] : j.at("postings").items()) {
            auto& list = index.m_postings[term];
            for (const auto& p : arr) {
                Posting posting{p.at(0).get<std::uint32_t>(), p.at(1).get<std::uint32_t>()};
                if (posting.ordinal >= index.n_contexts()
                    || (!list.empty() && list.back().ordinal >= posting.ordinal)) {
                    throw parse_error("bad posting for term '" + term + "'");
                }
                list.push_back(posting);
            }
        }
        if (!index.m_doc_lengths.empty()) {
            auto total = std::accumulate(index.m_doc_lengths.begin(), index.m_doc_lengths.end(),
                                         std::uint64_t{0});
            index.m_avg_doc_length =
                static_cast<double>(total) / static_cast<double>(index.m_doc_lengths.size());
        }
        return index;
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(std::string("malformed index: ") + e.what());
    }
}

void InvertedIndex::save(std::ostream& out) const
{
    out << to_json().dump() << '\n';
}

InvertedIndex InvertedIndex::load(std::istream& in)
{
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(std::string("malformed index: ") + e.what());
    }
    return from_json(j);
}

bool InvertedIndex::operator==(const InvertedIndex& other) const
{
    return m_config == other.m_config && m_postings == other.m_postings
        && m_doc_lengths == other.m_doc_lengths && m_context_ids == other.m_context_ids
        && m_avg_doc_length == other.m_avg_doc_length;
}

std::vector<CandidateSentence> candidate_sentences(const Corpus& corpus,
                                                   const std::vector<ScoredContext>& ranked)
{
    std::vector<CandidateSentence> out;
    for (std::uint32_t rank = 0; rank < ranked.size(); ++rank) {
        const auto& sc = ranked[rank];
        const auto* ctx = corpus.find_context(sc.context_id);
        if (ctx == nullptr) {
            throw not_found_error("unknown context id: " + sc.context_id);
        }
        for (std::uint32_t i = 0; i < ctx->sentences.size(); ++i) {
            out.push_back({&ctx->sentences[i], ctx->context_id, i, rank, sc.score});
        }
    }
    return out;
}

}  // namespace equnova
