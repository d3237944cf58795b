#include "equnova/eqg.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <numeric>
#include <set>
#include <thread>

#include <nlohmann/json.hpp>

#include "equnova/error.hpp"

namespace equnova {

void EqgConfig::validate() const
{
    if (!(edge_threshold >= 0.0 && edge_threshold <= 1.0)) {
        throw invalid_argument_error("edge_threshold must be in [0, 1]");
    }
    if (!(q0_threshold >= 0.0 && q0_threshold <= 1.0)) {
        throw invalid_argument_error("q0_threshold must be in [0, 1]");
    }
}

Eqg::Eqg(std::vector<GeneratedQuestion> nodes, std::vector<EqgEdge> edges,
         std::vector<double> q0_entailment, EqgConfig config)
    : m_nodes(std::move(nodes)),
      m_edges(std::move(edges)),
      m_q0(std::move(q0_entailment)),
      m_config(config),
      m_degree(m_nodes.size(), 0),
      m_adjacent(m_nodes.size())
{
    m_config.validate();
    if (m_q0.size() != m_nodes.size()) {
        throw invalid_argument_error("q0_entailment must align with nodes");
    }
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (const auto& e : m_edges) {
        if (e.premise >= m_nodes.size() || e.hypothesis >= m_nodes.size()) {
            throw invalid_argument_error("edge endpoint is not a node");
        }
        if (e.premise == e.hypothesis) {
            throw invalid_argument_error("self-edge on " + m_nodes[e.premise].gqid);
        }
        if (e.probability < m_config.edge_threshold) {
            throw invalid_argument_error("edge probability below edge_threshold");
        }
        if (!seen.emplace(e.premise, e.hypothesis).second) {
            throw invalid_argument_error("duplicate edge");
        }
        ++m_degree[e.premise];
        ++m_degree[e.hypothesis];
        m_adjacent[e.premise].push_back(e.hypothesis);
        m_adjacent[e.hypothesis].push_back(e.premise);
    }
    for (auto& adj : m_adjacent) {
        std::sort(adj.begin(), adj.end());
        adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
    }
}

std::size_t Eqg::node_index(std::string_view gqid) const
{
    for (std::size_t i = 0; i < m_nodes.size(); ++i) {
        if (m_nodes[i].gqid == gqid) {
            return i;
        }
    }
    throw not_found_error("unknown EQG node: " + std::string(gqid));
}

std::size_t Eqg::degree(std::size_t node) const
{
    if (node >= m_nodes.size()) {
        throw not_found_error("EQG node index out of range");
    }
    return m_degree[node];
}

Eqg eqg_from_scores(std::vector<GeneratedQuestion> questions,
                    const std::vector<double>& pair_probability, std::vector<double> q0_entailment,
                    const EqgConfig& config)
{
    auto n = questions.size();
    if (pair_probability.size() != n * n) {
        throw invalid_argument_error("pair_probability must hold n * n entries");
    }
    std::vector<EqgEdge> edges;
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            if (a != b && pair_probability[a * n + b] >= config.edge_threshold) {
                edges.push_back({a, b, pair_probability[a * n + b]});
            }
        }
    }
    return Eqg(std::move(questions), std::move(edges), std::move(q0_entailment), config);
}

Eqg build_eqg(const std::vector<GeneratedQuestion>& questions, const Question& q0,
              const EntailmentScorer& entail, const EqgConfig& config, unsigned workers,
              std::size_t batch_size)
{
    config.validate();
    {
        std::set<std::string_view> ids;
        for (const auto& q : questions) {
            if (!ids.insert(q.gqid).second) {
                throw invalid_argument_error("duplicate gqid " + q.gqid);
            }
        }
    }
    auto n = questions.size();
    // Pairs 0..n*n-1 address (a, b) = (i / n, i % n); diagonal entries are
    // replaced by q0 -> node for node i / n.
    std::vector<TextPair> pairs;
    pairs.reserve(n * n);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            if (a == b) {
                pairs.emplace_back(q0.text, questions[a].text);
            } else {
                pairs.emplace_back(questions[a].text, questions[b].text);
            }
        }
    }

    std::vector<double> probs(pairs.size(), 0.0);
    batch_size = std::max<std::size_t>(batch_size, 1);
    auto n_batches = (pairs.size() + batch_size - 1) / batch_size;
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto work = [&] {
        while (!failed.load()) {
            auto batch = next.fetch_add(1);
            if (batch >= n_batches) {
                return;
            }
            auto off = batch * batch_size;
            auto len = std::min(batch_size, pairs.size() - off);
            try {
                auto out = entail.entail(std::span<const TextPair>(pairs).subspan(off, len));
                if (out.size() != len) {
                    throw transport_error("entailment scorer returned a misaligned batch");
                }
                for (std::size_t i = 0; i < len; ++i) {
                    if (!(out[i] >= 0.0 && out[i] <= 1.0)) {
                        throw transport_error("entailment probability outside [0, 1]");
                    }
                }
                std::copy(out.begin(), out.end(), probs.begin() + static_cast<std::ptrdiff_t>(off));
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) {
                    error = std::current_exception();
                }
                failed = true;
            }
        }
    };

    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(n_batches)));
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back(work);
        }
    }
    if (error) {
        std::rethrow_exception(error);
    }

    std::vector<double> q0_entailment(n);
    for (std::size_t a = 0; a < n; ++a) {
        q0_entailment[a] = probs[a * n + a];
        probs[a * n + a] = 0.0;
    }
    return eqg_from_scores(questions, probs, std::move(q0_entailment), config);
}

std::vector<Component> connected_components(const Eqg& graph)
{
    auto n = graph.size();
    std::vector<int> label(n, -1);
    std::vector<std::vector<std::size_t>> groups;
    for (std::size_t start = 0; start < n; ++start) {
        if (label[start] >= 0) {
            continue;
        }
        auto id = static_cast<int>(groups.size());
        groups.emplace_back();
        std::vector<std::size_t> stack{start};
        label[start] = id;
        while (!stack.empty()) {
            auto node = stack.back();
            stack.pop_back();
            groups.back().push_back(node);
            for (auto next : graph.neighbours(node)) {
                if (label[next] < 0) {
                    label[next] = id;
                    stack.push_back(next);
                }
            }
        }
    }

    const auto& nodes = graph.nodes();
    auto by_gqid = [&](std::size_t a, std::size_t b) { return nodes[a].gqid < nodes[b].gqid; };
    for (auto& g : groups) {
        std::sort(g.begin(), g.end(), by_gqid);
    }
    std::sort(groups.begin(), groups.end(),
              [&](const auto& a, const auto& b) { return by_gqid(a.front(), b.front()); });

    std::vector<Component> out;
    out.reserve(groups.size());
    for (std::size_t i = 0; i < groups.size(); ++i) {
        out.push_back({static_cast<int>(i), std::move(groups[i])});
    }
    return out;
}

std::size_t entailment_degree(const Eqg& graph, std::string_view gqid)
{
    return graph.degree(graph.node_index(gqid));
}

std::vector<NuggetQuestion> select_nugget_questions(const Eqg& graph,
                                                    const std::vector<Component>& components,
                                                    const EqgConfig& config)
{
    const auto& q0 = graph.q0_entailment();
    std::vector<NuggetQuestion> out;
    for (const auto& comp : components) {
        std::vector<std::size_t> candidates;
        for (auto m : comp.members) {
            if (q0[m] >= config.q0_threshold) {
                candidates.push_back(m);
            }
        }
        if (candidates.empty()) {
            continue;
        }
        std::size_t best = 0;
        for (auto c : candidates) {
            best = std::max(best, graph.degree(c));
        }
        for (auto c : candidates) {
            if (graph.degree(c) == best) {
                out.push_back({c, graph.nodes()[c].gqid, comp.component_id, best, q0[c]});
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const NuggetQuestion& a, const NuggetQuestion& b) {
        return a.component_id != b.component_id ? a.component_id < b.component_id : a.gqid < b.gqid;
    });
    return out;
}

nlohmann::json eqg_to_json(const Eqg& graph, const std::vector<Component>& components,
                           const std::vector<NuggetQuestion>& nuggets)
{
    const auto& nodes = graph.nodes();
    nlohmann::json jnodes = nlohmann::json::array();
    nlohmann::json q0 = nlohmann::json::object();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        jnodes.push_back({{"gqid", nodes[i].gqid},
                          {"text", nodes[i].text},
                          {"source_sentence", nodes[i].source_sentence},
                          {"answer_snippet", nodes[i].answer_snippet},
                          {"degree", graph.degree(i)}});
        q0[nodes[i].gqid] = graph.q0_entailment()[i];
    }
    nlohmann::json jedges = nlohmann::json::array();
    for (const auto& e : graph.edges()) {
        jedges.push_back({{"premise", nodes[e.premise].gqid},
                          {"hypothesis", nodes[e.hypothesis].gqid},
                          {"probability", e.probability}});
    }
    nlohmann::json jcomponents = nlohmann::json::array();
    for (const auto& c : components) {
        nlohmann::json members = nlohmann::json::array();
        for (auto m : c.members) {
            members.push_back(nodes[m].gqid);
        }
        jcomponents.push_back({{"component_id", c.component_id}, {"members", std::move(members)}});
    }
    nlohmann::json jnuggets = nlohmann::json::array();
    for (const auto& nq : nuggets) {
        jnuggets.push_back({{"gqid", nq.gqid},
                            {"component_id", nq.component_id},
                            {"degree", nq.degree},
                            {"q0_probability", nq.q0_probability}});
    }
    return {{"config",
             {{"edge_threshold", graph.config().edge_threshold},
              {"q0_threshold", graph.config().q0_threshold}}},
            {"nodes", std::move(jnodes)},
            {"edges", std::move(jedges)},
            {"q0_entailment", std::move(q0)},
            {"components", std::move(jcomponents)},
            {"nugget_questions", std::move(jnuggets)}};
}

}  // namespace equnova
