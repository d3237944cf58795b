#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "equnova/scoring.hpp"

namespace equnova {

struct EqgConfig {
    /// An ordered pair becomes an edge when its probability is >= this.
    double edge_threshold = 0.5;
    /// Nugget questions need P(q0 entails node) >= this.
    double q0_threshold = 0.5;

    void validate() const;
};

struct EqgEdge {
    std::size_t premise = 0;  // node index
    std::size_t hypothesis = 0;
    double probability = 0.0;
};

/// Directed entailment graph over generated questions. The original question
/// is not a node; its entailment probability towards every node is kept in
/// q0_entailment, aligned with nodes.
class Eqg {
  public:
    Eqg() = default;
    /// Validates endpoints, self-edges and thresholds.
    Eqg(std::vector<GeneratedQuestion> nodes, std::vector<EqgEdge> edges,
        std::vector<double> q0_entailment, EqgConfig config);

    const std::vector<GeneratedQuestion>& nodes() const noexcept { return m_nodes; }
    const std::vector<EqgEdge>& edges() const noexcept { return m_edges; }
    const std::vector<double>& q0_entailment() const noexcept { return m_q0; }
    const EqgConfig& config() const noexcept { return m_config; }
    std::size_t size() const noexcept { return m_nodes.size(); }

    /// Node index for a gqid; throws not_found_error.
    std::size_t node_index(std::string_view gqid) const;
    /// In-degree plus out-degree; a mutual pair counts twice.
    std::size_t degree(std::size_t node) const;
    /// Undirected neighbours (either direction), sorted, unique.
    const std::vector<std::size_t>& neighbours(std::size_t node) const { return m_adjacent[node]; }

  private:
    std::vector<GeneratedQuestion> m_nodes;
    std::vector<EqgEdge> m_edges;
    std::vector<double> m_q0;
    EqgConfig m_config;
    std::vector<std::size_t> m_degree;
    std::vector<std::vector<std::size_t>> m_adjacent;
};

/// Scores every ordered pair (a, b), a != b, plus q0 -> node, in batches of
/// `batch_size` pairs spread over `workers` threads. Any scorer failure
/// aborts the build. Throws invalid_argument_error on duplicate gqids.
Eqg build_eqg(const std::vector<GeneratedQuestion>& questions, const Question& q0,
              const EntailmentScorer& entail, const EqgConfig& config, unsigned workers = 1,
              std::size_t batch_size = 64);

/// Graph from already-scored pairs: pair_probability[a * n + b] for a != b.
Eqg eqg_from_scores(std::vector<GeneratedQuestion> questions,
                    const std::vector<double>& pair_probability, std::vector<double> q0_entailment,
                    const EqgConfig& config);

struct Component {
    int component_id = 0;
    std::vector<std::size_t> members;  // node indices ordered by gqid
};

/// Weakly connected components. Ids count up from 0 in order of each
/// component's smallest member gqid; isolated nodes are singletons.
std::vector<Component> connected_components(const Eqg& graph);

/// Degree of the node with this gqid; throws not_found_error.
std::size_t entailment_degree(const Eqg& graph, std::string_view gqid);

struct NuggetQuestion {
    std::size_t node = 0;
    std::string gqid;
    int component_id = 0;
    std::size_t degree = 0;
    double q0_probability = 0.0;
};

/// Per component: keep members with q0 probability >= q0_threshold, then all
/// survivors whose degree equals the survivors' maximum. Sorted by
/// (component_id, gqid).
std::vector<NuggetQuestion> select_nugget_questions(const Eqg& graph,
                                                    const std::vector<Component>& components,
                                                    const EqgConfig& config);

/// Inspection dump: nodes, edges, q0_entailment, components, nugget questions.
nlohmann::json eqg_to_json(const Eqg& graph, const std::vector<Component>& components,
                           const std::vector<NuggetQuestion>& nuggets);

}  // namespace equnova
