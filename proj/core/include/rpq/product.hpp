#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "rpq/automaton.hpp"
#include "rpq/graph.hpp"

namespace rpq {

/// Materialized product of a database and an automaton. Product vertices are
/// all (vertex, state) pairs named "(v,q)"; a product edge (e,(q,a,q'))
/// exists iff a labels e, and is named "(e,(q,a,q'))". Vertex and edge order
/// follow the base declaration orders, so dumps and tests are stable.
///
/// Immutable after build; concurrent reads and enumerations are fine.
class RunDatabase {
public:
    static RunDatabase build(const Database& db, const Automaton& a);

    const Database& base() const { return base_; }
    const Automaton& automaton() const { return automaton_; }

    /// The product as a plain database (labels are single automaton symbols).
    const Database& product() const { return product_; }

    VertexId product_vertex(VertexId v, StateId q) const;
    std::pair<VertexId, StateId> vertex_pair(VertexId product_vertex) const;
    std::pair<EdgeId, TransId> edge_pair(EdgeId product_edge) const;

    /// Vertices (v, i) with i initial, in declaration order.
    const std::vector<VertexId>& initial_layer() const { return initial_layer_; }
    /// Vertices (v, f) with f final.
    const std::vector<VertexId>& final_layer() const { return final_layer_; }

    /// Maps a walk of the product back to the base database; length is
    /// preserved.
    Walk project(const Walk& run) const;

    /// A walk of the product is a run when it starts in the initial layer and
    /// ends in the final layer.
    bool is_run(const Walk& w) const;

    /// Product dump in the graph file format.
    std::string dump() const;

private:
    RunDatabase() = default;

    Database base_;
    Automaton automaton_;
    Database product_;
    std::vector<std::pair<EdgeId, TransId>> edge_pairs_;
    std::vector<VertexId> initial_layer_;
    std::vector<VertexId> final_layer_;
};

} // namespace rpq
