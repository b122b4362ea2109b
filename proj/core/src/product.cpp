#include "rpq/product.hpp"

namespace rpq {

RunDatabase RunDatabase::build(const Database& db, const Automaton& a) {
    RunDatabase rd;
    rd.base_ = db;
    rd.automaton_ = a;

    Database& p = rd.product_;
    for (SymbolId s = 0; s < db.symbol_count(); ++s)
        p.declare_symbol(db.symbol_name(s));

    // Vertices (v,q) in row-major declaration order.
    for (VertexId v = 0; v < db.vertex_count(); ++v)
        for (StateId q = 0; q < a.state_count(); ++q)
            p.add_vertex("(" + db.vertex_name(v) + "," + a.state_name(q) + ")");

    auto pv = [&](VertexId v, StateId q) {
        return static_cast<VertexId>(v * a.state_count() + q);
    };

    for (EdgeId e = 0; e < db.edge_count(); ++e) {
        for (TransId t = 0; t < a.transition_count(); ++t) {
            const auto& tr = a.transition(t);
            auto sym = db.find_symbol(a.symbol_name(tr.symbol));
            if (!sym || !db.edge_has_label(e, *sym))
                continue;
            std::string id = "(" + db.edge_id(e) + ",(" + a.state_name(tr.src) + "," +
                             a.symbol_name(tr.symbol) + "," + a.state_name(tr.tgt) + "))";
            p.add_edge(id, pv(db.edge_src(e), tr.src), pv(db.edge_tgt(e), tr.tgt),
                       {*sym});
            rd.edge_pairs_.emplace_back(e, t);
        }
    }

    for (VertexId v = 0; v < db.vertex_count(); ++v)
        for (StateId q : a.initials())
            rd.initial_layer_.push_back(pv(v, q));
    for (VertexId v = 0; v < db.vertex_count(); ++v)
        for (StateId q : a.finals())
            rd.final_layer_.push_back(pv(v, q));

    return rd;
}

VertexId RunDatabase::product_vertex(VertexId v, StateId q) const {
    return static_cast<VertexId>(v * automaton_.state_count() + q);
}

std::pair<VertexId, StateId> RunDatabase::vertex_pair(VertexId product_vertex) const {
    auto states = static_cast<VertexId>(automaton_.state_count());
    return {product_vertex / states, product_vertex % states};
}

std::pair<EdgeId, TransId> RunDatabase::edge_pair(EdgeId product_edge) const {
    return edge_pairs_[product_edge];
}

Walk RunDatabase::project(const Walk& run) const {
    ensure_walk_valid(product_, run);
    std::vector<EdgeId> edges;
    edges.reserve(run.length());
    for (EdgeId e : run.edges()) {
        if (e >= edge_pairs_.size())
            throw PreconditionError("walk is not a walk of this product");
        edges.push_back(edge_pairs_[e].first);
    }
    VertexId start = vertex_pair(run.src()).first;
    return Walk::from_edges(base_, start, std::move(edges));
}

bool RunDatabase::is_run(const Walk& w) const {
    ensure_walk_valid(product_, w);
    auto src = vertex_pair(w.src());
    auto tgt = vertex_pair(w.tgt());
    return automaton_.is_initial(src.second) && automaton_.is_final(tgt.second);
}

std::string RunDatabase::dump() const {
    return serialize_database(product_);
}

} // namespace rpq
