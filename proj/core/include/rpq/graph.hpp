#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "rpq/errors.hpp"

namespace rpq {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;
using SymbolId = std::uint32_t;

/// Edge-labelled directed multigraph. Every edge carries a non-empty set of
/// label symbols; parallel edges and self-loops are permitted. Symbols,
/// vertices and edges keep their declaration order so that everything built
/// on top (products, enumeration, serialization) is deterministic.
///
/// Instances are filled once (by the parser or a generator) and treated as
/// immutable afterwards; const access is safe to share across threads.
class Database {
public:
    Database() = default;

    /// Declares a symbol explicitly. Once any symbol has been declared the
    /// alphabet is closed: edges may only use declared labels.
    SymbolId declare_symbol(const std::string& name);

    /// Returns the symbol id, interning the name unless the alphabet is closed.
    SymbolId intern_symbol(const std::string& name);

    VertexId add_vertex(const std::string& name);
    VertexId ensure_vertex(const std::string& name);

    EdgeId add_edge(const std::string& id, VertexId src, VertexId tgt,
                    std::vector<SymbolId> labels);

    std::size_t vertex_count() const { return vertex_names_.size(); }
    std::size_t edge_count() const { return edge_ids_.size(); }
    std::size_t symbol_count() const { return symbol_names_.size(); }
    bool alphabet_declared() const { return alphabet_declared_; }

    const std::string& vertex_name(VertexId v) const { return vertex_names_[v]; }
    const std::string& edge_id(EdgeId e) const { return edge_ids_[e]; }
    const std::string& symbol_name(SymbolId s) const { return symbol_names_[s]; }

    std::optional<VertexId> find_vertex(std::string_view name) const;
    std::optional<EdgeId> find_edge(std::string_view id) const;
    std::optional<SymbolId> find_symbol(std::string_view name) const;

    /// Like find_vertex but throws PreconditionError on unknown names.
    VertexId vertex(std::string_view name) const;

    VertexId edge_src(EdgeId e) const { return edge_src_[e]; }
    VertexId edge_tgt(EdgeId e) const { return edge_tgt_[e]; }

    /// Sorted set of label ids of an edge (non-empty).
    const std::vector<SymbolId>& edge_labels(EdgeId e) const { return edge_labels_[e]; }
    bool edge_has_label(EdgeId e, SymbolId s) const;

    /// Outgoing edges of a vertex in declaration order.
    const std::vector<EdgeId>& out_edges(VertexId v) const { return out_[v]; }
    const std::vector<EdgeId>& in_edges(VertexId v) const { return in_[v]; }

private:
    std::vector<std::string> symbol_names_;
    std::vector<std::string> vertex_names_;
    std::vector<std::string> edge_ids_;
    std::unordered_map<std::string, SymbolId> symbol_index_;
    std::unordered_map<std::string, VertexId> vertex_index_;
    std::unordered_map<std::string, EdgeId> edge_index_;
    std::vector<VertexId> edge_src_;
    std::vector<VertexId> edge_tgt_;
    std::vector<std::vector<SymbolId>> edge_labels_;
    std::vector<std::vector<EdgeId>> out_;
    std::vector<std::vector<EdgeId>> in_;
    bool alphabet_declared_ = false;
};

/// Alternating vertex/edge sequence. A walk of length 0 is a single vertex.
/// Construction through from_edges validates the chaining against a concrete
/// Database; copies are cheap and immutable.
class Walk {
public:
    /// The length-0 walk sitting at v.
    static Walk at(VertexId v);

    /// Builds a walk from consecutive edges, checking src/tgt chaining.
    static Walk from_edges(const Database& db, VertexId start,
                           std::vector<EdgeId> edges);

    std::size_t length() const { return edges_.size(); }
    VertexId src() const { return vertices_.front(); }
    VertexId tgt() const { return vertices_.back(); }

    /// Vertex sequence n0..nk (always length()+1 entries).
    const std::vector<VertexId>& vertices() const { return vertices_; }
    const std::vector<EdgeId>& edges() const { return edges_; }

    bool operator==(const Walk& other) const {
        return vertices_ == other.vertices_ && edges_ == other.edges_;
    }

    /// Canonical order: shorter first, then edge ids lexicographically, then
    /// the start vertex (relevant for length-0 walks only).
    bool operator<(const Walk& other) const;

private:
    Walk(std::vector<VertexId> vertices, std::vector<EdgeId> edges)
        : vertices_(std::move(vertices)), edges_(std::move(edges)) {}

    friend Walk concat(const Walk& w, const Walk& w2);

    std::vector<VertexId> vertices_;
    std::vector<EdgeId> edges_;
};

struct WalkBagEntry {
    Walk walk;
    std::uint64_t multiplicity;

    bool operator==(const WalkBagEntry& other) const {
        return multiplicity == other.multiplicity && walk == other.walk;
    }
};

/// Ordered multiset of walks; entries are kept in canonical walk order.
using WalkBag = std::vector<WalkBagEntry>;

std::uint64_t total_multiplicity(const WalkBag& bag);

bool is_trail(const Walk& w);
bool is_simple(const Walk& w);

/// Checks that the walk's edges exist in db and chain through its recorded
/// vertices; throws PreconditionError otherwise. Walks constructed through
/// from_edges on the same database always pass.
void ensure_walk_valid(const Database& db, const Walk& w);

/// True iff the word has the walk's length and the i-th letter labels the
/// i-th edge.
bool walk_label_contains(const Database& db, const Walk& w,
                         const std::vector<SymbolId>& word);
bool walk_label_contains(const Database& db, const Walk& w,
                         const std::vector<std::string>& word);

/// Concatenation; requires tgt(w) == src(w2).
Walk concat(const Walk& w, const Walk& w2);

/// Reads the line-oriented graph format:
///   alphabet <sym> [<sym>...]     (optional; closes the alphabet)
///   vertex <name>
///   edge <id> <src> <tgt> <label>[,<label>...]
/// '#' starts a comment. When the file has explicit vertex lines, edges may
/// only reference declared vertices; otherwise endpoints are declared
/// implicitly.
Database parse_database(std::string_view text);

/// Emits the explicit form of the graph format; parse_database round-trips it.
std::string serialize_database(const Database& db);

/// Walk text: `v0 -e0-> v1 -e1-> ... vk`, or just `v0` for length 0.
Walk parse_walk(const Database& db, std::string_view text);
std::string serialize_walk(const Database& db, const Walk& w);

} // namespace rpq
