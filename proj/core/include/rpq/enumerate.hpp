#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <unordered_map>
#include <vector>

#include "rpq/graph.hpp"

namespace rpq {

/// One outgoing arc of an enumeration graph. `rank` orders the arcs of a
/// vertex and must be unique among them; it doubles as the canonical
/// tie-break key for equal-length paths. `payload` is an opaque caller value
/// carried into emitted paths.
struct EnumArc {
    std::uint64_t rank;
    std::uint64_t to;
    std::uint64_t payload;
};

/// Adjacency interface for path enumeration. Implementations append the out
/// arcs of a vertex in increasing rank order. Views are stateless with
/// respect to enumeration: each enumerator keeps its own adjacency cache, so
/// one view can back several concurrent enumerations.
class EnumGraphView {
public:
    virtual ~EnumGraphView() = default;
    virtual void out_arcs(std::uint64_t v, std::vector<EnumArc>& sink) const = 0;
};

struct EnumPath {
    std::vector<EnumArc> arcs;
    std::vector<std::uint64_t> vertices; // arcs.size() + 1 entries
};

/// Yen-style enumeration of all simple paths between two vertices of an
/// EnumGraphView: non-decreasing length, ties broken by the rank sequence.
/// Deviations are computed with banned-prefix sets kept per emitted root, so
/// the work between two emissions stays polynomial in the graph size.
/// Elementary graph operations (arc scans and queue pops) are counted to
/// make the delay observable.
class PathEnumerator {
public:
    PathEnumerator(const EnumGraphView& view, std::uint64_t source, std::uint64_t target);

    std::optional<EnumPath> next();

    /// Operations spent between the previous emission and the last one.
    std::uint64_t last_delay_ops() const { return last_delay_ops_; }
    std::uint64_t total_ops() const { return ops_; }

private:
    struct Candidate {
        std::vector<std::uint64_t> ranks;
        EnumPath path;
    };
    struct CandidateOrder {
        bool operator()(const Candidate& a, const Candidate& b) const {
            if (a.ranks.size() != b.ranks.size())
                return a.ranks.size() < b.ranks.size();
            return a.ranks < b.ranks;
        }
    };

    const std::vector<EnumArc>& adjacency(std::uint64_t v);
    std::optional<EnumPath> shortest_path(std::uint64_t from,
                                          const std::set<std::uint64_t>& banned_vertices,
                                          const std::set<std::uint64_t>& banned_first_ranks);
    void add_candidates_from(const Candidate& emitted);

    const EnumGraphView& view_;
    std::uint64_t source_;
    std::uint64_t target_;
    bool primed_ = false;
    std::set<Candidate, CandidateOrder> pool_;
    std::map<std::vector<std::uint64_t>, std::set<std::uint64_t>> root_bans_;
    std::unordered_map<std::uint64_t, std::vector<EnumArc>> adjacency_cache_;
    std::uint64_t ops_ = 0;
    std::uint64_t emitted_ops_mark_ = 0;
    std::uint64_t last_delay_ops_ = 0;
};

/// Single-consumer stream of the simple walks between two vertices of a
/// database: non-decreasing length, ties in canonical edge-id order.
class SimpleWalkStream {
public:
    SimpleWalkStream(const Database& db, VertexId s, VertexId t);
    SimpleWalkStream(SimpleWalkStream&&) noexcept = default;
    ~SimpleWalkStream();

    std::optional<Walk> next();

    std::uint64_t last_delay_ops() const;
    std::uint64_t total_ops() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// All simple walks from s to t, enumerated with polynomial delay.
SimpleWalkStream yen_enumerate(const Database& db, VertexId s, VertexId t);

/// Exhaustive DFS oracle; refuses databases above the vertex bound. Results
/// are sorted canonically (length, then edge ids).
std::vector<Walk> brute_force_enumerate(const Database& db, VertexId s, VertexId t,
                                        std::size_t max_vertices = 10);

} // namespace rpq
