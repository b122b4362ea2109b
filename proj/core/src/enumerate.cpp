#include "rpq/enumerate.hpp"

#include <algorithm>
#include <deque>

namespace rpq {

PathEnumerator::PathEnumerator(const EnumGraphView& view, std::uint64_t source,
                               std::uint64_t target)
    : view_(view), source_(source), target_(target) {}

const std::vector<EnumArc>& PathEnumerator::adjacency(std::uint64_t v) {
    auto it = adjacency_cache_.find(v);
    if (it != adjacency_cache_.end())
        return it->second;
    std::vector<EnumArc> arcs;
    view_.out_arcs(v, arcs);
    return adjacency_cache_.emplace(v, std::move(arcs)).first->second;
}

std::optional<EnumPath> PathEnumerator::shortest_path(
    std::uint64_t from, const std::set<std::uint64_t>& banned_vertices,
    const std::set<std::uint64_t>& banned_first_ranks) {
    if (from == target_)
        return EnumPath{{}, {from}};

    // BFS with arcs scanned in rank order: vertices are discovered in
    // lexicographic order of their shortest paths, so the first path that
    // reaches the target is the canonical shortest one.
    std::unordered_map<std::uint64_t, std::pair<std::uint64_t, EnumArc>> parent;
    std::deque<std::uint64_t> queue;
    queue.push_back(from);
    bool first_hop = true;
    while (!queue.empty()) {
        std::uint64_t v = queue.front();
        queue.pop_front();
        ++ops_;
        for (const EnumArc& arc : adjacency(v)) {
            ++ops_;
            if (first_hop && banned_first_ranks.count(arc.rank))
                continue;
            if (arc.to == from || parent.count(arc.to))
                continue;
            if (banned_vertices.count(arc.to))
                continue;
            parent.emplace(arc.to, std::make_pair(v, arc));
            if (arc.to == target_) {
                EnumPath path;
                std::uint64_t cur = target_;
                while (cur != from) {
                    auto& link = parent.at(cur);
                    path.arcs.push_back(link.second);
                    cur = link.first;
                }
                std::reverse(path.arcs.begin(), path.arcs.end());
                path.vertices.push_back(from);
                for (const EnumArc& a : path.arcs)
                    path.vertices.push_back(a.to);
                return path;
            }
            queue.push_back(arc.to);
        }
        first_hop = false;
    }
    return std::nullopt;
}

void PathEnumerator::add_candidates_from(const Candidate& emitted) {
    const auto& arcs = emitted.path.arcs;
    std::vector<std::uint64_t> root_ranks;
    std::set<std::uint64_t> banned_vertices;
    for (std::size_t spur = 0; spur < arcs.size(); ++spur) {
        std::uint64_t spur_vertex = emitted.path.vertices[spur];
        // Root vertices before the spur node must not be revisited.
        if (spur > 0)
            banned_vertices.insert(emitted.path.vertices[spur - 1]);

        const std::set<std::uint64_t>* bans = nullptr;
        if (auto it = root_bans_.find(root_ranks); it != root_bans_.end())
            bans = &it->second;
        static const std::set<std::uint64_t> kEmpty;
        auto completion =
            shortest_path(spur_vertex, banned_vertices, bans ? *bans : kEmpty);
        if (completion) {
            Candidate candidate;
            candidate.path.arcs.assign(arcs.begin(), arcs.begin() + spur);
            candidate.path.arcs.insert(candidate.path.arcs.end(),
                                       completion->arcs.begin(), completion->arcs.end());
            candidate.path.vertices.assign(emitted.path.vertices.begin(),
                                           emitted.path.vertices.begin() + spur);
            candidate.path.vertices.insert(candidate.path.vertices.end(),
                                           completion->vertices.begin(),
                                           completion->vertices.end());
            candidate.ranks = root_ranks;
            for (const EnumArc& a : completion->arcs)
                candidate.ranks.push_back(a.rank);
            pool_.insert(std::move(candidate));
        }
        root_ranks.push_back(arcs[spur].rank);
    }
}

std::optional<EnumPath> PathEnumerator::next() {
    if (!primed_) {
        primed_ = true;
        auto first = shortest_path(source_, {}, {});
        if (first) {
            Candidate c;
            c.path = std::move(*first);
            for (const EnumArc& a : c.path.arcs)
                c.ranks.push_back(a.rank);
            pool_.insert(std::move(c));
        }
    }
    if (pool_.empty()) {
        last_delay_ops_ = ops_ - emitted_ops_mark_;
        emitted_ops_mark_ = ops_;
        return std::nullopt;
    }
    Candidate current = *pool_.begin();
    pool_.erase(pool_.begin());

    // Record the emitted path's prefixes so later deviations at the same
    // root skip its continuation arc.
    std::vector<std::uint64_t> prefix;
    for (std::uint64_t rank : current.ranks) {
        root_bans_[prefix].insert(rank);
        prefix.push_back(rank);
    }

    add_candidates_from(current);
    last_delay_ops_ = ops_ - emitted_ops_mark_;
    emitted_ops_mark_ = ops_;
    return std::move(current.path);
}

namespace {

class DatabaseView final : public EnumGraphView {
public:
    explicit DatabaseView(const Database& db) : db_(db) {}

    void out_arcs(std::uint64_t v, std::vector<EnumArc>& sink) const override {
        for (EdgeId e : db_.out_edges(static_cast<VertexId>(v)))
            sink.push_back({e, db_.edge_tgt(e), e});
        std::sort(sink.begin(), sink.end(),
                  [](const EnumArc& a, const EnumArc& b) { return a.rank < b.rank; });
    }

private:
    const Database& db_;
};

} // namespace

struct SimpleWalkStream::Impl {
    Impl(const Database& db, VertexId s, VertexId t)
        : db(db), view(db), enumerator(view, s, t), start(s) {}

    const Database& db;
    DatabaseView view;
    PathEnumerator enumerator;
    VertexId start;
};

SimpleWalkStream::SimpleWalkStream(const Database& db, VertexId s, VertexId t)
    : impl_(std::make_unique<Impl>(db, s, t)) {}

SimpleWalkStream::~SimpleWalkStream() = default;

std::optional<Walk> SimpleWalkStream::next() {
    auto path = impl_->enumerator.next();
    if (!path)
        return std::nullopt;
    std::vector<EdgeId> edges;
    edges.reserve(path->arcs.size());
    for (const EnumArc& a : path->arcs)
        edges.push_back(static_cast<EdgeId>(a.payload));
    return Walk::from_edges(impl_->db, impl_->start, std::move(edges));
}

std::uint64_t SimpleWalkStream::last_delay_ops() const {
    return impl_->enumerator.last_delay_ops();
}

std::uint64_t SimpleWalkStream::total_ops() const {
    return impl_->enumerator.total_ops();
}

SimpleWalkStream yen_enumerate(const Database& db, VertexId s, VertexId t) {
    if (s >= db.vertex_count() || t >= db.vertex_count())
        throw PreconditionError("unknown vertex");
    return SimpleWalkStream(db, s, t);
}

std::vector<Walk> brute_force_enumerate(const Database& db, VertexId s, VertexId t,
                                        std::size_t max_vertices) {
    if (s >= db.vertex_count() || t >= db.vertex_count())
        throw PreconditionError("unknown vertex");
    if (db.vertex_count() > max_vertices)
        throw GuardError("brute-force enumeration bound exceeded: " +
                         std::to_string(db.vertex_count()) + " vertices > " +
                         std::to_string(max_vertices));
    std::vector<Walk> out;
    std::vector<bool> visited(db.vertex_count(), false);
    std::vector<EdgeId> path;
    visited[s] = true;

    struct Rec {
        const Database& db;
        VertexId t;
        VertexId start;
        std::vector<bool>& visited;
        std::vector<EdgeId>& path;
        std::vector<Walk>& out;

        void run(VertexId v) {
            if (v == t) {
                out.push_back(Walk::from_edges(db, start, path));
                return;
            }
            for (EdgeId e : db.out_edges(v)) {
                VertexId w = db.edge_tgt(e);
                if (visited[w])
                    continue;
                visited[w] = true;
                path.push_back(e);
                run(w);
                path.pop_back();
                visited[w] = false;
            }
        }
    };
    Rec rec{db, t, s, visited, path, out};
    rec.run(s);
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace rpq
