#include "rpq/semantics.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <set>
#include <unordered_set>

namespace rpq {

const char* to_string(SemanticsMode m) {
    switch (m) {
    case SemanticsMode::Walk: return "walk";
    case SemanticsMode::Trail: return "trail";
    case SemanticsMode::SimpleWalk: return "simple-walk";
    case SemanticsMode::TrailRun: return "trail-run";
    case SemanticsMode::SimpleRun: return "simple-run";
    case SemanticsMode::BindingTrail: return "binding-trail";
    }
    return "?";
}

std::optional<SemanticsMode> semantics_from_string(std::string_view name) {
    for (SemanticsMode m :
         {SemanticsMode::Walk, SemanticsMode::Trail, SemanticsMode::SimpleWalk,
          SemanticsMode::TrailRun, SemanticsMode::SimpleRun, SemanticsMode::BindingTrail})
        if (name == to_string(m))
            return m;
    return std::nullopt;
}

Query Query::from_regex(Regex r) {
    Query q;
    q.automaton_ = glushkov(r);
    q.regex_ = std::move(r);
    return q;
}

Query Query::from_automaton(Automaton a) {
    Query q;
    q.automaton_ = std::move(a);
    return q;
}

const Regex& Query::regex() const {
    if (!regex_)
        throw PreconditionError("this operation needs the query as an expression");
    return *regex_;
}

namespace {

// ---------------------------------------------------------------------------
// Lazy adjacency views over the product. Vertex 0 is a virtual source, 1 a
// virtual sink; payloads of virtual arcs are kSuperPayload.

constexpr std::uint64_t kSuperPayload = ~0ull;

/// Maps (symbol name of the automaton) -> db symbol id, once.
std::vector<std::optional<SymbolId>> symbol_bridge(const Database& db,
                                                   const Automaton& a) {
    std::vector<std::optional<SymbolId>> bridge(a.symbol_count());
    for (std::uint32_t s = 0; s < a.symbol_count(); ++s)
        bridge[s] = db.find_symbol(a.symbol_name(s));
    return bridge;
}

bool edge_matches(const Database& db, const std::vector<std::optional<SymbolId>>& bridge,
                  EdgeId e, std::uint32_t automaton_symbol) {
    const auto& sym = bridge[automaton_symbol];
    return sym && db.edge_has_label(e, *sym);
}

/// Product of db and automaton with a virtual source in front of the (s, i)
/// layer and a virtual sink behind the (t, f) layer. Simple paths source ->
/// sink correspond exactly to the simple runs from s to t, including the
/// length-0 ones (paths of two virtual arcs).
class ProductRunView final : public EnumGraphView {
public:
    ProductRunView(const Database& db, const Automaton& a, VertexId s, VertexId t)
        : db_(db), a_(a), s_(s), t_(t), bridge_(symbol_bridge(db, a)) {}

    std::uint64_t source() const { return 0; }
    std::uint64_t sink() const { return 1; }
    std::uint64_t product_id(VertexId v, StateId q) const {
        return 2 + static_cast<std::uint64_t>(v) * a_.state_count() + q;
    }

    void out_arcs(std::uint64_t vertex, std::vector<EnumArc>& sink_arcs) const override {
        if (vertex == 1)
            return;
        if (vertex == 0) {
            for (StateId i : a_.initials())
                sink_arcs.push_back({i, product_id(s_, i), kSuperPayload});
            return;
        }
        std::uint64_t raw = vertex - 2;
        VertexId v = static_cast<VertexId>(raw / a_.state_count());
        StateId q = static_cast<StateId>(raw % a_.state_count());
        std::uint64_t m = a_.transition_count();
        for (EdgeId e : db_.out_edges(v)) {
            for (TransId t : a_.out_transitions(q)) {
                const auto& tr = a_.transition(t);
                if (!edge_matches(db_, bridge_, e, tr.symbol))
                    continue;
                std::uint64_t pe = static_cast<std::uint64_t>(e) * m + t;
                sink_arcs.push_back({pe, product_id(db_.edge_tgt(e), tr.tgt), pe});
            }
        }
        std::sort(sink_arcs.begin(), sink_arcs.end(),
                  [](const EnumArc& x, const EnumArc& y) { return x.rank < y.rank; });
        if (v == t_ && a_.is_final(q))
            sink_arcs.push_back({static_cast<std::uint64_t>(db_.edge_count()) * m + q, 1,
                                 kSuperPayload});
    }

    /// Projection of a source->sink path to the base database.
    Walk decode(const EnumPath& path) const {
        std::vector<EdgeId> edges;
        for (const EnumArc& arc : path.arcs) {
            if (arc.payload == kSuperPayload)
                continue;
            edges.push_back(static_cast<EdgeId>(arc.payload / a_.transition_count()));
        }
        return Walk::from_edges(db_, s_, std::move(edges));
    }

private:
    const Database& db_;
    const Automaton& a_;
    VertexId s_;
    VertexId t_;
    std::vector<std::optional<SymbolId>> bridge_;
};

/// Line graph of the product: nodes are product edges, so simple paths are
/// the trails of the product, i.e. the trail runs from s to t of length >= 1.
class LineProductView final : public EnumGraphView {
public:
    LineProductView(const Database& db, const Automaton& a, VertexId s, VertexId t)
        : db_(db), a_(a), s_(s), t_(t), bridge_(symbol_bridge(db, a)) {}

    std::uint64_t source() const { return 0; }
    std::uint64_t sink() const { return 1; }

    void out_arcs(std::uint64_t vertex, std::vector<EnumArc>& sink_arcs) const override {
        if (vertex == 1)
            return;
        std::uint64_t m = a_.transition_count();
        if (vertex == 0) {
            for (EdgeId e : db_.out_edges(s_)) {
                for (StateId i : a_.initials()) {
                    for (TransId t : a_.out_transitions(i)) {
                        const auto& tr = a_.transition(t);
                        if (!edge_matches(db_, bridge_, e, tr.symbol))
                            continue;
                        std::uint64_t pe = static_cast<std::uint64_t>(e) * m + t;
                        sink_arcs.push_back({pe, 2 + pe, pe});
                    }
                }
            }
            std::sort(sink_arcs.begin(), sink_arcs.end(),
                      [](const EnumArc& x, const EnumArc& y) { return x.rank < y.rank; });
            return;
        }
        std::uint64_t pe = vertex - 2;
        EdgeId e = static_cast<EdgeId>(pe / m);
        const auto& tr = a_.transition(static_cast<TransId>(pe % m));
        VertexId v = db_.edge_tgt(e);
        StateId q = tr.tgt;
        for (EdgeId e2 : db_.out_edges(v)) {
            for (TransId t2 : a_.out_transitions(q)) {
                const auto& tr2 = a_.transition(t2);
                if (!edge_matches(db_, bridge_, e2, tr2.symbol))
                    continue;
                std::uint64_t pe2 = static_cast<std::uint64_t>(e2) * m + t2;
                sink_arcs.push_back({pe2, 2 + pe2, pe2});
            }
        }
        std::sort(sink_arcs.begin(), sink_arcs.end(),
                  [](const EnumArc& x, const EnumArc& y) { return x.rank < y.rank; });
        if (v == t_ && a_.is_final(q))
            sink_arcs.push_back(
                {static_cast<std::uint64_t>(db_.edge_count()) * m, 1, kSuperPayload});
    }

    Walk decode(const EnumPath& path) const {
        std::vector<EdgeId> edges;
        for (const EnumArc& arc : path.arcs) {
            if (arc.payload == kSuperPayload)
                continue;
            edges.push_back(static_cast<EdgeId>(arc.payload / a_.transition_count()));
        }
        return Walk::from_edges(db_, s_, std::move(edges));
    }

private:
    const Database& db_;
    const Automaton& a_;
    VertexId s_;
    VertexId t_;
    std::vector<std::optional<SymbolId>> bridge_;
};

/// Binding-key graph of a Glushkov automaton: nodes are keys (e, q') -- an
/// edge matched at a position state -- plus a virtual source standing for
/// (s, init). Simple paths are exactly the binding trails from s to t of
/// length >= 1, since key distinctness is vertex distinctness here.
class KeyGraphView final : public EnumGraphView {
public:
    KeyGraphView(const Database& db, const Automaton& glushkov_aut, VertexId s, VertexId t)
        : db_(db), a_(glushkov_aut), s_(s), t_(t), bridge_(symbol_bridge(db, a_)) {
        if (a_.initials().size() != 1)
            throw PreconditionError("binding keys need a Glushkov automaton");
        init_ = a_.initials().front();
    }

    std::uint64_t source() const { return 0; }
    std::uint64_t sink() const { return 1; }

    void out_arcs(std::uint64_t vertex, std::vector<EnumArc>& sink_arcs) const override {
        if (vertex == 1)
            return;
        std::uint64_t states = a_.state_count();
        VertexId v;
        StateId q;
        if (vertex == 0) {
            v = s_;
            q = init_;
        } else {
            std::uint64_t key = vertex - 2;
            EdgeId e = static_cast<EdgeId>(key / states);
            q = static_cast<StateId>(key % states);
            v = db_.edge_tgt(e);
        }
        for (EdgeId e2 : db_.out_edges(v)) {
            for (TransId t2 : a_.out_transitions(q)) {
                const auto& tr2 = a_.transition(t2);
                if (!edge_matches(db_, bridge_, e2, tr2.symbol))
                    continue;
                std::uint64_t key2 = static_cast<std::uint64_t>(e2) * states + tr2.tgt;
                sink_arcs.push_back({key2, 2 + key2, key2});
            }
        }
        std::sort(sink_arcs.begin(), sink_arcs.end(),
                  [](const EnumArc& x, const EnumArc& y) { return x.rank < y.rank; });
        if (vertex != 0 && v == t_ && a_.is_final(q))
            sink_arcs.push_back(
                {static_cast<std::uint64_t>(db_.edge_count()) * states, 1, kSuperPayload});
    }

    Walk decode(const EnumPath& path) const {
        std::vector<EdgeId> edges;
        for (const EnumArc& arc : path.arcs) {
            if (arc.payload == kSuperPayload)
                continue;
            edges.push_back(static_cast<EdgeId>(arc.payload / a_.state_count()));
        }
        return Walk::from_edges(db_, s_, std::move(edges));
    }

private:
    const Database& db_;
    const Automaton& a_;
    VertexId s_;
    VertexId t_;
    StateId init_;
    std::vector<std::optional<SymbolId>> bridge_;
};

// ---------------------------------------------------------------------------
// Shared small algorithms.

/// NFA state set after one step along edge e (any label of e may be read).
std::vector<char> step_states(const Database& db, const Automaton& a,
                              const std::vector<std::optional<SymbolId>>& bridge,
                              const std::vector<char>& current, EdgeId e) {
    std::vector<char> next(a.state_count(), 0);
    for (StateId q = 0; q < a.state_count(); ++q) {
        if (!current[q])
            continue;
        for (TransId t : a.out_transitions(q)) {
            const auto& tr = a.transition(t);
            if (edge_matches(db, bridge, e, tr.symbol))
                next[tr.tgt] = 1;
        }
    }
    return next;
}

/// Does lbl(w) meet the automaton's language?
bool walk_accepts(const Database& db, const Automaton& a, const Walk& w) {
    auto bridge = symbol_bridge(db, a);
    std::vector<char> cur(a.state_count(), 0);
    for (StateId q : a.initials())
        cur[q] = 1;
    for (EdgeId e : w.edges()) {
        cur = step_states(db, a, bridge, cur, e);
        if (std::find(cur.begin(), cur.end(), 1) == cur.end())
            return false;
    }
    for (StateId q : a.finals())
        if (cur[q])
            return true;
    return false;
}

/// States at each walk position from which the remaining suffix can still
/// reach acceptance. backward[i] constrains the state after i edges.
std::vector<std::vector<char>> backward_sets(const Database& db, const Automaton& a,
                                             const Walk& w) {
    auto bridge = symbol_bridge(db, a);
    std::size_t len = w.length();
    std::vector<std::vector<char>> backward(len + 1,
                                            std::vector<char>(a.state_count(), 0));
    for (StateId q : a.finals())
        backward[len][q] = 1;
    for (std::size_t i = len; i > 0; --i) {
        EdgeId e = w.edges()[i - 1];
        for (StateId q = 0; q < a.state_count(); ++q) {
            for (TransId t : a.out_transitions(q)) {
                const auto& tr = a.transition(t);
                if (backward[i][tr.tgt] && edge_matches(db, bridge, e, tr.symbol)) {
                    backward[i - 1][q] = 1;
                    break;
                }
            }
        }
    }
    return backward;
}

/// Run filters for the backtracking over a fixed walk.
enum class RunFilter { None, SimpleVertices, TrailEdges, BindingKeys };

/// Counts (or just detects) runs over exactly the walk w that pass the
/// filter. Backtracking over state annotations with backward-set pruning.
std::uint64_t runs_over_walk(const Database& db, const Automaton& a, const Walk& w,
                             RunFilter filter, bool count_all) {
    auto bridge = symbol_bridge(db, a);
    auto backward = backward_sets(db, a, w);
    std::size_t len = w.length();
    std::uint64_t found = 0;
    std::unordered_set<std::uint64_t> used;

    std::uint64_t states = a.state_count();
    auto vertex_key = [&](std::size_t pos, StateId q) {
        return static_cast<std::uint64_t>(w.vertices()[pos]) * states + q;
    };

    std::function<bool(std::size_t, StateId)> go = [&](std::size_t i, StateId q) -> bool {
        if (i == len) {
            ++found;
            return !count_all;
        }
        EdgeId e = w.edges()[i];
        for (TransId t : a.out_transitions(q)) {
            const auto& tr = a.transition(t);
            if (!backward[i + 1][tr.tgt])
                continue;
            if (!edge_matches(db, bridge, e, tr.symbol))
                continue;
            std::uint64_t key = 0;
            bool keyed = true;
            switch (filter) {
            case RunFilter::None:
                keyed = false;
                break;
            case RunFilter::SimpleVertices:
                key = vertex_key(i + 1, tr.tgt);
                break;
            case RunFilter::TrailEdges:
                key = static_cast<std::uint64_t>(e) * a.transition_count() + t;
                break;
            case RunFilter::BindingKeys:
                key = static_cast<std::uint64_t>(e) * states + tr.tgt;
                break;
            }
            if (keyed && !used.insert(key).second)
                continue;
            bool stop = go(i + 1, tr.tgt);
            if (keyed)
                used.erase(key);
            if (stop)
                return true;
        }
        return false;
    };

    for (StateId q : a.initials()) {
        if (!backward[0][q])
            continue;
        if (filter == RunFilter::SimpleVertices) {
            used.insert(vertex_key(0, q));
            bool stop = go(0, q);
            used.erase(vertex_key(0, q));
            if (stop)
                break;
        } else {
            if (go(0, q))
                break;
        }
    }
    return found;
}

void check_exhaustive_guard(const Database& db, const Automaton& a, const Guards& guards,
                            const char* what) {
    std::size_t product = db.vertex_count() * a.state_count();
    if (product > guards.max_product_vertices)
        throw GuardError(std::string(what) + " needs exhaustive search on a product with " +
                         std::to_string(product) + " vertices (guard: " +
                         std::to_string(guards.max_product_vertices) + ")");
}

// ---------------------------------------------------------------------------
// Membership.

bool product_reachable(const Database& db, const Automaton& a, VertexId s, VertexId t) {
    auto bridge = symbol_bridge(db, a);
    std::uint64_t states = a.state_count();
    std::vector<char> seen(db.vertex_count() * states, 0);
    std::deque<std::uint64_t> queue;
    for (StateId i : a.initials()) {
        std::uint64_t id = static_cast<std::uint64_t>(s) * states + i;
        if (!seen[id]) {
            seen[id] = 1;
            queue.push_back(id);
        }
    }
    while (!queue.empty()) {
        std::uint64_t id = queue.front();
        queue.pop_front();
        VertexId v = static_cast<VertexId>(id / states);
        StateId q = static_cast<StateId>(id % states);
        if (v == t && a.is_final(q))
            return true;
        for (EdgeId e : db.out_edges(v)) {
            for (TransId tr_id : a.out_transitions(q)) {
                const auto& tr = a.transition(tr_id);
                if (!edge_matches(db, bridge, e, tr.symbol))
                    continue;
                std::uint64_t next =
                    static_cast<std::uint64_t>(db.edge_tgt(e)) * states + tr.tgt;
                if (!seen[next]) {
                    seen[next] = 1;
                    queue.push_back(next);
                }
            }
        }
    }
    return false;
}

bool trail_exists(const Database& db, const Automaton& a, VertexId s, VertexId t) {
    auto bridge = symbol_bridge(db, a);
    std::vector<char> start(a.state_count(), 0);
    for (StateId q : a.initials())
        start[q] = 1;
    std::unordered_set<EdgeId> used;

    std::function<bool(VertexId, const std::vector<char>&)> go =
        [&](VertexId v, const std::vector<char>& set) -> bool {
        if (v == t)
            for (StateId q : a.finals())
                if (set[q])
                    return true;
        for (EdgeId e : db.out_edges(v)) {
            if (used.count(e))
                continue;
            auto next = step_states(db, a, bridge, set, e);
            if (std::find(next.begin(), next.end(), 1) == next.end())
                continue;
            used.insert(e);
            if (go(db.edge_tgt(e), next))
                return true;
            used.erase(e);
        }
        return false;
    };
    return go(s, start);
}

bool simple_walk_exists(const Database& db, const Automaton& a, VertexId s, VertexId t) {
    auto bridge = symbol_bridge(db, a);
    std::vector<char> start(a.state_count(), 0);
    for (StateId q : a.initials())
        start[q] = 1;
    std::vector<char> visited(db.vertex_count(), 0);
    visited[s] = 1;

    std::function<bool(VertexId, const std::vector<char>&)> go =
        [&](VertexId v, const std::vector<char>& set) -> bool {
        if (v == t) {
            // Simple walks cannot revisit t, so this is the only chance.
            for (StateId q : a.finals())
                if (set[q])
                    return true;
            return false;
        }
        for (EdgeId e : db.out_edges(v)) {
            VertexId w = db.edge_tgt(e);
            if (visited[w])
                continue;
            auto next = step_states(db, a, bridge, set, e);
            if (std::find(next.begin(), next.end(), 1) == next.end())
                continue;
            visited[w] = 1;
            if (go(w, next))
                return true;
            visited[w] = 0;
        }
        return false;
    };
    return go(s, start);
}

bool trail_run_exists(const Database& db, const Automaton& a, VertexId s, VertexId t) {
    auto bridge = symbol_bridge(db, a);
    std::unordered_set<std::uint64_t> used;
    std::uint64_t m = a.transition_count();

    std::function<bool(VertexId, StateId)> go = [&](VertexId v, StateId q) -> bool {
        if (v == t && a.is_final(q))
            return true;
        for (EdgeId e : db.out_edges(v)) {
            for (TransId t_id : a.out_transitions(q)) {
                const auto& tr = a.transition(t_id);
                if (!edge_matches(db, bridge, e, tr.symbol))
                    continue;
                std::uint64_t pe = static_cast<std::uint64_t>(e) * m + t_id;
                if (!used.insert(pe).second)
                    continue;
                if (go(db.edge_tgt(e), tr.tgt))
                    return true;
                used.erase(pe);
            }
        }
        return false;
    };
    for (StateId i : a.initials())
        if (go(s, i))
            return true;
    return false;
}

} // namespace

bool tuple_membership(const Database& db, const Query& query, VertexId s, VertexId t,
                      SemanticsMode mode, const Guards& guards) {
    if (s >= db.vertex_count() || t >= db.vertex_count())
        throw PreconditionError("unknown vertex");
    const Automaton& a = query.automaton();
    switch (mode) {
    case SemanticsMode::Walk:
    case SemanticsMode::SimpleRun:
        // The shortest matching walk is kept under simple-run semantics, so
        // membership coincides with plain product reachability.
        return product_reachable(db, a, s, t);
    case SemanticsMode::BindingTrail:
        (void)query.regex(); // binding trails need the expression
        return product_reachable(db, a, s, t);
    case SemanticsMode::Trail:
        check_exhaustive_guard(db, a, guards, "trail membership");
        return trail_exists(db, a, s, t);
    case SemanticsMode::SimpleWalk:
        check_exhaustive_guard(db, a, guards, "simple-walk membership");
        return simple_walk_exists(db, a, s, t);
    case SemanticsMode::TrailRun:
        check_exhaustive_guard(db, a, guards, "trail-run membership");
        return trail_run_exists(db, a, s, t);
    }
    return false;
}

std::uint64_t run_count_over_walk(const Database& db, const Automaton& a, const Walk& w) {
    ensure_walk_valid(db, w);
    auto bridge = symbol_bridge(db, a);
    std::vector<std::uint64_t> cnt(a.state_count(), 0);
    for (StateId q : a.initials())
        cnt[q] = 1;
    for (EdgeId e : w.edges()) {
        std::vector<std::uint64_t> next(a.state_count(), 0);
        for (StateId q = 0; q < a.state_count(); ++q) {
            if (!cnt[q])
                continue;
            for (TransId t : a.out_transitions(q)) {
                const auto& tr = a.transition(t);
                if (edge_matches(db, bridge, e, tr.symbol))
                    next[tr.tgt] += cnt[q];
            }
        }
        cnt = std::move(next);
    }
    std::uint64_t total = 0;
    for (StateId q : a.finals())
        total += cnt[q];
    return total;
}

std::uint64_t simple_run_count_over_walk(const Database& db, const Automaton& a,
                                         const Walk& w) {
    ensure_walk_valid(db, w);
    return runs_over_walk(db, a, w, RunFilter::SimpleVertices, /*count_all=*/true);
}

bool walk_membership(const Database& db, const Query& query, const Walk& w,
                     SemanticsMode mode) {
    ensure_walk_valid(db, w);
    const Automaton& a = query.automaton();
    switch (mode) {
    case SemanticsMode::Walk:
        return walk_accepts(db, a, w);
    case SemanticsMode::Trail:
        return is_trail(w) && walk_accepts(db, a, w);
    case SemanticsMode::SimpleWalk:
        return is_simple(w) && walk_accepts(db, a, w);
    case SemanticsMode::SimpleRun:
        return runs_over_walk(db, a, w, RunFilter::SimpleVertices, false) > 0;
    case SemanticsMode::TrailRun:
        return runs_over_walk(db, a, w, RunFilter::TrailEdges, false) > 0;
    case SemanticsMode::BindingTrail:
        (void)query.regex();
        return runs_over_walk(db, a, w, RunFilter::BindingKeys, false) > 0;
    }
    return false;
}

// ---------------------------------------------------------------------------
// Evaluation.

namespace {

class CellGen {
public:
    virtual ~CellGen() = default;
    virtual std::optional<WalkBagEntry> next() = 0;
    virtual std::uint64_t ops() const { return 0; }
};

/// Enumerates product-level simple paths through a view, projects them, and
/// groups equal walks of one length class into a single entry.
class GroupedRunCell final : public CellGen {
public:
    GroupedRunCell(std::unique_ptr<EnumGraphView> view, std::uint64_t src,
                   std::uint64_t dst, std::function<Walk(const EnumPath&)> decode,
                   std::vector<WalkBagEntry> pre, const Guards& guards)
        : view_(std::move(view)), enumerator_(*view_, src, dst),
          decode_(std::move(decode)), guards_(guards) {
        for (auto& e : pre)
            pending_.push_back(std::move(e));
    }

    std::optional<WalkBagEntry> next() override {
        if (!pending_.empty())
            return pop_pending();
        std::optional<EnumPath> path;
        if (lookahead_) {
            path = std::move(lookahead_);
            lookahead_.reset();
        } else {
            path = enumerator_.next();
        }
        if (!path)
            return std::nullopt;
        std::size_t len = path->arcs.size();
        std::map<Walk, std::uint64_t> group;
        ++group[decode_(*path)];
        while (true) {
            auto more = enumerator_.next();
            if (!more)
                break;
            if (more->arcs.size() != len) {
                lookahead_ = std::move(more);
                break;
            }
            ++group[decode_(*more)];
            if (group.size() > guards_.max_group_buffer)
                throw GuardError("multiplicity grouping buffer exceeded");
        }
        for (auto& [walk, mult] : group)
            pending_.push_back({walk, mult});
        return pop_pending();
    }

    std::uint64_t ops() const override { return enumerator_.total_ops(); }

private:
    WalkBagEntry pop_pending() {
        WalkBagEntry e = std::move(pending_.front());
        pending_.pop_front();
        return e;
    }

    std::unique_ptr<EnumGraphView> view_;
    PathEnumerator enumerator_;
    std::function<Walk(const EnumPath&)> decode_;
    Guards guards_;
    std::deque<WalkBagEntry> pending_;
    std::optional<EnumPath> lookahead_;
};

/// Streams candidate walks (trails or simple walks of the base database) and
/// keeps those with a positive run count, which becomes the multiplicity.
class FilteredWalkCell final : public CellGen {
public:
    FilteredWalkCell(const Database& db, const Automaton& a,
                     std::function<std::optional<Walk>()> candidates,
                     std::function<std::uint64_t()> candidate_ops,
                     std::vector<WalkBagEntry> pre)
        : db_(db), a_(a), candidates_(std::move(candidates)),
          candidate_ops_(std::move(candidate_ops)) {
        for (auto& e : pre)
            pending_.push_back(std::move(e));
    }

    std::optional<WalkBagEntry> next() override {
        if (!pending_.empty()) {
            WalkBagEntry e = std::move(pending_.front());
            pending_.pop_front();
            return e;
        }
        while (true) {
            auto walk = candidates_();
            if (!walk)
                return std::nullopt;
            std::uint64_t mult = run_count_over_walk(db_, a_, *walk);
            if (mult > 0)
                return WalkBagEntry{std::move(*walk), mult};
        }
    }

    std::uint64_t ops() const override { return candidate_ops_(); }

private:
    const Database& db_;
    const Automaton& a_;
    std::function<std::optional<Walk>()> candidates_;
    std::function<std::uint64_t()> candidate_ops_;
    std::deque<WalkBagEntry> pending_;
};

/// Walk semantics under a length cap: all walks s -> t of length <= cap with
/// a positive run count, by increasing length in canonical order.
class WalkModeCell final : public CellGen {
public:
    WalkModeCell(const Database& db, const Automaton& a, VertexId s, VertexId t,
                 std::size_t cap, const Guards& guards)
        : db_(db), a_(a), s_(s), t_(t), cap_(cap), guards_(guards) {
        // Distance to t over reversed edges, for pruning.
        dist_.assign(db.vertex_count(), SIZE_MAX);
        std::deque<VertexId> queue;
        dist_[t] = 0;
        queue.push_back(t);
        while (!queue.empty()) {
            VertexId v = queue.front();
            queue.pop_front();
            for (EdgeId e : db.in_edges(v)) {
                VertexId u = db.edge_src(e);
                if (dist_[u] == SIZE_MAX) {
                    dist_[u] = dist_[v] + 1;
                    queue.push_back(u);
                }
            }
        }
    }

    std::optional<WalkBagEntry> next() override {
        while (pending_.empty()) {
            if (length_ > cap_)
                return std::nullopt;
            fill_length(length_++);
        }
        WalkBagEntry e = std::move(pending_.front());
        pending_.pop_front();
        return e;
    }

    std::uint64_t ops() const override { return ops_; }

private:
    void fill_length(std::size_t len) {
        std::vector<EdgeId> path;
        std::function<void(VertexId)> go = [&](VertexId v) {
            ++ops_;
            std::size_t remaining = len - path.size();
            if (dist_[v] == SIZE_MAX || dist_[v] > remaining)
                return;
            if (path.size() == len) {
                if (v == t_) {
                    Walk w = Walk::from_edges(db_, s_, path);
                    std::uint64_t mult = run_count_over_walk(db_, a_, w);
                    if (mult > 0) {
                        pending_.push_back({std::move(w), mult});
                        if (pending_.size() > guards_.max_group_buffer)
                            throw GuardError("walk-mode buffer exceeded");
                    }
                }
                return;
            }
            for (EdgeId e : db_.out_edges(v)) {
                path.push_back(e);
                go(db_.edge_tgt(e));
                path.pop_back();
            }
        };
        go(s_);
    }

    const Database& db_;
    const Automaton& a_;
    VertexId s_;
    VertexId t_;
    std::size_t cap_;
    Guards guards_;
    std::vector<std::size_t> dist_;
    std::size_t length_ = 0;
    std::deque<WalkBagEntry> pending_;
    std::uint64_t ops_ = 0;
};

/// Trail candidates: simple paths of the line graph of the base database.
class LineDatabaseView final : public EnumGraphView {
public:
    LineDatabaseView(const Database& db, VertexId s, VertexId t)
        : db_(db), s_(s), t_(t) {}

    std::uint64_t source() const { return 0; }
    std::uint64_t sink() const { return 1; }

    void out_arcs(std::uint64_t vertex, std::vector<EnumArc>& sink_arcs) const override {
        if (vertex == 1)
            return;
        VertexId v = vertex == 0 ? s_ : db_.edge_tgt(static_cast<EdgeId>(vertex - 2));
        for (EdgeId e : db_.out_edges(v))
            sink_arcs.push_back({e, 2 + static_cast<std::uint64_t>(e), e});
        std::sort(sink_arcs.begin(), sink_arcs.end(),
                  [](const EnumArc& x, const EnumArc& y) { return x.rank < y.rank; });
        if (vertex != 0 && v == t_)
            sink_arcs.push_back({db_.edge_count(), 1, kSuperPayload});
    }

    Walk decode(const EnumPath& path) const {
        std::vector<EdgeId> edges;
        for (const EnumArc& arc : path.arcs)
            if (arc.payload != kSuperPayload)
                edges.push_back(static_cast<EdgeId>(arc.payload));
        return Walk::from_edges(db_, s_, std::move(edges));
    }

private:
    const Database& db_;
    VertexId s_;
    VertexId t_;
};

std::vector<WalkBagEntry> length_zero_pre(const Automaton& a, VertexId s, VertexId t,
                                          bool binding) {
    std::vector<WalkBagEntry> pre;
    if (s != t)
        return pre;
    std::uint64_t mult = 0;
    if (binding) {
        mult = a.is_final(a.initials().front()) ? 1 : 0;
    } else {
        for (StateId q : a.initials())
            if (a.is_final(q))
                ++mult;
    }
    if (mult > 0)
        pre.push_back({Walk::at(s), mult});
    return pre;
}

} // namespace

struct EvalStream::Impl {
    std::optional<Query> query; // owned so the cells' automaton stays alive
    std::vector<std::unique_ptr<CellGen>> cells;
    std::size_t current = 0;
    std::uint64_t last_mark = 0;
    std::uint64_t last_delay = 0;

    std::uint64_t total_ops() const {
        std::uint64_t total = 0;
        for (const auto& cell : cells)
            total += cell->ops();
        return total;
    }
};

EvalStream::EvalStream() : impl_(std::make_unique<Impl>()) {}
EvalStream::EvalStream(EvalStream&&) noexcept = default;
EvalStream& EvalStream::operator=(EvalStream&&) noexcept = default;
EvalStream::~EvalStream() = default;

std::optional<WalkBagEntry> EvalStream::next() {
    while (impl_->current < impl_->cells.size()) {
        auto entry = impl_->cells[impl_->current]->next();
        if (entry) {
            std::uint64_t total = impl_->total_ops();
            impl_->last_delay = total - impl_->last_mark;
            impl_->last_mark = total;
            return entry;
        }
        ++impl_->current;
    }
    std::uint64_t total = impl_->total_ops();
    impl_->last_delay = total - impl_->last_mark;
    impl_->last_mark = total;
    return std::nullopt;
}

WalkBag EvalStream::drain() {
    WalkBag bag;
    while (auto entry = next())
        bag.push_back(std::move(*entry));
    return bag;
}

std::uint64_t EvalStream::last_delay_ops() const { return impl_->last_delay; }
std::uint64_t EvalStream::total_ops() const { return impl_->total_ops(); }

EvalStream evaluate(const Database& db, const Query& query, SemanticsMode mode,
                    std::optional<std::pair<VertexId, VertexId>> endpoints,
                    const Guards& guards, std::optional<std::size_t> max_length) {
    if (mode == SemanticsMode::Walk && !max_length)
        throw PreconditionError(
            "query evaluation is ill-defined under walk semantics; supply a length cap");
    if (mode == SemanticsMode::BindingTrail)
        (void)query.regex();
    if (mode == SemanticsMode::Trail || mode == SemanticsMode::SimpleWalk)
        check_exhaustive_guard(db, query.automaton(), guards, "evaluation");
    if (endpoints) {
        if (endpoints->first >= db.vertex_count() || endpoints->second >= db.vertex_count())
            throw PreconditionError("unknown vertex");
    }

    EvalStream stream;
    stream.impl_->query = query;
    const Automaton& a = stream.impl_->query->automaton();
    auto add_cell = [&](VertexId s, VertexId t) {
        switch (mode) {
        case SemanticsMode::SimpleRun: {
            auto view = std::make_unique<ProductRunView>(db, a, s, t);
            auto* raw = view.get();
            stream.impl_->cells.push_back(std::make_unique<GroupedRunCell>(
                std::move(view), raw->source(), raw->sink(),
                [raw](const EnumPath& p) { return raw->decode(p); },
                std::vector<WalkBagEntry>{}, guards));
            break;
        }
        case SemanticsMode::TrailRun: {
            auto view = std::make_unique<LineProductView>(db, a, s, t);
            auto* raw = view.get();
            stream.impl_->cells.push_back(std::make_unique<GroupedRunCell>(
                std::move(view), raw->source(), raw->sink(),
                [raw](const EnumPath& p) { return raw->decode(p); },
                length_zero_pre(a, s, t, false), guards));
            break;
        }
        case SemanticsMode::BindingTrail: {
            auto view = std::make_unique<KeyGraphView>(db, a, s, t);
            auto* raw = view.get();
            stream.impl_->cells.push_back(std::make_unique<GroupedRunCell>(
                std::move(view), raw->source(), raw->sink(),
                [raw](const EnumPath& p) { return raw->decode(p); },
                length_zero_pre(a, s, t, true), guards));
            break;
        }
        case SemanticsMode::Trail: {
            auto view = std::make_shared<LineDatabaseView>(db, s, t);
            auto enumerator =
                std::make_shared<PathEnumerator>(*view, view->source(), view->sink());
            auto candidates = [view, enumerator]() -> std::optional<Walk> {
                auto path = enumerator->next();
                if (!path)
                    return std::nullopt;
                return view->decode(*path);
            };
            auto ops = [enumerator] { return enumerator->total_ops(); };
            stream.impl_->cells.push_back(std::make_unique<FilteredWalkCell>(
                db, a, candidates, ops, length_zero_pre(a, s, t, false)));
            break;
        }
        case SemanticsMode::SimpleWalk: {
            auto walks = std::make_shared<SimpleWalkStream>(db, s, t);
            auto candidates = [walks]() { return walks->next(); };
            auto ops = [walks] { return walks->total_ops(); };
            stream.impl_->cells.push_back(std::make_unique<FilteredWalkCell>(
                db, a, candidates, ops, std::vector<WalkBagEntry>{}));
            break;
        }
        case SemanticsMode::Walk:
            stream.impl_->cells.push_back(
                std::make_unique<WalkModeCell>(db, a, s, t, *max_length, guards));
            break;
        }
    };

    if (endpoints) {
        add_cell(endpoints->first, endpoints->second);
    } else {
        for (VertexId s = 0; s < db.vertex_count(); ++s)
            for (VertexId t = 0; t < db.vertex_count(); ++t)
                add_cell(s, t);
    }
    return stream;
}

// ---------------------------------------------------------------------------
// Multiplicity.

namespace {

/// DFS counting of filtered runs from (s, i) layers to the (t, f) layer.
std::uint64_t count_runs_endpoints(const Database& db, const Automaton& a, VertexId s,
                                   VertexId t, RunFilter filter) {
    auto bridge = symbol_bridge(db, a);
    std::unordered_set<std::uint64_t> used;
    std::uint64_t states = a.state_count();
    std::uint64_t m = a.transition_count();
    std::uint64_t count = 0;

    std::function<void(VertexId, StateId)> go = [&](VertexId v, StateId q) {
        if (v == t && a.is_final(q))
            ++count;
        for (EdgeId e : db.out_edges(v)) {
            for (TransId t_id : a.out_transitions(q)) {
                const auto& tr = a.transition(t_id);
                if (!edge_matches(db, bridge, e, tr.symbol))
                    continue;
                std::uint64_t key = 0;
                switch (filter) {
                case RunFilter::SimpleVertices:
                    key = static_cast<std::uint64_t>(db.edge_tgt(e)) * states + tr.tgt;
                    break;
                case RunFilter::TrailEdges:
                    key = static_cast<std::uint64_t>(e) * m + t_id;
                    break;
                case RunFilter::BindingKeys:
                    key = static_cast<std::uint64_t>(e) * states + tr.tgt;
                    break;
                case RunFilter::None:
                    break;
                }
                if (!used.insert(key).second)
                    continue;
                go(db.edge_tgt(e), tr.tgt);
                used.erase(key);
            }
        }
    };

    for (StateId i : a.initials()) {
        if (filter == RunFilter::SimpleVertices) {
            std::uint64_t key = static_cast<std::uint64_t>(s) * states + i;
            used.insert(key);
            go(s, i);
            used.erase(key);
        } else {
            go(s, i);
        }
    }
    return count;
}

/// Sum of run counts over all trails (or simple walks) from s to t, carrying
/// the run-count vector along the DFS.
std::uint64_t count_filtered_walks(const Database& db, const Automaton& a, VertexId s,
                                   VertexId t, bool simple) {
    auto bridge = symbol_bridge(db, a);
    std::uint64_t total = 0;
    std::unordered_set<EdgeId> used_edges;
    std::vector<char> visited(db.vertex_count(), 0);

    std::vector<std::uint64_t> start(a.state_count(), 0);
    for (StateId q : a.initials())
        start[q] = 1;

    std::function<void(VertexId, const std::vector<std::uint64_t>&)> go =
        [&](VertexId v, const std::vector<std::uint64_t>& cnt) {
        if (v == t)
            for (StateId f : a.finals())
                total += cnt[f];
        for (EdgeId e : db.out_edges(v)) {
            VertexId w = db.edge_tgt(e);
            if (simple) {
                if (visited[w])
                    continue;
            } else if (used_edges.count(e)) {
                continue;
            }
            std::vector<std::uint64_t> next(a.state_count(), 0);
            bool any = false;
            for (StateId q = 0; q < a.state_count(); ++q) {
                if (!cnt[q])
                    continue;
                for (TransId t_id : a.out_transitions(q)) {
                    const auto& tr = a.transition(t_id);
                    if (edge_matches(db, bridge, e, tr.symbol)) {
                        next[tr.tgt] += cnt[q];
                        any = true;
                    }
                }
            }
            if (!any)
                continue;
            if (simple)
                visited[w] = 1;
            else
                used_edges.insert(e);
            go(w, next);
            if (simple)
                visited[w] = 0;
            else
                used_edges.erase(e);
        }
    };

    if (simple)
        visited[s] = 1;
    go(s, start);
    return total;
}

} // namespace

std::uint64_t tuple_multiplicity(const Database& db, const Query& query, VertexId s,
                                 VertexId t, SemanticsMode mode, const Guards& guards) {
    if (s >= db.vertex_count() || t >= db.vertex_count())
        throw PreconditionError("unknown vertex");
    const Automaton& a = query.automaton();
    if (mode == SemanticsMode::Walk)
        throw PreconditionError("tuple multiplicity is infinite under walk semantics");
    check_exhaustive_guard(db, a, guards, "tuple multiplicity");
    switch (mode) {
    case SemanticsMode::SimpleRun:
        return count_runs_endpoints(db, a, s, t, RunFilter::SimpleVertices);
    case SemanticsMode::TrailRun:
        return count_runs_endpoints(db, a, s, t, RunFilter::TrailEdges);
    case SemanticsMode::BindingTrail:
        (void)query.regex();
        return count_runs_endpoints(db, a, s, t, RunFilter::BindingKeys);
    case SemanticsMode::Trail:
        return count_filtered_walks(db, a, s, t, /*simple=*/false);
    case SemanticsMode::SimpleWalk:
        return count_filtered_walks(db, a, s, t, /*simple=*/true);
    case SemanticsMode::Walk:
        break;
    }
    return 0;
}

// ---------------------------------------------------------------------------
// PTIME walk membership for no-concatenation-under-star expressions.

namespace {

void flatten_union_atoms(const Regex& r, std::vector<std::string>& atoms) {
    switch (r.kind()) {
    case Regex::Kind::Atom:
        atoms.push_back(r.symbol());
        return;
    case Regex::Kind::Union:
        flatten_union_atoms(r.left(), atoms);
        flatten_union_atoms(r.right(), atoms);
        return;
    default:
        throw PreconditionError("star body is not a sum of atoms after simplification");
    }
}

using IntervalSet = std::vector<std::vector<char>>; // (m+1) x (m+1)

IntervalSet empty_set(std::size_t m) {
    return IntervalSet(m + 1, std::vector<char>(m + 1, 0));
}

/// Decides the starred-atom-sum case: the factor walk (l, k] is matched iff
/// at every interval vertex the positions arriving there can be matched to
/// pairwise distinct atoms (maximum bipartite matching saturates them).
IntervalSet star_atom_set(const Database& db, const Walk& w,
                          const std::vector<std::string>& atoms, MatchingStats& stats) {
    std::size_t m = w.length();
    IntervalSet s = empty_set(m);
    std::vector<std::optional<SymbolId>> atom_symbol(atoms.size());
    for (std::size_t j = 0; j < atoms.size(); ++j)
        atom_symbol[j] = db.find_symbol(atoms[j]);

    auto edge_atoms = [&](std::size_t i) { // 1-based position, edge i-1
        std::vector<std::size_t> js;
        for (std::size_t j = 0; j < atoms.size(); ++j) {
            ++stats.ops;
            if (atom_symbol[j] && db.edge_has_label(w.edges()[i - 1], *atom_symbol[j]))
                js.push_back(j);
        }
        return js;
    };

    // adjacency[i] = atoms usable at step i.
    std::vector<std::vector<std::size_t>> adjacency(m + 1);
    for (std::size_t i = 1; i <= m; ++i)
        adjacency[i] = edge_atoms(i);

    for (std::size_t l = 0; l <= m; ++l) {
        s[l][l] = 1;
        for (std::size_t k = l + 1; k <= m; ++k) {
            if (adjacency[k].empty())
                break; // no atom matches edge k: no interval [l, >=k] works
            // Group the positions of (l, k] by their target vertex.
            std::map<VertexId, std::vector<std::size_t>> by_vertex;
            for (std::size_t i = l + 1; i <= k; ++i)
                by_vertex[w.vertices()[i]].push_back(i);
            bool ok = true;
            for (auto& [v, positions] : by_vertex) {
                // Kuhn's augmenting paths, positions on the left.
                std::vector<int> atom_match(atoms.size(), -1);
                std::size_t matched = 0;
                for (std::size_t p : positions) {
                    std::vector<char> seen(atoms.size(), 0);
                    std::function<bool(std::size_t)> augment = [&](std::size_t pos) -> bool {
                        for (std::size_t j : adjacency[pos]) {
                            ++stats.ops;
                            if (seen[j])
                                continue;
                            seen[j] = 1;
                            if (atom_match[j] < 0 ||
                                augment(static_cast<std::size_t>(atom_match[j]))) {
                                atom_match[j] = static_cast<int>(pos);
                                return true;
                            }
                        }
                        return false;
                    };
                    if (augment(p))
                        ++matched;
                }
                if (matched != positions.size()) {
                    ok = false;
                    break;
                }
            }
            if (ok)
                s[l][k] = 1;
        }
    }
    return s;
}

IntervalSet interval_set(const Database& db, const Walk& w, const Regex& r,
                         MatchingStats& stats) {
    std::size_t m = w.length();
    switch (r.kind()) {
    case Regex::Kind::Epsilon: {
        IntervalSet s = empty_set(m);
        for (std::size_t i = 0; i <= m; ++i)
            s[i][i] = 1;
        return s;
    }
    case Regex::Kind::Atom: {
        IntervalSet s = empty_set(m);
        auto sym = db.find_symbol(r.symbol());
        for (std::size_t i = 0; i < m; ++i) {
            ++stats.ops;
            if (sym && db.edge_has_label(w.edges()[i], *sym))
                s[i][i + 1] = 1;
        }
        return s;
    }
    case Regex::Kind::Union: {
        IntervalSet a = interval_set(db, w, r.left(), stats);
        IntervalSet b = interval_set(db, w, r.right(), stats);
        for (std::size_t i = 0; i <= m; ++i)
            for (std::size_t j = 0; j <= m; ++j) {
                ++stats.ops;
                a[i][j] = a[i][j] || b[i][j];
            }
        return a;
    }
    case Regex::Kind::Concat: {
        IntervalSet a = interval_set(db, w, r.left(), stats);
        IntervalSet b = interval_set(db, w, r.right(), stats);
        IntervalSet s = empty_set(m);
        for (std::size_t i = 0; i <= m; ++i)
            for (std::size_t mid = i; mid <= m; ++mid) {
                if (!a[i][mid])
                    continue;
                for (std::size_t j = mid; j <= m; ++j) {
                    ++stats.ops;
                    if (b[mid][j])
                        s[i][j] = 1;
                }
            }
        return s;
    }
    case Regex::Kind::Star: {
        std::vector<std::string> atoms;
        flatten_union_atoms(r.child(), atoms);
        return star_atom_set(db, w, atoms, stats);
    }
    }
    return empty_set(m);
}

} // namespace

bool walk_membership_matching(const Database& db, const Regex& r, const Walk& w,
                              MatchingStats* stats) {
    ensure_walk_valid(db, w);
    if (syntax_class(r).concat_under_star)
        throw PreconditionError(
            "matching-based walk membership needs no concatenation under star");
    MatchingStats local;
    MatchingStats& st = stats ? *stats : local;
    Regex simplified = star_normal_simplify(r);
    IntervalSet s = interval_set(db, w, simplified, st);
    return s[0][w.length()] != 0;
}

// ---------------------------------------------------------------------------
// Coverage decomposition.

Walk CoverageDecomposition::kept_concat() const {
    Walk acc = kept.front();
    for (std::size_t i = 1; i < kept.size(); ++i)
        acc = concat(acc, kept[i]);
    return acc;
}

Walk CoverageDecomposition::reassemble() const {
    Walk acc = closed.front();
    for (std::size_t i = 0; i < kept.size(); ++i) {
        acc = concat(acc, kept[i]);
        acc = concat(acc, closed[i + 1]);
    }
    return acc;
}

CoverageDecomposition coverage_decompose(const Database& db, const Automaton& a,
                                         const Walk& w) {
    ensure_walk_valid(db, w);
    auto bridge = symbol_bridge(db, a);
    auto backward = backward_sets(db, a, w);

    // Deterministic run over w: smallest viable state at every step.
    std::vector<StateId> states;
    {
        StateId start = a.state_count();
        for (StateId q : a.initials())
            if (backward[0][q]) {
                start = q;
                break;
            }
        if (start == a.state_count())
            throw PreconditionError("walk matches no run of the automaton");
        states.push_back(start);
        for (std::size_t i = 0; i < w.length(); ++i) {
            EdgeId e = w.edges()[i];
            StateId next = a.state_count();
            for (StateId q2 = 0; q2 < a.state_count(); ++q2) {
                if (!backward[i + 1][q2])
                    continue;
                bool reachable = false;
                for (TransId t : a.out_transitions(states.back())) {
                    const auto& tr = a.transition(t);
                    if (tr.tgt == q2 && edge_matches(db, bridge, e, tr.symbol)) {
                        reachable = true;
                        break;
                    }
                }
                if (reachable) {
                    next = q2;
                    break;
                }
            }
            if (next == a.state_count())
                throw PreconditionError("walk matches no run of the automaton");
            states.push_back(next);
        }
    }

    // Excise state-repeating cycles until the run is simple. Original edge
    // indices ride along so the kept/removed split can be rebuilt on w.
    std::vector<VertexId> verts = w.vertices();
    std::vector<std::size_t> orig(w.length());
    for (std::size_t i = 0; i < w.length(); ++i)
        orig[i] = i;

    while (true) {
        std::map<std::pair<VertexId, StateId>, std::size_t> first_seen;
        std::size_t cycle_start = SIZE_MAX, cycle_end = SIZE_MAX;
        for (std::size_t i = 0; i < verts.size(); ++i) {
            auto key = std::make_pair(verts[i], states[i]);
            auto it = first_seen.find(key);
            if (it != first_seen.end()) {
                cycle_start = it->second;
                cycle_end = i;
                break;
            }
            first_seen.emplace(key, i);
        }
        if (cycle_start == SIZE_MAX)
            break;
        verts.erase(verts.begin() + cycle_start + 1, verts.begin() + cycle_end + 1);
        states.erase(states.begin() + cycle_start + 1, states.begin() + cycle_end + 1);
        orig.erase(orig.begin() + cycle_start, orig.begin() + cycle_end);
    }

    CoverageDecomposition out;
    auto segment = [&](std::size_t from_edge, std::size_t to_edge) {
        std::vector<EdgeId> edges(w.edges().begin() + from_edge,
                                  w.edges().begin() + to_edge);
        return Walk::from_edges(db, w.vertices()[from_edge], std::move(edges));
    };

    if (orig.empty()) {
        out.closed.push_back(w);
        out.kept.push_back(Walk::at(w.tgt()));
        out.closed.push_back(Walk::at(w.tgt()));
        return out;
    }

    out.closed.push_back(segment(0, orig.front()));
    std::size_t run_start = orig.front();
    for (std::size_t i = 1; i <= orig.size(); ++i) {
        if (i == orig.size() || orig[i] != orig[i - 1] + 1) {
            out.kept.push_back(segment(run_start, orig[i - 1] + 1));
            if (i == orig.size())
                out.closed.push_back(segment(orig[i - 1] + 1, w.length()));
            else {
                out.closed.push_back(segment(orig[i - 1] + 1, orig[i]));
                run_start = orig[i];
            }
        }
    }
    return out;
}

} // namespace rpq
