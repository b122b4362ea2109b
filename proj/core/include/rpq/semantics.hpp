#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "rpq/automaton.hpp"
#include "rpq/enumerate.hpp"
#include "rpq/graph.hpp"
#include "rpq/regex.hpp"

namespace rpq {

/// The six query semantics. Walk keeps every matching walk (possibly
/// infinitely many); Trail and SimpleWalk filter the projected walks; the
/// run-based semantics filter runs of the product before projecting;
/// BindingTrail filters runs of a Glushkov automaton by (edge, position)
/// keys and therefore needs the query as an expression.
enum class SemanticsMode {
    Walk,
    Trail,
    SimpleWalk,
    TrailRun,
    SimpleRun,
    BindingTrail,
};

const char* to_string(SemanticsMode m);
std::optional<SemanticsMode> semantics_from_string(std::string_view name);

/// A query is an expression or an automaton. Expressions are compiled to
/// their Glushkov automaton once, up front; the expression is kept because
/// binding-trail semantics depend on it as written.
class Query {
public:
    static Query from_regex(Regex r);
    static Query from_automaton(Automaton a);

    bool has_regex() const { return regex_.has_value(); }
    const Regex& regex() const;
    const Automaton& automaton() const { return automaton_; }

private:
    Query() = default;

    std::optional<Regex> regex_;
    Automaton automaton_ = {};
};

/// Instance-size bounds for the operations that are exponential in the worst
/// case. They fail loudly (GuardError) instead of hanging.
struct Guards {
    /// Trail/SimpleWalk/TrailRun exhaustive searches and all multiplicity
    /// counting refuse products with more than this many vertices.
    std::size_t max_product_vertices = 12;
    /// Upper bound on walks buffered per length class while grouping
    /// multiplicities.
    std::size_t max_group_buffer = 1u << 20;
};

/// Does some walk between s and t belong to the semantics? Walk, SimpleRun
/// and BindingTrail are answered by plain reachability in the product (the
/// shortest matching walk is always kept under the run-based semantics);
/// Trail, SimpleWalk and TrailRun need exhaustive search and honor the
/// guard.
bool tuple_membership(const Database& db, const Query& query, VertexId s, VertexId t,
                      SemanticsMode mode, const Guards& guards = {});

/// One result bag entry stream. Walks come out grouped: each distinct walk
/// of a length class is emitted once with its total multiplicity. Within a
/// cell the order is non-decreasing length with canonical tie-breaks.
class EvalStream {
public:
    EvalStream(EvalStream&&) noexcept;
    EvalStream& operator=(EvalStream&&) noexcept;
    ~EvalStream();

    std::optional<WalkBagEntry> next();

    /// Collects the remaining entries.
    WalkBag drain();

    /// Enumeration operations spent producing the last entry.
    std::uint64_t last_delay_ops() const;
    std::uint64_t total_ops() const;

private:
    friend EvalStream evaluate(const Database&, const Query&, SemanticsMode,
                               std::optional<std::pair<VertexId, VertexId>>,
                               const Guards&, std::optional<std::size_t>);
    EvalStream();

    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Enumerates the semantics' result bag. Without endpoints, every (s,t) cell
/// is enumerated in vertex declaration order. Walk semantics would be
/// infinite, so it requires a length cap; Trail and SimpleWalk are
/// exhaustive searches behind the guard; the run-based semantics enumerate
/// with polynomial delay. The stream keeps its own copy of the query but
/// the database must outlive it.
EvalStream evaluate(const Database& db, const Query& query, SemanticsMode mode,
                    std::optional<std::pair<VertexId, VertexId>> endpoints,
                    const Guards& guards = {},
                    std::optional<std::size_t> max_length = {});

/// Total multiplicity of the walks between s and t. Exhaustive (the problem
/// counts simple walks of a product); honors the guard for every mode and
/// rejects Walk semantics, whose count may be infinite.
std::uint64_t tuple_multiplicity(const Database& db, const Query& query, VertexId s,
                                 VertexId t, SemanticsMode mode,
                                 const Guards& guards = {});

/// Is the given walk in the semantics of the query? Polynomial for Walk,
/// Trail and SimpleWalk (automaton simulation along the walk plus the walk
/// predicate); backtracking over run annotations for the run-based modes.
bool walk_membership(const Database& db, const Query& query, const Walk& w,
                     SemanticsMode mode);

/// Number of runs of the automaton over exactly this walk (dynamic
/// programming; the multiplicity of w under walk semantics).
std::uint64_t run_count_over_walk(const Database& db, const Automaton& a, const Walk& w);

/// Number of simple runs projecting to exactly this walk (backtracking).
std::uint64_t simple_run_count_over_walk(const Database& db, const Automaton& a,
                                         const Walk& w);

struct MatchingStats {
    std::uint64_t ops = 0;
};

/// Polynomial-time walk membership for expressions with no concatenation
/// under star, equivalent to walk_membership(..., SimpleRun) on the Glushkov
/// automaton. Interval sets are computed per subexpression; starred atom
/// sums are decided by maximum bipartite matchings between walk positions
/// and atoms (augmenting-path method).
bool walk_membership_matching(const Database& db, const Regex& r, const Walk& w,
                              MatchingStats* stats = nullptr);

/// Decomposition produced by coverage_decompose: w = u1 v1 u2 ... vn u(n+1)
/// with every u closed and v1...vn a simple-run witness.
struct CoverageDecomposition {
    std::vector<Walk> closed; // u parts, kept.size() + 1 entries
    std::vector<Walk> kept;   // v parts, at least one

    Walk kept_concat() const;
    Walk reassemble() const;
};

/// Splits a matching walk into superfluous closed detours and a kept part
/// that the simple-run semantics returns. Requires lbl(w) to meet the
/// automaton's language; found by excising state-repeating cycles from a run
/// over w.
CoverageDecomposition coverage_decompose(const Database& db, const Automaton& a,
                                         const Walk& w);

} // namespace rpq
