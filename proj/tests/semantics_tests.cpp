#include <catch2/catch_amalgamated.hpp>

#include <functional>
#include <map>
#include <thread>

#include "rpq/semantics.hpp"
#include "support.hpp"

using namespace rpq;

namespace {

struct Fixture {
    Database db = rpqtest::load_graph("roads.graph");
    Automaton q2 = rpqtest::load_automaton("q2.auto");
    Query query = Query::from_automaton(rpqtest::load_automaton("q2.auto"));
    VertexId s, t;

    Fixture() : s(db.vertex("s")), t(db.vertex("t")) {}
};

/// Entries of the stream whose walk length does not exceed the bound.
WalkBag drain_up_to(EvalStream stream, std::size_t max_length) {
    WalkBag bag;
    while (auto entry = stream.next()) {
        if (entry->walk.length() > max_length)
            break;
        bag.push_back(std::move(*entry));
    }
    return bag;
}

/// Oracle bag: projections of exhaustively enumerated runs passing a filter,
/// grouped by walk, restricted to endpoints when given.
WalkBag oracle_bag(const Database& db, const Automaton& a, std::size_t max_length,
                   const std::function<bool(const rpqtest::OracleRun&)>& keep,
                   std::optional<std::pair<VertexId, VertexId>> endpoints) {
    std::map<Walk, std::uint64_t> grouped;
    for (const auto& run : rpqtest::all_runs(db, a, max_length)) {
        if (!keep(run))
            continue;
        Walk w = rpqtest::oracle_run_walk(db, run);
        if (endpoints && (w.src() != endpoints->first || w.tgt() != endpoints->second))
            continue;
        ++grouped[w];
    }
    WalkBag bag;
    for (auto& [w, m] : grouped)
        bag.push_back({w, m});
    std::sort(bag.begin(), bag.end(), [](const WalkBagEntry& x, const WalkBagEntry& y) {
        return x.walk < y.walk;
    });
    return bag;
}

std::size_t product_edge_count(const Database& db, const Automaton& a) {
    std::size_t count = 0;
    for (EdgeId e = 0; e < db.edge_count(); ++e)
        for (const auto& tr : a.transitions()) {
            auto sym = db.find_symbol(a.symbol_name(tr.symbol));
            if (sym && db.edge_has_label(e, *sym))
                ++count;
        }
    return count;
}

WalkBag sorted(WalkBag bag) {
    std::sort(bag.begin(), bag.end(), [](const WalkBagEntry& x, const WalkBagEntry& y) {
        return x.walk < y.walk;
    });
    return bag;
}

} // namespace

TEST_CASE("running example membership") {
    Fixture f;
    CHECK(tuple_membership(f.db, f.query, f.s, f.t, SemanticsMode::SimpleRun));
    CHECK(tuple_membership(f.db, f.query, f.s, f.t, SemanticsMode::Walk));
    CHECK(tuple_membership(f.db, f.query, f.s, f.t, SemanticsMode::TrailRun));
    CHECK_FALSE(tuple_membership(f.db, f.query, f.s, f.t, SemanticsMode::Trail));
    CHECK_FALSE(tuple_membership(f.db, f.query, f.s, f.t, SemanticsMode::SimpleWalk));
}

TEST_CASE("length-zero membership when the query accepts the empty word") {
    Database db = rpqtest::load_graph("roads.graph");
    Query query = Query::from_regex(parse_regex("Road*"));
    for (auto mode : {SemanticsMode::Walk, SemanticsMode::Trail, SemanticsMode::SimpleWalk,
                      SemanticsMode::TrailRun, SemanticsMode::SimpleRun,
                      SemanticsMode::BindingTrail})
        CHECK(tuple_membership(db, query, db.vertex("c3"), db.vertex("c3"), mode));
}

TEST_CASE("running example evaluation is exactly w1") {
    Fixture f;
    WalkBag bag =
        evaluate(f.db, f.query, SemanticsMode::SimpleRun, {{f.s, f.t}}).drain();
    REQUIRE(bag.size() == 1);
    CHECK(bag[0].multiplicity == 1);
    CHECK(serialize_walk(f.db, bag[0].walk) ==
          "s -e1-> c1 -e2-> c2 -e3-> c3 -e7-> c3 -e4-> c1 -e2-> c2 -e5-> t");

    CHECK(evaluate(f.db, f.query, SemanticsMode::Trail, {{f.s, f.t}}).drain().empty());
    CHECK(evaluate(f.db, f.query, SemanticsMode::SimpleWalk, {{f.s, f.t}}).drain().empty());
}

TEST_CASE("walk-mode evaluation needs a cap and honors it") {
    Fixture f;
    CHECK_THROWS_AS(evaluate(f.db, f.query, SemanticsMode::Walk, {{f.s, f.t}}),
                    PreconditionError);
    WalkBag bag =
        evaluate(f.db, f.query, SemanticsMode::Walk, {{f.s, f.t}}, {}, 7).drain();
    REQUIRE(bag.size() == 1); // only w1 matches within 7 steps
    CHECK(bag[0].multiplicity == 1);
    CHECK(bag[0].walk.length() == 7);
}

TEST_CASE("binding-trail checks from the introduction") {
    Database db = rpqtest::load_graph("roads.graph");
    Query q1 = Query::from_regex(parse_regex("(Road+Ferry)*"));
    Query q2 = Query::from_regex(parse_regex("(Road+Ferry)* Gas (Road+Ferry)*"));
    auto e = [&](const char* id) { return *db.find_edge(id); };

    // The all-road walk reuses c1 -> c2 on the same expression atom: dropped.
    Walk all_road = Walk::from_edges(
        db, db.vertex("s"), {e("e1"), e("e2"), e("e3"), e("e4"), e("e2"), e("e5")});
    CHECK_FALSE(walk_membership(db, q1, all_road, SemanticsMode::BindingTrail));
    CHECK(walk_membership(db, q1, all_road, SemanticsMode::Walk));

    // With the gas stop the two c1 -> c2 uses match different atoms: kept.
    Walk with_gas = Walk::from_edges(db, db.vertex("s"),
                                     {e("e1"), e("e2"), e("e3"), e("e7"), e("e4"),
                                      e("e2"), e("e5")});
    CHECK(walk_membership(db, q2, with_gas, SemanticsMode::BindingTrail));

    WalkBag bag = evaluate(db, q2, SemanticsMode::BindingTrail,
                           {{db.vertex("s"), db.vertex("t")}})
                      .drain();
    bool found = false;
    for (const auto& entry : bag)
        if (entry.walk == with_gas)
            found = true;
    CHECK(found);
}

TEST_CASE("left-to-right bias of the position automaton") {
    Database db = rpqtest::load_graph("dprime.graph");
    Query q = Query::from_regex(parse_regex("a* b*"));
    VertexId S = db.vertex("S"), T = db.vertex("T");

    WalkBag bag = evaluate(db, q, SemanticsMode::SimpleRun, {{S, T}}).drain();
    auto loop_first = Walk::from_edges(db, S, {*db.find_edge("loopS"), *db.find_edge("bridge")});
    auto loop_last = Walk::from_edges(db, S, {*db.find_edge("bridge"), *db.find_edge("loopT")});
    bool has_loop_first = false, has_loop_last = false;
    for (const auto& entry : bag) {
        if (entry.walk == loop_first)
            has_loop_first = true;
        if (entry.walk == loop_last)
            has_loop_last = true;
    }
    CHECK(has_loop_first);
    CHECK_FALSE(has_loop_last);
    CHECK(walk_membership(db, q, loop_first, SemanticsMode::SimpleRun));
    CHECK_FALSE(walk_membership(db, q, loop_last, SemanticsMode::SimpleRun));
}

TEST_CASE("walk membership dispatch on the running example") {
    Fixture f;
    auto e = [&](const char* id) { return *f.db.find_edge(id); };
    Walk w1 = Walk::from_edges(f.db, f.s,
                               {e("e1"), e("e2"), e("e3"), e("e7"), e("e4"), e("e2"),
                                e("e5")});
    CHECK(walk_membership(f.db, f.query, w1, SemanticsMode::SimpleRun));
    CHECK(walk_membership(f.db, f.query, w1, SemanticsMode::Walk));
    CHECK(walk_membership(f.db, f.query, w1, SemanticsMode::TrailRun));
    CHECK_FALSE(walk_membership(f.db, f.query, w1, SemanticsMode::Trail));
    CHECK_FALSE(walk_membership(f.db, f.query, w1, SemanticsMode::SimpleWalk));

    // No label word of the ferry walk contains Gas.
    Walk ferry = Walk::from_edges(f.db, f.s, {e("e6")});
    for (auto mode : {SemanticsMode::Walk, SemanticsMode::Trail, SemanticsMode::SimpleWalk,
                      SemanticsMode::TrailRun, SemanticsMode::SimpleRun})
        CHECK_FALSE(walk_membership(f.db, f.query, ferry, mode));
}

TEST_CASE("membership equivalences against exhaustive oracles") {
    rpqtest::Rng rng(71);
    std::vector<std::string> alphabet{"a", "b"};
    for (int i = 0; i < 150; ++i) {
        Database db = rpqtest::random_database(rng, 4, 8, alphabet);
        Automaton a = rpqtest::random_automaton(rng, 3, alphabet);
        Query q = Query::from_automaton(a);
        VertexId s = static_cast<VertexId>(rpqtest::pick(rng, db.vertex_count()));
        VertexId t = static_cast<VertexId>(rpqtest::pick(rng, db.vertex_count()));

        bool via_reachability = tuple_membership(db, q, s, t, SemanticsMode::Walk);
        bool via_simple_runs = rpqtest::oracle_simple_run_exists(db, a, s, t);
        REQUIRE(via_reachability == via_simple_runs);
        REQUIRE(tuple_membership(db, q, s, t, SemanticsMode::SimpleRun) ==
                via_simple_runs);
    }
    for (int i = 0; i < 150; ++i) {
        Database db = rpqtest::random_database(rng, 4, 8, alphabet);
        Regex r = rpqtest::random_regex(rng, 3, alphabet);
        Query q = Query::from_regex(r);
        VertexId s = static_cast<VertexId>(rpqtest::pick(rng, db.vertex_count()));
        VertexId t = static_cast<VertexId>(rpqtest::pick(rng, db.vertex_count()));
        bool walk_mode = tuple_membership(db, q, s, t, SemanticsMode::Walk);
        bool binding = rpqtest::oracle_binding_trail_exists(db, q.automaton(), s, t);
        REQUIRE(walk_mode == binding);
        REQUIRE(tuple_membership(db, q, s, t, SemanticsMode::BindingTrail) == binding);
    }
}

TEST_CASE("evaluation agrees with the run oracle for the run-based semantics") {
    rpqtest::Rng rng(73);
    std::vector<std::string> alphabet{"a", "b"};
    constexpr std::size_t kLen = 4;
    int checked = 0;
    while (checked < 60) {
        Database db = rpqtest::random_database(rng, 3, 6, alphabet);
        Automaton a = rpqtest::random_automaton(rng, 3, alphabet);
        if (product_edge_count(db, a) > 12)
            continue;
        ++checked;
        Query q = Query::from_automaton(a);
        VertexId s = static_cast<VertexId>(rpqtest::pick(rng, db.vertex_count()));
        VertexId t = static_cast<VertexId>(rpqtest::pick(rng, db.vertex_count()));

        auto ends = std::make_optional(std::make_pair(s, t));
        WalkBag got_sr = sorted(
            drain_up_to(evaluate(db, q, SemanticsMode::SimpleRun, ends), kLen));
        WalkBag want_sr = oracle_bag(db, a, kLen,
                                     [&](const rpqtest::OracleRun& run) {
                                         return rpqtest::oracle_run_is_simple(db, a, run);
                                     },
                                     ends);
        REQUIRE(got_sr == want_sr);

        WalkBag got_tr = sorted(
            drain_up_to(evaluate(db, q, SemanticsMode::TrailRun, ends), kLen));
        WalkBag want_tr = oracle_bag(db, a, kLen,
                                     [&](const rpqtest::OracleRun& run) {
                                         return rpqtest::oracle_run_is_trail(run);
                                     },
                                     ends);
        REQUIRE(got_tr == want_tr);
    }
}

TEST_CASE("binding-trail evaluation matches the key-distinctness filter") {
    rpqtest::Rng rng(79);
    std::vector<std::string> alphabet{"a", "b"};
    constexpr std::size_t kLen = 4;
    int checked = 0;
    while (checked < 60) {
        Database db = rpqtest::random_database(rng, 3, 6, alphabet);
        Regex r = rpqtest::random_regex(rng, 3, alphabet);
        Query q = Query::from_regex(r);
        if (product_edge_count(db, q.automaton()) > 12)
            continue;
        ++checked;
        VertexId s = static_cast<VertexId>(rpqtest::pick(rng, db.vertex_count()));
        VertexId t = static_cast<VertexId>(rpqtest::pick(rng, db.vertex_count()));
        auto ends = std::make_optional(std::make_pair(s, t));

        WalkBag got = sorted(
            drain_up_to(evaluate(db, q, SemanticsMode::BindingTrail, ends), kLen));
        const Automaton& g = q.automaton();
        WalkBag want = oracle_bag(db, g, kLen,
                                  [&](const rpqtest::OracleRun& run) {
                                      return rpqtest::oracle_run_is_binding(db, g, run);
                                  },
                                  ends);
        REQUIRE(got == want);
    }
}

TEST_CASE("trail and simple-walk evaluation against the projection filters") {
    rpqtest::Rng rng(83);
    std::vector<std::string> alphabet{"a", "b"};
    constexpr std::size_t kLen = 4;
    int checked = 0;
    while (checked < 60) {
        Database db = rpqtest::random_database(rng, 3, 5, alphabet);
        Automaton a = rpqtest::random_automaton(rng, 3, alphabet);
        if (product_edge_count(db, a) > 12)
            continue;
        ++checked;
        Query q = Query::from_automaton(a);
        VertexId s = static_cast<VertexId>(rpqtest::pick(rng, db.vertex_count()));
        VertexId t = static_cast<VertexId>(rpqtest::pick(rng, db.vertex_count()));
        auto ends = std::make_optional(std::make_pair(s, t));

        WalkBag got_trail =
            sorted(drain_up_to(evaluate(db, q, SemanticsMode::Trail, ends), kLen));
        WalkBag want_trail = oracle_bag(db, a, kLen,
                                        [&](const rpqtest::OracleRun& run) {
                                            return is_trail(rpqtest::oracle_run_walk(db, run));
                                        },
                                        ends);
        REQUIRE(got_trail == want_trail);

        WalkBag got_sw =
            sorted(drain_up_to(evaluate(db, q, SemanticsMode::SimpleWalk, ends), kLen));
        WalkBag want_sw = oracle_bag(db, a, kLen,
                                     [&](const rpqtest::OracleRun& run) {
                                         return is_simple(rpqtest::oracle_run_walk(db, run));
                                     },
                                     ends);
        REQUIRE(got_sw == want_sw);

        // Walk semantics with a cap is the unfiltered bag.
        WalkBag got_walk = sorted(
            drain_up_to(evaluate(db, q, SemanticsMode::Walk, ends, {}, kLen), kLen));
        WalkBag want_walk =
            oracle_bag(db, a, kLen, [](const rpqtest::OracleRun&) { return true; }, ends);
        REQUIRE(got_walk == want_walk);
    }
}

TEST_CASE("multiplicity counting") {
    Fixture f;
    CHECK(tuple_multiplicity(f.db, f.query, f.s, f.t, SemanticsMode::SimpleRun) == 1);
    // t has no outgoing edges, so nothing reaches s back.
    CHECK_FALSE(tuple_membership(f.db, f.query, f.t, f.s, SemanticsMode::Walk));
    CHECK(tuple_multiplicity(f.db, f.query, f.t, f.s, SemanticsMode::SimpleRun) == 0);
    CHECK_THROWS_AS(tuple_multiplicity(f.db, f.query, f.s, f.t, SemanticsMode::Walk),
                    PreconditionError);

    // One vertex with parallel a-loops under the one-state a* automaton: the
    // product is a single vertex, so only the empty run is simple. Note that
    // Gl(a*) has two states and would behave differently.
    Database db = parse_database("vertex v\nedge l1 v v a\nedge l2 v v a\nedge l3 v v a\n");
    Automaton one_state;
    one_state.intern_symbol("a");
    StateId q0 = one_state.add_state("q");
    one_state.mark_initial(q0);
    one_state.mark_final(q0);
    one_state.add_transition(q0, 0, q0);
    Query astar = Query::from_automaton(one_state);
    CHECK(tuple_multiplicity(db, astar, 0, 0, SemanticsMode::SimpleRun) == 1);
    // Trail runs may take the distinct loops in any order: sum of k-permutations.
    CHECK(tuple_multiplicity(db, astar, 0, 0, SemanticsMode::TrailRun) == 16);
    // The two-state position automaton of a* keeps one loop traversal.
    CHECK(tuple_multiplicity(db, Query::from_regex(parse_regex("a*")), 0, 0,
                             SemanticsMode::SimpleRun) == 4);
}

TEST_CASE("multiplicity equals the summed evaluation bag") {
    rpqtest::Rng rng(89);
    std::vector<std::string> alphabet{"a", "b"};
    for (int i = 0; i < 80; ++i) {
        Database db = rpqtest::random_database(rng, 3, 5, alphabet);
        Automaton a = rpqtest::random_automaton(rng, 3, alphabet);
        Query q = Query::from_automaton(a);
        VertexId s = static_cast<VertexId>(rpqtest::pick(rng, db.vertex_count()));
        VertexId t = static_cast<VertexId>(rpqtest::pick(rng, db.vertex_count()));
        auto ends = std::make_optional(std::make_pair(s, t));
        bool heavy = product_edge_count(db, a) > 10;
        for (auto mode : {SemanticsMode::SimpleRun, SemanticsMode::TrailRun,
                          SemanticsMode::Trail, SemanticsMode::SimpleWalk}) {
            if (heavy && mode == SemanticsMode::TrailRun)
                continue; // trail runs explode on dense products
            std::uint64_t direct = tuple_multiplicity(db, q, s, t, mode);
            std::uint64_t summed = total_multiplicity(evaluate(db, q, mode, ends).drain());
            REQUIRE(direct == summed);
        }
    }
}

TEST_CASE("trail-run output includes the simple-run output") {
    rpqtest::Rng rng(97);
    std::vector<std::string> alphabet{"a", "b"};
    constexpr std::size_t kLen = 4;
    int checked = 0;
    while (checked < 50) {
        Database db = rpqtest::random_database(rng, 3, 6, alphabet);
        Automaton a = rpqtest::random_automaton(rng, 3, alphabet);
        if (product_edge_count(db, a) > 12)
            continue;
        ++checked;
        Query q = Query::from_automaton(a);
        VertexId s = static_cast<VertexId>(rpqtest::pick(rng, db.vertex_count()));
        VertexId t = static_cast<VertexId>(rpqtest::pick(rng, db.vertex_count()));
        auto ends = std::make_optional(std::make_pair(s, t));

        WalkBag sr = drain_up_to(evaluate(db, q, SemanticsMode::SimpleRun, ends), kLen);
        WalkBag tr = drain_up_to(evaluate(db, q, SemanticsMode::TrailRun, ends), kLen);
        std::map<std::string, std::uint64_t> tr_mult;
        for (const auto& entry : tr)
            tr_mult[serialize_walk(db, entry.walk)] += entry.multiplicity;
        for (const auto& entry : sr)
            REQUIRE(tr_mult[serialize_walk(db, entry.walk)] >= entry.multiplicity);
    }
}

TEST_CASE("simple projected walks with simple witness runs are returned") {
    rpqtest::Rng rng(101);
    std::vector<std::string> alphabet{"a", "b"};
    for (int i = 0; i < 60; ++i) {
        Database db = rpqtest::random_database(rng, 4, 7, alphabet);
        Automaton a = rpqtest::random_automaton(rng, 3, alphabet);
        Query q = Query::from_automaton(a);
        for (const auto& run : rpqtest::all_runs(db, a, 4)) {
            Walk w = rpqtest::oracle_run_walk(db, run);
            if (!is_simple(w) || !rpqtest::oracle_run_is_simple(db, a, run))
                continue;
            REQUIRE(walk_membership(db, q, w, SemanticsMode::SimpleRun));
        }
    }
}

TEST_CASE("shortest matching walks are kept by the run-based semantics") {
    rpqtest::Rng rng(103);
    std::vector<std::string> alphabet{"a", "b"};
    for (int i = 0; i < 60; ++i) {
        Database db = rpqtest::random_database(rng, 4, 8, alphabet);
        Regex r = rpqtest::random_regex(rng, 3, alphabet);
        Query q = Query::from_regex(r);
        const Automaton& a = q.automaton();

        // Group walk-semantics witnesses (up to length 5) by endpoints.
        std::map<std::pair<VertexId, VertexId>, std::vector<Walk>> cells;
        for (const auto& run : rpqtest::all_runs(db, a, 5))
            cells[{rpqtest::oracle_run_walk(db, run).src(),
                   rpqtest::oracle_run_walk(db, run).tgt()}]
                .push_back(rpqtest::oracle_run_walk(db, run));
        for (auto& [ends, walks] : cells) {
            std::size_t min_len = SIZE_MAX;
            for (const auto& w : walks)
                min_len = std::min(min_len, w.length());
            for (const auto& w : walks) {
                if (w.length() != min_len)
                    continue;
                CHECK(walk_membership(db, q, w, SemanticsMode::SimpleRun));
                CHECK(walk_membership(db, q, w, SemanticsMode::BindingTrail));
            }
        }
    }
}

TEST_CASE("binding-trail flavours of a three-cycle") {
    Database db = parse_database(
        "vertex v1\nvertex v2\nvertex v3\n"
        "edge c1 v1 v2 a\nedge c2 v2 v3 a\nedge c3 v3 v1 a\n");
    VertexId v1 = db.vertex("v1");

    SECTION("a* returns the trails") {
        Query q = Query::from_regex(parse_regex("a*"));
        for (VertexId t = 0; t < db.vertex_count(); ++t) {
            WalkBag bt = evaluate(db, q, SemanticsMode::BindingTrail, {{v1, t}}).drain();
            WalkBag trails = evaluate(db, q, SemanticsMode::Trail, {{v1, t}}).drain();
            CHECK(sorted(bt) == sorted(trails));
        }
    }
    SECTION("a* a* admits the double traversal") {
        Query q = Query::from_regex(parse_regex("a* a*"));
        Walk twice = Walk::from_edges(db, v1, {0, 1, 2, 0, 1, 2});
        CHECK(walk_membership(db, q, twice, SemanticsMode::BindingTrail));
        bool found = false;
        auto stream = evaluate(db, q, SemanticsMode::BindingTrail, {{v1, v1}});
        while (auto entry = stream.next()) {
            if (entry->walk == twice)
                found = true;
            if (entry->walk.length() >= 6)
                break;
        }
        CHECK(found);
    }
    SECTION("(a+a)* bounds every edge to two uses") {
        Query q = Query::from_regex(parse_regex("(a+a)*"));
        // Brute force over all walks from v1 of length <= 7.
        std::function<void(Walk)> visit = [&](Walk w) {
            std::map<EdgeId, int> uses;
            for (EdgeId e : w.edges())
                ++uses[e];
            bool bounded = true;
            for (auto& [e, n] : uses)
                if (n > 2)
                    bounded = false;
            CHECK(walk_membership(db, q, w, SemanticsMode::BindingTrail) == bounded);
            if (w.length() < 7)
                for (EdgeId e : db.out_edges(w.tgt()))
                    visit(concat(w, Walk::from_edges(db, w.tgt(), {e})));
        };
        visit(Walk::at(v1));
    }
}

TEST_CASE("guards trip loudly") {
    Database big = rpqtest::load_graph("roads.graph");
    Query q = Query::from_regex(parse_regex("(Road+Ferry)* Gas (Road+Ferry)*"));
    // 5 vertices x 6 states = 30 > 12.
    CHECK_THROWS_AS(
        tuple_membership(big, q, 0, 1, SemanticsMode::Trail), GuardError);
    CHECK_THROWS_AS(
        tuple_multiplicity(big, q, 0, 1, SemanticsMode::SimpleRun), GuardError);
    Guards wide;
    wide.max_product_vertices = 64;
    CHECK_NOTHROW(tuple_membership(big, q, 0, 1, SemanticsMode::Trail, wide));

    // Binding trail needs an expression.
    Query automaton_only = Query::from_automaton(rpqtest::load_automaton("q2.auto"));
    CHECK_THROWS_AS(
        tuple_membership(big, automaton_only, 0, 1, SemanticsMode::BindingTrail),
        PreconditionError);

    // Unknown vertices are rejected up front.
    CHECK_THROWS_AS(tuple_membership(big, q, 99, 0, SemanticsMode::Walk),
                    PreconditionError);
    CHECK_THROWS_AS(tuple_multiplicity(big, q, 0, 99, SemanticsMode::SimpleRun, wide),
                    PreconditionError);
    CHECK_THROWS_AS(evaluate(big, q, SemanticsMode::SimpleRun, {{0, 99}}),
                    PreconditionError);
}

TEST_CASE("evaluation without endpoints walks the cells in declaration order") {
    Database db = rpqtest::load_graph("dprime.graph");
    Query q = Query::from_regex(parse_regex("a"));
    WalkBag bag = evaluate(db, q, SemanticsMode::SimpleRun, std::nullopt).drain();
    // Matching walks: the a-labelled bridge S->T and the a-loop on T.
    REQUIRE(bag.size() == 2);
    CHECK(serialize_walk(db, bag[0].walk) == "S -bridge-> T");
    CHECK(serialize_walk(db, bag[1].walk) == "T -loopT-> T");
}

TEST_CASE("concurrent evaluations over shared inputs agree") {
    Fixture f;
    auto run_one = [&]() {
        WalkBag bag =
            evaluate(f.db, f.query, SemanticsMode::SimpleRun, {{f.s, f.t}}).drain();
        REQUIRE(bag.size() == 1);
        REQUIRE(bag[0].multiplicity == 1);
    };
    std::vector<std::thread> threads;
    for (int i = 0; i < 4; ++i)
        threads.emplace_back(run_one);
    for (auto& th : threads)
        th.join();
}

TEST_CASE("simple-run counting over a fixed walk matches the oracle") {
    rpqtest::Rng rng(107);
    std::vector<std::string> alphabet{"a", "b"};
    for (int i = 0; i < 100; ++i) {
        Database db = rpqtest::random_database(rng, 4, 8, alphabet);
        Automaton a = rpqtest::random_automaton(rng, 3, alphabet);
        Walk w = rpqtest::random_walk(rng, db, rpqtest::pick(rng, 6));

        std::uint64_t expected = 0;
        for (const auto& run : rpqtest::all_runs(db, a, w.length()))
            if (rpqtest::oracle_run_is_simple(db, a, run) &&
                rpqtest::oracle_run_walk(db, run) == w)
                ++expected;
        REQUIRE(simple_run_count_over_walk(db, a, w) == expected);
        REQUIRE(run_count_over_walk(db, a, w) ==
                [&] {
                    std::uint64_t n = 0;
                    for (const auto& run : rpqtest::all_runs(db, a, w.length()))
                        if (rpqtest::oracle_run_walk(db, run) == w)
                            ++n;
                    return n;
                }());
    }
}
