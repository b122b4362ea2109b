#pragma once

// Shared helpers for the test suites: fixture loading, random instance
// generators, and the independent oracles the implementation is checked
// against (derivative-based language matching, exhaustive run enumeration).

#include <algorithm>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "rpq/automaton.hpp"
#include "rpq/graph.hpp"
#include "rpq/regex.hpp"

#ifndef RPQ_DATA_DIR
#define RPQ_DATA_DIR "data"
#endif
#ifndef RPQ_GOLDEN_DIR
#define RPQ_GOLDEN_DIR "tests/golden"
#endif

namespace rpqtest {

inline std::string data_path(const std::string& name) {
    return std::string(RPQ_DATA_DIR) + "/" + name;
}

std::string read_file(const std::string& path);

inline std::string golden_path(const std::string& name) {
    return std::string(RPQ_GOLDEN_DIR) + "/" + name;
}

inline rpq::Database load_graph(const std::string& name) {
    return rpq::parse_database(read_file(data_path(name)));
}

inline rpq::Automaton load_automaton(const std::string& name) {
    return rpq::parse_automaton(read_file(data_path(name)));
}

// ---------------------------------------------------------------------------
// Random instances.

using Rng = std::mt19937_64;

inline std::size_t pick(Rng& rng, std::size_t bound) {
    return std::uniform_int_distribution<std::size_t>(0, bound - 1)(rng);
}

rpq::Database random_database(Rng& rng, std::size_t max_vertices, std::size_t max_edges,
                              const std::vector<std::string>& alphabet,
                              double multi_label_prob = 0.15);

rpq::Automaton random_automaton(Rng& rng, std::size_t max_states,
                                const std::vector<std::string>& alphabet);

/// Random automaton trimmed down; retries until at least one state survives.
rpq::Automaton random_trim_automaton(Rng& rng, std::size_t max_states,
                                     std::size_t max_transitions,
                                     const std::vector<std::string>& alphabet);

rpq::Regex random_regex(Rng& rng, int depth, const std::vector<std::string>& alphabet);

/// Random walk by following random out edges; may be shorter than asked when
/// stuck.
rpq::Walk random_walk(Rng& rng, const rpq::Database& db, std::size_t length);

// ---------------------------------------------------------------------------
// Derivative-based regular-expression matcher (independent of the Glushkov
// path) plus the Brzozowski-automaton factor oracle used to check the
// position automaton against its declarative definition.

struct DRegex {
    enum class Kind { Empty, Eps, Atom, Star, Cat, Alt };
    Kind kind = Kind::Empty;
    std::string symbol;
    std::vector<DRegex> children;
};

DRegex to_dregex(const rpq::Regex& r);
bool dregex_nullable(const DRegex& r);
DRegex dregex_derivative(const DRegex& r, const std::string& letter);
bool dregex_matches(const rpq::Regex& r, const std::vector<std::string>& word);

/// First/last letters, two-letter factors and nullability of the language,
/// computed on the lazily determinized derivative automaton. Exact (no word
/// length bound).
struct LanguageFacts {
    bool nullable = false;
    std::set<std::string> first;
    std::set<std::string> last;
    std::set<std::pair<std::string, std::string>> factors;
};

LanguageFacts language_facts(const rpq::Regex& r, const std::vector<std::string>& alphabet);

// ---------------------------------------------------------------------------
// Exhaustive run enumeration (the run-semantics oracle).

struct OracleRun {
    rpq::VertexId start;
    std::vector<std::pair<rpq::EdgeId, rpq::TransId>> steps;

    std::vector<rpq::EdgeId> edges() const {
        std::vector<rpq::EdgeId> out;
        for (auto& [e, t] : steps)
            out.push_back(e);
        return out;
    }
};

/// Every run of the product with length <= max_length.
std::vector<OracleRun> all_runs(const rpq::Database& db, const rpq::Automaton& a,
                                std::size_t max_length);

bool oracle_run_is_simple(const rpq::Database& db, const rpq::Automaton& a,
                          const OracleRun& run);
bool oracle_run_is_trail(const OracleRun& run);
/// Binding-key distinctness: all (edge, target state) pairs differ.
bool oracle_run_is_binding(const rpq::Database& db, const rpq::Automaton& a,
                           const OracleRun& run);

rpq::Walk oracle_run_walk(const rpq::Database& db, const OracleRun& run);

/// Exhaustive simple-run existence between two vertices (DFS over the
/// product with a visited set), independent of the reachability shortcut.
bool oracle_simple_run_exists(const rpq::Database& db, const rpq::Automaton& a,
                              rpq::VertexId s, rpq::VertexId t);

/// Exhaustive binding-trail existence.
bool oracle_binding_trail_exists(const rpq::Database& db, const rpq::Automaton& glushkov,
                                 rpq::VertexId s, rpq::VertexId t);

} // namespace rpqtest
