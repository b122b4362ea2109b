#include "support.hpp"

#include <deque>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace rpqtest {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open fixture " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

rpq::Database random_database(Rng& rng, std::size_t max_vertices, std::size_t max_edges,
                              const std::vector<std::string>& alphabet,
                              double multi_label_prob) {
    rpq::Database db;
    for (const auto& sym : alphabet)
        db.declare_symbol(sym);
    std::size_t vertices = 1 + pick(rng, max_vertices);
    for (std::size_t v = 0; v < vertices; ++v)
        db.add_vertex("v" + std::to_string(v));
    std::size_t edges = pick(rng, max_edges + 1);
    std::bernoulli_distribution multi(multi_label_prob);
    for (std::size_t e = 0; e < edges; ++e) {
        std::vector<rpq::SymbolId> labels{
            static_cast<rpq::SymbolId>(pick(rng, alphabet.size()))};
        if (multi(rng))
            labels.push_back(static_cast<rpq::SymbolId>(pick(rng, alphabet.size())));
        db.add_edge("e" + std::to_string(e), static_cast<rpq::VertexId>(pick(rng, vertices)),
                    static_cast<rpq::VertexId>(pick(rng, vertices)), std::move(labels));
    }
    return db;
}

rpq::Automaton random_automaton(Rng& rng, std::size_t max_states,
                                const std::vector<std::string>& alphabet) {
    rpq::Automaton a;
    for (const auto& sym : alphabet)
        a.intern_symbol(sym);
    std::size_t states = 1 + pick(rng, max_states);
    for (std::size_t q = 0; q < states; ++q)
        a.add_state("q" + std::to_string(q));
    std::size_t initials = 1 + pick(rng, 2);
    std::size_t finals = 1 + pick(rng, 2);
    for (std::size_t i = 0; i < initials; ++i)
        a.mark_initial(static_cast<rpq::StateId>(pick(rng, states)));
    for (std::size_t i = 0; i < finals; ++i)
        a.mark_final(static_cast<rpq::StateId>(pick(rng, states)));
    std::size_t budget = pick(rng, 2 * states * alphabet.size() + 1);
    std::set<std::tuple<std::size_t, std::size_t, std::size_t>> seen;
    for (std::size_t i = 0; i < budget; ++i) {
        auto triple = std::tuple(pick(rng, states), pick(rng, alphabet.size()),
                                 pick(rng, states));
        if (!seen.insert(triple).second)
            continue;
        a.add_transition(static_cast<rpq::StateId>(std::get<0>(triple)),
                         static_cast<std::uint32_t>(std::get<1>(triple)),
                         static_cast<rpq::StateId>(std::get<2>(triple)));
    }
    return a;
}

rpq::Automaton random_trim_automaton(Rng& rng, std::size_t max_states,
                                     std::size_t max_transitions,
                                     const std::vector<std::string>& alphabet) {
    while (true) {
        rpq::Automaton a = random_automaton(rng, max_states, alphabet);
        rpq::Automaton trimmed = rpq::trim(a);
        if (trimmed.state_count() == 0 || trimmed.transition_count() > max_transitions)
            continue;
        return trimmed;
    }
}

rpq::Regex random_regex(Rng& rng, int depth, const std::vector<std::string>& alphabet) {
    if (depth <= 0 || pick(rng, 5) == 0) {
        if (pick(rng, 6) == 0)
            return rpq::Regex::epsilon();
        return rpq::Regex::atom(alphabet[pick(rng, alphabet.size())]);
    }
    switch (pick(rng, 3)) {
    case 0:
        return rpq::Regex::star(random_regex(rng, depth - 1, alphabet));
    case 1:
        return rpq::Regex::concat(random_regex(rng, depth - 1, alphabet),
                                  random_regex(rng, depth - 1, alphabet));
    default:
        return rpq::Regex::alternation(random_regex(rng, depth - 1, alphabet),
                                       random_regex(rng, depth - 1, alphabet));
    }
}

rpq::Walk random_walk(Rng& rng, const rpq::Database& db, std::size_t length) {
    rpq::VertexId v = static_cast<rpq::VertexId>(pick(rng, db.vertex_count()));
    std::vector<rpq::EdgeId> edges;
    rpq::VertexId cur = v;
    for (std::size_t i = 0; i < length; ++i) {
        const auto& out = db.out_edges(cur);
        if (out.empty())
            break;
        rpq::EdgeId e = out[pick(rng, out.size())];
        edges.push_back(e);
        cur = db.edge_tgt(e);
    }
    return rpq::Walk::from_edges(db, v, std::move(edges));
}

// ---------------------------------------------------------------------------
// Derivatives.

namespace {

DRegex make(DRegex::Kind kind, std::vector<DRegex> children = {}) {
    DRegex r;
    r.kind = kind;
    r.children = std::move(children);
    return r;
}

/// ACI-style normalization so the derivative automaton stays finite: flatten
/// and sort alternations, drop empties, collapse trivial stars.
DRegex normalize(DRegex r) {
    using K = DRegex::Kind;
    for (auto& child : r.children)
        child = normalize(std::move(child));
    switch (r.kind) {
    case K::Empty:
    case K::Eps:
    case K::Atom:
        return r;
    case K::Star: {
        DRegex& inner = r.children[0];
        if (inner.kind == K::Empty || inner.kind == K::Eps)
            return make(K::Eps);
        if (inner.kind == K::Star)
            return std::move(inner);
        return r;
    }
    case K::Cat: {
        std::vector<DRegex> flat;
        for (auto& child : r.children) {
            if (child.kind == K::Empty)
                return make(K::Empty);
            if (child.kind == K::Eps)
                continue;
            if (child.kind == K::Cat)
                for (auto& grand : child.children)
                    flat.push_back(std::move(grand));
            else
                flat.push_back(std::move(child));
        }
        if (flat.empty())
            return make(K::Eps);
        if (flat.size() == 1)
            return std::move(flat[0]);
        return make(K::Cat, std::move(flat));
    }
    case K::Alt: {
        std::vector<DRegex> flat;
        for (auto& child : r.children) {
            if (child.kind == K::Empty)
                continue;
            if (child.kind == K::Alt)
                for (auto& grand : child.children)
                    flat.push_back(std::move(grand));
            else
                flat.push_back(std::move(child));
        }
        if (flat.empty())
            return make(K::Empty);
        std::sort(flat.begin(), flat.end(), [](const DRegex& a, const DRegex& b) {
            std::function<std::string(const DRegex&)> key = [&](const DRegex& x) {
                std::string s = std::to_string(static_cast<int>(x.kind)) + x.symbol + "(";
                for (const auto& c : x.children)
                    s += key(c) + ",";
                return s + ")";
            };
            return key(a) < key(b);
        });
        flat.erase(std::unique(flat.begin(), flat.end(),
                               [](const DRegex& a, const DRegex& b) {
                                   std::function<bool(const DRegex&, const DRegex&)> eq =
                                       [&](const DRegex& x, const DRegex& y) -> bool {
                                       if (x.kind != y.kind || x.symbol != y.symbol ||
                                           x.children.size() != y.children.size())
                                           return false;
                                       for (std::size_t i = 0; i < x.children.size(); ++i)
                                           if (!eq(x.children[i], y.children[i]))
                                               return false;
                                       return true;
                                   };
                                   return eq(a, b);
                               }),
                   flat.end());
        if (flat.size() == 1)
            return std::move(flat[0]);
        return make(K::Alt, std::move(flat));
    }
    }
    return r;
}

std::string dregex_key(const DRegex& r) {
    std::string s = std::to_string(static_cast<int>(r.kind)) + r.symbol + "(";
    for (const auto& c : r.children)
        s += dregex_key(c) + ",";
    return s + ")";
}

} // namespace

DRegex to_dregex(const rpq::Regex& r) {
    using K = rpq::Regex::Kind;
    switch (r.kind()) {
    case K::Epsilon:
        return make(DRegex::Kind::Eps);
    case K::Atom: {
        DRegex d = make(DRegex::Kind::Atom);
        d.symbol = r.symbol();
        return d;
    }
    case K::Star:
        return normalize(make(DRegex::Kind::Star, {to_dregex(r.child())}));
    case K::Concat:
        return normalize(make(DRegex::Kind::Cat, {to_dregex(r.left()), to_dregex(r.right())}));
    case K::Union:
        return normalize(make(DRegex::Kind::Alt, {to_dregex(r.left()), to_dregex(r.right())}));
    }
    return make(DRegex::Kind::Empty);
}

bool dregex_nullable(const DRegex& r) {
    using K = DRegex::Kind;
    switch (r.kind) {
    case K::Empty:
        return false;
    case K::Eps:
    case K::Star:
        return true;
    case K::Atom:
        return false;
    case K::Cat:
        for (const auto& c : r.children)
            if (!dregex_nullable(c))
                return false;
        return true;
    case K::Alt:
        for (const auto& c : r.children)
            if (dregex_nullable(c))
                return true;
        return false;
    }
    return false;
}

DRegex dregex_derivative(const DRegex& r, const std::string& letter) {
    using K = DRegex::Kind;
    switch (r.kind) {
    case K::Empty:
    case K::Eps:
        return make(K::Empty);
    case K::Atom:
        return r.symbol == letter ? make(K::Eps) : make(K::Empty);
    case K::Star: {
        DRegex d = dregex_derivative(r.children[0], letter);
        return normalize(make(K::Cat, {std::move(d), r}));
    }
    case K::Cat: {
        // d(xy) = d(x)y + [nullable(x)] d(y), generalized to n children.
        std::vector<DRegex> alts;
        for (std::size_t i = 0; i < r.children.size(); ++i) {
            std::vector<DRegex> cat{dregex_derivative(r.children[i], letter)};
            for (std::size_t j = i + 1; j < r.children.size(); ++j)
                cat.push_back(r.children[j]);
            alts.push_back(make(K::Cat, std::move(cat)));
            if (!dregex_nullable(r.children[i]))
                break;
        }
        return normalize(make(K::Alt, std::move(alts)));
    }
    case K::Alt: {
        std::vector<DRegex> alts;
        for (const auto& c : r.children)
            alts.push_back(dregex_derivative(c, letter));
        return normalize(make(K::Alt, std::move(alts)));
    }
    }
    return make(K::Empty);
}

bool dregex_matches(const rpq::Regex& r, const std::vector<std::string>& word) {
    DRegex d = to_dregex(r);
    for (const auto& letter : word) {
        d = dregex_derivative(d, letter);
        if (d.kind == DRegex::Kind::Empty)
            return false;
    }
    return dregex_nullable(d);
}

LanguageFacts language_facts(const rpq::Regex& r, const std::vector<std::string>& alphabet) {
    // Lazily determinized derivative automaton.
    std::vector<DRegex> states{to_dregex(r)};
    std::map<std::string, std::size_t> index{{dregex_key(states[0]), 0}};
    std::vector<std::vector<std::size_t>> delta; // state x letter -> state
    std::deque<std::size_t> queue{0};
    while (!queue.empty()) {
        std::size_t q = queue.front();
        queue.pop_front();
        if (delta.size() <= q)
            delta.resize(q + 1);
        delta[q].assign(alphabet.size(), 0);
        for (std::size_t l = 0; l < alphabet.size(); ++l) {
            DRegex d = dregex_derivative(states[q], alphabet[l]);
            std::string key = dregex_key(d);
            auto [it, fresh] = index.emplace(key, states.size());
            if (fresh) {
                states.push_back(std::move(d));
                queue.push_back(it->second);
            }
            delta[q][l] = it->second;
        }
    }
    delta.resize(states.size());
    for (auto& row : delta)
        if (row.empty())
            row.assign(alphabet.size(), 0);

    std::vector<bool> accepting(states.size());
    for (std::size_t q = 0; q < states.size(); ++q)
        accepting[q] = dregex_nullable(states[q]);

    // Co-accessible derivative states.
    std::vector<bool> useful = accepting;
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t q = 0; q < states.size(); ++q) {
            if (useful[q])
                continue;
            for (std::size_t l = 0; l < alphabet.size(); ++l)
                if (useful[delta[q][l]]) {
                    useful[q] = true;
                    changed = true;
                    break;
                }
        }
    }

    LanguageFacts facts;
    facts.nullable = accepting[0];
    for (std::size_t l = 0; l < alphabet.size(); ++l)
        if (useful[delta[0][l]])
            facts.first.insert(alphabet[l]);
    for (std::size_t q = 0; q < states.size(); ++q) {
        for (std::size_t l = 0; l < alphabet.size(); ++l) {
            std::size_t to = delta[q][l];
            if (accepting[to])
                facts.last.insert(alphabet[l]);
            for (std::size_t l2 = 0; l2 < alphabet.size(); ++l2)
                if (useful[delta[to][l2]])
                    facts.factors.insert({alphabet[l], alphabet[l2]});
        }
    }
    return facts;
}

// ---------------------------------------------------------------------------
// Run oracles.

std::vector<OracleRun> all_runs(const rpq::Database& db, const rpq::Automaton& a,
                                std::size_t max_length) {
    std::vector<OracleRun> out;
    OracleRun current;
    std::function<void(rpq::VertexId, rpq::StateId)> go = [&](rpq::VertexId v,
                                                              rpq::StateId q) {
        if (a.is_final(q))
            out.push_back(current);
        if (current.steps.size() == max_length)
            return;
        for (rpq::EdgeId e : db.out_edges(v)) {
            for (rpq::TransId t : a.out_transitions(q)) {
                const auto& tr = a.transition(t);
                auto sym = db.find_symbol(a.symbol_name(tr.symbol));
                if (!sym || !db.edge_has_label(e, *sym))
                    continue;
                current.steps.emplace_back(e, t);
                go(db.edge_tgt(e), tr.tgt);
                current.steps.pop_back();
            }
        }
    };
    for (rpq::VertexId v = 0; v < db.vertex_count(); ++v) {
        for (rpq::StateId i : a.initials()) {
            current.start = v;
            go(v, i);
        }
    }
    return out;
}

bool oracle_run_is_simple(const rpq::Database& db, const rpq::Automaton& a,
                          const OracleRun& run) {
    std::set<std::pair<rpq::VertexId, rpq::StateId>> seen;
    rpq::VertexId v = run.start;
    rpq::StateId q = run.steps.empty() ? 0 : a.transition(run.steps[0].second).src;
    if (run.steps.empty()) {
        // A length-0 run sits at one (vertex, state) pair; always simple.
        return true;
    }
    seen.insert({v, q});
    for (const auto& [e, t] : run.steps) {
        v = db.edge_tgt(e);
        q = a.transition(t).tgt;
        if (!seen.insert({v, q}).second)
            return false;
    }
    return true;
}

bool oracle_run_is_trail(const OracleRun& run) {
    std::set<std::pair<rpq::EdgeId, rpq::TransId>> seen;
    for (const auto& step : run.steps)
        if (!seen.insert(step).second)
            return false;
    return true;
}

bool oracle_run_is_binding(const rpq::Database& db, const rpq::Automaton& a,
                           const OracleRun& run) {
    (void)db;
    std::set<std::pair<rpq::EdgeId, rpq::StateId>> seen;
    for (const auto& [e, t] : run.steps)
        if (!seen.insert({e, a.transition(t).tgt}).second)
            return false;
    return true;
}

rpq::Walk oracle_run_walk(const rpq::Database& db, const OracleRun& run) {
    return rpq::Walk::from_edges(db, run.start, run.edges());
}

bool oracle_simple_run_exists(const rpq::Database& db, const rpq::Automaton& a,
                              rpq::VertexId s, rpq::VertexId t) {
    std::set<std::pair<rpq::VertexId, rpq::StateId>> visited;
    std::function<bool(rpq::VertexId, rpq::StateId)> go = [&](rpq::VertexId v,
                                                              rpq::StateId q) -> bool {
        if (v == t && a.is_final(q))
            return true;
        for (rpq::EdgeId e : db.out_edges(v)) {
            for (rpq::TransId tr_id : a.out_transitions(q)) {
                const auto& tr = a.transition(tr_id);
                auto sym = db.find_symbol(a.symbol_name(tr.symbol));
                if (!sym || !db.edge_has_label(e, *sym))
                    continue;
                auto next = std::make_pair(db.edge_tgt(e), tr.tgt);
                if (visited.count(next))
                    continue;
                visited.insert(next);
                if (go(next.first, next.second))
                    return true;
                visited.erase(next);
            }
        }
        return false;
    };
    for (rpq::StateId i : a.initials()) {
        visited = {{s, i}};
        if (go(s, i))
            return true;
    }
    return false;
}

bool oracle_binding_trail_exists(const rpq::Database& db, const rpq::Automaton& glushkov,
                                 rpq::VertexId s, rpq::VertexId t) {
    std::set<std::pair<rpq::EdgeId, rpq::StateId>> used;
    std::function<bool(rpq::VertexId, rpq::StateId)> go = [&](rpq::VertexId v,
                                                              rpq::StateId q) -> bool {
        if (v == t && glushkov.is_final(q))
            return true;
        for (rpq::EdgeId e : db.out_edges(v)) {
            for (rpq::TransId tr_id : glushkov.out_transitions(q)) {
                const auto& tr = glushkov.transition(tr_id);
                auto sym = db.find_symbol(glushkov.symbol_name(tr.symbol));
                if (!sym || !db.edge_has_label(e, *sym))
                    continue;
                auto key = std::make_pair(e, tr.tgt);
                if (used.count(key))
                    continue;
                used.insert(key);
                if (go(db.edge_tgt(e), tr.tgt))
                    return true;
                used.erase(key);
            }
        }
        return false;
    };
    for (rpq::StateId i : glushkov.initials())
        if (go(s, i))
            return true;
    return false;
}

} // namespace rpqtest
