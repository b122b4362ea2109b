#include "rpq/sat.hpp"

#include <array>
#include <sstream>

#include "rpq/semantics.hpp"

namespace rpq {

SatInstance parse_dimacs(std::string_view text) {
    SatInstance inst;
    std::size_t declared_clauses = 0;
    bool header_seen = false;
    std::vector<long> literals;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos)
            eol = text.size();
        std::string line(text.substr(pos, eol - pos));
        pos = eol + 1;
        ++line_no;
        std::istringstream in(line);
        std::string first;
        if (in >> first) {
            if (first == "c") {
                // comment
            } else if (first == "p") {
                std::string kind;
                long vars = 0, clauses = 0;
                if (header_seen || !(in >> kind >> vars >> clauses) || kind != "cnf" ||
                    vars < 0 || clauses < 0)
                    throw ParseError(line_no, "expected a single 'p cnf <vars> <clauses>' header");
                header_seen = true;
                inst.variable_count = static_cast<std::uint32_t>(vars);
                declared_clauses = static_cast<std::size_t>(clauses);
            } else {
                if (!header_seen)
                    throw ParseError(line_no, "clause before the 'p cnf' header");
                std::istringstream again(line);
                long lit;
                while (again >> lit) {
                    if (lit == 0) {
                        if (literals.size() != 3)
                            throw ParseError(line_no, "clauses must have exactly 3 literals");
                        std::array<SatLiteral, 3> clause;
                        for (int i = 0; i < 3; ++i) {
                            long l = literals[i];
                            std::uint32_t var = static_cast<std::uint32_t>(l < 0 ? -l : l);
                            if (var == 0 || var > inst.variable_count)
                                throw ParseError(line_no, "literal out of range");
                            clause[i] = {var, l > 0};
                        }
                        inst.clauses.push_back(clause);
                        literals.clear();
                    } else {
                        literals.push_back(lit);
                    }
                }
                if (again.fail() && !again.eof())
                    throw ParseError(line_no, "malformed clause line");
            }
        }
        if (eol == text.size())
            break;
    }
    if (!header_seen)
        throw ParseError(line_no, "missing 'p cnf' header");
    if (!literals.empty())
        throw ParseError(line_no, "dangling literals without closing 0");
    if (inst.clauses.size() != declared_clauses)
        throw ParseError(line_no, "clause count does not match the header");
    return inst;
}

std::string serialize_dimacs(const SatInstance& inst) {
    std::ostringstream out;
    out << "p cnf " << inst.variable_count << ' ' << inst.clauses.size() << '\n';
    for (const auto& clause : inst.clauses) {
        for (const auto& lit : clause)
            out << (lit.positive ? "" : "-") << lit.variable << ' ';
        out << "0\n";
    }
    return out.str();
}

Automaton sat_automaton() {
    Automaton a;
    StateId s0 = a.add_state("0");
    StateId s1 = a.add_state("1");
    StateId top = a.add_state("T");
    a.mark_initial(top);
    a.mark_final(top);

    auto keep = a.intern_symbol("Keep");
    auto var = a.intern_symbol("Var");
    auto invert = a.intern_symbol("Invert");
    auto reset = a.intern_symbol("Reset");
    auto eval = a.intern_symbol("Eval");
    auto check = a.intern_symbol("Check");

    // Keep: identity.
    a.add_transition(s0, keep, s0);
    a.add_transition(s1, keep, s1);
    a.add_transition(top, keep, top);
    // Var: everything -> {0,1}.
    for (StateId q : {s0, s1, top}) {
        a.add_transition(q, var, s0);
        a.add_transition(q, var, s1);
    }
    // Invert: swap 0 and 1.
    a.add_transition(s0, invert, s1);
    a.add_transition(s1, invert, s0);
    // Reset: everything -> T.
    for (StateId q : {s0, s1, top})
        a.add_transition(q, reset, top);
    // Eval: 1 -> {0,1}; 0 and T -> T.
    a.add_transition(s1, eval, s0);
    a.add_transition(s1, eval, s1);
    a.add_transition(s0, eval, top);
    a.add_transition(top, eval, top);
    // Check: 0 and T -> T (nothing from 1).
    a.add_transition(s0, check, top);
    a.add_transition(top, check, top);

    return a;
}

namespace {

std::string var_name(std::uint32_t x) { return "x" + std::to_string(x); }
std::string neg_name(std::uint32_t x) { return "nx" + std::to_string(x); }
std::string lit_name(const SatLiteral& lit) {
    return lit.positive ? var_name(lit.variable) : neg_name(lit.variable);
}
std::string pair_name(const std::string& lit, std::size_t clause) {
    return "(" + lit + ",C" + std::to_string(clause) + ")";
}

} // namespace

std::pair<Database, Walk> build_reduction(const SatInstance& inst) {
    if (inst.variable_count == 0 || inst.clauses.empty())
        throw PreconditionError("reduction needs at least one variable and one clause");
    for (const auto& clause : inst.clauses)
        for (const auto& lit : clause)
            if (lit.variable == 0 || lit.variable > inst.variable_count)
                throw PreconditionError("literal out of range");

    Database db;
    for (const char* sym : {"Check", "Eval", "Invert", "Keep", "Reset", "Var"})
        db.declare_symbol(sym);

    std::size_t gamma = inst.clauses.size();
    std::vector<EdgeId> walk_edges;
    VertexId cursor = db.add_vertex("Start");

    auto extend = [&](const std::string& edge_id, const std::string& to,
                      const char* label) {
        VertexId target = db.ensure_vertex(to);
        EdgeId e = db.add_edge(edge_id, cursor, target, {*db.find_symbol(label)});
        walk_edges.push_back(e);
        cursor = target;
    };

    // p_setval: one gadget walk per variable, chained by Reset connectors.
    for (std::uint32_t x = 1; x <= inst.variable_count; ++x) {
        std::string px = "p" + var_name(x);
        extend("conn.to." + var_name(x), var_name(x) + ".in", "Reset");
        extend(px + ".var", var_name(x), "Var");
        for (std::size_t i = 0; i <= gamma; ++i)
            extend(px + ".keep" + std::to_string(i), pair_name(var_name(x), i), "Keep");
        extend(px + ".invert", neg_name(x), "Invert");
        for (std::size_t i = gamma + 1; i-- > 0;)
            extend(px + ".nkeep" + std::to_string(i), pair_name(neg_name(x), i), "Keep");
        extend(px + ".reset", var_name(x) + ".out", "Reset");
    }
    extend("conn.to.Mid", "Mid", "Reset");

    // p_checksat: one Var/Eval/Eval/Check gadget per clause.
    for (std::size_t c = 1; c <= gamma; ++c) {
        const auto& clause = inst.clauses[c - 1];
        std::string pc = "pC" + std::to_string(c);
        extend("conn.to.C" + std::to_string(c), "C" + std::to_string(c) + ".in", "Reset");
        extend(pc + ".var", pair_name(lit_name(clause[0]), c), "Var");
        extend(pc + ".eval1", pair_name(lit_name(clause[1]), c), "Eval");
        extend(pc + ".eval2", pair_name(lit_name(clause[2]), c), "Eval");
        extend(pc + ".check", "C" + std::to_string(c) + ".out", "Check");
    }
    extend("conn.to.End", "End", "Reset");

    Walk walk = Walk::from_edges(db, 0, std::move(walk_edges));
    return {std::move(db), std::move(walk)};
}

std::uint64_t count_satisfying(const SatInstance& inst, std::uint32_t max_variables) {
    if (inst.variable_count > max_variables)
        throw GuardError("too many variables for the brute-force counting oracle");
    std::uint64_t count = 0;
    std::uint64_t total = std::uint64_t{1} << inst.variable_count;
    for (std::uint64_t valuation = 0; valuation < total; ++valuation) {
        bool ok = true;
        for (const auto& clause : inst.clauses) {
            bool clause_true = false;
            for (const auto& lit : clause) {
                bool value = (valuation >> (lit.variable - 1)) & 1;
                if (value == lit.positive) {
                    clause_true = true;
                    break;
                }
            }
            if (!clause_true) {
                ok = false;
                break;
            }
        }
        if (ok)
            ++count;
    }
    return count;
}

bool reduction_check(const SatInstance& inst, std::uint32_t max_variables) {
    if (inst.variable_count > max_variables)
        throw GuardError("instance above the reduction-check guard");
    auto [db, walk] = build_reduction(inst);
    Automaton a = sat_automaton();
    std::uint64_t runs = simple_run_count_over_walk(db, a, walk);
    return runs == count_satisfying(inst, max_variables);
}

} // namespace rpq
