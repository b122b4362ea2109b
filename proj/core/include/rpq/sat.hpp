#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

#include "rpq/automaton.hpp"
#include "rpq/graph.hpp"

namespace rpq {

/// 3-SAT instance: clauses of exactly three literals over variables 1..n.
struct SatLiteral {
    std::uint32_t variable; // 1-based
    bool positive;
};

struct SatInstance {
    std::uint32_t variable_count = 0;
    std::vector<std::array<SatLiteral, 3>> clauses;
};

/// Reads the DIMACS CNF subset: optional `c` comment lines, one
/// `p cnf <vars> <clauses>` header, then clause lines of exactly three
/// literals each terminated by 0.
SatInstance parse_dimacs(std::string_view text);
std::string serialize_dimacs(const SatInstance& inst);

/// The fixed six-letter, three-state walk-membership automaton. State T is
/// the only initial and final state; 20 transitions.
Automaton sat_automaton();

/// Database and walk encoding the instance: one chain gadget per variable
/// (Var, Keep..., Invert, Keep..., Reset through the (x,C_i) vertices), one
/// Var/Eval/Eval/Check gadget per clause, Reset connectors, and the walk
/// p_I = p_setval . p_checksat traversing every edge once. The number of
/// simple runs of sat_automaton() over the walk equals the number of
/// satisfying valuations, provided each clause's three literals are pairwise
/// distinct; a repeated literal makes the clause gadget revisit one
/// (literal, clause) vertex more often than the three states can absorb.
std::pair<Database, Walk> build_reduction(const SatInstance& inst);

/// Exact satisfying-valuation count by enumerating all 2^n valuations.
std::uint64_t count_satisfying(const SatInstance& inst, std::uint32_t max_variables = 20);

/// Cross-checks the reduction: simple-run count over p_I versus the
/// brute-force satisfying count.
bool reduction_check(const SatInstance& inst, std::uint32_t max_variables = 20);

} // namespace rpq
