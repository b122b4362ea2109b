#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rpq/automaton.hpp"
#include "rpq/regex.hpp"

namespace rpq {

/// Witness data of a topological coding of an automaton A into the Glushkov
/// automaton of the produced expression: framing words, the letter encoding
/// lambda, the state embedding nu (as Glushkov position indices), and the
/// complementary transition rankings G and H with G(e) + H(e) = m + 1.
struct CodingWitness {
    std::string sigma;                       // fresh separator letter
    std::vector<std::string> initial_word;   // u_i
    std::vector<std::string> final_word;     // u_f
    std::map<std::string, std::vector<std::string>> lambda; // letter -> word
    std::map<std::string, std::size_t> nu;   // state name -> 1-based position
    std::vector<std::size_t> g;              // per transition index, 1..m
    std::vector<std::size_t> h;              // m + 1 - g
};

/// Builds the one-star expression whose Glushkov automaton topologically
/// encodes the given trim automaton:
///   R = ( sum_q  R_q_left . sigma . R_q_right )*
/// where R_q_left sums a^G(e) over the transitions e into q (plus eps when q
/// is initial) and R_q_right sums a^H(e) over the transitions out of q (plus
/// eps when q is final). G is the lexicographic transition ranking. The
/// expression has card(Q) + m(m+1) atoms and exactly one Kleene star.
std::pair<Regex, CodingWitness> coding_expression(const Automaton& a);

/// u_i . lambda(u_1) ... lambda(u_k) . u_f -- the word whose acceptance by
/// the Glushkov automaton mirrors acceptance of u by the encoded automaton.
std::vector<std::string> encode_word(const CodingWitness& witness,
                                     const std::vector<std::string>& word);

/// Outcome of checking the coding conditions on a concrete (A, R, witness)
/// triple. Failures name the condition that broke.
struct CodingReport {
    bool ok = true;
    std::vector<std::string> failures;
    std::size_t transition_walks = 0; // |W_B^transition|

    void fail(std::string message) {
        ok = false;
        failures.push_back(std::move(message));
    }
};

/// Materializes B = Gl(r) and checks the coding conditions by bounded walk
/// search: the initial/transition/final walk families are in bijection with
/// A's initial states, transitions and final states, walks meet the endpoint
/// and internal-state requirements, distinct walks share no transition or
/// internal state, and acceptance transfers through encode_word for all
/// words up to the given length.
CodingReport verify_coding(const Automaton& a, const Regex& r,
                           const CodingWitness& witness,
                           std::size_t max_word_length = 4);

/// The union-free variant over the alphabet {a, b, c, sigma}: states and
/// letters are renumbered to 0-based ranges and each letter x is encoded as
/// a^(n+1) b^x c^(n+1) sigma inside a product of starred factors. No union
/// occurs under (or outside) a star.
Regex coding_expression_no_union(const Automaton& a);

/// Encoding that goes with coding_expression_no_union:
///   c^(n+1) sigma lambda(u_1) ... lambda(u_k) a^(n+1)
/// The acceptance equivalence holds when the automaton has a single initial
/// and a single final state.
std::vector<std::string> no_union_encode_word(const Automaton& a,
                                              const std::vector<std::string>& word);

} // namespace rpq
