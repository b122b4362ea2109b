#include "rpq/topo.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace rpq {

namespace {

std::string fresh_sigma(const Automaton& a) {
    std::string name = "sigma";
    while (a.find_symbol(name))
        name += "_";
    return name;
}

/// a^k as a left-associated concatenation, counting emitted atoms.
Regex power(const std::string& symbol, std::size_t k, std::size_t& atom_counter) {
    Regex r = Regex::atom(symbol);
    ++atom_counter;
    for (std::size_t i = 1; i < k; ++i) {
        r = Regex::concat(std::move(r), Regex::atom(symbol));
        ++atom_counter;
    }
    return r;
}

Regex fold_union(std::vector<Regex> parts) {
    Regex r = std::move(parts.front());
    for (std::size_t i = 1; i < parts.size(); ++i)
        r = Regex::alternation(std::move(r), std::move(parts[i]));
    return r;
}

Regex fold_concat(std::vector<Regex> parts) {
    Regex r = std::move(parts.front());
    for (std::size_t i = 1; i < parts.size(); ++i)
        r = Regex::concat(std::move(r), std::move(parts[i]));
    return r;
}

} // namespace

std::pair<Regex, CodingWitness> coding_expression(const Automaton& a) {
    if (a.state_count() == 0)
        throw PreconditionError("coding needs a nonempty automaton");
    if (!a.is_trim())
        throw PreconditionError("coding needs a trim automaton");

    std::size_t m = a.transition_count();
    CodingWitness witness;
    witness.sigma = fresh_sigma(a);
    witness.initial_word = {witness.sigma};
    witness.final_word = {};
    for (std::uint32_t s = 0; s < a.symbol_count(); ++s) {
        std::vector<std::string> word(m + 1, a.symbol_name(s));
        word.push_back(witness.sigma);
        witness.lambda[a.symbol_name(s)] = std::move(word);
    }

    // G: lexicographic order on (src, label, tgt) names; H complements it.
    std::vector<TransId> order(m);
    for (TransId t = 0; t < m; ++t)
        order[t] = t;
    auto lex_key = [&](TransId t) {
        const auto& tr = a.transition(t);
        return std::tuple(a.state_name(tr.src), a.symbol_name(tr.symbol),
                          a.state_name(tr.tgt));
    };
    std::sort(order.begin(), order.end(),
              [&](TransId x, TransId y) { return lex_key(x) < lex_key(y); });
    witness.g.assign(m, 0);
    witness.h.assign(m, 0);
    for (std::size_t rank = 0; rank < m; ++rank) {
        witness.g[order[rank]] = rank + 1;
        witness.h[order[rank]] = m - rank; // m + 1 - g
    }

    std::size_t atoms = 0;
    std::vector<Regex> terms;
    for (StateId q = 0; q < a.state_count(); ++q) {
        std::vector<Regex> left_parts;
        if (a.is_initial(q))
            left_parts.push_back(Regex::epsilon());
        std::vector<TransId> incoming(a.in_transitions(q));
        std::sort(incoming.begin(), incoming.end(),
                  [&](TransId x, TransId y) { return witness.g[x] < witness.g[y]; });
        for (TransId t : incoming)
            left_parts.push_back(
                power(a.symbol_name(a.transition(t).symbol), witness.g[t], atoms));
        Regex left = fold_union(std::move(left_parts));

        Regex sigma_atom = Regex::atom(witness.sigma);
        ++atoms;
        witness.nu[a.state_name(q)] = atoms;

        std::vector<Regex> right_parts;
        if (a.is_final(q))
            right_parts.push_back(Regex::epsilon());
        std::vector<TransId> outgoing(a.out_transitions(q));
        std::sort(outgoing.begin(), outgoing.end(),
                  [&](TransId x, TransId y) { return witness.h[x] < witness.h[y]; });
        for (TransId t : outgoing)
            right_parts.push_back(
                power(a.symbol_name(a.transition(t).symbol), witness.h[t], atoms));
        Regex right = fold_union(std::move(right_parts));

        terms.push_back(Regex::concat(Regex::concat(std::move(left), std::move(sigma_atom)),
                                      std::move(right)));
    }

    return {Regex::star(fold_union(std::move(terms))), std::move(witness)};
}

std::vector<std::string> encode_word(const CodingWitness& witness,
                                     const std::vector<std::string>& word) {
    std::vector<std::string> out = witness.initial_word;
    for (const auto& letter : word) {
        auto it = witness.lambda.find(letter);
        if (it == witness.lambda.end())
            throw PreconditionError("unknown letter '" + letter + "'");
        out.insert(out.end(), it->second.begin(), it->second.end());
    }
    out.insert(out.end(), witness.final_word.begin(), witness.final_word.end());
    return out;
}

namespace {

struct Computation {
    std::vector<TransId> transitions;
    std::vector<StateId> states; // transitions.size() + 1 entries
};

/// All computations from `start` labelled exactly by `label`.
std::vector<Computation> computations_with_label(const Automaton& b, StateId start,
                                                 const std::vector<std::string>& label) {
    std::vector<std::optional<std::uint32_t>> letters(label.size());
    for (std::size_t i = 0; i < label.size(); ++i)
        letters[i] = b.find_symbol(label[i]);

    std::vector<Computation> out;
    Computation current;
    current.states.push_back(start);

    std::function<void(std::size_t, StateId)> go = [&](std::size_t i, StateId q) {
        if (i == label.size()) {
            out.push_back(current);
            return;
        }
        if (!letters[i])
            return; // letter absent from B's alphabet
        for (TransId t : b.out_transitions(q)) {
            const auto& tr = b.transition(t);
            if (tr.symbol != *letters[i])
                continue;
            current.transitions.push_back(t);
            current.states.push_back(tr.tgt);
            go(i + 1, tr.tgt);
            current.transitions.pop_back();
            current.states.pop_back();
        }
    };
    go(0, start);
    return out;
}

bool accepts_or_false(const Automaton& b, const std::vector<std::string>& word) {
    for (const auto& letter : word)
        if (!b.find_symbol(letter))
            return false;
    return b.accepts(word);
}

} // namespace

CodingReport verify_coding(const Automaton& a, const Regex& r,
                           const CodingWitness& witness, std::size_t max_word_length) {
    CodingReport report;
    Automaton b = glushkov(r);
    Linearisation lin = linearise(r);

    // lambda injective over nonempty words.
    {
        std::set<std::vector<std::string>> images;
        for (std::uint32_t s = 0; s < a.symbol_count(); ++s) {
            auto it = witness.lambda.find(a.symbol_name(s));
            if (it == witness.lambda.end() || it->second.empty()) {
                report.fail("lambda: missing or empty image for letter " + a.symbol_name(s));
                continue;
            }
            if (!images.insert(it->second).second)
                report.fail("lambda: not injective");
        }
    }

    // nu: injective embedding of A's states as B states.
    std::vector<StateId> nu_state(a.state_count());
    std::vector<char> in_nu_image(b.state_count(), 0);
    for (StateId q = 0; q < a.state_count(); ++q) {
        auto it = witness.nu.find(a.state_name(q));
        if (it == witness.nu.end() || it->second == 0 ||
            it->second > lin.position_count()) {
            report.fail("nu: no position for state " + a.state_name(q));
            return report;
        }
        auto bq = b.find_state(lin.position_atom(it->second));
        if (!bq) {
            report.fail("nu: position " + std::to_string(it->second) +
                        " is not a state of Gl(R)");
            return report;
        }
        nu_state[q] = *bq;
        if (in_nu_image[*bq])
            report.fail("nu: not injective");
        in_nu_image[*bq] = 1;
    }

    struct TaggedWalk {
        Computation comp;
        std::string tag;
    };
    std::vector<TaggedWalk> all_walks;

    // Initial walks: from B's initial states, labelled u_i; exactly one per
    // initial state of A, ending in nu(state).
    {
        std::vector<Computation> w_init;
        for (StateId i : b.initials()) {
            auto found = computations_with_label(b, i, witness.initial_word);
            w_init.insert(w_init.end(), found.begin(), found.end());
        }
        std::map<StateId, std::size_t> per_target; // nu(s) -> count
        for (const auto& comp : w_init) {
            StateId end = comp.states.back();
            if (!in_nu_image[end]) {
                report.fail("initial walk ends outside the state embedding");
                continue;
            }
            ++per_target[end];
            for (std::size_t i = 0; i + 1 < comp.states.size(); ++i)
                if (in_nu_image[comp.states[i]])
                    report.fail("initial walk passes through an embedded state");
            all_walks.push_back({comp, "initial"});
        }
        for (StateId s = 0; s < a.state_count(); ++s) {
            std::size_t count =
                per_target.count(nu_state[s]) ? per_target[nu_state[s]] : 0;
            bool expected = a.is_initial(s);
            if (expected && count != 1)
                report.fail("initial walks: state " + a.state_name(s) + " has " +
                            std::to_string(count) + " walks, expected 1");
            if (!expected && count != 0)
                report.fail("initial walks: non-initial state " + a.state_name(s) +
                            " has a walk");
        }
    }

    // Transition walks: from nu(q) labelled lambda(x); in bijection with
    // A's transitions, with matching endpoints and free internal states.
    {
        std::map<std::tuple<StateId, std::uint32_t, StateId>, std::size_t> per_transition;
        for (StateId q = 0; q < a.state_count(); ++q) {
            for (std::uint32_t x = 0; x < a.symbol_count(); ++x) {
                auto lambda_it = witness.lambda.find(a.symbol_name(x));
                if (lambda_it == witness.lambda.end())
                    continue; // already reported above
                auto found = computations_with_label(b, nu_state[q], lambda_it->second);
                for (const auto& comp : found) {
                    ++report.transition_walks;
                    StateId end = comp.states.back();
                    if (!in_nu_image[end]) {
                        report.fail("transition walk ends outside the state embedding");
                        continue;
                    }
                    StateId target = a.state_count();
                    for (StateId t = 0; t < a.state_count(); ++t)
                        if (nu_state[t] == end)
                            target = t;
                    ++per_transition[{q, x, target}];
                    for (std::size_t i = 1; i + 1 < comp.states.size(); ++i)
                        if (in_nu_image[comp.states[i]])
                            report.fail("transition walk passes through an embedded state");
                    all_walks.push_back({comp, "transition"});
                }
            }
        }
        std::set<std::tuple<StateId, std::uint32_t, StateId>> expected;
        for (const auto& tr : a.transitions())
            expected.insert({tr.src, tr.symbol, tr.tgt});
        for (const auto& key : expected) {
            std::size_t count = per_transition.count(key) ? per_transition[key] : 0;
            if (count != 1)
                report.fail("transition walks: a transition has " + std::to_string(count) +
                            " walks, expected 1");
        }
        for (const auto& [key, count] : per_transition)
            if (!expected.count(key))
                report.fail("transition walk encodes a non-transition");
    }

    // Final walks: from nu(q) labelled u_f and ending in a final state of B;
    // exactly one per final state of A, none elsewhere.
    {
        for (StateId q = 0; q < a.state_count(); ++q) {
            auto found = computations_with_label(b, nu_state[q], witness.final_word);
            std::size_t count = 0;
            for (const auto& comp : found) {
                if (!b.is_final(comp.states.back()))
                    continue;
                ++count;
                for (std::size_t i = 1; i < comp.states.size(); ++i)
                    if (in_nu_image[comp.states[i]])
                        report.fail("final walk passes through an embedded state");
                all_walks.push_back({comp, "final"});
            }
            bool expected = a.is_final(q);
            if (expected && count != 1)
                report.fail("final walks: state " + a.state_name(q) + " has " +
                            std::to_string(count) + " walks, expected 1");
            if (!expected && count != 0)
                report.fail("final walks: non-final state " + a.state_name(q) +
                            " has a walk");
        }
    }

    // Pairwise injectivity: distinct walks share no transition and no
    // internal state.
    {
        std::map<TransId, std::size_t> transition_owner;
        std::map<StateId, std::size_t> internal_owner;
        for (std::size_t w = 0; w < all_walks.size(); ++w) {
            for (TransId t : all_walks[w].comp.transitions) {
                auto [it, fresh] = transition_owner.emplace(t, w);
                if (!fresh && it->second != w)
                    report.fail("two walks share a transition (" + all_walks[w].tag +
                                "/" + all_walks[it->second].tag + ")");
            }
            const auto& states = all_walks[w].comp.states;
            for (std::size_t i = 1; i + 1 < states.size(); ++i) {
                auto [it, fresh] = internal_owner.emplace(states[i], w);
                if (!fresh && it->second != w)
                    report.fail("two walks share an internal state");
            }
        }
    }

    // Acceptance equivalence for all words up to the length bound.
    {
        std::vector<std::vector<std::string>> frontier{{}};
        for (std::size_t len = 0; len <= max_word_length; ++len) {
            std::vector<std::vector<std::string>> next;
            for (const auto& word : frontier) {
                bool in_a = a.accepts(word);
                bool in_b = accepts_or_false(b, encode_word(witness, word));
                if (in_a != in_b) {
                    std::string shown;
                    for (const auto& letter : word)
                        shown += letter + " ";
                    report.fail("acceptance differs on word '" + shown + "'");
                }
                if (len < max_word_length)
                    for (std::uint32_t s = 0; s < a.symbol_count(); ++s) {
                        auto extended = word;
                        extended.push_back(a.symbol_name(s));
                        next.push_back(std::move(extended));
                    }
            }
            frontier = std::move(next);
        }
    }

    return report;
}

Regex coding_expression_no_union(const Automaton& a) {
    if (a.state_count() == 0)
        throw PreconditionError("coding needs a nonempty automaton");
    if (!a.is_trim())
        throw PreconditionError("coding needs a trim automaton");

    std::size_t n = a.state_count();
    std::size_t dummy = 0;
    auto pow = [&dummy](const char* sym, std::size_t k) {
        return power(sym, k, dummy);
    };

    std::vector<Regex> parts;
    for (StateId i : a.initials())
        parts.push_back(pow("c", i + 1));

    std::vector<Regex> factors;
    for (StateId i = 0; i < n; ++i)
        factors.push_back(Regex::star(fold_concat({pow("c", n - i), pow("sigma", 1),
                                                   pow("a", i + 1)})));
    for (const auto& tr : a.transitions()) {
        std::vector<Regex> pieces;
        pieces.push_back(pow("a", n - tr.src));
        if (tr.symbol > 0)
            pieces.push_back(pow("b", tr.symbol));
        pieces.push_back(pow("c", tr.tgt + 1));
        factors.push_back(Regex::star(fold_concat(std::move(pieces))));
    }
    parts.push_back(Regex::star(fold_concat(std::move(factors))));

    for (StateId f : a.finals())
        parts.push_back(pow("a", n - f));

    return fold_concat(std::move(parts));
}

std::vector<std::string> no_union_encode_word(const Automaton& a,
                                              const std::vector<std::string>& word) {
    std::size_t n = a.state_count();
    std::vector<std::string> out(n + 1, "c");
    out.push_back("sigma");
    for (const auto& letter : word) {
        auto x = a.find_symbol(letter);
        if (!x)
            throw PreconditionError("unknown letter '" + letter + "'");
        out.insert(out.end(), n + 1, "a");
        out.insert(out.end(), *x, "b");
        out.insert(out.end(), n + 1, "c");
        out.push_back("sigma");
    }
    out.insert(out.end(), n + 1, "a");
    return out;
}

} // namespace rpq
