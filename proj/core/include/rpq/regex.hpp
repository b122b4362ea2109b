#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "rpq/automaton.hpp"
#include "rpq/errors.hpp"

namespace rpq {

/// Immutable regular-expression AST over symbol atoms:
///   R ::= eps | a | R* | R R | R + R
/// Nodes are shared; copies are cheap.
class Regex {
public:
    enum class Kind { Epsilon, Atom, Star, Concat, Union };

    static Regex epsilon();
    static Regex atom(std::string symbol);
    static Regex star(Regex inner);
    static Regex concat(Regex left, Regex right);
    static Regex alternation(Regex left, Regex right);

    Kind kind() const { return node_->kind; }
    const std::string& symbol() const { return node_->symbol; }
    const Regex& child() const { return node_->children[0]; }
    const Regex& left() const { return node_->children[0]; }
    const Regex& right() const { return node_->children[1]; }

    /// Number of atom occurrences.
    std::size_t atom_count() const;

    /// Structural equality.
    bool operator==(const Regex& other) const;

private:
    struct Node {
        Kind kind;
        std::string symbol;
        std::vector<Regex> children;
    };

    explicit Regex(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

    std::shared_ptr<const Node> node_;
};

/// Query grammar: atoms are identifiers `[A-Za-z][A-Za-z0-9_]*` or quoted
/// strings, `eps` is the empty word, `*` is postfix, concatenation is
/// juxtaposition or `.`, union is `+`. Precedence: star > concat > union;
/// binary operators associate to the left. Syntax errors report the
/// character position.
Regex parse_regex(std::string_view text);

/// Fully parenthesized form; parse_regex round-trips it.
std::string serialize_regex(const Regex& r);

/// Position-annotated copy of an expression. Atoms are numbered 1..n left to
/// right; position i of base symbol `a` is rendered as atom `a@i` in the
/// linearised expression.
struct Linearisation {
    /// base[i] is the original symbol of position i+1.
    std::vector<std::string> base;
    /// Copy of the source expression over position atoms.
    Regex linearised;

    std::size_t position_count() const { return base.size(); }
    /// Atom name of a 1-based position in the linearised expression.
    std::string position_atom(std::size_t pos) const {
        return base[pos - 1] + "@" + std::to_string(pos);
    }
};

Linearisation linearise(const Regex& r);

/// Position automaton of the expression: one state per atom occurrence plus
/// a single initial state `init`, computed from the nullable/First/Last/
/// Follow sets and trimmed. State q != init is named like the position atom
/// it stems from and all its incoming transitions carry its base symbol.
Automaton glushkov(const Regex& r);

/// Deletes stars nested inside another star and eps occurrences inside a
/// star. Requires an expression with no concatenation under star; the
/// Glushkov automaton is preserved exactly.
Regex star_normal_simplify(const Regex& r);

struct SyntaxClass {
    int star_height = 0;
    bool union_under_star = false;
    bool concat_under_star = false;
};

SyntaxClass syntax_class(const Regex& r);

} // namespace rpq
