#include "rpq/regex.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace rpq {

Regex Regex::epsilon() {
    return Regex(std::make_shared<Node>(Node{Kind::Epsilon, "", {}}));
}

Regex Regex::atom(std::string symbol) {
    return Regex(std::make_shared<Node>(Node{Kind::Atom, std::move(symbol), {}}));
}

Regex Regex::star(Regex inner) {
    return Regex(std::make_shared<Node>(Node{Kind::Star, "", {std::move(inner)}}));
}

Regex Regex::concat(Regex left, Regex right) {
    return Regex(std::make_shared<Node>(
        Node{Kind::Concat, "", {std::move(left), std::move(right)}}));
}

Regex Regex::alternation(Regex left, Regex right) {
    return Regex(std::make_shared<Node>(
        Node{Kind::Union, "", {std::move(left), std::move(right)}}));
}

std::size_t Regex::atom_count() const {
    switch (kind()) {
    case Kind::Epsilon: return 0;
    case Kind::Atom: return 1;
    case Kind::Star: return child().atom_count();
    case Kind::Concat:
    case Kind::Union: return left().atom_count() + right().atom_count();
    }
    return 0;
}

bool Regex::operator==(const Regex& other) const {
    if (node_ == other.node_)
        return true;
    if (kind() != other.kind())
        return false;
    switch (kind()) {
    case Kind::Epsilon: return true;
    case Kind::Atom: return symbol() == other.symbol();
    case Kind::Star: return child() == other.child();
    case Kind::Concat:
    case Kind::Union:
        return left() == other.left() && right() == other.right();
    }
    return false;
}

namespace {

bool is_bare_atom(const std::string& symbol) {
    if (symbol.empty() || symbol == "eps")
        return false;
    if (!std::isalpha(static_cast<unsigned char>(symbol[0])))
        return false;
    for (char c : symbol)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_')
            return false;
    return true;
}

class RegexParser {
public:
    explicit RegexParser(std::string_view text) : text_(text) {}

    Regex parse() {
        Regex r = parse_union();
        skip_ws();
        if (pos_ != text_.size())
            fail("unexpected trailing input");
        return r;
    }

private:
    [[noreturn]] void fail(const std::string& message) {
        throw ParseError(1, "query syntax error at position " + std::to_string(pos_ + 1) +
                                ": " + message);
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    bool at_base_start() {
        skip_ws();
        if (pos_ >= text_.size())
            return false;
        char c = text_[pos_];
        return c == '(' || c == '"' || c == '.' ||
               std::isalpha(static_cast<unsigned char>(c));
    }

    Regex parse_union() {
        Regex r = parse_concat();
        while (true) {
            skip_ws();
            if (pos_ < text_.size() && text_[pos_] == '+') {
                ++pos_;
                r = Regex::alternation(std::move(r), parse_concat());
            } else {
                break;
            }
        }
        return r;
    }

    Regex parse_concat() {
        Regex r = parse_starred();
        while (at_base_start()) {
            if (text_[pos_] == '.')
                ++pos_;
            r = Regex::concat(std::move(r), parse_starred());
        }
        return r;
    }

    Regex parse_starred() {
        Regex r = parse_base();
        while (true) {
            skip_ws();
            if (pos_ < text_.size() && text_[pos_] == '*') {
                ++pos_;
                r = Regex::star(std::move(r));
            } else {
                break;
            }
        }
        return r;
    }

    Regex parse_base() {
        skip_ws();
        if (pos_ >= text_.size())
            fail("expected an atom, 'eps' or '('");
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Regex r = parse_union();
            skip_ws();
            if (pos_ >= text_.size() || text_[pos_] != ')')
                fail("missing ')'");
            ++pos_;
            return r;
        }
        if (c == '"')
            return Regex::atom(parse_quoted());
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            ++pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                ++pos_;
            std::string name(text_.substr(start, pos_ - start));
            if (name == "eps")
                return Regex::epsilon();
            return Regex::atom(std::move(name));
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    std::string parse_quoted() {
        ++pos_; // opening quote
        std::string value;
        while (pos_ < text_.size() && text_[pos_] != '"') {
            char c = text_[pos_];
            if (c == '\\') {
                ++pos_;
                if (pos_ >= text_.size())
                    fail("dangling escape in quoted atom");
                c = text_[pos_];
            }
            value.push_back(c);
            ++pos_;
        }
        if (pos_ >= text_.size())
            fail("unterminated quoted atom");
        ++pos_; // closing quote
        if (value.empty())
            fail("empty quoted atom");
        return value;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

} // namespace

Regex parse_regex(std::string_view text) {
    return RegexParser(text).parse();
}

std::string serialize_regex(const Regex& r) {
    switch (r.kind()) {
    case Regex::Kind::Epsilon:
        return "eps";
    case Regex::Kind::Atom: {
        const std::string& s = r.symbol();
        if (is_bare_atom(s))
            return s;
        std::string quoted = "\"";
        for (char c : s) {
            if (c == '"' || c == '\\')
                quoted.push_back('\\');
            quoted.push_back(c);
        }
        quoted.push_back('"');
        return quoted;
    }
    case Regex::Kind::Star: {
        const Regex& inner = r.child();
        std::string body = serialize_regex(inner);
        if (inner.kind() == Regex::Kind::Atom || inner.kind() == Regex::Kind::Epsilon ||
            inner.kind() == Regex::Kind::Star)
            return body + "*";
        return "(" + body + ")*";
    }
    case Regex::Kind::Concat:
        return "(" + serialize_regex(r.left()) + " " + serialize_regex(r.right()) + ")";
    case Regex::Kind::Union:
        return "(" + serialize_regex(r.left()) + " + " + serialize_regex(r.right()) + ")";
    }
    return {};
}

namespace {

void collect_positions(const Regex& r, std::vector<std::string>& base, Regex* out) {
    switch (r.kind()) {
    case Regex::Kind::Epsilon:
        *out = Regex::epsilon();
        return;
    case Regex::Kind::Atom: {
        base.push_back(r.symbol());
        *out = Regex::atom(r.symbol() + "@" + std::to_string(base.size()));
        return;
    }
    case Regex::Kind::Star: {
        Regex inner = Regex::epsilon();
        collect_positions(r.child(), base, &inner);
        *out = Regex::star(std::move(inner));
        return;
    }
    case Regex::Kind::Concat:
    case Regex::Kind::Union: {
        Regex l = Regex::epsilon();
        Regex rr = Regex::epsilon();
        collect_positions(r.left(), base, &l);
        collect_positions(r.right(), base, &rr);
        *out = r.kind() == Regex::Kind::Concat ? Regex::concat(std::move(l), std::move(rr))
                                               : Regex::alternation(std::move(l), std::move(rr));
        return;
    }
    }
}

/// nullable/First/Last/Follow over positions, computed in one pass.
/// Positions are 1-based; sets are sorted vectors.
struct PositionSets {
    bool nullable;
    std::vector<std::size_t> first;
    std::vector<std::size_t> last;
};

std::vector<std::size_t> merged(const std::vector<std::size_t>& a,
                                const std::vector<std::size_t>& b) {
    std::vector<std::size_t> out;
    out.reserve(a.size() + b.size());
    std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

PositionSets position_sets(const Regex& r, std::size_t& next_position,
                           std::vector<std::set<std::size_t>>& follow) {
    switch (r.kind()) {
    case Regex::Kind::Epsilon:
        return {true, {}, {}};
    case Regex::Kind::Atom: {
        std::size_t p = ++next_position;
        return {false, {p}, {p}};
    }
    case Regex::Kind::Star: {
        PositionSets inner = position_sets(r.child(), next_position, follow);
        for (std::size_t p : inner.last)
            follow[p].insert(inner.first.begin(), inner.first.end());
        return {true, inner.first, inner.last};
    }
    case Regex::Kind::Concat: {
        PositionSets l = position_sets(r.left(), next_position, follow);
        PositionSets rr = position_sets(r.right(), next_position, follow);
        for (std::size_t p : l.last)
            follow[p].insert(rr.first.begin(), rr.first.end());
        PositionSets out;
        out.nullable = l.nullable && rr.nullable;
        out.first = l.nullable ? merged(l.first, rr.first) : l.first;
        out.last = rr.nullable ? merged(l.last, rr.last) : rr.last;
        return out;
    }
    case Regex::Kind::Union: {
        PositionSets l = position_sets(r.left(), next_position, follow);
        PositionSets rr = position_sets(r.right(), next_position, follow);
        return {l.nullable || rr.nullable, merged(l.first, rr.first),
                merged(l.last, rr.last)};
    }
    }
    return {true, {}, {}};
}

} // namespace

Linearisation linearise(const Regex& r) {
    Linearisation lin{{}, Regex::epsilon()};
    collect_positions(r, lin.base, &lin.linearised);
    return lin;
}

Automaton glushkov(const Regex& r) {
    Linearisation lin = linearise(r);
    std::size_t n = lin.position_count();
    std::vector<std::set<std::size_t>> follow(n + 1);
    std::size_t counter = 0;
    PositionSets sets = position_sets(r, counter, follow);

    Automaton a;
    std::vector<std::uint32_t> base_symbol(n + 1, 0);
    for (std::size_t p = 1; p <= n; ++p)
        base_symbol[p] = a.intern_symbol(lin.base[p - 1]);

    StateId init = a.add_state("init");
    std::vector<StateId> state_of(n + 1, 0);
    for (std::size_t p = 1; p <= n; ++p)
        state_of[p] = a.add_state(lin.position_atom(p));

    a.mark_initial(init);
    for (std::size_t p : sets.first)
        a.add_transition(init, base_symbol[p], state_of[p]);
    for (std::size_t p = 1; p <= n; ++p)
        for (std::size_t q : follow[p])
            a.add_transition(state_of[p], base_symbol[q], state_of[q]);
    for (std::size_t p : sets.last)
        a.mark_final(state_of[p]);
    if (sets.nullable)
        a.mark_final(init);

    return trim(a);
}

namespace {

/// Removes nested stars and eps inside a star body. Returns epsilon when the
/// whole body collapses.
Regex strip_under_star(const Regex& r) {
    switch (r.kind()) {
    case Regex::Kind::Epsilon:
        return Regex::epsilon();
    case Regex::Kind::Atom:
        return r;
    case Regex::Kind::Star:
        return strip_under_star(r.child());
    case Regex::Kind::Union: {
        Regex l = strip_under_star(r.left());
        Regex rr = strip_under_star(r.right());
        bool l_eps = l.kind() == Regex::Kind::Epsilon;
        bool r_eps = rr.kind() == Regex::Kind::Epsilon;
        if (l_eps && r_eps)
            return Regex::epsilon();
        if (l_eps)
            return rr;
        if (r_eps)
            return l;
        return Regex::alternation(std::move(l), std::move(rr));
    }
    case Regex::Kind::Concat:
        throw PreconditionError(
            "star-normal simplification requires no concatenation under star");
    }
    return r;
}

} // namespace

Regex star_normal_simplify(const Regex& r) {
    switch (r.kind()) {
    case Regex::Kind::Epsilon:
    case Regex::Kind::Atom:
        return r;
    case Regex::Kind::Star: {
        Regex body = strip_under_star(r.child());
        if (body.kind() == Regex::Kind::Epsilon)
            return Regex::epsilon();
        return Regex::star(std::move(body));
    }
    case Regex::Kind::Concat:
        return Regex::concat(star_normal_simplify(r.left()),
                             star_normal_simplify(r.right()));
    case Regex::Kind::Union:
        return Regex::alternation(star_normal_simplify(r.left()),
                                  star_normal_simplify(r.right()));
    }
    return r;
}

namespace {

/// (star height, has union, has concat) of a subtree.
struct ClassInfo {
    int height;
    bool has_union;
    bool has_concat;
};

ClassInfo classify(const Regex& r, SyntaxClass& out) {
    switch (r.kind()) {
    case Regex::Kind::Epsilon:
    case Regex::Kind::Atom:
        return {0, false, false};
    case Regex::Kind::Star: {
        ClassInfo inner = classify(r.child(), out);
        if (inner.has_union)
            out.union_under_star = true;
        if (inner.has_concat)
            out.concat_under_star = true;
        return {inner.height + 1, inner.has_union, inner.has_concat};
    }
    case Regex::Kind::Concat: {
        ClassInfo l = classify(r.left(), out);
        ClassInfo rr = classify(r.right(), out);
        return {std::max(l.height, rr.height), l.has_union || rr.has_union, true};
    }
    case Regex::Kind::Union: {
        ClassInfo l = classify(r.left(), out);
        ClassInfo rr = classify(r.right(), out);
        return {std::max(l.height, rr.height), true, l.has_concat || rr.has_concat};
    }
    }
    return {0, false, false};
}

} // namespace

SyntaxClass syntax_class(const Regex& r) {
    SyntaxClass out;
    out.star_height = classify(r, out).height;
    return out;
}

} // namespace rpq
