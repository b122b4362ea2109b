#include "rpq/automaton.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace rpq {

std::uint32_t Automaton::intern_symbol(const std::string& name) {
    auto it = symbol_index_.find(name);
    if (it != symbol_index_.end())
        return it->second;
    std::uint32_t id = static_cast<std::uint32_t>(symbol_names_.size());
    symbol_names_.push_back(name);
    symbol_index_.emplace(name, id);
    return id;
}

StateId Automaton::add_state(const std::string& name) {
    if (state_index_.count(name))
        throw PreconditionError("duplicate state '" + name + "'");
    StateId id = static_cast<StateId>(state_names_.size());
    state_names_.push_back(name);
    state_index_.emplace(name, id);
    out_.emplace_back();
    in_.emplace_back();
    return id;
}

StateId Automaton::ensure_state(const std::string& name) {
    auto it = state_index_.find(name);
    if (it != state_index_.end())
        return it->second;
    return add_state(name);
}

TransId Automaton::add_transition(StateId src, std::uint32_t symbol, StateId tgt) {
    if (src >= state_count() || tgt >= state_count())
        throw PreconditionError("transition references an unknown state");
    if (symbol >= symbol_count())
        throw PreconditionError("transition references an unknown symbol");
    for (TransId t : out_[src])
        if (transitions_[t].symbol == symbol && transitions_[t].tgt == tgt)
            throw PreconditionError("duplicate transition");
    TransId t = static_cast<TransId>(transitions_.size());
    transitions_.push_back({src, symbol, tgt});
    out_[src].push_back(t);
    in_[tgt].push_back(t);
    return t;
}

void Automaton::mark_initial(StateId q) {
    if (q >= state_count())
        throw PreconditionError("unknown state id");
    auto it = std::lower_bound(initials_.begin(), initials_.end(), q);
    if (it == initials_.end() || *it != q)
        initials_.insert(it, q);
}

void Automaton::mark_final(StateId q) {
    if (q >= state_count())
        throw PreconditionError("unknown state id");
    auto it = std::lower_bound(finals_.begin(), finals_.end(), q);
    if (it == finals_.end() || *it != q)
        finals_.insert(it, q);
}

std::optional<StateId> Automaton::find_state(std::string_view name) const {
    auto it = state_index_.find(std::string(name));
    if (it == state_index_.end())
        return std::nullopt;
    return it->second;
}

std::optional<std::uint32_t> Automaton::find_symbol(std::string_view name) const {
    auto it = symbol_index_.find(std::string(name));
    if (it == symbol_index_.end())
        return std::nullopt;
    return it->second;
}

bool Automaton::is_initial(StateId q) const {
    return std::binary_search(initials_.begin(), initials_.end(), q);
}

bool Automaton::is_final(StateId q) const {
    return std::binary_search(finals_.begin(), finals_.end(), q);
}

bool Automaton::accepts(const std::vector<std::string>& word) const {
    std::vector<std::uint32_t> ids;
    ids.reserve(word.size());
    for (const auto& letter : word) {
        auto s = find_symbol(letter);
        if (!s)
            throw PreconditionError("unknown letter '" + letter + "'");
        ids.push_back(*s);
    }
    return accepts_ids(ids);
}

bool Automaton::accepts_ids(const std::vector<std::uint32_t>& word) const {
    std::vector<bool> current(state_count(), false);
    for (StateId q : initials_)
        current[q] = true;
    for (std::uint32_t letter : word) {
        if (letter >= symbol_count())
            throw PreconditionError("unknown letter id");
        std::vector<bool> next(state_count(), false);
        bool any = false;
        for (StateId q = 0; q < state_count(); ++q) {
            if (!current[q])
                continue;
            for (TransId t : out_[q]) {
                if (transitions_[t].symbol == letter) {
                    next[transitions_[t].tgt] = true;
                    any = true;
                }
            }
        }
        if (!any)
            return false;
        current = std::move(next);
    }
    for (StateId q : finals_)
        if (current[q])
            return true;
    return false;
}

namespace {

std::vector<bool> reachable_forward(const Automaton& a) {
    std::vector<bool> seen(a.state_count(), false);
    std::deque<StateId> queue;
    for (StateId q : a.initials()) {
        seen[q] = true;
        queue.push_back(q);
    }
    while (!queue.empty()) {
        StateId q = queue.front();
        queue.pop_front();
        for (TransId t : a.out_transitions(q)) {
            StateId to = a.transition(t).tgt;
            if (!seen[to]) {
                seen[to] = true;
                queue.push_back(to);
            }
        }
    }
    return seen;
}

std::vector<bool> reachable_backward(const Automaton& a) {
    std::vector<bool> seen(a.state_count(), false);
    std::deque<StateId> queue;
    for (StateId q : a.finals()) {
        seen[q] = true;
        queue.push_back(q);
    }
    while (!queue.empty()) {
        StateId q = queue.front();
        queue.pop_front();
        for (TransId t : a.in_transitions(q)) {
            StateId from = a.transition(t).src;
            if (!seen[from]) {
                seen[from] = true;
                queue.push_back(from);
            }
        }
    }
    return seen;
}

} // namespace

bool Automaton::is_trim() const {
    auto fwd = reachable_forward(*this);
    auto bwd = reachable_backward(*this);
    for (StateId q = 0; q < state_count(); ++q)
        if (!fwd[q] || !bwd[q])
            return false;
    return true;
}

bool Automaton::operator==(const Automaton& other) const {
    if (symbol_names_ != other.symbol_names_ || state_names_ != other.state_names_)
        return false;
    if (initials_ != other.initials_ || finals_ != other.finals_)
        return false;
    auto key = [](const Transition& t) { return std::tuple(t.src, t.symbol, t.tgt); };
    auto a = transitions_;
    auto b = other.transitions_;
    std::sort(a.begin(), a.end(), [&](auto& x, auto& y) { return key(x) < key(y); });
    std::sort(b.begin(), b.end(), [&](auto& x, auto& y) { return key(x) < key(y); });
    return a == b;
}

Automaton trim(const Automaton& a) {
    auto fwd = reachable_forward(a);
    auto bwd = reachable_backward(a);
    Automaton result;
    for (std::uint32_t s = 0; s < a.symbol_count(); ++s)
        result.intern_symbol(a.symbol_name(s));
    std::vector<StateId> remap(a.state_count(), 0);
    std::vector<bool> keep(a.state_count(), false);
    for (StateId q = 0; q < a.state_count(); ++q) {
        if (fwd[q] && bwd[q]) {
            keep[q] = true;
            remap[q] = result.add_state(a.state_name(q));
        }
    }
    for (const auto& t : a.transitions())
        if (keep[t.src] && keep[t.tgt])
            result.add_transition(remap[t.src], t.symbol, remap[t.tgt]);
    for (StateId q : a.initials())
        if (keep[q])
            result.mark_initial(remap[q]);
    for (StateId q : a.finals())
        if (keep[q])
            result.mark_final(remap[q]);
    return result;
}

namespace {

std::vector<std::string> split_ws(std::string_view line) {
    std::vector<std::string> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
            ++i;
        std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])))
            ++i;
        if (i > start)
            tokens.emplace_back(line.substr(start, i - start));
    }
    return tokens;
}

} // namespace

Automaton parse_automaton(std::string_view text) {
    Automaton a;
    bool explicit_states = false;
    bool alphabet_declared = false;

    struct Pending {
        std::size_t line;
        int kind; // 0 initial, 1 final, 2 trans
        std::string src, label, tgt;
    };
    std::vector<Pending> pending;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos)
            eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        auto tokens = split_ws(line);
        if (!tokens.empty()) {
            const std::string& kind = tokens[0];
            if (kind == "alphabet") {
                if (tokens.size() < 2)
                    throw ParseError(line_no, "alphabet line needs at least one symbol");
                alphabet_declared = true;
                for (std::size_t i = 1; i < tokens.size(); ++i)
                    a.intern_symbol(tokens[i]);
            } else if (kind == "state") {
                if (tokens.size() != 2)
                    throw ParseError(line_no, "expected: state <name>");
                explicit_states = true;
                if (a.find_state(tokens[1]))
                    throw ParseError(line_no, "duplicate state '" + tokens[1] + "'");
                a.add_state(tokens[1]);
            } else if (kind == "initial" || kind == "final") {
                if (tokens.size() != 2)
                    throw ParseError(line_no, "expected: " + kind + " <state>");
                pending.push_back({line_no, kind == "initial" ? 0 : 1, tokens[1], "", ""});
            } else if (kind == "trans") {
                if (tokens.size() != 4)
                    throw ParseError(line_no, "expected: trans <src> <label> <tgt>");
                pending.push_back({line_no, 2, tokens[1], tokens[2], tokens[3]});
            } else {
                throw ParseError(line_no, "unknown record '" + kind + "'");
            }
        }
        if (eol == text.size())
            break;
    }

    auto resolve = [&](const Pending& p, const std::string& name) -> StateId {
        if (explicit_states) {
            auto q = a.find_state(name);
            if (!q)
                throw ParseError(p.line, "undeclared state '" + name + "'");
            return *q;
        }
        return a.ensure_state(name);
    };

    for (const auto& p : pending) {
        if (p.kind == 0) {
            a.mark_initial(resolve(p, p.src));
        } else if (p.kind == 1) {
            a.mark_final(resolve(p, p.src));
        } else {
            StateId src = resolve(p, p.src);
            StateId tgt = resolve(p, p.tgt);
            auto sym = a.find_symbol(p.label);
            if (!sym) {
                if (alphabet_declared)
                    throw ParseError(p.line, "label '" + p.label + "' is not in the declared alphabet");
                sym = a.intern_symbol(p.label);
            }
            a.add_transition(src, *sym, tgt);
        }
    }
    return a;
}

std::string serialize_automaton(const Automaton& a) {
    std::ostringstream out;
    if (a.symbol_count() > 0) {
        out << "alphabet";
        for (std::uint32_t s = 0; s < a.symbol_count(); ++s)
            out << ' ' << a.symbol_name(s);
        out << '\n';
    }
    for (StateId q = 0; q < a.state_count(); ++q)
        out << "state " << a.state_name(q) << '\n';
    for (StateId q : a.initials())
        out << "initial " << a.state_name(q) << '\n';
    for (StateId q : a.finals())
        out << "final " << a.state_name(q) << '\n';
    for (const auto& t : a.transitions())
        out << "trans " << a.state_name(t.src) << ' ' << a.symbol_name(t.symbol) << ' '
            << a.state_name(t.tgt) << '\n';
    return out.str();
}

} // namespace rpq
