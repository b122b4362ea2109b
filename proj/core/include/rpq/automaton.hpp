#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "rpq/errors.hpp"

namespace rpq {

using StateId = std::uint32_t;
using TransId = std::uint32_t;

/// Nondeterministic finite automaton over a symbol alphabet. There are no
/// epsilon transitions in the machine itself; word acceptance extends the
/// transition relation reflexively and transitively.
///
/// State ids are strings so that Glushkov position names and product
/// annotations stay legible in dumps and tests.
class Automaton {
public:
    struct Transition {
        StateId src;
        std::uint32_t symbol;
        StateId tgt;

        bool operator==(const Transition&) const = default;
    };

    std::uint32_t intern_symbol(const std::string& name);
    StateId add_state(const std::string& name);
    StateId ensure_state(const std::string& name);
    TransId add_transition(StateId src, std::uint32_t symbol, StateId tgt);
    void mark_initial(StateId q);
    void mark_final(StateId q);

    std::size_t state_count() const { return state_names_.size(); }
    std::size_t symbol_count() const { return symbol_names_.size(); }
    std::size_t transition_count() const { return transitions_.size(); }

    const std::string& state_name(StateId q) const { return state_names_[q]; }
    const std::string& symbol_name(std::uint32_t s) const { return symbol_names_[s]; }
    std::optional<StateId> find_state(std::string_view name) const;
    std::optional<std::uint32_t> find_symbol(std::string_view name) const;

    const Transition& transition(TransId t) const { return transitions_[t]; }
    const std::vector<Transition>& transitions() const { return transitions_; }

    /// Sorted state-id sets.
    const std::vector<StateId>& initials() const { return initials_; }
    const std::vector<StateId>& finals() const { return finals_; }
    bool is_initial(StateId q) const;
    bool is_final(StateId q) const;

    /// Outgoing/incoming transition indices in declaration order.
    const std::vector<TransId>& out_transitions(StateId q) const { return out_[q]; }
    const std::vector<TransId>& in_transitions(StateId q) const { return in_[q]; }

    /// Word acceptance by on-the-fly subset construction. Letters must name
    /// alphabet symbols.
    bool accepts(const std::vector<std::string>& word) const;
    bool accepts_ids(const std::vector<std::uint32_t>& word) const;

    /// Every state lies on some initial-to-final path.
    bool is_trim() const;

    bool operator==(const Automaton& other) const;

private:
    std::vector<std::string> symbol_names_;
    std::vector<std::string> state_names_;
    std::unordered_map<std::string, std::uint32_t> symbol_index_;
    std::unordered_map<std::string, StateId> state_index_;
    std::vector<Transition> transitions_;
    std::vector<StateId> initials_;
    std::vector<StateId> finals_;
    std::vector<std::vector<TransId>> out_;
    std::vector<std::vector<TransId>> in_;
};

/// Keeps exactly the states reachable from an initial state and co-reachable
/// to a final state; the language is unchanged. State declaration order is
/// preserved, transitions are renumbered accordingly.
Automaton trim(const Automaton& a);

/// Line format mirroring the graph files:
///   alphabet <sym> [<sym>...]   (optional)
///   state <name>
///   initial <name>
///   final <name>
///   trans <src> <label> <tgt>
/// With explicit state lines, initial/final/trans may only use declared
/// states; otherwise states are declared implicitly.
Automaton parse_automaton(std::string_view text);
std::string serialize_automaton(const Automaton& a);

} // namespace rpq
