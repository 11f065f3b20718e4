#ifndef UZMORPH_FSM_HPP
#define UZMORPH_FSM_HPP

#include <cstdint>
#include <functional>
#include <limits>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace uzmorph::fsm {

using State = std::uint32_t;
using Label = std::uint32_t;

/// Reserved label for empty transitions.
inline constexpr Label kEpsilon = std::numeric_limits<Label>::max();

struct Edge {
    State from = 0;
    Label label = 0;
    State to = 0;
    auto operator<=>(const Edge&) const = default;
};

/// Labeled-edge automaton; epsilon edges permitted.
struct Nfa {
    State num_states = 0;
    State initial = 0;
    std::set<State> finals;
    std::vector<Edge> edges;

    State add_state() { return num_states++; }
    void add_edge(State from, Label label, State to) { edges.push_back({from, label, to}); }
    bool well_formed() const;
};

/// Deterministic, epsilon-free automaton. Transitions are kept sorted by
/// (from, label); at most one edge per pair.
struct Dfa {
    State num_states = 0;
    State initial = 0;
    std::set<State> finals;
    std::vector<Edge> edges;  // sorted, unique (from, label)

    /// Target of (from, label), or nullptr when absent.
    const State* next(State from, Label label) const;
    bool is_final(State s) const { return finals.count(s) != 0; }
};

/// Reverses the language: every edge flips, initial and finals swap roles.
/// With more than one final a fresh initial state is added with epsilon
/// edges to the old finals.
Nfa reverse(const Nfa& machine);

/// Subset construction with epsilon closure. State ids are dense integers in
/// subset discovery order; unreachable subsets are never materialized.
Dfa determinize(const Nfa& machine);

bool accepts(const Dfa& machine, std::span<const Label> labels);
bool accepts(const Nfa& machine, std::span<const Label> labels);

using Language = std::set<std::vector<Label>>;

/// Exactly the accepted label sequences of length <= max_len.
Language enumerate_language(const Nfa& machine, std::size_t max_len);
Language enumerate_language(const Dfa& machine, std::size_t max_len);

/// Element-wise reversal of every sequence in a language.
Language reverse_language(const Language& lang);

/// Debug edge-list dump: header comments (# states / # initial / # finals),
/// then one sorted "from <TAB> label <TAB> to" line per edge. Epsilon prints
/// as "~". The format is stable; label_name supplies label spelling.
std::string export_edges(const Nfa& machine,
                         const std::function<std::string(Label)>& label_name);
std::string export_edges(const Dfa& machine,
                         const std::function<std::string(Label)>& label_name);

}  // namespace uzmorph::fsm

#endif
