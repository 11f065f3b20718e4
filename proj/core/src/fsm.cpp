#include "uzmorph/fsm.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <sstream>

namespace uzmorph::fsm {

namespace {

std::set<State> epsilon_closure(const Nfa& machine, std::set<State> states) {
    std::vector<State> work(states.begin(), states.end());
    while (!work.empty()) {
        State s = work.back();
        work.pop_back();
        for (const auto& e : machine.edges) {
            if (e.from == s && e.label == kEpsilon && states.insert(e.to).second)
                work.push_back(e.to);
        }
    }
    return states;
}

std::set<State> move_on(const Nfa& machine, const std::set<State>& states, Label label) {
    std::set<State> out;
    for (const auto& e : machine.edges)
        if (e.label == label && states.count(e.from)) out.insert(e.to);
    return out;
}

bool contains_final(const Nfa& machine, const std::set<State>& states) {
    return std::any_of(states.begin(), states.end(),
                       [&](State s) { return machine.finals.count(s) != 0; });
}

void enumerate_rec(const Nfa& machine, const std::set<State>& states, std::size_t max_len,
                   std::vector<Label>& acc, Language& out) {
    if (contains_final(machine, states)) out.insert(acc);
    if (acc.size() == max_len) return;
    std::set<Label> labels;
    for (const auto& e : machine.edges)
        if (e.label != kEpsilon && states.count(e.from)) labels.insert(e.label);
    for (Label l : labels) {
        auto next = epsilon_closure(machine, move_on(machine, states, l));
        if (next.empty()) continue;
        acc.push_back(l);
        enumerate_rec(machine, next, max_len, acc, out);
        acc.pop_back();
    }
}

std::string format_edges(State num_states, State initial, const std::set<State>& finals,
                         std::vector<Edge> edges,
                         const std::function<std::string(Label)>& label_name) {
    std::sort(edges.begin(), edges.end());
    std::ostringstream os;
    os << "# states " << num_states << "\n# initial " << initial << "\n# finals";
    for (State f : finals) os << ' ' << f;
    os << '\n';
    for (const auto& e : edges) {
        os << e.from << '\t' << (e.label == kEpsilon ? std::string("~") : label_name(e.label))
           << '\t' << e.to << '\n';
    }
    return os.str();
}

}  // namespace

bool Nfa::well_formed() const {
    if (initial >= num_states) return false;
    for (State f : finals)
        if (f >= num_states) return false;
    for (const auto& e : edges)
        if (e.from >= num_states || e.to >= num_states) return false;
    return true;
}

const State* Dfa::next(State from, Label label) const {
    auto it = std::lower_bound(edges.begin(), edges.end(), Edge{from, label, 0},
                               [](const Edge& a, const Edge& b) {
                                   return a.from != b.from ? a.from < b.from : a.label < b.label;
                               });
    if (it != edges.end() && it->from == from && it->label == label) return &it->to;
    return nullptr;
}

Nfa reverse(const Nfa& machine) {
    Nfa out;
    out.num_states = machine.num_states;
    for (const auto& e : machine.edges) out.add_edge(e.to, e.label, e.from);
    out.finals.insert(machine.initial);
    if (machine.finals.size() == 1) {
        out.initial = *machine.finals.begin();
    } else {
        out.initial = out.add_state();
        for (State f : machine.finals) out.add_edge(out.initial, kEpsilon, f);
    }
    return out;
}

Dfa determinize(const Nfa& machine) {
    Dfa out;
    std::map<std::set<State>, State> ids;
    std::queue<std::set<State>> work;

    auto intern = [&](const std::set<State>& subset) {
        auto [it, inserted] = ids.emplace(subset, static_cast<State>(ids.size()));
        if (inserted) {
            out.num_states++;
            if (contains_final(machine, subset)) out.finals.insert(it->second);
            work.push(subset);
        }
        return it->second;
    };

    out.initial = intern(epsilon_closure(machine, {machine.initial}));
    while (!work.empty()) {
        auto subset = work.front();
        work.pop();
        State from = ids.at(subset);
        std::set<Label> labels;
        for (const auto& e : machine.edges)
            if (e.label != kEpsilon && subset.count(e.from)) labels.insert(e.label);
        for (Label l : labels) {
            auto next = epsilon_closure(machine, move_on(machine, subset, l));
            out.edges.push_back({from, l, intern(next)});
        }
    }
    std::sort(out.edges.begin(), out.edges.end());
    return out;
}

bool accepts(const Dfa& machine, std::span<const Label> labels) {
    State s = machine.initial;
    for (Label l : labels) {
        const State* next = machine.next(s, l);
        if (!next) return false;
        s = *next;
    }
    return machine.is_final(s);
}

bool accepts(const Nfa& machine, std::span<const Label> labels) {
    auto states = epsilon_closure(machine, {machine.initial});
    for (Label l : labels) {
        states = epsilon_closure(machine, move_on(machine, states, l));
        if (states.empty()) return false;
    }
    return contains_final(machine, states);
}

Language enumerate_language(const Nfa& machine, std::size_t max_len) {
    Language out;
    std::vector<Label> acc;
    enumerate_rec(machine, epsilon_closure(machine, {machine.initial}), max_len, acc, out);
    return out;
}

Language enumerate_language(const Dfa& machine, std::size_t max_len) {
    Nfa as_nfa;
    as_nfa.num_states = machine.num_states;
    as_nfa.initial = machine.initial;
    as_nfa.finals = machine.finals;
    as_nfa.edges = machine.edges;
    return enumerate_language(as_nfa, max_len);
}

Language reverse_language(const Language& lang) {
    Language out;
    for (const auto& seq : lang) out.insert(std::vector<Label>(seq.rbegin(), seq.rend()));
    return out;
}

std::string export_edges(const Nfa& machine,
                         const std::function<std::string(Label)>& label_name) {
    return format_edges(machine.num_states, machine.initial, machine.finals, machine.edges,
                        label_name);
}

std::string export_edges(const Dfa& machine,
                         const std::function<std::string(Label)>& label_name) {
    return format_edges(machine.num_states, machine.initial, machine.finals, machine.edges,
                        label_name);
}

}  // namespace uzmorph::fsm
