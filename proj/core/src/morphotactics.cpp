#include "uzmorph/morphotactics.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

namespace uzmorph {

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        auto tab = line.find('\t', start);
        if (tab == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
    return fields;
}

std::vector<std::string> split_on(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        auto p = s.find(sep, start);
        if (p == std::string::npos) {
            out.push_back(s.substr(start));
            break;
        }
        out.push_back(s.substr(start, p - start));
        start = p + 1;
    }
    return out;
}

int parse_node(const std::string& token, std::size_t lineno) {
    if (token == "end") return kNodeEnd;
    if (token == "stem") return kNodeStem;
    if (token.size() == 1 && token[0] >= '1' && token[0] <= '7') return token[0] - '0';
    throw GrammarError("unknown graph node '" + token + "'", lineno);
}

/// Per-slot labels: label ids for each member, one per allomorph.
struct LabelTable {
    std::vector<MorphemeLabel> labels;
    // by_slot[slot index in tables][member index] -> labels
    std::vector<std::vector<std::vector<fsm::Label>>> by_slot;
};

LabelTable build_label_table(const Inventory& inv, const MorphotacticTables& tables) {
    LabelTable table;
    table.by_slot.resize(tables.slots.size());
    for (std::size_t s = 0; s < tables.slots.size(); ++s) {
        const Slot& slot = tables.slots[s];
        table.by_slot[s].resize(slot.members.size());
        for (std::size_t m = 0; m < slot.members.size(); ++m) {
            const SlotMember& member = slot.members[m];
            const AffixEntry& entry = inv.entries[member.entry];
            for (std::uint32_t a = 0; a < inv.allomorphs.size(); ++a) {
                if (inv.allomorphs[a].entry != member.entry) continue;
                MorphemeLabel label;
                label.allomorph = a;
                label.entry = member.entry;
                label.class_id = entry.class_id;
                label.surface = inv.allomorphs[a].surface;
                label.gloss = member.gloss_override ? *member.gloss_override : entry.gloss;
                label.slot = slot.name;
                label.tag = slot.tag;
                table.by_slot[s][m].push_back(static_cast<fsm::Label>(table.labels.size()));
                table.labels.push_back(std::move(label));
            }
        }
    }
    return table;
}

/// A consuming state of a slot chain plus the slot names and tags fired on
/// every path that reaches it.
struct LaneState {
    std::set<std::string> fired;
    fsm::State state;
};

struct ChainResult {
    fsm::State entry = 0;
    std::vector<LaneState> lanes;  // states reached by consuming at least once
};

/// Builds the left-to-right slot chain of one class inside `nfa`. Slots fire
/// in declaration order, each up to max_occurs times; a slot with `after`
/// fires only on paths where that slot already fired.
ChainResult build_slot_chain(fsm::Nfa& nfa, const MorphotacticTables& tables,
                             const LabelTable& labels, int class_id) {
    ChainResult chain;
    chain.entry = nfa.add_state();
    for (std::size_t s = 0; s < tables.slots.size(); ++s) {
        const Slot& slot = tables.slots[s];
        if (slot.class_id != class_id) continue;
        std::vector<LaneState> sources;
        if (slot.after.empty()) sources.push_back({{}, chain.entry});
        for (const auto& lane : chain.lanes)
            if (slot.after.empty() || lane.fired.count("slot:" + slot.after))
                sources.push_back(lane);
        for (int occ = 0; occ < slot.max_occurs; ++occ) {
            std::map<std::set<std::string>, fsm::State> targets;
            std::vector<LaneState> round;
            for (const auto& src : sources) {
                auto fired = src.fired;
                fired.insert("slot:" + slot.name);
                if (!slot.tag.empty()) fired.insert("tag:" + slot.tag);
                auto it = targets.find(fired);
                if (it == targets.end()) {
                    it = targets.emplace(fired, nfa.add_state()).first;
                    round.push_back({fired, it->second});
                }
                for (std::size_t m = 0; m < slot.members.size(); ++m)
                    for (fsm::Label l : labels.by_slot[s][m])
                        nfa.add_edge(src.state, l, it->second);
            }
            chain.lanes.insert(chain.lanes.end(), round.begin(), round.end());
            sources = std::move(round);
        }
    }
    return chain;
}

bool class_has_slots(const MorphotacticTables& tables, int class_id) {
    return std::any_of(tables.slots.begin(), tables.slots.end(),
                       [&](const Slot& s) { return s.class_id == class_id; });
}

/// One embedding of a class machine in the composed graph. Entering through
/// `in` and leaving through `out`; when required_tag is set, only paths that
/// consumed a member with that tag reach `out`, and skipping is impossible.
struct Instance {
    fsm::State in = 0;
    fsm::State out = 0;
};

Instance instantiate(fsm::Nfa& nfa, const MorphotacticTables& tables, const LabelTable& labels,
                     int class_id, const std::string& required_tag) {
    Instance inst;
    inst.in = nfa.add_state();
    inst.out = nfa.add_state();
    ChainResult chain = build_slot_chain(nfa, tables, labels, class_id);
    nfa.add_edge(inst.in, fsm::kEpsilon, chain.entry);
    if (required_tag.empty()) nfa.add_edge(inst.in, fsm::kEpsilon, inst.out);
    for (const auto& lane : chain.lanes) {
        if (required_tag.empty() || lane.fired.count("tag:" + required_tag))
            nfa.add_edge(lane.state, fsm::kEpsilon, inst.out);
    }
    return inst;
}

}  // namespace

MorphotacticTables load_morphotactics(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw GrammarError("cannot open morphotactics file: " + path);
    MorphotacticTables tables;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto fields = split_tabs(line);
        if (fields[0] == "slot") {
            if (fields.size() < 5) throw GrammarError("slot line needs 5+ fields", lineno);
            Slot slot;
            slot.class_id = parse_node(fields[1], lineno);
            if (slot.class_id < 1 || slot.class_id > 7)
                throw GrammarError("slot class must be 1..7", lineno);
            slot.name = fields[2];
            slot.max_occurs = std::stoi(fields[3]);
            if (slot.max_occurs < 1) throw GrammarError("max_occurs must be >= 1", lineno);
            for (const auto& ref : split_on(fields[4], ',')) {
                auto colon = ref.find(':');
                SlotMember member;
                std::string idx = colon == std::string::npos ? ref : ref.substr(0, colon);
                if (colon != std::string::npos) member.gloss_override = ref.substr(colon + 1);
                member.table_index = std::stoi(idx);
                slot.members.push_back(std::move(member));
            }
            for (std::size_t f = 5; f < fields.size(); ++f) {
                const std::string& attr = fields[f];
                if (attr.rfind("after=", 0) == 0)
                    slot.after = attr.substr(6);
                else if (attr.rfind("tag=", 0) == 0)
                    slot.tag = attr.substr(4);
                else
                    throw GrammarError("unknown slot attribute '" + attr + "'", lineno);
            }
            tables.slots.push_back(std::move(slot));
        } else if (fields[0] == "edge") {
            if (fields.size() < 3) throw GrammarError("edge line needs 3+ fields", lineno);
            InterClassEdge edge;
            edge.from = parse_node(fields[1], lineno);
            edge.to = parse_node(fields[2], lineno);
            for (std::size_t f = 3; f < fields.size(); ++f) {
                const std::string& attr = fields[f];
                if (attr.rfind("via=", 0) == 0)
                    edge.via = attr.substr(4);
                else if (attr == "empty")
                    edge.empty_only = true;
                else
                    throw GrammarError("unknown edge attribute '" + attr + "'", lineno);
            }
            tables.edges.push_back(edge);
        } else {
            throw GrammarError("unknown directive '" + fields[0] + "'", lineno);
        }
    }
    return tables;
}

namespace {

/// Resolves slot member table references to entry indices; idempotent.
void resolve_members(const Inventory& inv, MorphotacticTables& tables) {
    for (auto& slot : tables.slots) {
        for (auto& member : slot.members) {
            const AffixEntry* entry = inv.find_entry(slot.class_id, member.table_index);
            if (!entry)
                throw GrammarError("slot '" + slot.name + "' references missing entry (" +
                                   std::to_string(slot.class_id) + ", " +
                                   std::to_string(member.table_index) + ")");
            member.entry = static_cast<std::uint32_t>(entry - inv.entries.data());
        }
    }
}

}  // namespace

ClassMachine build_class_machine(const Inventory& inv, const MorphotacticTables& tables,
                                 int class_id) {
    affix_class(class_id);  // validates the id
    if (!class_has_slots(tables, class_id))
        throw GrammarError("no slots defined for class " + std::to_string(class_id));
    MorphotacticTables resolved = tables;
    resolve_members(inv, resolved);
    LabelTable labels = build_label_table(inv, resolved);
    ClassMachine machine;
    machine.class_id = class_id;
    ChainResult chain = build_slot_chain(machine.ltr, resolved, labels, class_id);
    machine.ltr.initial = chain.entry;
    for (const auto& lane : chain.lanes) machine.ltr.finals.insert(lane.state);
    machine.rtl = fsm::determinize(fsm::reverse(machine.ltr));
    return machine;
}

MorphotacticGraph compose_main(Inventory inventory, MorphotacticTables tables) {
    resolve_members(inventory, tables);
    for (int c = 1; c <= 7; ++c)
        if (!class_has_slots(tables, c))
            throw GrammarError("missing machine: no slots for class " + std::to_string(c));

    MorphotacticGraph graph;
    LabelTable labels = build_label_table(inventory, tables);
    graph.labels = labels.labels;

    for (int c = 1; c <= 7; ++c) {
        ClassMachine machine;
        machine.class_id = c;
        ChainResult chain = build_slot_chain(machine.ltr, tables, labels, c);
        machine.ltr.initial = chain.entry;
        for (const auto& lane : chain.lanes) machine.ltr.finals.insert(lane.state);
        machine.rtl = fsm::determinize(fsm::reverse(machine.ltr));
        graph.machines[static_cast<std::size_t>(c - 1)] = std::move(machine);
    }

    // Composed left-to-right suffix machine: one instance per class reachable
    // through plain edges, plus a restricted instance per via-tagged edge.
    fsm::Nfa& nfa = graph.composed_ltr;
    fsm::State start = nfa.add_state();
    fsm::State accept = nfa.add_state();
    nfa.initial = start;
    nfa.finals.insert(accept);

    std::map<std::pair<int, std::string>, Instance> instances;
    auto instance_of = [&](int class_id, const std::string& tag) -> Instance& {
        auto key = std::make_pair(class_id, tag);
        auto it = instances.find(key);
        if (it == instances.end())
            it = instances.emplace(key, instantiate(nfa, tables, labels, class_id, tag)).first;
        return it->second;
    };
    for (const auto& edge : tables.edges) {
        if (edge.from >= 1 && edge.from <= 7) {
            instance_of(edge.from, "");
            if (!edge.via.empty()) instance_of(edge.from, edge.via);
        }
        if (edge.to >= 1 && edge.to <= 7) instance_of(edge.to, "");
    }

    auto instances_of_class = [&](int class_id) {
        std::vector<const Instance*> out;
        for (const auto& [key, inst] : instances)
            if (key.first == class_id) out.push_back(&inst);
        return out;
    };

    for (const auto& edge : tables.edges) {
        if (edge.to == kNodeStem) {
            // left-to-right: the chain may begin at this class
            nfa.add_edge(start, fsm::kEpsilon, instance_of(edge.from, "").in);
        } else if (edge.from == kNodeEnd) {
            // left-to-right: the word may end after this class
            for (const Instance* inst : instances_of_class(edge.to))
                nfa.add_edge(inst->out, fsm::kEpsilon, accept);
        } else if (edge.empty_only) {
            // the from-class is bypassed entirely on this route
            for (const Instance* to_inst : instances_of_class(edge.to))
                for (const Instance* from_inst : instances_of_class(edge.from))
                    nfa.add_edge(to_inst->out, fsm::kEpsilon, from_inst->out);
        } else {
            for (const Instance* to_inst : instances_of_class(edge.to))
                nfa.add_edge(to_inst->out, fsm::kEpsilon, instance_of(edge.from, edge.via).in);
        }
    }

    graph.composed_rtl = fsm::determinize(fsm::reverse(nfa));
    graph.entrances.clear();
    graph.exits = {6, 7};
    for (const auto& edge : tables.edges)
        if (edge.from == kNodeEnd) graph.entrances.insert(edge.to);

    graph.inventory = std::move(inventory);
    graph.tables = std::move(tables);
    return graph;
}

MorphotacticGraph load_graph(const std::string& affix_path,
                             const std::string& morphotactics_path) {
    return compose_main(load_inventory(affix_path), load_morphotactics(morphotactics_path));
}

std::string MorphotacticGraph::label_name(fsm::Label l) const {
    const MorphemeLabel& m = labels[l];
    std::string name = std::to_string(m.class_id) + ":" + m.surface;
    if (m.gloss != inventory.entries[m.entry].gloss) name += ":" + m.gloss;
    return name;
}

std::vector<fsm::Label> MorphotacticGraph::labels_for(int class_id,
                                                      std::string_view surface) const {
    std::vector<fsm::Label> out;
    for (fsm::Label l = 0; l < labels.size(); ++l)
        if (labels[l].class_id == class_id && labels[l].surface == surface) out.push_back(l);
    return out;
}

std::string export_class(const MorphotacticGraph& graph, int class_id) {
    affix_class(class_id);
    const ClassMachine& machine = graph.machines[static_cast<std::size_t>(class_id - 1)];
    return fsm::export_edges(machine.rtl,
                             [&](fsm::Label l) { return graph.label_name(l); });
}

std::string export_main(const MorphotacticGraph& graph) {
    fsm::Nfa main;
    fsm::State word_start = main.add_state();
    fsm::State stem_gate = main.add_state();
    for (fsm::Label l = 0; l < graph.labels.size(); ++l)
        if (graph.labels[l].class_id == 7) main.add_edge(word_start, l, stem_gate);
    main.add_edge(word_start, fsm::kEpsilon, stem_gate);
    const fsm::Nfa& suffix = graph.composed_ltr;
    const fsm::State offset = main.num_states;
    main.num_states += suffix.num_states;
    for (const auto& e : suffix.edges) main.add_edge(e.from + offset, e.label, e.to + offset);
    main.add_edge(stem_gate, fsm::kEpsilon, suffix.initial + offset);
    main.initial = word_start;
    for (fsm::State f : suffix.finals) main.finals.insert(f + offset);
    return fsm::export_edges(main, [&](fsm::Label l) { return graph.label_name(l); });
}

std::set<int> legal_next_classes(const MorphotacticGraph& graph, int position) {
    std::set<int> out;
    for (const auto& edge : graph.tables.edges) {
        if (edge.from != position || edge.to == kNodeStem) continue;
        if (position != kNodeEnd && edge.empty_only) continue;  // position was consumed
        out.insert(edge.to);
    }
    return out;
}

bool stem_gate_reachable(const MorphotacticGraph& graph, int position) {
    // First hop must not need the position's own consumption state; transit
    // hops pass through classes without consuming, so via-tagged edges are
    // unusable throughout.
    std::set<int> seen{position};
    std::vector<int> work{position};
    bool first = true;
    while (!work.empty()) {
        std::vector<int> next;
        for (int node : work) {
            for (const auto& edge : graph.tables.edges) {
                if (edge.from != node || !edge.via.empty()) continue;
                if (first && node != kNodeEnd && edge.empty_only) continue;
                if (edge.to == kNodeStem) return true;
                if (seen.insert(edge.to).second) next.push_back(edge.to);
            }
        }
        work = std::move(next);
        first = false;
    }
    return false;
}

}  // namespace uzmorph
