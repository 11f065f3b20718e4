#ifndef UZMORPH_MORPHOTACTICS_HPP
#define UZMORPH_MORPHOTACTICS_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "uzmorph/fsm.hpp"
#include "uzmorph/inventory.hpp"

namespace uzmorph {

/// One member position inside a slot; gloss defaults to the entry's.
struct SlotMember {
    int table_index = 0;      // index_in_table reference from the data file
    std::uint32_t entry = 0;  // resolved index into Inventory::entries
    std::optional<std::string> gloss_override;
};

/// A slot of a class machine's left-to-right chain.
struct Slot {
    int class_id = 0;
    std::string name;
    int max_occurs = 1;
    std::string after;  // fires only if this same-class slot fired
    std::string tag;    // routing tag carried by consumed members
    std::vector<SlotMember> members;
};

/// Graph nodes: 0 = word end, 1..7 = classes, 8 = stem gate.
inline constexpr int kNodeEnd = 0;
inline constexpr int kNodeStem = 8;

struct InterClassEdge {
    int from = 0;
    int to = 0;
    std::string via;   // usable only after consuming a member with this tag
    bool empty_only = false;  // usable only when `from` consumed nothing
};

struct MorphotacticTables {
    std::vector<Slot> slots;            // file order
    std::vector<InterClassEdge> edges;  // file order
};

/// Parses the morphotactic data file (slot/edge lines).
MorphotacticTables load_morphotactics(const std::string& path);

/// One concrete affix occurrence usable as an automaton label: an allomorph
/// plus the gloss and tag of the slot position it was consumed from.
struct MorphemeLabel {
    std::uint32_t allomorph = 0;  // index into Inventory::allomorphs
    std::uint32_t entry = 0;
    int class_id = 0;
    std::string surface;
    std::string gloss;
    std::string slot;
    std::string tag;
};

struct ClassMachine {
    int class_id = 0;
    fsm::Nfa ltr;  // construction intermediate, left-to-right
    fsm::Dfa rtl;  // runtime machine, right-to-left
};

/// The composed main machine: the seven class machines wired per the edge
/// table, two entrances (TensePerson, Noun) and the stem gate, plus the
/// prefix machine at the word's left edge.
struct MorphotacticGraph {
    Inventory inventory;
    MorphotacticTables tables;
    std::vector<MorphemeLabel> labels;  // fsm::Label -> morpheme
    std::array<ClassMachine, 7> machines;
    fsm::Nfa composed_ltr;  // full suffix-sequence language, left-to-right
    fsm::Dfa composed_rtl;  // runtime machine driven by the analyzer
    std::set<int> entrances;  // {1, 5}
    std::set<int> exits;      // {6, 7}

    const MorphemeLabel& label(fsm::Label l) const { return labels[l]; }
    std::string label_name(fsm::Label l) const;

    /// Labels whose surface equals `surface` within one class (suffixes only).
    std::vector<fsm::Label> labels_for(int class_id, std::string_view surface) const;
};

/// Builds one class machine from the tables; throws on unknown class id.
ClassMachine build_class_machine(const Inventory& inv, const MorphotacticTables& tables,
                                 int class_id);

/// Composes the seven machines into the main graph; throws if a class has no
/// slots in the tables.
MorphotacticGraph compose_main(Inventory inventory, MorphotacticTables tables);

/// Convenience: load both grammar files and compose.
MorphotacticGraph load_graph(const std::string& affix_path,
                             const std::string& morphotactics_path);

/// Stable edge-list dump of one class's runtime (right-to-left) machine.
std::string export_class(const MorphotacticGraph& graph, int class_id);

/// Stable edge-list dump of the whole main machine in word order: an
/// optional prefix step, the stem gate, then the composed suffix machine.
std::string export_main(const MorphotacticGraph& graph);

/// Classes whose machines may consume the next right-to-left affix from the
/// given position (kNodeEnd or a just-completed class), per the edge table.
/// Skip reachability through unconsumed classes is intentionally excluded.
std::set<int> legal_next_classes(const MorphotacticGraph& graph, int position);

/// True when the traversal may leave the given position for the stem gate.
bool stem_gate_reachable(const MorphotacticGraph& graph, int position);

}  // namespace uzmorph

#endif
