#include <algorithm>
#include <set>

#include "uzmorph/analyzer.hpp"

// Independent reference enumeration of every segmentation the composed graph
// admits. Matches allomorph lists against the slot tables by direct string
// recursion; none of the fsm machinery is used.

namespace uzmorph {

namespace {

struct Successor {
    int node = 0;
    std::string via;
    bool empty_only = false;
};

struct Walker {
    const MorphotacticGraph& graph;
    const std::string& word;
    std::size_t min_stem;
    std::set<Analysis>* results = nullptr;

    const std::optional<Morpheme>* prefix = nullptr;
    std::size_t stem_len = 0;
    std::vector<Morpheme> seq;

    std::vector<Successor> successors(int node) const {
        std::vector<Successor> out;
        for (const auto& e : graph.tables.edges)
            if (e.to == node && e.from != kNodeEnd) out.push_back({e.from, e.via, e.empty_only});
        return out;
    }

    bool can_end(int node) const {
        for (const auto& e : graph.tables.edges)
            if (e.from == kNodeEnd && e.to == node) return true;
        return false;
    }

    std::vector<const Slot*> slots_of(int node) const {
        std::vector<const Slot*> out;
        for (const auto& s : graph.tables.slots)
            if (s.class_id == node) out.push_back(&s);
        return out;
    }

    void record() {
        Analysis a;
        a.stem = word.substr(0, stem_len);
        a.prefix = *prefix;
        a.suffixes = seq;
        a.unanalyzed = a.bare();
        results->insert(std::move(a));
    }

    void walk_node(int node, const std::string& require_tag, bool require_empty,
                   std::size_t pos) {
        auto slots = slots_of(node);
        slot_walk(node, slots, 0, 0, {}, false, require_tag, require_empty, pos);
    }

    void slot_walk(int node, const std::vector<const Slot*>& slots, std::size_t si, int occ_used,
                   std::set<std::string> fired, bool consumed, const std::string& require_tag,
                   bool require_empty, std::size_t pos) {
        if (si == slots.size()) {
            if (!require_tag.empty() && !fired.count("tag:" + require_tag)) return;
            if (require_empty && consumed) return;
            if (can_end(node) && pos == word.size()) record();
            for (const auto& succ : successors(node))
                walk_node(succ.node, succ.via, succ.empty_only, pos);
            return;
        }
        const Slot& slot = *slots[si];
        slot_walk(node, slots, si + 1, 0, fired, consumed, require_tag, require_empty, pos);
        if (occ_used >= slot.max_occurs) return;
        if (!slot.after.empty() && !fired.count("slot:" + slot.after)) return;
        auto fired_next = fired;
        fired_next.insert("slot:" + slot.name);
        if (!slot.tag.empty()) fired_next.insert("tag:" + slot.tag);
        for (const auto& member : slot.members) {
            const AffixEntry& entry = graph.inventory.entries[member.entry];
            for (const auto& allo : graph.inventory.allomorphs) {
                if (allo.entry != member.entry) continue;
                const std::string& s = allo.surface;
                if (word.compare(pos, s.size(), s) != 0) continue;
                seq.push_back({s, member.gloss_override ? *member.gloss_override : entry.gloss,
                               entry.class_id, entry.generic_form});
                slot_walk(node, slots, si, occ_used + 1, fired_next, true, require_tag,
                          require_empty, pos + s.size());
                seq.pop_back();
            }
        }
    }

    void run() {
        for (const auto& e : graph.tables.edges) {
            if (e.to != kNodeStem) continue;
            walk_node(e.from, e.via, e.empty_only, stem_len);
        }
    }
};

}  // namespace

std::vector<Analysis> enumerate_segmentations_oracle(const std::string& word,
                                                     const MorphotacticGraph& graph,
                                                     const AnalyzerConfig& config) {
    std::set<Analysis> results;
    auto min_stem = static_cast<std::size_t>(config.min_stem_len);

    std::vector<std::optional<Morpheme>> prefix_options;
    prefix_options.emplace_back(std::nullopt);
    for (const auto& allo : graph.inventory.allomorphs) {
        const AffixEntry& entry = graph.inventory.entry_of(allo);
        if (entry.attachment != Attachment::prefix) continue;
        if (allo.surface.size() >= word.size()) continue;
        if (word.size() - allo.surface.size() < min_stem) continue;
        if (word.compare(0, allo.surface.size(), allo.surface) != 0) continue;
        prefix_options.emplace_back(
            Morpheme{allo.surface, entry.gloss, entry.class_id, entry.generic_form});
    }

    for (const auto& prefix : prefix_options) {
        std::string rest = prefix ? word.substr(prefix->surface.size()) : word;
        for (std::size_t stem_len = min_stem; stem_len <= rest.size(); ++stem_len) {
            Walker walker{graph, rest, min_stem, &results, &prefix, stem_len, {}};
            walker.run();
        }
    }

    std::vector<Analysis> out(results.begin(), results.end());
    std::sort(out.begin(), out.end(), analysis_ranks_before);
    for (std::size_t i = 0; i < out.size(); ++i) out[i].score = static_cast<std::uint32_t>(i);
    return out;
}

}  // namespace uzmorph
