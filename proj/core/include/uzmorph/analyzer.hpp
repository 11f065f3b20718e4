#ifndef UZMORPH_ANALYZER_HPP
#define UZMORPH_ANALYZER_HPP

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "uzmorph/morphotactics.hpp"

namespace uzmorph {

struct Morpheme {
    std::string surface;
    std::string gloss;
    int class_id = 0;
    std::string generic_form;

    auto operator<=>(const Morpheme&) const = default;
};

struct Analysis {
    std::string stem;
    std::optional<Morpheme> prefix;
    std::vector<Morpheme> suffixes;  // left-to-right word order
    std::uint32_t score = 0;         // rank under the analyzer ordering, 0 = best
    bool unanalyzed = false;         // stem-only passthrough

    bool bare() const { return !prefix && suffixes.empty(); }
    auto operator<=>(const Analysis&) const = default;
};

struct AnalyzerConfig {
    int min_stem_len = 2;
    int max_analyses = 16;
    bool emit_all = false;
};

/// Lowercases, folds apostrophe variants to ASCII ' and strips surrounding
/// punctuation. Garbage in, empty or passthrough out.
std::string normalize(std::string_view raw);

class Analyzer {
public:
    explicit Analyzer(MorphotacticGraph graph);

    const MorphotacticGraph& graph() const { return graph_; }

    /// All analyses of a normalized word, best first. With emit_all false
    /// only the best is returned; a word with no legal stripping yields the
    /// single stem-only analysis flagged unanalyzed.
    std::vector<Analysis> analyze(const std::string& word, const AnalyzerConfig& config = {}) const;

    /// Stem of the best analysis; normalizes its input, never fails.
    std::string stem(const std::string& word, const AnalyzerConfig& config = {}) const;

    /// Longest class-7 allomorph at position 0 whose removal leaves at least
    /// min_stem_len characters.
    std::optional<std::pair<Morpheme, std::string>> strip_prefix(
        const std::string& word, const AnalyzerConfig& config = {}) const;

private:
    struct TrieNode {
        std::array<std::int32_t, 128> next;
        std::vector<fsm::Label> labels;  // labels whose reversed surface ends here
        TrieNode() { next.fill(-1); }
    };

    void search(const std::string& word, const AnalyzerConfig& config,
                std::vector<Analysis>& out) const;
    Morpheme make_morpheme(fsm::Label label) const;

    MorphotacticGraph graph_;
    std::vector<TrieNode> trie_;  // over reversed suffix allomorph surfaces
    std::vector<std::uint32_t> prefix_allomorphs_;  // class 7, longest first
};

/// Exhaustive independent enumeration of every (prefix?, stem, suffixes)
/// segmentation the composed graph admits, implemented by direct recursive
/// matching against the slot tables; no automaton machinery involved.
/// Intended for desk-scale words (length <= 25).
std::vector<Analysis> enumerate_segmentations_oracle(const std::string& word,
                                                     const MorphotacticGraph& graph,
                                                     const AnalyzerConfig& config = {});

/// The analyzer's ranking, exposed for tests: true when a ranks before b.
bool analysis_ranks_before(const Analysis& a, const Analysis& b);

}  // namespace uzmorph

#endif
