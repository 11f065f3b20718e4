#include "uzmorph/analyzer.hpp"

#include <algorithm>
#include <cctype>
#include <tuple>

namespace uzmorph {

namespace {

bool is_word_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '\'';
}

// Minimal residue a last-resort strip may leave; single-letter matches that
// would cut the word down to this floor rank below stopping.
constexpr std::size_t kShortStemFloor = 2;

// Ranking element per right-to-left strip position. Buckets order the
// stop-versus-continue decision: an ordinary strip outranks stopping,
// stopping outranks a single-letter residue match (Derivational class, or
// any strip reaching the short-stem floor), and a prefix combined with
// suffixes comes last. Lower tuple sorts first.
struct ProfileElem {
    int bucket;   // 0 strip, 1 end-of-strip, 2 residue strip, 3 late prefix
    int neg_len;  // longer surfaces first
    int kind;     // suffix 0, prefix 1 (breaks equal-length ties at position 0)
    auto operator<=>(const ProfileElem&) const = default;
};

constexpr ProfileElem kEndElem{1, 0, 0};

struct RankToken {
    const Morpheme* morpheme;
    bool is_prefix;
    std::size_t remainder;  // word length left of this strip
};

std::vector<RankToken> rank_tokens(const Analysis& a) {
    std::vector<RankToken> toks;
    std::size_t base = a.stem.size() + (a.prefix ? a.prefix->surface.size() : 0);
    std::vector<std::size_t> starts(a.suffixes.size());
    for (std::size_t i = 0; i < a.suffixes.size(); ++i) {
        starts[i] = base;
        base += a.suffixes[i].surface.size();
    }
    for (std::size_t i = a.suffixes.size(); i-- > 0;)
        toks.push_back({&a.suffixes[i], false, starts[i]});
    if (a.prefix) toks.push_back({&*a.prefix, true, 0});
    return toks;
}

/// Residue strips are last-resort matches: single letters of the
/// Derivational class, wherever they sit, and any match that cuts the word
/// down to the short-stem floor.
bool is_residue(const RankToken& tok) {
    if (tok.is_prefix) return false;
    if (tok.remainder <= kShortStemFloor) return true;
    return tok.morpheme->surface.size() == 1 && tok.morpheme->class_id == 4;
}

ProfileElem profile_elem(const RankToken& tok, std::size_t position) {
    int len = static_cast<int>(tok.morpheme->surface.size());
    if (tok.is_prefix)
        return position == 0 ? ProfileElem{0, -len, 1} : ProfileElem{3, -len, 1};
    return ProfileElem{is_residue(tok) ? 2 : 0, -len, 0};
}

/// Stripping value of one token in quarter-character units. Each class pays
/// an entry cost reflecting how often its surfaces masquerade as stem
/// material: inflectional strips keep most of their length, verb-form,
/// relative-verb and derivational strips progressively less, and a prefix
/// is a last resort that contributes nothing once suffixes are in play.
/// Residue strips and single letters are worth nothing; the positional
/// comparison still prefers them over stopping.
int token_value(const RankToken& tok, std::size_t position) {
    int len = static_cast<int>(tok.morpheme->surface.size());
    if (tok.is_prefix) return position > 0 ? 0 : len == 2 ? 1 : std::max(4 * len - 6, 1);
    if (is_residue(tok) || len == 1) return 0;
    switch (tok.morpheme->class_id) {
        case 4: return len == 2 ? 1 : std::max(4 * len - 8, 1);
        case 3: return std::max(4 * len - 5, 1);
        case 2: return std::max(4 * len - 4, 1);
        default: return len <= 3 ? 4 * len - 3 : 4 * len - 2;
    }
}

int effective_total(const std::vector<RankToken>& toks) {
    int total = 0;
    for (std::size_t i = 0; i < toks.size(); ++i) total += token_value(toks[i], i);
    return total;
}

std::tuple<bool, int, std::string, std::string, std::string> detail_key(const RankToken& tok) {
    const Morpheme& m = *tok.morpheme;
    return {tok.is_prefix, m.class_id, m.surface, m.gloss, m.generic_form};
}

}  // namespace

bool analysis_ranks_before(const Analysis& a, const Analysis& b) {
    auto ta = rank_tokens(a);
    auto tb = rank_tokens(b);
    int total_a = effective_total(ta);
    int total_b = effective_total(tb);
    if (total_a != total_b) return total_a > total_b;
    std::size_t n = std::max(ta.size(), tb.size());
    for (std::size_t i = 0; i < n; ++i) {
        ProfileElem ea = i < ta.size() ? profile_elem(ta[i], i) : kEndElem;
        ProfileElem eb = i < tb.size() ? profile_elem(tb[i], i) : kEndElem;
        if (ea != eb) return ea < eb;
    }
    for (std::size_t i = 0; i < std::min(ta.size(), tb.size()); ++i) {
        auto ka = detail_key(ta[i]);
        auto kb = detail_key(tb[i]);
        if (ka != kb) return ka < kb;
    }
    return false;
}

std::string normalize(std::string_view raw) {
    std::string text = fold_apostrophes(raw);
    for (char& c : text)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    std::size_t begin = 0;
    std::size_t end = text.size();
    while (begin < end && !is_word_char(text[begin])) ++begin;
    while (end > begin && !is_word_char(text[end - 1])) --end;
    // a trailing apostrophe is a letter only as part of o'/g'
    while (end > begin && text[end - 1] == '\'' &&
           !(end - begin >= 2 && (text[end - 2] == 'o' || text[end - 2] == 'g')))
        --end;
    while (begin < end && text[begin] == '\'') ++begin;
    return text.substr(begin, end - begin);
}

Analyzer::Analyzer(MorphotacticGraph graph) : graph_(std::move(graph)) {
    trie_.emplace_back();
    for (fsm::Label l = 0; l < static_cast<fsm::Label>(graph_.labels.size()); ++l) {
        const MorphemeLabel& m = graph_.labels[l];
        if (m.class_id == 7) continue;  // prefixes live outside the suffix trie
        std::int32_t node = 0;
        for (auto it = m.surface.rbegin(); it != m.surface.rend(); ++it) {
            auto c = static_cast<unsigned char>(*it);
            if (trie_[static_cast<std::size_t>(node)].next[c] < 0) {
                trie_[static_cast<std::size_t>(node)].next[c] =
                    static_cast<std::int32_t>(trie_.size());
                trie_.emplace_back();
            }
            node = trie_[static_cast<std::size_t>(node)].next[c];
        }
        trie_[static_cast<std::size_t>(node)].labels.push_back(l);
    }
    prefix_allomorphs_ = allomorphs_of_class(graph_.inventory, 7);
}

Morpheme Analyzer::make_morpheme(fsm::Label label) const {
    const MorphemeLabel& m = graph_.labels[label];
    return {m.surface, m.gloss, m.class_id, graph_.inventory.entries[m.entry].generic_form};
}

void Analyzer::search(const std::string& word, const AnalyzerConfig& config,
                      std::vector<Analysis>& out) const {
    std::vector<fsm::Label> stack;
    auto emit = [&](std::size_t pos) {
        auto build = [&](std::optional<Morpheme> prefix, std::string stem) {
            Analysis a;
            a.stem = std::move(stem);
            a.prefix = std::move(prefix);
            for (auto it = stack.rbegin(); it != stack.rend(); ++it)
                a.suffixes.push_back(make_morpheme(*it));
            a.unanalyzed = a.bare();
            out.push_back(std::move(a));
        };
        std::string remainder = word.substr(0, pos);
        if (pos >= static_cast<std::size_t>(config.min_stem_len)) build(std::nullopt, remainder);
        for (std::uint32_t idx : prefix_allomorphs_) {
            const Allomorph& p = graph_.inventory.allomorphs[idx];
            if (p.surface.size() >= pos) continue;
            if (pos - p.surface.size() < static_cast<std::size_t>(config.min_stem_len)) continue;
            if (remainder.compare(0, p.surface.size(), p.surface) != 0) continue;
            const AffixEntry& e = graph_.inventory.entry_of(p);
            build(Morpheme{p.surface, e.gloss, e.class_id, e.generic_form},
                  remainder.substr(p.surface.size()));
        }
    };

    auto step = [&](auto&& self, std::size_t pos, fsm::State state) -> void {
        if (graph_.composed_rtl.is_final(state)) emit(pos);
        std::int32_t node = 0;
        for (std::size_t len = 1; len <= pos; ++len) {
            auto c = static_cast<unsigned char>(word[pos - len]);
            if (c >= 128) return;
            node = trie_[static_cast<std::size_t>(node)].next[c];
            if (node < 0) return;
            for (fsm::Label l : trie_[static_cast<std::size_t>(node)].labels) {
                const fsm::State* next = graph_.composed_rtl.next(state, l);
                if (!next) continue;
                stack.push_back(l);
                self(self, pos - len, *next);
                stack.pop_back();
            }
        }
    };
    step(step, word.size(), graph_.composed_rtl.initial);
}

std::vector<Analysis> Analyzer::analyze(const std::string& word,
                                        const AnalyzerConfig& config) const {
    std::vector<Analysis> all;
    if (!word.empty() && word.size() >= static_cast<std::size_t>(config.min_stem_len))
        search(word, config, all);
    if (all.empty()) {
        Analysis fallback;
        fallback.stem = word;
        fallback.unanalyzed = true;
        fallback.score = 0;
        return {fallback};
    }
    std::sort(all.begin(), all.end(), analysis_ranks_before);
    if (!config.emit_all && all.size() > 1) all.resize(1);
    if (all.size() > static_cast<std::size_t>(config.max_analyses))
        all.resize(static_cast<std::size_t>(config.max_analyses));
    for (std::size_t i = 0; i < all.size(); ++i) all[i].score = static_cast<std::uint32_t>(i);
    return all;
}

std::string Analyzer::stem(const std::string& word, const AnalyzerConfig& config) const {
    std::string normalized = normalize(word);
    if (normalized.empty()) return normalized;
    return analyze(normalized, config).front().stem;
}

std::optional<std::pair<Morpheme, std::string>> Analyzer::strip_prefix(
    const std::string& word, const AnalyzerConfig& config) const {
    for (std::uint32_t idx : prefix_allomorphs_) {  // longest first
        const Allomorph& p = graph_.inventory.allomorphs[idx];
        if (p.surface.size() >= word.size()) continue;
        if (word.size() - p.surface.size() < static_cast<std::size_t>(config.min_stem_len))
            continue;
        if (word.compare(0, p.surface.size(), p.surface) != 0) continue;
        const AffixEntry& e = graph_.inventory.entry_of(p);
        return std::make_pair(Morpheme{p.surface, e.gloss, e.class_id, e.generic_form},
                              word.substr(p.surface.size()));
    }
    return std::nullopt;
}

}  // namespace uzmorph
