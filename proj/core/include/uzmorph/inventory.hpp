#ifndef UZMORPH_INVENTORY_HPP
#define UZMORPH_INVENTORY_HPP

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace uzmorph {

/// Raised for unreadable or malformed grammar files; `line` is 1-based and
/// 0 when the failure is not tied to a single line.
class GrammarError : public std::runtime_error {
public:
    GrammarError(std::string message, std::size_t line = 0)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + message
                                  : std::move(message)),
          line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

enum class Attachment : std::uint8_t { suffix, prefix };

struct AffixClass {
    int id;                  // 1..7
    std::string_view name;   // canonical name (TensePerson, Verb, ...)
    std::string_view label;  // display label (Tense & Person, ...)
    bool derivational;
};

/// The seven affix classes, index 0 holds class 1.
const std::array<AffixClass, 7>& affix_classes();
const AffixClass& affix_class(int class_id);

struct AffixEntry {
    int class_id = 0;
    int index_in_table = 0;
    std::string generic_form;  // may contain G,Y,K,Q,T and (...) groups
    Attachment attachment = Attachment::suffix;
    std::string gloss;
};

struct Allomorph {
    std::string surface;       // concrete lowercase form
    std::uint32_t entry = 0;   // index into Inventory::entries
};

struct Inventory {
    std::vector<AffixEntry> entries;
    std::vector<Allomorph> allomorphs;
    // entry indices per class, in file order; index 0 holds class 1
    std::array<std::vector<std::uint32_t>, 7> by_class;

    const AffixEntry& entry_of(const Allomorph& a) const { return entries[a.entry]; }
    const AffixEntry* find_entry(int class_id, int index_in_table) const;

    /// Stable text dump of every (class, surface) pair, for golden comparison.
    std::string serialize() const;
};

/// Expands a generic form into concrete surfaces: abbreviation capitals are
/// substituted in rule order, parenthesized groups branch present-first, and
/// duplicates are dropped keeping first occurrence.
std::vector<std::string> expand_generic(const std::string& generic_form);

/// Loads and validates a grammar file. Counts are checked against the
/// embedded per-class expectations and the 172/222 totals.
Inventory load_inventory(const std::string& path);

/// Parses inventory content without the count validation (used by the
/// validator CLI to report mismatches instead of throwing).
Inventory parse_inventory(const std::string& content);

struct ClassCount {
    int affixes = 0;
    int allomorphs = 0;
};

/// Expected per-class counts; index 0 holds class 1. Totals are 172 and 222.
const std::array<ClassCount, 7>& expected_counts();

/// Throws GrammarError describing the first count mismatch, if any.
void validate_counts(const Inventory& inv);

/// Allomorph indices of one class sorted by descending surface length, then
/// lexicographically (longest-match support).
std::vector<std::uint32_t> allomorphs_of_class(const Inventory& inv, int class_id);

/// Folds the apostrophe variants U+2019, U+02BB and U+0060 to ASCII '.
std::string fold_apostrophes(std::string_view text);

}  // namespace uzmorph

#endif
