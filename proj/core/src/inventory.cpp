#include "uzmorph/inventory.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace uzmorph {

namespace {

struct AbbreviationRule {
    char letter;
    std::vector<std::string> expansions;
};

// §abbreviation table; order inside each list is the expansion order.
const std::vector<AbbreviationRule>& abbreviation_rules() {
    static const std::vector<AbbreviationRule> rules = {
        {'G', {"g", "k", "q"}},
        {'Y', {"a", "y"}},
        {'K', {"k", "g"}},
        {'Q', {"k", "g", "g'", "q"}},
        {'T', {"t", "d"}},
    };
    return rules;
}

const AbbreviationRule* find_rule(char c) {
    for (const auto& r : abbreviation_rules())
        if (r.letter == c) return &r;
    return nullptr;
}

bool is_plain_letter(char c) { return (c >= 'a' && c <= 'z') || c == '\''; }

void expand_rec(const std::string& form, std::size_t pos, std::string& acc,
                std::vector<std::string>& out) {
    if (pos == form.size()) {
        out.push_back(acc);
        return;
    }
    char c = form[pos];
    if (c == '(') {
        auto close = form.find(')', pos);
        std::string group = form.substr(pos + 1, close - pos - 1);
        // group present first, then absent
        acc += group;
        expand_rec(form, close + 1, acc, out);
        acc.resize(acc.size() - group.size());
        expand_rec(form, close + 1, acc, out);
        return;
    }
    if (c >= 'A' && c <= 'Z') {
        const AbbreviationRule* rule = find_rule(c);
        if (!rule) throw GrammarError(std::string("unknown abbreviation letter '") + c + "'");
        for (const auto& sub : rule->expansions) {
            acc += sub;
            expand_rec(form, pos + 1, acc, out);
            acc.resize(acc.size() - sub.size());
        }
        return;
    }
    acc += c;
    expand_rec(form, pos + 1, acc, out);
    acc.pop_back();
}

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

void check_generic_form(const std::string& form, std::size_t line) {
    if (form.empty()) throw GrammarError("empty generic form", line);
    int depth = 0;
    for (char c : form) {
        if (c == '(') {
            if (++depth > 1) throw GrammarError("nested parentheses in generic form", line);
        } else if (c == ')') {
            if (--depth < 0) throw GrammarError("unbalanced parentheses in generic form", line);
        } else if (!is_plain_letter(c) && !find_rule(c)) {
            throw GrammarError(std::string("illegal character '") + c + "' in generic form '" +
                                   form + "'",
                               line);
        }
    }
    if (depth != 0) throw GrammarError("unbalanced parentheses in generic form", line);
}

}  // namespace

const std::array<AffixClass, 7>& affix_classes() {
    static const std::array<AffixClass, 7> classes = {{
        {1, "TensePerson", "Tense & Person suffixes", false},
        {2, "Verb", "Verb suffixes", false},
        {3, "RelativeVerb", "Relative verb suffixes", false},
        {4, "Derivational", "Derivational suffixes", true},
        {5, "Noun", "Noun suffixes", false},
        {6, "Number", "Number suffixes", false},
        {7, "Prefix", "Prefixes", true},
    }};
    return classes;
}

const AffixClass& affix_class(int class_id) {
    if (class_id < 1 || class_id > 7)
        throw GrammarError("unknown class id " + std::to_string(class_id));
    return affix_classes()[static_cast<std::size_t>(class_id - 1)];
}

const std::array<ClassCount, 7>& expected_counts() {
    static const std::array<ClassCount, 7> counts = {{
        {24, 27}, {23, 41}, {13, 23}, {71, 81}, {23, 31}, {11, 12}, {7, 7},
    }};
    return counts;
}

std::vector<std::string> expand_generic(const std::string& generic_form) {
    std::vector<std::string> raw;
    std::string acc;
    expand_rec(generic_form, 0, acc, raw);
    std::vector<std::string> out;
    std::set<std::string> seen;
    for (auto& s : raw)
        if (seen.insert(s).second) out.push_back(std::move(s));
    return out;
}

std::string fold_apostrophes(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (std::size_t i = 0; i < text.size();) {
        // U+2019 e2 80 99, U+02BB ca bb, U+0060 grave
        if (i + 2 < text.size() && static_cast<unsigned char>(text[i]) == 0xe2 &&
            static_cast<unsigned char>(text[i + 1]) == 0x80 &&
            static_cast<unsigned char>(text[i + 2]) == 0x99) {
            out += '\'';
            i += 3;
        } else if (i + 1 < text.size() && static_cast<unsigned char>(text[i]) == 0xca &&
                   static_cast<unsigned char>(text[i + 1]) == 0xbb) {
            out += '\'';
            i += 2;
        } else if (text[i] == '`') {
            out += '\'';
            i += 1;
        } else {
            out += text[i];
            i += 1;
        }
    }
    return out;
}

const AffixEntry* Inventory::find_entry(int class_id, int index_in_table) const {
    for (auto idx : by_class[static_cast<std::size_t>(class_id - 1)]) {
        if (entries[idx].index_in_table == index_in_table) return &entries[idx];
    }
    return nullptr;
}

std::string Inventory::serialize() const {
    std::ostringstream os;
    for (const auto& a : allomorphs) {
        const auto& e = entries[a.entry];
        os << e.class_id << '\t' << e.index_in_table << '\t' << e.generic_form << '\t'
           << a.surface << '\n';
    }
    return os.str();
}

Inventory parse_inventory(const std::string& content) {
    Inventory inv;
    std::set<std::pair<int, int>> keys;
    std::istringstream in(content);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto fields = split_tabs(line);
        if (fields.size() != 5)
            throw GrammarError("expected 5 tab-separated fields, got " +
                                   std::to_string(fields.size()),
                               lineno);
        int class_id = 0;
        int index = 0;
        try {
            class_id = std::stoi(fields[0]);
            index = std::stoi(fields[1]);
        } catch (const std::exception&) {
            throw GrammarError("non-numeric class id or index", lineno);
        }
        if (class_id < 1 || class_id > 7)
            throw GrammarError("unknown class id '" + fields[0] + "'", lineno);
        std::string form = fold_apostrophes(fields[2]);
        check_generic_form(form, lineno);
        if (fields[3] != "S" && fields[3] != "P")
            throw GrammarError("attachment must be S or P, got '" + fields[3] + "'", lineno);
        Attachment att = fields[3] == "P" ? Attachment::prefix : Attachment::suffix;
        if ((att == Attachment::prefix) != (class_id == 7))
            throw GrammarError("attachment P is for class 7 only", lineno);
        if (!keys.insert({class_id, index}).second)
            throw GrammarError("duplicate entry (" + std::to_string(class_id) + ", " +
                                   std::to_string(index) + ")",
                               lineno);
        AffixEntry entry{class_id, index, form, att, fields[4]};
        auto entry_index = static_cast<std::uint32_t>(inv.entries.size());
        inv.by_class[static_cast<std::size_t>(class_id - 1)].push_back(entry_index);
        for (auto& surface : expand_generic(form)) {
            if (surface.empty())
                throw GrammarError("expansion of '" + form + "' yields an empty surface", lineno);
            inv.allomorphs.push_back({std::move(surface), entry_index});
        }
        inv.entries.push_back(std::move(entry));
    }
    return inv;
}

void validate_counts(const Inventory& inv) {
    const auto& expected = expected_counts();
    int total_entries = static_cast<int>(inv.entries.size());
    int expected_entries = 0;
    for (const auto& c : expected) expected_entries += c.affixes;
    if (total_entries == 0)
        throw GrammarError("validation failed: 0 of " + std::to_string(expected_entries) +
                           " entries loaded");
    std::ostringstream diff;
    bool mismatch = false;
    std::array<ClassCount, 7> actual{};
    for (const auto& a : inv.allomorphs)
        ++actual[static_cast<std::size_t>(inv.entry_of(a).class_id - 1)].allomorphs;
    for (const auto& e : inv.entries) ++actual[static_cast<std::size_t>(e.class_id - 1)].affixes;
    for (std::size_t i = 0; i < 7; ++i) {
        if (actual[i].affixes != expected[i].affixes ||
            actual[i].allomorphs != expected[i].allomorphs) {
            mismatch = true;
            diff << "class " << (i + 1) << " (" << affix_classes()[i].name << "): " << "affixes "
                 << actual[i].affixes << "/" << expected[i].affixes << ", allomorphs "
                 << actual[i].allomorphs << "/" << expected[i].allomorphs << "; ";
        }
    }
    if (mismatch) throw GrammarError("count mismatch: " + diff.str());
}

Inventory load_inventory(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw GrammarError("cannot open grammar file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    Inventory inv = parse_inventory(buf.str());
    validate_counts(inv);
    return inv;
}

std::vector<std::uint32_t> allomorphs_of_class(const Inventory& inv, int class_id) {
    affix_class(class_id);  // validates
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 0; i < inv.allomorphs.size(); ++i)
        if (inv.entry_of(inv.allomorphs[i]).class_id == class_id) out.push_back(i);
    std::sort(out.begin(), out.end(), [&](std::uint32_t a, std::uint32_t b) {
        const auto& sa = inv.allomorphs[a].surface;
        const auto& sb = inv.allomorphs[b].surface;
        if (sa.size() != sb.size()) return sa.size() > sb.size();
        if (sa != sb) return sa < sb;
        return a < b;
    });
    return out;
}

}  // namespace uzmorph
