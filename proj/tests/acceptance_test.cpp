// Acceptance suite: exercises every published criterion at its stated
// tolerance and prints one PASS/FAIL line per criterion. Exits nonzero when
// any criterion fails.

#include <sys/resource.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <vector>

#include "uzmorph/analyzer.hpp"

using namespace uzmorph;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
    std::cout << (pass ? "[PASS]" : "[FAIL]") << " criterion " << criterion << ": " << detail
              << std::endl;
    if (!pass) ++g_failures;
}

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string data_file(const std::string& name) {
    return std::string(UZMORPH_DATA_DIR) + "/" + name;
}

AnalyzerConfig all_config() {
    AnalyzerConfig config;
    config.emit_all = true;
    config.max_analyses = 1000000;
    return config;
}

std::string flat(const Analysis& a) {
    std::string out;
    if (a.prefix) out += a.prefix->surface + "< ";
    out += a.stem;
    for (const auto& m : a.suffixes)
        out += "+" + m.surface + "(" + std::to_string(m.class_id) + ")";
    return out;
}

std::string reconstruct(const Analysis& a) {
    std::string word = a.prefix ? a.prefix->surface : "";
    word += a.stem;
    for (const auto& m : a.suffixes) word += m.surface;
    return word;
}

std::vector<Analysis> unranked(std::vector<Analysis> list) {
    for (auto& a : list) a.score = 0;
    return list;
}

// ---------------------------------------------------------------------------
// Word synthesis: syllable-structured stems plus affix sequences sampled from
// the graph's own ordering tables. Stems follow Uzbek phonotactics (no voiced
// stops word-finally); entries use their full canonical variant, abbreviation
// capitals drawn uniformly, since harmony selection is out of scope. Slot
// fill rates lean toward running-text frequencies, with derivation rare.

const char* kLetters[] = {"a", "b",  "d",  "e", "f", "g", "h", "i", "j", "k",
                          "l", "m",  "n",  "o", "p", "q", "r", "s", "t", "u",
                          "v", "x",  "y",  "z", "o'", "g'", "sh", "ch"};

struct Synthesizer {
    const MorphotacticGraph& graph;
    std::mt19937 rng;

    bool chance(double p) { return std::uniform_real_distribution<>(0, 1)(rng) < p; }

    std::size_t pick(std::size_t n) {
        return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
    }

    template <typename T>
    const T& weighted(const std::vector<std::pair<T, int>>& items) {
        int total = 0;
        for (const auto& [value, weight] : items) total += weight;
        int r = std::uniform_int_distribution<int>(0, total - 1)(rng);
        for (const auto& [value, weight] : items)
            if ((r -= weight) < 0) return value;
        return items.back().first;
    }

    const Slot* slot(int class_id, const std::string& name) {
        for (const auto& s : graph.tables.slots)
            if (s.class_id == class_id && s.name == name) return &s;
        return nullptr;
    }

    bool stem_ends_in_allomorph(const std::string& stem) {
        for (const auto& a : graph.inventory.allomorphs) {
            if (a.surface.size() > stem.size()) continue;
            if (stem.compare(stem.size() - a.surface.size(), a.surface.size(), a.surface) == 0)
                return true;
        }
        return false;
    }

    std::string syllable() {
        static const std::vector<std::pair<std::string, int>> onsets = {
            {"b", 8}, {"d", 6}, {"k", 8}, {"l", 6}, {"m", 6},  {"n", 5},  {"p", 3},  {"q", 5},
            {"r", 5}, {"s", 7}, {"t", 8}, {"x", 3}, {"y", 4},  {"z", 3},  {"g", 4},  {"h", 2},
            {"j", 2}, {"f", 2}, {"v", 2}, {"sh", 4}, {"ch", 4}, {"g'", 2}};
        static const std::vector<std::pair<std::string, int>> vowels = {
            {"a", 30}, {"i", 22}, {"o", 18}, {"u", 12}, {"e", 12}, {"o'", 6}};
        // word-final voiced stops do not occur; codas draw from the devoiced set
        static const std::vector<std::pair<std::string, int>> codas = {
            {"q", 6}, {"s", 7}, {"z", 4}, {"sh", 5}, {"ch", 4},
            {"x", 3}, {"p", 3}, {"f", 2}, {"h", 1}};
        std::string s;
        if (chance(0.85)) s += weighted(onsets);
        s += weighted(vowels);
        if (chance(0.45)) s += weighted(codas);
        return s;
    }

    std::string random_stem() {
        while (true) {
            std::string stem;
            std::size_t syllables = 1 + pick(3);
            for (std::size_t i = 0; i < syllables; ++i) stem += syllable();
            if (stem.size() < 3 || stem.size() > 9) continue;
            if (!stem_ends_in_allomorph(stem)) return stem;
        }
    }

    /// Surface of a slot member: the full parenthesized variant; abbreviation
    /// capital variants are drawn uniformly.
    std::string surface_of(const SlotMember& member) {
        const AffixEntry& entry = graph.inventory.entries[member.entry];
        auto variants = expand_generic(entry.generic_form);
        if (entry.generic_form.find('(') != std::string::npos && variants.size() == 2)
            return variants[0];
        return variants[pick(variants.size())];
    }

    void add(std::string& word, const Slot& s) {
        word += surface_of(s.members[pick(s.members.size())]);
    }

    void add_deverbal(std::string& word) {
        const Slot& dev = *slot(4, "deverbal");
        word += surface_of(dev.members[pick(dev.members.size())]);
    }

    /// Returns (word, stem); the suffix sequence is non-empty and accepted by
    /// the composed graph by construction.
    std::pair<std::string, std::string> synthesize() {
        while (true) {
            std::string stem = random_stem();
            std::string word = stem;
            if (chance(0.5)) {  // verbal chain: stem 3* 2 1
                if (chance(0.25)) {
                    add(word, *slot(3, "voice"));
                    if (chance(0.25)) add(word, *slot(3, "voice"));
                }
                if (chance(0.03)) add(word, *slot(3, "auxiliary"));
                if (chance(0.2)) add(word, *slot(2, "negation"));
                if (chance(0.45)) add(word, *slot(2, "form"));
                if (chance(0.55)) add(word, *slot(1, "tense"));
                if (chance(0.4)) add(word, *slot(1, "person"));
                if (chance(0.1)) add(word, *slot(1, "question"));
            } else if (chance(0.1)) {  // number suffix straight on the stem
                add(word, *slot(6, "number"));
            } else {  // nominal chain: stem 3? 4? 5*
                bool voiced = chance(0.05);
                if (voiced) {
                    add(word, *slot(3, "voice"));
                    add_deverbal(word);  // relative verbs feed the deverbal lane only
                    if (chance(0.1)) add(word, *slot(4, "denominal"));
                } else if (chance(0.15)) {
                    if (chance(0.35)) {
                        add_deverbal(word);
                        if (chance(0.1)) add(word, *slot(4, "denominal"));
                    } else {
                        add(word, *slot(4, "denominal"));
                    }
                }
                bool poss = false;
                if (chance(0.3)) add(word, *slot(5, "plural"));
                if (chance(0.35)) {
                    add(word, *slot(5, "possessive"));
                    poss = true;
                }
                if (poss && chance(0.1)) word += "lar";  // greeting reading
                if (chance(0.35)) add(word, *slot(5, "case"));
                if (chance(0.1)) add(word, *slot(5, "person"));
                if (chance(0.1)) add(word, *slot(5, "particle"));
            }
            if (word == stem) continue;     // need at least one affix
            if (word.size() > 25) continue;  // oracle works at desk scale
            return {word, stem};
        }
    }

    std::string random_string() {
        std::string word;
        std::size_t target = 1 + pick(12);
        while (word.size() < target) word += kLetters[pick(std::size(kLetters))];
        if (word.size() > 12) word.resize(12);
        return word;
    }
};

// ---------------------------------------------------------------------------

struct GoldenCase {
    const char* word;
    const char* stem;
    std::vector<std::pair<const char*, const char*>> suffixes;  // surface, class name
};

bool check_golden(const Analyzer& analyzer, const GoldenCase& g, std::string& detail) {
    auto best = analyzer.analyze(g.word).front();
    if (best.stem != g.stem || best.suffixes.size() != g.suffixes.size() || best.prefix) {
        detail = std::string(g.word) + " -> " + flat(best);
        return false;
    }
    for (std::size_t i = 0; i < g.suffixes.size(); ++i) {
        const Morpheme& m = best.suffixes[i];
        if (m.surface != g.suffixes[i].first ||
            affix_class(m.class_id).name != g.suffixes[i].second) {
            detail = std::string(g.word) + " -> " + flat(best);
            return false;
        }
    }
    return true;
}

int run_cli_corpus(const std::string& corpus_path, const std::string& out_path, long& max_rss_kb,
                   double& wall_seconds) {
    auto start = Clock::now();
    pid_t pid = fork();
    if (pid == 0) {
        if (!freopen(corpus_path.c_str(), "r", stdin)) _exit(90);
        if (!freopen(out_path.c_str(), "w", stdout)) _exit(91);
        execl(UZMORPH_CLI_PATH, UZMORPH_CLI_PATH, "stem", static_cast<char*>(nullptr));
        _exit(92);
    }
    int status = 0;
    struct rusage usage {};
    wait4(pid, &status, 0, &usage);
    wall_seconds = seconds_since(start);
    max_rss_kb = usage.ru_maxrss;
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

int main() {
    // Criterion 1: inventory counts.
    {
        auto start = Clock::now();
        bool pass = true;
        std::string detail;
        try {
            Inventory inv = load_inventory(data_file("uzbek_affixes.tsv"));
            const auto& expected = expected_counts();
            std::array<ClassCount, 7> actual{};
            for (const auto& e : inv.entries)
                ++actual[static_cast<std::size_t>(e.class_id - 1)].affixes;
            for (const auto& a : inv.allomorphs)
                ++actual[static_cast<std::size_t>(inv.entry_of(a).class_id - 1)].allomorphs;
            for (std::size_t i = 0; i < 7; ++i)
                if (actual[i].affixes != expected[i].affixes ||
                    actual[i].allomorphs != expected[i].allomorphs)
                    pass = false;
            pass = pass && inv.entries.size() == 172 && inv.allomorphs.size() == 222;
            double t = seconds_since(start);
            pass = pass && t < 1.0;
            std::ostringstream os;
            os << "inventory 172 affixes / 222 allomorphs, per-class counts exact, loaded in "
               << t << " s";
            detail = os.str();
        } catch (const std::exception& e) {
            pass = false;
            detail = e.what();
        }
        report(1, pass, detail);
    }

    Analyzer analyzer(load_graph(data_file("uzbek_affixes.tsv"),
                                 data_file("uzbek_morphotactics.tsv")));
    const MorphotacticGraph& graph = analyzer.graph();

    std::vector<std::string> roundtrip_inputs;  // every acceptance input
    long roundtrip_checked = 0;
    long roundtrip_bad = 0;
    auto check_roundtrip = [&](const std::string& word, const std::vector<Analysis>& analyses) {
        for (const auto& a : analyses) {
            ++roundtrip_checked;
            if (reconstruct(a) != word) ++roundtrip_bad;
        }
    };

    // Criterion 2: golden analyses.
    {
        std::vector<GoldenCase> goldens = {
            {"bajartirilmayaptimi",
             "bajar",
             {{"tir", "RelativeVerb"},
              {"il", "RelativeVerb"},
              {"ma", "Verb"},
              {"yap", "TensePerson"},
              {"ti", "TensePerson"},
              {"mi", "TensePerson"}}},
            {"boryapsiz", "bor", {{"yap", "TensePerson"}, {"siz", "TensePerson"}}},
            {"kitoblarim", "kitob", {{"lar", "Noun"}, {"im", "Noun"}}},
            {"dadamlar", "dada", {{"m", "Noun"}, {"lar", "Noun"}}},
            {"dehqonchilik", "dehqon", {{"chilik", "Derivational"}}},
        };
        bool pass = true;
        std::string detail = "five reference segmentations reproduce exactly";
        for (const auto& g : goldens) {
            std::string why;
            if (!check_golden(analyzer, g, why)) {
                pass = false;
                detail = "mismatch: " + why;
                break;
            }
            check_roundtrip(g.word, analyzer.analyze(g.word, all_config()));
            roundtrip_inputs.push_back(g.word);
        }
        // gloss-level checks the class labels alone do not cover
        auto kitob = analyzer.analyze("kitoblarim").front();
        auto dada = analyzer.analyze("dadamlar").front();
        if (kitob.suffixes[0].gloss != "plural" || kitob.suffixes[1].gloss != "possessive 1sg" ||
            dada.suffixes[0].gloss != "possessive 1sg" || dada.suffixes[1].gloss != "greeting") {
            pass = false;
            detail = "plural/possessive/greeting glosses wrong";
        }
        report(2, pass, detail);
    }

    // Criterion 3: per-class pipeline correctness.
    {
        auto start = Clock::now();
        bool pass = true;
        std::string detail;
        for (int c = 1; c <= 7 && pass; ++c) {
            const ClassMachine& m = graph.machines[static_cast<std::size_t>(c - 1)];
            auto ltr_lang = fsm::enumerate_language(m.ltr, 4);
            auto rtl_lang = fsm::enumerate_language(m.rtl, 4);
            if (rtl_lang != fsm::reverse_language(ltr_lang)) {
                pass = false;
                detail = "language mismatch in class " + std::to_string(c);
            }
            std::set<std::pair<fsm::State, fsm::Label>> keys;
            for (const auto& e : m.rtl.edges) {
                if (e.label == fsm::kEpsilon) {
                    pass = false;
                    detail = "epsilon edge in class " + std::to_string(c) + " DFA";
                }
                if (!keys.insert({e.from, e.label}).second) {
                    pass = false;
                    detail = "nondeterministic edge in class " + std::to_string(c) + " DFA";
                }
            }
        }
        double t = seconds_since(start);
        if (t >= 10.0) {
            pass = false;
            detail = "runtime " + std::to_string(t) + " s exceeds 10 s";
        }
        if (pass) {
            std::ostringstream os;
            os << "all 7 right-to-left DFAs mirror their left-to-right languages (len <= 4), "
               << "deterministic and epsilon-free, in " << t << " s";
            detail = os.str();
        }
        report(3, pass, detail);
    }

    // Criteria 4 and 6 share the generated word sets.
    Synthesizer synth{graph, std::mt19937(20260808)};
    std::vector<std::string> random_words;
    std::vector<std::pair<std::string, std::string>> synth_words;
    for (int i = 0; i < 10000; ++i) random_words.push_back(synth.random_string());
    for (int i = 0; i < 10000; ++i) synth_words.push_back(synth.synthesize());

    // Criterion 4: oracle equivalence.
    {
        auto start = Clock::now();
        long discrepancies = 0;
        std::string first_bad;
        AnalyzerConfig config = all_config();
        auto compare = [&](const std::string& word) {
            auto got = analyzer.analyze(word, config);
            auto expected = enumerate_segmentations_oracle(word, graph, config);
            check_roundtrip(word, got);
            roundtrip_inputs.push_back(word);
            if (expected.empty()) {
                bool ok = got.size() == 1 && got[0].unanalyzed && got[0].stem == word;
                if (!ok) {
                    ++discrepancies;
                    if (first_bad.empty()) first_bad = word;
                }
                return;
            }
            if (unranked(got) != unranked(expected)) {
                ++discrepancies;
                if (first_bad.empty()) first_bad = word;
            }
        };
        for (const auto& w : random_words) compare(w);
        for (const auto& [w, stem] : synth_words) compare(w);
        double t = seconds_since(start);
        bool pass = discrepancies == 0 && t < 60.0;
        std::ostringstream os;
        if (discrepancies)
            os << discrepancies << " discrepancies (first: " << first_bad << ")";
        else
            os << "analyze(emit_all) equals the brute-force oracle on 20000 words in " << t
               << " s";
        report(4, pass, os.str());
    }

    // Criterion 5: round-trip reconstruction.
    {
        std::ostringstream os;
        os << roundtrip_checked << " analyses over " << roundtrip_inputs.size()
           << " inputs reconstruct their word exactly";
        report(5, roundtrip_bad == 0 && roundtrip_checked > 0,
               roundtrip_bad ? std::to_string(roundtrip_bad) + " round-trip failures" : os.str());
    }

    // Criterion 6: synthesis recovery.
    {
        long recovered = 0;
        std::vector<std::string> failures;
        for (const auto& [word, stem] : synth_words) {
            auto best = analyzer.analyze(word).front();
            if (best.stem == stem) {
                ++recovered;
            } else if (failures.size() < 200) {
                failures.push_back(word + " expected stem '" + stem + "' got " + flat(best));
            }
        }
        double rate = 100.0 * static_cast<double>(recovered) /
                      static_cast<double>(synth_words.size());
        bool pass = rate >= 99.0;
        for (const auto& f : failures) std::cerr << "  [recovery miss] " << f << '\n';
        std::ostringstream os;
        os << "best-analysis stem recovery " << rate << "% (" << recovered << "/"
           << synth_words.size() << "), " << failures.size() << " misses logged";
        report(6, pass, os.str());
    }

    // Criterion 7: streaming throughput.
    {
        const std::string corpus_path = "/tmp/uzmorph_corpus.txt";
        const std::string out_path = "/tmp/uzmorph_corpus_stems.txt";
        const long kTokens = 1000000;
        {
            std::ofstream corpus(corpus_path);
            std::mt19937 rng(7);
            std::uniform_int_distribution<std::size_t> pick(0, synth_words.size() - 1);
            for (long i = 0; i < kTokens; ++i) {
                corpus << synth_words[pick(rng)].first;
                corpus << ((i + 1) % 10 == 0 ? '\n' : ' ');
            }
            corpus << '\n';
        }
        long max_rss_kb = 0;
        double wall = 0;
        int exit_code = run_cli_corpus(corpus_path, out_path, max_rss_kb, wall);
        long lines = 0;
        {
            std::ifstream out(out_path);
            std::string line;
            while (std::getline(out, line)) ++lines;
        }
        bool pass = exit_code == 0 && lines == kTokens && max_rss_kb < 512 * 1024;
        std::ostringstream os;
        os << "CLI stemmed " << lines << " tokens in " << wall << " s ("
           << static_cast<long>(static_cast<double>(kTokens) / wall) << " tokens/s), peak RSS "
           << max_rss_kb / 1024 << " MB (exit " << exit_code << ")";
        report(7, pass, os.str());
        std::remove(corpus_path.c_str());
        std::remove(out_path.c_str());
    }

    std::cout << (g_failures ? "ACCEPTANCE: FAILED" : "ACCEPTANCE: OK") << " (" << (7 - g_failures)
              << "/7 criteria)" << std::endl;
    return g_failures;
}
