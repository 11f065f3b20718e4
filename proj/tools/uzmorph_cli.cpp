// Command-line front end: corpus-scale stemming and analysis, grammar
// validation, machine export.
//
// Exit codes: 0 success, 1 validation or setup failure, 2 I/O failure.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "uzmorph/analyzer.hpp"

namespace {

using uzmorph::Analysis;
using uzmorph::Analyzer;
using uzmorph::AnalyzerConfig;

#ifndef UZMORPH_DATA_DIR
#define UZMORPH_DATA_DIR "."
#endif

constexpr int kExitOk = 0;
constexpr int kExitSetup = 1;
constexpr int kExitIo = 2;

std::string default_grammar_path() {
    if (const char* env = std::getenv("UZMORPH_GRAMMAR")) return env;
    return std::string(UZMORPH_DATA_DIR) + "/uzbek_affixes.tsv";
}

std::string sibling_morphotactics(const std::string& grammar_path) {
    auto slash = grammar_path.find_last_of('/');
    std::string dir = slash == std::string::npos ? "." : grammar_path.substr(0, slash);
    return dir + "/uzbek_morphotactics.tsv";
}

struct Options {
    std::string grammar = default_grammar_path();
    std::string morphotactics;  // defaults to grammar sibling
    int min_stem_len = 2;
    bool all = false;
    std::string format = "tsv";
    int jobs = 1;
    std::vector<std::string> inputs;

    AnalyzerConfig config() const {
        AnalyzerConfig c;
        c.min_stem_len = min_stem_len;
        c.emit_all = all;
        if (all) c.max_analyses = 1024;
        return c;
    }
};

/// Replaces bytes that do not form valid UTF-8 with '?'.
std::string replace_invalid_utf8(const std::string& line, bool& replaced) {
    std::string out;
    out.reserve(line.size());
    std::size_t i = 0;
    while (i < line.size()) {
        auto b = static_cast<unsigned char>(line[i]);
        std::size_t len = b < 0x80 ? 1 : (b >> 5) == 0x6 ? 2 : (b >> 4) == 0xe ? 3 : (b >> 3) == 0x1e ? 4 : 0;
        bool ok = len > 0 && i + len <= line.size();
        for (std::size_t k = 1; ok && k < len; ++k)
            ok = (static_cast<unsigned char>(line[i + k]) & 0xc0) == 0x80;
        if (ok) {
            out.append(line, i, len);
            i += len;
        } else {
            out += '?';
            replaced = true;
            i += 1;
        }
    }
    return out;
}

/// Whitespace tokenization with hyphen splitting; surrounding punctuation is
/// handled by normalize().
std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> tokens;
    std::string current;
    auto flush = [&] {
        if (!current.empty()) {
            tokens.push_back(current);
            current.clear();
        }
    };
    for (char c : line) {
        if (std::isspace(static_cast<unsigned char>(c)) || c == '-')
            flush();
        else
            current += c;
    }
    flush();
    return tokens;
}

std::string class_name(int class_id) { return std::string(uzmorph::affix_class(class_id).name); }

std::string tsv_record(const std::string& token, const Analysis& a) {
    std::ostringstream os;
    os << token << '\t' << a.stem;
    if (a.prefix) os << '\t' << a.prefix->surface << ':' << class_name(a.prefix->class_id);
    for (const auto& m : a.suffixes) os << '\t' << m.surface << ':' << class_name(m.class_id);
    return os.str();
}

nlohmann::ordered_json json_morpheme(const uzmorph::Morpheme& m) {
    return {{"surface", m.surface}, {"class", class_name(m.class_id)}, {"gloss", m.gloss}};
}

nlohmann::ordered_json json_record(const std::string& token, const std::string& normalized,
                                   const std::vector<Analysis>& analyses, bool utf8_replaced) {
    const Analysis& best = analyses.front();
    nlohmann::ordered_json rec;
    rec["token"] = token;
    rec["normalized"] = normalized;
    rec["stem"] = best.stem;
    auto morphemes = nlohmann::ordered_json::array();
    if (best.prefix) morphemes.push_back(json_morpheme(*best.prefix));
    for (const auto& m : best.suffixes) morphemes.push_back(json_morpheme(m));
    rec["morphemes"] = std::move(morphemes);
    auto flags = nlohmann::ordered_json::array();
    if (best.unanalyzed) flags.push_back("unanalyzed");
    if (utf8_replaced) flags.push_back("invalid-utf8");
    rec["flags"] = std::move(flags);
    if (analyses.size() > 1) {
        auto alternates = nlohmann::ordered_json::array();
        for (std::size_t i = 1; i < analyses.size(); ++i) {
            nlohmann::ordered_json alt;
            alt["stem"] = analyses[i].stem;
            auto ms = nlohmann::ordered_json::array();
            if (analyses[i].prefix) ms.push_back(json_morpheme(*analyses[i].prefix));
            for (const auto& m : analyses[i].suffixes) ms.push_back(json_morpheme(m));
            alt["morphemes"] = std::move(ms);
            alternates.push_back(std::move(alt));
        }
        rec["alternates"] = std::move(alternates);
    }
    return rec;
}

enum class Mode { analyze, stem };

std::string process_line(const Analyzer& analyzer, const Options& opts, const std::string& raw) {
    bool replaced = false;
    std::string line = replace_invalid_utf8(raw, replaced);
    std::ostringstream os;
    for (const auto& token : tokenize(line)) {
        std::string normalized = uzmorph::normalize(token);
        if (normalized.empty()) continue;
        auto analyses = analyzer.analyze(normalized, opts.config());
        if (opts.format == "json") {
            os << json_record(token, normalized, analyses, replaced).dump() << '\n';
        } else if (opts.all) {
            for (const auto& a : analyses) os << tsv_record(token, a) << '\n';
        } else {
            os << tsv_record(token, analyses.front()) << '\n';
        }
    }
    return os.str();
}

std::string stem_line(const Analyzer& analyzer, const Options& opts, const std::string& raw) {
    bool replaced = false;
    std::string line = replace_invalid_utf8(raw, replaced);
    std::ostringstream os;
    for (const auto& token : tokenize(line)) {
        std::string normalized = uzmorph::normalize(token);
        if (normalized.empty()) continue;
        os << analyzer.analyze(normalized, opts.config()).front().stem << '\n';
    }
    return os.str();
}

/// Streams a file line by line; with jobs > 1 lines are processed in batches
/// across threads and written back in input order.
int run_stream(const Analyzer& analyzer, const Options& opts, Mode mode) {
    auto transform = [&](const std::string& line) {
        return mode == Mode::analyze ? process_line(analyzer, opts, line)
                                     : stem_line(analyzer, opts, line);
    };

    auto drain = [&](std::istream& in) {
        if (opts.jobs <= 1) {
            std::string line;
            while (std::getline(in, line)) std::cout << transform(line);
            return;
        }
        const std::size_t batch_size = 1024;
        std::vector<std::string> batch;
        auto flush_batch = [&] {
            if (batch.empty()) return;
            std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(opts.jobs),
                                                        batch.size());
            std::vector<std::string> results(batch.size());
            std::vector<std::thread> pool;
            for (std::size_t w = 0; w < workers; ++w) {
                pool.emplace_back([&, w] {
                    for (std::size_t i = w; i < batch.size(); i += workers)
                        results[i] = transform(batch[i]);
                });
            }
            for (auto& t : pool) t.join();
            for (const auto& r : results) std::cout << r;
            batch.clear();
        };
        std::string line;
        while (std::getline(in, line)) {
            batch.push_back(line);
            if (batch.size() >= batch_size) flush_batch();
        }
        flush_batch();
    };

    if (opts.inputs.empty()) {
        drain(std::cin);
        return kExitOk;
    }
    for (const auto& path : opts.inputs) {
        std::ifstream in(path, std::ios::binary);
        if (!in) {
            std::cerr << "error: cannot open input file: " << path << '\n';
            return kExitIo;
        }
        drain(in);
    }
    return kExitOk;
}

int run_validate(const std::string& grammar_path) {
    uzmorph::Inventory inv;
    try {
        std::ifstream in(grammar_path, std::ios::binary);
        if (!in) {
            std::cerr << "error: cannot open grammar file: " << grammar_path << '\n';
            return kExitIo;
        }
        std::ostringstream buf;
        buf << in.rdbuf();
        inv = uzmorph::parse_inventory(buf.str());
    } catch (const uzmorph::GrammarError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitSetup;
    }

    const auto& expected = uzmorph::expected_counts();
    std::array<uzmorph::ClassCount, 7> actual{};
    for (const auto& e : inv.entries) ++actual[static_cast<std::size_t>(e.class_id - 1)].affixes;
    for (const auto& a : inv.allomorphs)
        ++actual[static_cast<std::size_t>(inv.entry_of(a).class_id - 1)].allomorphs;

    int ok_classes = 0;
    int total_affixes = 0;
    int total_allomorphs = 0;
    for (std::size_t i = 0; i < 7; ++i) {
        bool ok = actual[i].affixes == expected[i].affixes &&
                  actual[i].allomorphs == expected[i].allomorphs;
        if (ok) ++ok_classes;
        total_affixes += actual[i].affixes;
        total_allomorphs += actual[i].allomorphs;
        std::cout << "class " << (i + 1) << " (" << uzmorph::affix_classes()[i].name
                  << "): affixes " << actual[i].affixes << "/" << expected[i].affixes
                  << ", allomorphs " << actual[i].allomorphs << "/" << expected[i].allomorphs
                  << (ok ? " OK" : " MISMATCH") << '\n';
    }
    std::cout << ok_classes << "/7 classes OK, " << total_affixes << " affixes, "
              << total_allomorphs << " allomorphs" << '\n';
    return ok_classes == 7 ? kExitOk : kExitSetup;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"uzmorph: lexicon-free Uzbek morphological analyzer and stemmer"};
    app.require_subcommand(1);

    Options opts;
    auto add_grammar_opts = [&](CLI::App* cmd) {
        cmd->add_option("--grammar", opts.grammar, "Affix table file (env UZMORPH_GRAMMAR)");
        cmd->add_option("--morphotactics", opts.morphotactics,
                        "Ordering table file (default: sibling of --grammar)");
    };
    auto add_analysis_opts = [&](CLI::App* cmd) {
        add_grammar_opts(cmd);
        cmd->add_option("--min-stem-len", opts.min_stem_len, "Minimum stem length")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--jobs", opts.jobs, "Worker threads (output stays in input order)")
            ->check(CLI::PositiveNumber);
        cmd->add_option("files", opts.inputs, "Input files (default: stdin)");
    };

    CLI::App* analyze = app.add_subcommand("analyze", "Per-token analysis records");
    add_analysis_opts(analyze);
    analyze->add_flag("--all", opts.all, "Emit all analyses, best first");
    analyze->add_option("--format", opts.format, "Output format")
        ->check(CLI::IsMember({"tsv", "json"}));

    CLI::App* stem = app.add_subcommand("stem", "One stem per token, newline-delimited");
    add_analysis_opts(stem);

    CLI::App* validate = app.add_subcommand("validate", "Check grammar counts against the tables");
    add_grammar_opts(validate);

    CLI::App* exportcmd = app.add_subcommand("export", "Dump a machine as an edge list");
    std::string target;
    exportcmd->add_option("target", target, "Class id 1..7 or 'main'")->required();
    add_grammar_opts(exportcmd);

    CLI11_PARSE(app, argc, argv);

    if (opts.morphotactics.empty()) opts.morphotactics = sibling_morphotactics(opts.grammar);

    if (validate->parsed()) return run_validate(opts.grammar);

    uzmorph::MorphotacticGraph graph;
    try {
        graph = uzmorph::load_graph(opts.grammar, opts.morphotactics);
    } catch (const uzmorph::GrammarError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitSetup;
    }

    if (exportcmd->parsed()) {
        if (target == "main") {
            std::cout << uzmorph::export_main(graph);
            return kExitOk;
        }
        if (target.size() == 1 && target[0] >= '1' && target[0] <= '7') {
            std::cout << uzmorph::export_class(graph, target[0] - '0');
            return kExitOk;
        }
        std::cerr << "error: unknown export target '" << target << "' (use 1..7 or main)\n";
        return kExitSetup;
    }

    Analyzer analyzer(std::move(graph));
    return run_stream(analyzer, opts, analyze->parsed() ? Mode::analyze : Mode::stem);
}
