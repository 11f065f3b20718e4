#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "uzmorph/analyzer.hpp"

namespace {

const uzmorph::Analyzer& analyzer() {
    static const uzmorph::Analyzer instance(uzmorph::load_graph(
        std::string(UZMORPH_DATA_DIR) + "/uzbek_affixes.tsv",
        std::string(UZMORPH_DATA_DIR) + "/uzbek_morphotactics.tsv"));
    return instance;
}

// A mixed bag of real and synthetic corpus-ish tokens.
const std::vector<std::string>& sample_words() {
    static const std::vector<std::string> words = {
        "bajartirilmayaptimi", "boryapsiz",  "kitoblarim", "dadamlar",   "dehqonchilik",
        "olma",                "gul",        "serhosil",   "ishchilarimizning",
        "o'qituvchilar",       "bola",       "maktabda",   "yozildi",    "ko'tarolmadi",
        "xullas",              "o'zbekiston", "tilshunoslik", "paxtakor", "o'ntacha",
        "birinchi",
    };
    return words;
}

void BM_Stem(benchmark::State& state) {
    const auto& a = analyzer();
    const auto& words = sample_words();
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(a.stem(words[i % words.size()]));
        ++i;
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()));
}
BENCHMARK(BM_Stem);

void BM_AnalyzeAll(benchmark::State& state) {
    const auto& a = analyzer();
    uzmorph::AnalyzerConfig config;
    config.emit_all = true;
    config.max_analyses = 1024;
    const auto& words = sample_words();
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(a.analyze(words[i % words.size()], config));
        ++i;
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()));
}
BENCHMARK(BM_AnalyzeAll);

void BM_GraphBuild(benchmark::State& state) {
    for (auto _ : state) {
        auto graph = uzmorph::load_graph(
            std::string(UZMORPH_DATA_DIR) + "/uzbek_affixes.tsv",
            std::string(UZMORPH_DATA_DIR) + "/uzbek_morphotactics.tsv");
        benchmark::DoNotOptimize(graph);
    }
}
BENCHMARK(BM_GraphBuild);

}  // namespace

BENCHMARK_MAIN();
