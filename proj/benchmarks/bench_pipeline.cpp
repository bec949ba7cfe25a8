// Microbenchmarks for the hot paths: text cleaning, toy backend sampling and
// scoring, candidate selection, and the similarity scorer used for novelty
// matching.

#include <benchmark/benchmark.h>

#include <sstream>
#include <string>
#include <vector>

#include "claimgen/evaluation.hpp"
#include "claimgen/pipeline.hpp"
#include "claimgen/scoring.hpp"
#include "claimgen/text_clean.hpp"
#include "claimgen/toy_lm.hpp"

using namespace claimgen;

namespace {

std::vector<Topic> bench_topics(int n) {
    std::vector<Topic> topics;
    for (int i = 0; i < n; ++i) {
        Topic t;
        t.id = "t" + std::to_string(i);
        t.text = "We should fund transit line " + std::to_string(i);
        t.split = Split::test;
        topics.push_back(std::move(t));
    }
    return topics;
}

std::vector<std::string> bench_vocab(const std::vector<Topic>& topics) {
    std::vector<std::string> vocabulary;
    for (const auto& t : topics) {
        std::istringstream in(t.text);
        std::string w;
        while (in >> w) vocabulary.push_back(w);
    }
    std::sort(vocabulary.begin(), vocabulary.end());
    vocabulary.erase(std::unique(vocabulary.begin(), vocabulary.end()), vocabulary.end());
    return vocabulary;
}

std::vector<TrainingSequence> bench_sequences(int n) {
    lm::ToyLmOptions opts;
    std::vector<TrainingSequence> sequences;
    for (int i = 0; i < n; ++i) {
        TrainingSequence s;
        s.prompt = "We should fund transit line " + std::to_string(i);
        s.completion = "line " + std::to_string(i) + " connects the east and west districts";
        s.rendered = s.prompt + opts.delimiter + s.completion + opts.eos_marker;
        sequences.push_back(std::move(s));
    }
    return sequences;
}

void BM_CleanText(benchmark::State& state) {
    std::string raw = "A  (noisy)   claim \xc3\xa9 with 'quotes' and\tcontrol\x01 bytes `here` ";
    std::string body;
    for (int i = 0; i < 8; ++i) body += raw;
    for (auto _ : state) {
        benchmark::DoNotOptimize(lm::clean_text(body));
    }
    state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(body.size()));
}
BENCHMARK(BM_CleanText);

void BM_ToySample(benchmark::State& state) {
    auto topics = bench_topics(32);
    auto model = lm::ToyLm::uniform(bench_vocab(topics), {});
    lm::SamplingConfig config;
    config.seed = 7;
    for (auto _ : state) {
        benchmark::DoNotOptimize(model.sample(topics[0].text, config));
    }
}
BENCHMARK(BM_ToySample);

void BM_SequenceLogProb(benchmark::State& state) {
    auto sequences = bench_sequences(64);
    auto model = lm::ToyLm::from_sequences(sequences);
    lm::fine_tune(model, sequences, 256);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            lm::sequence_log_prob(model, sequences[5].prompt, sequences[5].completion));
    }
}
BENCHMARK(BM_SequenceLogProb);

void BM_SelectTopK(benchmark::State& state) {
    auto topics = bench_topics(static_cast<int>(state.range(0)));
    auto model = lm::ToyLm::uniform(bench_vocab(topics), {});
    lm::SamplingConfig config;
    config.seed = 11;
    std::vector<GeneratedText> gts;
    for (const auto& t : topics) {
        auto batch = pipeline::generate_for_topic(model, t, 20, config);
        gts.insert(gts.end(), batch.begin(), batch.end());
    }
    scoring::WordDiversityScorer scorer;
    for (auto _ : state) {
        auto copy = gts;
        benchmark::DoNotOptimize(pipeline::select_top_k(copy, scorer, 7));
    }
}
BENCHMARK(BM_SelectTopK)->Arg(8)->Arg(96);

void BM_Perplexity(benchmark::State& state) {
    auto sequences = bench_sequences(50);
    auto model = lm::ToyLm::from_sequences(sequences);
    lm::fine_tune(model, sequences, 500);
    std::vector<eval::EvalItem> items;
    for (const auto& s : sequences) items.push_back({s.prompt, s.completion});
    for (auto _ : state) {
        benchmark::DoNotOptimize(eval::perplexity(model, items));
    }
}
BENCHMARK(BM_Perplexity);

void BM_CharNgramCosine(benchmark::State& state) {
    scoring::CharNgramCosineScorer scorer;
    std::string a = "night trains replace short regional flights across the plain";
    std::string b = "short regional flights are replaced by night trains in practice";
    for (auto _ : state) {
        benchmark::DoNotOptimize(scorer.score(a, b));
    }
}
BENCHMARK(BM_CharNgramCosine);

} // namespace

BENCHMARK_MAIN();
