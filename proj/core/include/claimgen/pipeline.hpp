#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "claimgen/corpus.hpp"
#include "claimgen/lm.hpp"
#include "claimgen/scoring.hpp"

namespace claimgen::pipeline {

struct Framing {
    corpus::FramingMode mode = corpus::FramingMode::none;
    std::string aspect;                     // aspect framing only
    const AspectTable* aspects = nullptr;   // aspect framing only
    corpus::CorpusOptions options;
};

// n texts for one topic: prompt per framing mode, raw and cleaned output,
// whitespace token counts, scores unset. Ids are "<topic_id>#007" in draw
// order.
std::vector<GeneratedText> generate_for_topic(lm::LanguageModel& model, const Topic& topic, int n,
                                              const lm::SamplingConfig& config,
                                              const Framing& framing = {});

struct SelectionReport {
    std::set<std::string> selected_ids;
    std::size_t duplicates_dropped = 0; // exact-text duplicates within a topic
    std::size_t empties_dropped = 0;    // cleaned to the empty string
    std::vector<std::string> failed_topics;
};

// Per topic: drop exact-text duplicates (the lowest id stays) and empty
// texts, score the rest (the value lands on the field matching the scorer's
// kind; stance ranks by absolute value), then mark the top k by score
// descending, ties to the lower id. A scorer failure abandons that one
// topic's selection and is reported.
SelectionReport select_top_k(std::vector<GeneratedText>& gts, const scoring::Scorer& scorer,
                             std::size_t k);

struct PipelineRun {
    std::string model_id;
    std::size_t n_per_topic = 0;
    std::size_t k_selected = 0;
    lm::SamplingConfig sampling;
    std::vector<GeneratedText> outputs;
    SelectionReport selection;
    std::map<std::string, std::string> topic_errors; // topic id -> message
};

// Generation then selection over all topics. A topic's generation failure is
// recorded and does not abort the others.
PipelineRun run_pipeline(lm::LanguageModel& model, const std::vector<Topic>& topics,
                         const scoring::Scorer& scorer, int n, std::size_t k,
                         const lm::SamplingConfig& config, const Framing& framing = {});

struct LengthStat {
    double mean_tokens = 0.0;
    std::size_t count = 0;
};

// Whitespace-token means per class. The classifier returns a class name or
// nullopt to leave a text out; empty classes are simply absent.
std::map<std::string, LengthStat> length_stats(
    const std::vector<GeneratedText>& gts,
    const std::function<std::optional<std::string>(const GeneratedText&)>& classify);

} // namespace claimgen::pipeline
