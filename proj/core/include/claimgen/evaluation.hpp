#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "claimgen/lm.hpp"
#include "claimgen/scoring.hpp"

namespace claimgen::eval {

// One evaluation item: a claim plus the condition string it is scored under.
struct EvalItem {
    std::string condition;
    std::string text;
};

enum class PerplexityMode { pooled, per_claim_mean };

PerplexityMode perplexity_mode_from_string(std::string_view s);
std::string to_string(PerplexityMode mode);

// Pooled mode: exp(-(sum of log-probs) / (sum of token counts)) across the
// whole item set. per_claim_mean averages each item's own perplexity instead.
double perplexity(lm::LanguageModel& model, const std::vector<EvalItem>& items,
                  PerplexityMode mode = PerplexityMode::pooled);

// For each item, the claim is scored under its real condition and under
// n_distractors conditions drawn without replacement from the pool (real one
// excluded). A hit requires the real condition's score to be the strict
// maximum; ties count as failures.
double prefix_ranking_accuracy(lm::LanguageModel& model, const std::vector<EvalItem>& items,
                               const std::vector<std::string>& condition_pool, int n_distractors,
                               std::uint64_t seed);

struct Stat {
    double mean = 0.0;
    double stddev = 0.0; // population std over the per-sample means
};

// n_samples subsets of sample_size indices (without replacement within a
// subset, truncated to the population when smaller), drawn independently.
std::vector<std::vector<std::size_t>> sample_index_sets(std::size_t n_items, int n_samples,
                                                        int sample_size, std::uint64_t seed);

// Mean and std of per-sample means over random subsets of values.
Stat sampled_statistic(const std::vector<double>& values, int n_samples, int sample_size,
                       std::uint64_t seed);

struct EvalConfig {
    int n_samples = 10;
    int sample_size = 100;
    int n_distractors = 9;
    std::uint64_t seed = 0;
    PerplexityMode ppl_mode = PerplexityMode::pooled;
};

// A metric either produced a statistic or carries the error that stopped it.
struct MetricStat {
    std::optional<Stat> stat;
    std::string error;
};

struct EvalReport {
    MetricStat perplexity;
    MetricStat prefix_rank_acc;
    MetricStat pred_quality;
    MetricStat pred_stance_abs;
    int n_samples = 0;
    int sample_size = 0;
    std::uint64_t seed = 0;
    std::size_t n_eval_items = 0;
    std::size_t n_texts = 0;
};

// Perplexity and prefix ranking run over eval_items (sharing one set of
// sample index draws); predicted quality and absolute stance run over the
// texts' stored scores, falling back to the matching scorer when a text is
// unscored. Failures are recorded per metric, never thrown.
EvalReport eval_report(lm::LanguageModel& model, const std::vector<GeneratedText>& gts,
                       const std::vector<const scoring::Scorer*>& scorers,
                       const std::vector<EvalItem>& eval_items, const EvalConfig& config);

} // namespace claimgen::eval
