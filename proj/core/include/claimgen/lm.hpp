#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "claimgen/types.hpp"

namespace claimgen::lm {

struct SamplingConfig {
    int top_k = 40;
    double temperature = 0.7;
    int max_new_tokens = 50;
    std::optional<std::uint64_t> seed;

    void validate() const; // top_k >= 1, temperature > 0, max_new_tokens >= 1
};

struct TokenScore {
    std::string token;
    double log_prob;
};

// Model boundary: fine-tuning, sampling, and log-probability scoring live
// behind this interface so metric code never touches backend specifics.
class LanguageModel {
public:
    virtual ~LanguageModel() = default;

    virtual std::string id() const = 0;
    virtual bool can_finetune() const = 0;
    virtual bool can_score() const = 0;

    // One training pass unit; steps means sequence visits, round-robin.
    virtual void train(const std::vector<TrainingSequence>& sequences, int steps) = 0;

    // Samples one continuation for prompt + delimiter. The returned string is
    // the continuation only; generation stops at the end marker or at
    // max_new_tokens, whichever comes first.
    virtual std::string sample(const std::string& prompt, const SamplingConfig& config) = 0;

    // Sum of natural-log token probabilities of text given condition.
    virtual double score(const std::string& condition, const std::string& text) = 0;

    virtual std::vector<TokenScore> token_scores(const std::string& condition,
                                                 const std::string& text) = 0;

    virtual std::size_t count_tokens(const std::string& text) const = 0;

    virtual const std::string& delimiter() const = 0;
    virtual const std::string& eos_marker() const = 0;
};

// Contract-checking wrappers around the backend interface.

// Requires can_finetune and a non-empty sequence list.
void fine_tune(LanguageModel& model, const std::vector<TrainingSequence>& sequences, int steps);

// Exactly n raw continuations. Per-draw seeds are derived from config.seed
// and the draw index, so the same call is reproducible end to end. Outputs
// never contain the delimiter or the end marker and never exceed
// max_new_tokens backend tokens.
std::vector<std::string> generate(LanguageModel& model, const std::string& prompt,
                                  const SamplingConfig& config, int n);

// Requires can_score and non-empty text; result is <= 0.
double sequence_log_prob(LanguageModel& model, const std::string& condition,
                         const std::string& text);

} // namespace claimgen::lm
