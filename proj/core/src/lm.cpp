#include "claimgen/lm.hpp"

#include "claimgen/error.hpp"
#include "claimgen/random.hpp"

namespace claimgen::lm {

void SamplingConfig::validate() const {
    std::vector<std::string> violations;
    if (top_k < 1) violations.push_back("sampling.top_k must be >= 1");
    if (!(temperature > 0.0)) violations.push_back("sampling.temperature must be > 0");
    if (max_new_tokens < 1) violations.push_back("sampling.max_new_tokens must be >= 1");
    if (!violations.empty()) throw ConfigError(violations);
}

void fine_tune(LanguageModel& model, const std::vector<TrainingSequence>& sequences, int steps) {
    if (!model.can_finetune())
        throw BackendError("model \"" + model.id() + "\" does not support fine-tuning");
    if (sequences.empty()) throw Error("fine_tune: empty sequence list");
    if (steps < 1) throw Error("fine_tune: steps must be >= 1");
    model.train(sequences, steps);
}

std::vector<std::string> generate(LanguageModel& model, const std::string& prompt,
                                  const SamplingConfig& config, int n) {
    if (prompt.empty()) throw Error("generate: empty prompt");
    if (n < 1) throw Error("generate: n must be >= 1");
    config.validate();

    std::vector<std::string> outputs;
    outputs.reserve(static_cast<std::size_t>(n));
    std::uint64_t base = config.seed.value_or(0);
    for (int i = 0; i < n; ++i) {
        SamplingConfig draw = config;
        draw.seed = rng::splitmix64(base + static_cast<std::uint64_t>(i));
        std::string raw = model.sample(prompt, draw);

        // Belt and braces: a backend must stop at its own markers, but the
        // adapter guarantees they never leak into outputs.
        if (auto pos = raw.find(model.eos_marker()); pos != std::string::npos)
            raw.erase(pos);
        if (auto pos = raw.find(model.delimiter()); pos != std::string::npos)
            raw.erase(pos);
        if (model.count_tokens(raw) > static_cast<std::size_t>(config.max_new_tokens))
            throw BackendError("model \"" + model.id() + "\" exceeded max_new_tokens");
        outputs.push_back(std::move(raw));
    }
    return outputs;
}

double sequence_log_prob(LanguageModel& model, const std::string& condition,
                         const std::string& text) {
    if (!model.can_score())
        throw BackendError("model \"" + model.id() + "\" does not support scoring");
    if (text.empty()) throw Error("sequence_log_prob: empty text");
    double lp = model.score(condition, text);
    if (lp > 0.0)
        throw BackendError("model \"" + model.id() + "\" returned a positive log-probability");
    return lp;
}

} // namespace claimgen::lm
