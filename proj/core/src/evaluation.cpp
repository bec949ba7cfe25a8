#include "claimgen/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

#include "claimgen/error.hpp"
#include "claimgen/random.hpp"

namespace claimgen::eval {

PerplexityMode perplexity_mode_from_string(std::string_view s) {
    if (s == "pooled") return PerplexityMode::pooled;
    if (s == "per_claim_mean") return PerplexityMode::per_claim_mean;
    throw ParseError("unknown perplexity mode: \"" + std::string(s) + "\"");
}

std::string to_string(PerplexityMode mode) {
    return mode == PerplexityMode::pooled ? "pooled" : "per_claim_mean";
}

double perplexity(lm::LanguageModel& model, const std::vector<EvalItem>& items,
                  PerplexityMode mode) {
    if (items.empty()) throw Error("perplexity: no items");
    if (mode == PerplexityMode::pooled) {
        double log_prob_sum = 0.0;
        std::size_t token_sum = 0;
        for (const auto& item : items) {
            log_prob_sum += lm::sequence_log_prob(model, item.condition, item.text);
            token_sum += model.count_tokens(item.text);
        }
        if (token_sum == 0) throw Error("perplexity: zero tokens in item set");
        return std::exp(-log_prob_sum / static_cast<double>(token_sum));
    }
    double sum = 0.0;
    for (const auto& item : items) {
        std::size_t tokens = model.count_tokens(item.text);
        if (tokens == 0) throw Error("perplexity: item with zero tokens");
        sum += std::exp(-lm::sequence_log_prob(model, item.condition, item.text) /
                        static_cast<double>(tokens));
    }
    return sum / static_cast<double>(items.size());
}

double prefix_ranking_accuracy(lm::LanguageModel& model, const std::vector<EvalItem>& items,
                               const std::vector<std::string>& condition_pool, int n_distractors,
                               std::uint64_t seed) {
    if (items.empty()) throw Error("prefix ranking: no items");
    if (n_distractors < 1) throw Error("prefix ranking: n_distractors must be >= 1");
    if (condition_pool.size() <= static_cast<std::size_t>(n_distractors))
        throw Error("prefix ranking: condition pool must exceed n_distractors");

    rng::Engine engine(seed);
    std::size_t hits = 0;
    for (const auto& item : items) {
        std::vector<std::string> candidates;
        candidates.reserve(condition_pool.size());
        for (const auto& c : condition_pool)
            if (c != item.condition) candidates.push_back(c);
        if (candidates.size() < static_cast<std::size_t>(n_distractors))
            throw Error("prefix ranking: pool too small once the real condition is excluded");

        double real = lm::sequence_log_prob(model, item.condition, item.text);
        bool strict_max = true;
        for (std::size_t i :
             rng::sample_without_replacement(engine, candidates.size(),
                                             static_cast<std::size_t>(n_distractors))) {
            if (lm::sequence_log_prob(model, candidates[i], item.text) >= real) {
                strict_max = false;
                break;
            }
        }
        if (strict_max) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(items.size());
}

std::vector<std::vector<std::size_t>> sample_index_sets(std::size_t n_items, int n_samples,
                                                        int sample_size, std::uint64_t seed) {
    if (n_items == 0) throw Error("sampling: empty population");
    if (n_samples < 1 || sample_size < 1)
        throw Error("sampling: n_samples and sample_size must be >= 1");
    const std::size_t take = std::min(n_items, static_cast<std::size_t>(sample_size));
    rng::Engine engine(seed);
    std::vector<std::vector<std::size_t>> sets;
    sets.reserve(static_cast<std::size_t>(n_samples));
    for (int s = 0; s < n_samples; ++s)
        sets.push_back(rng::sample_without_replacement(engine, n_items, take));
    return sets;
}

namespace {

Stat stat_over(const std::vector<double>& sample_means) {
    Stat st;
    for (double m : sample_means) st.mean += m;
    st.mean /= static_cast<double>(sample_means.size());
    double var = 0.0;
    for (double m : sample_means) var += (m - st.mean) * (m - st.mean);
    st.stddev = std::sqrt(var / static_cast<double>(sample_means.size()));
    return st;
}

} // namespace

Stat sampled_statistic(const std::vector<double>& values, int n_samples, int sample_size,
                       std::uint64_t seed) {
    auto sets = sample_index_sets(values.size(), n_samples, sample_size, seed);
    std::vector<double> means;
    means.reserve(sets.size());
    for (const auto& set : sets) {
        double m = 0.0;
        for (std::size_t i : set) m += values[i];
        means.push_back(m / static_cast<double>(set.size()));
    }
    return stat_over(means);
}

namespace {

MetricStat guarded(const std::function<Stat()>& compute) {
    MetricStat ms;
    try {
        ms.stat = compute();
    } catch (const std::exception& e) {
        ms.error = e.what();
    }
    return ms;
}

// Stored score when present, otherwise the first scorer of the wanted kind.
std::vector<double> text_scores(const std::vector<GeneratedText>& gts,
                                const std::vector<const scoring::Scorer*>& scorers,
                                scoring::ScorerKind kind) {
    const scoring::Scorer* fallback = nullptr;
    for (const auto* s : scorers)
        if (s->kind() == kind) fallback = s;

    std::vector<double> values;
    values.reserve(gts.size());
    for (const auto& gt : gts) {
        std::optional<double> stored;
        if (kind == scoring::ScorerKind::quality) stored = gt.quality_score;
        else if (kind == scoring::ScorerKind::stance) stored = gt.stance_score;
        else stored = gt.cd_score;
        double v;
        if (stored) v = *stored;
        else if (fallback) v = fallback->score(gt.text, gt.prompt_used);
        else
            throw Error("text \"" + gt.id + "\" has no stored " + to_string(kind) +
                        " score and no scorer of that kind was supplied");
        values.push_back(kind == scoring::ScorerKind::stance ? scoring::absolute_stance(v) : v);
    }
    return values;
}

} // namespace

EvalReport eval_report(lm::LanguageModel& model, const std::vector<GeneratedText>& gts,
                       const std::vector<const scoring::Scorer*>& scorers,
                       const std::vector<EvalItem>& eval_items, const EvalConfig& config) {
    EvalReport report;
    report.n_samples = config.n_samples;
    report.sample_size = config.sample_size;
    report.seed = config.seed;
    report.n_eval_items = eval_items.size();
    report.n_texts = gts.size();

    // Perplexity and prefix ranking share the same subset draws so both
    // metrics describe the same samples.
    std::vector<std::vector<std::size_t>> sets;
    std::string set_error;
    try {
        sets = sample_index_sets(eval_items.size(), config.n_samples, config.sample_size,
                                 config.seed);
    } catch (const std::exception& e) {
        set_error = e.what();
    }

    if (!set_error.empty()) {
        report.perplexity.error = set_error;
        report.prefix_rank_acc.error = set_error;
    } else {
        report.perplexity = guarded([&] {
            std::vector<double> per_sample;
            for (const auto& set : sets) {
                std::vector<EvalItem> subset;
                subset.reserve(set.size());
                for (std::size_t i : set) subset.push_back(eval_items[i]);
                per_sample.push_back(perplexity(model, subset, config.ppl_mode));
            }
            return stat_over(per_sample);
        });

        report.prefix_rank_acc = guarded([&] {
            std::vector<std::string> pool;
            std::set<std::string> seen;
            for (const auto& item : eval_items)
                if (seen.insert(item.condition).second) pool.push_back(item.condition);
            std::vector<double> per_sample;
            for (std::size_t s = 0; s < sets.size(); ++s) {
                std::vector<EvalItem> subset;
                subset.reserve(sets[s].size());
                for (std::size_t i : sets[s]) subset.push_back(eval_items[i]);
                per_sample.push_back(prefix_ranking_accuracy(
                    model, subset, pool, config.n_distractors,
                    rng::splitmix64(config.seed + s + 1)));
            }
            return stat_over(per_sample);
        });
    }

    report.pred_quality = guarded([&] {
        return sampled_statistic(text_scores(gts, scorers, scoring::ScorerKind::quality),
                                 config.n_samples, config.sample_size, config.seed);
    });
    report.pred_stance_abs = guarded([&] {
        return sampled_statistic(text_scores(gts, scorers, scoring::ScorerKind::stance),
                                 config.n_samples, config.sample_size, config.seed);
    });
    return report;
}

} // namespace claimgen::eval
