#include "claimgen/pipeline.hpp"

#include <algorithm>
#include <cstdio>

#include "claimgen/text_clean.hpp"

namespace claimgen::pipeline {

std::vector<GeneratedText> generate_for_topic(lm::LanguageModel& model, const Topic& topic, int n,
                                              const lm::SamplingConfig& config,
                                              const Framing& framing) {
    if (n < 1) throw Error("generate_for_topic: n must be >= 1");
    std::string prompt = corpus::build_prompt(topic, framing.mode, framing.options,
                                              framing.aspects, framing.aspect);
    std::vector<std::string> raws = lm::generate(model, prompt, config, n);

    std::vector<GeneratedText> gts;
    gts.reserve(raws.size());
    for (std::size_t i = 0; i < raws.size(); ++i) {
        GeneratedText gt;
        char suffix[16];
        std::snprintf(suffix, sizeof(suffix), "#%03zu", i);
        gt.id = topic.id + suffix;
        gt.topic_id = topic.id;
        gt.prompt_used = prompt;
        gt.raw = std::move(raws[i]);
        gt.text = lm::clean_text(gt.raw);
        gt.token_count = whitespace_token_count(gt.text);
        gts.push_back(std::move(gt));
    }
    return gts;
}

namespace {

void store_score(GeneratedText& gt, scoring::ScorerKind kind, double value) {
    switch (kind) {
    case scoring::ScorerKind::claim_detection:
    case scoring::ScorerKind::sts:
        gt.cd_score = value;
        break;
    case scoring::ScorerKind::quality:
        gt.quality_score = value;
        break;
    case scoring::ScorerKind::stance:
        gt.stance_score = value;
        break;
    }
}

double ranking_value(const GeneratedText& gt, scoring::ScorerKind kind) {
    switch (kind) {
    case scoring::ScorerKind::claim_detection:
    case scoring::ScorerKind::sts:
        return *gt.cd_score;
    case scoring::ScorerKind::quality:
        return *gt.quality_score;
    case scoring::ScorerKind::stance:
        return scoring::absolute_stance(*gt.stance_score);
    }
    throw Error("unreachable scorer kind");
}

} // namespace

SelectionReport select_top_k(std::vector<GeneratedText>& gts, const scoring::Scorer& scorer,
                             std::size_t k) {
    if (k < 1) throw Error("select_top_k: k must be >= 1");

    std::map<std::string, std::vector<std::size_t>> by_topic;
    for (std::size_t i = 0; i < gts.size(); ++i) by_topic[gts[i].topic_id].push_back(i);

    SelectionReport report;
    for (auto& [topic_id, indices] : by_topic) {
        // Pool: empties out, then exact-text duplicates out keeping the
        // lowest id (indices are already ordered by id within a topic run,
        // but sort defensively since ids decide ties).
        std::sort(indices.begin(), indices.end(),
                  [&](std::size_t a, std::size_t b) { return gts[a].id < gts[b].id; });
        std::vector<std::size_t> pool;
        std::set<std::string> seen;
        for (std::size_t i : indices) {
            if (gts[i].text.empty()) {
                ++report.empties_dropped;
                continue;
            }
            if (!seen.insert(gts[i].text).second) {
                ++report.duplicates_dropped;
                continue;
            }
            pool.push_back(i);
        }

        try {
            for (std::size_t i : pool)
                store_score(gts[i], scorer.kind(), scorer.score(gts[i].text, gts[i].prompt_used));
        } catch (const std::exception&) {
            report.failed_topics.push_back(topic_id);
            continue;
        }

        std::sort(pool.begin(), pool.end(), [&](std::size_t a, std::size_t b) {
            double va = ranking_value(gts[a], scorer.kind());
            double vb = ranking_value(gts[b], scorer.kind());
            if (va != vb) return va > vb;
            return gts[a].id < gts[b].id;
        });
        for (std::size_t i = 0; i < std::min(k, pool.size()); ++i)
            report.selected_ids.insert(gts[pool[i]].id);
    }
    return report;
}

PipelineRun run_pipeline(lm::LanguageModel& model, const std::vector<Topic>& topics,
                         const scoring::Scorer& scorer, int n, std::size_t k,
                         const lm::SamplingConfig& config, const Framing& framing) {
    PipelineRun run;
    run.model_id = model.id();
    run.n_per_topic = static_cast<std::size_t>(n);
    run.k_selected = k;
    run.sampling = config;

    for (const auto& topic : topics) {
        try {
            auto gts = generate_for_topic(model, topic, n, config, framing);
            run.outputs.insert(run.outputs.end(), std::make_move_iterator(gts.begin()),
                               std::make_move_iterator(gts.end()));
        } catch (const std::exception& e) {
            run.topic_errors[topic.id] = e.what();
        }
    }
    run.selection = select_top_k(run.outputs, scorer, k);
    return run;
}

std::map<std::string, LengthStat> length_stats(
    const std::vector<GeneratedText>& gts,
    const std::function<std::optional<std::string>(const GeneratedText&)>& classify) {
    std::map<std::string, LengthStat> stats;
    for (const auto& gt : gts) {
        auto cls = classify(gt);
        if (!cls) continue;
        auto& s = stats[*cls];
        s.mean_tokens += static_cast<double>(gt.token_count);
        ++s.count;
    }
    for (auto& [cls, s] : stats) s.mean_tokens /= static_cast<double>(s.count);
    return stats;
}

} // namespace claimgen::pipeline
