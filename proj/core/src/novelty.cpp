#include "claimgen/novelty.hpp"

#include <cstdio>

namespace claimgen::novelty {

std::vector<CorpusClaim> index_corpus(const std::vector<ClaimRecord>& claims) {
    std::map<std::string, std::size_t> counters;
    std::vector<CorpusClaim> out;
    out.reserve(claims.size());
    for (const auto& c : claims) {
        char suffix[16];
        std::snprintf(suffix, sizeof(suffix), ":%04zu", counters[c.topic_id]++);
        out.push_back({c.topic_id + suffix, c.topic_id, c.text});
    }
    return out;
}

MatchReport match_claims(const std::vector<GeneratedText>& gts,
                         const std::vector<CorpusClaim>& corpus, const scoring::Scorer& sts,
                         double threshold) {
    std::map<std::string, std::vector<const CorpusClaim*>> by_topic;
    for (const auto& c : corpus) by_topic[c.topic_id].push_back(&c);

    MatchReport report;
    report.threshold = threshold;
    for (const auto& gt : gts) {
        auto it = by_topic.find(gt.topic_id);
        if (it == by_topic.end() || it->second.empty()) {
            report.skipped.push_back(gt.id);
            continue;
        }
        MatchResult result;
        result.gt_id = gt.id;
        bool first = true;
        for (const CorpusClaim* c : it->second) {
            double s = sts.score(gt.text, c->text);
            if (first || s > result.similarity ||
                (s == result.similarity && c->id < result.best_claim_id)) {
                result.similarity = s;
                result.best_claim_id = c->id;
                first = false;
            }
        }
        result.is_match = result.similarity >= threshold;
        report.results.push_back(std::move(result));
    }
    return report;
}

double novelty_rate(const MatchReport& report) {
    if (report.results.empty()) throw Error("novelty_rate: no match attempts");
    std::size_t matches = 0;
    for (const auto& r : report.results) matches += r.is_match ? 1 : 0;
    return 1.0 - static_cast<double>(matches) / static_cast<double>(report.results.size());
}

std::pair<double, double> vote_correlation(const MatchReport& report,
                                           const std::map<std::string, VoteCounts>& votes) {
    std::vector<double> similarity, plausibility, stance;
    for (const auto& r : report.results) {
        auto it = votes.find(r.gt_id);
        if (it == votes.end())
            throw Error("vote_correlation: no vote counts for text \"" + r.gt_id + "\"");
        similarity.push_back(r.similarity);
        plausibility.push_back(static_cast<double>(it->second.plausibility));
        stance.push_back(static_cast<double>(it->second.stance));
    }
    return {scoring::pearson(similarity, plausibility), scoring::pearson(similarity, stance)};
}

PreferenceSummary preference_summary(const std::vector<annot::Judgment>& judgments) {
    std::map<std::string, std::pair<long, long>> counts; // pair id -> (generated, corpus)
    for (const auto& j : judgments) {
        if (j.task != annot::Task::preference || j.is_test_question) continue;
        auto& c = counts[j.item_id]; // a "tie" vote registers the pair, adds to neither side
        if (j.value == "generated") ++c.first;
        else if (j.value == "corpus") ++c.second;
    }
    PreferenceSummary summary;
    summary.n_pairs = counts.size();
    for (const auto& [pair_id, c] : counts) {
        long margin = c.first - c.second;
        if (margin > 1) ++summary.generated;
        else if (margin < -1) ++summary.corpus;
        else ++summary.tie;
    }
    return summary;
}

} // namespace claimgen::novelty
