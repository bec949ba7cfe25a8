#pragma once

#include <map>
#include <string>
#include <vector>

#include "claimgen/annotation.hpp"
#include "claimgen/scoring.hpp"
#include "claimgen/types.hpp"

namespace claimgen::novelty {

struct CorpusClaim {
    std::string id;
    std::string topic_id;
    std::string text;
};

// Stable per-topic ids of the form "<topic_id>:0007", in input order.
std::vector<CorpusClaim> index_corpus(const std::vector<ClaimRecord>& claims);

struct MatchResult {
    std::string gt_id;
    std::string best_claim_id;
    double similarity = 0.0;
    bool is_match = false; // similarity >= threshold
};

struct MatchReport {
    std::vector<MatchResult> results;
    std::vector<std::string> skipped; // GTs whose topic has no corpus claims
    double threshold = 0.0;
};

// Per text, the argmax-similarity corpus claim of the same topic; ties go to
// the lower claim id. Stance is not consulted: a near-duplicate with opposite
// stance still matches.
MatchReport match_claims(const std::vector<GeneratedText>& gts,
                         const std::vector<CorpusClaim>& corpus, const scoring::Scorer& sts,
                         double threshold = 0.75);

// 1 - matches / attempted (skipped texts are not attempts).
double novelty_rate(const MatchReport& report);

struct VoteCounts {
    int plausibility = 0; // annotators who judged the text plausible
    int stance = 0;       // annotators who judged pro or con
};

// Pearson between match similarity and each vote-count series. Every
// attempted text needs an entry in votes.
std::pair<double, double> vote_correlation(const MatchReport& report,
                                           const std::map<std::string, VoteCounts>& votes);

enum class Preference { generated, corpus, tie };

struct PreferenceSummary {
    std::size_t generated = 0;
    std::size_t corpus = 0;
    std::size_t tie = 0;
    std::size_t n_pairs = 0;
};

// Per pair, compares generated-vs-corpus vote counts; a winning margin of one
// vote or less is a tie ("tie" votes count for neither side). Input is the
// judgment stream restricted to task == preference; item_id is the pair id.
PreferenceSummary preference_summary(const std::vector<annot::Judgment>& judgments);

} // namespace claimgen::novelty
