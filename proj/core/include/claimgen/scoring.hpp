#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "claimgen/types.hpp"

namespace claimgen::scoring {

// Score range contract per kind: claim_detection, quality, and sts in [0,1];
// stance signed in [-1,1] (the only signed kind).
enum class ScorerKind { claim_detection, quality, stance, sts };

ScorerKind scorer_kind_from_string(std::string_view s);
std::string to_string(ScorerKind kind);

// Scorers are deterministic for fixed inputs and safe for concurrent
// read-only use. For sts, score(a, b) treats both arguments as texts and is
// symmetric; otherwise the second argument is the conditioning context
// (topic or prompt).
class Scorer {
public:
    virtual ~Scorer() = default;
    virtual std::string name() const = 0;
    virtual ScorerKind kind() const = 0;
    virtual double score(const std::string& text, const std::string& context) const = 0;
};

double absolute_stance(double score);

// Standard Pearson correlation. Throws on length mismatch, fewer than two
// points, or a constant series (undefined, never silently NaN).
double pearson(const std::vector<double>& xs, const std::vector<double>& ys);

struct TopBottom {
    std::size_t top = 0;    // positives among the 3 highest-scored per topic
    std::size_t bottom = 0; // positives among the 3 lowest-scored per topic
};

struct RankEvalReport {
    std::map<std::string, double> pearson_by_scorer;
    std::map<std::string, TopBottom> top_bottom_by_scorer;
    std::size_t n_positive = 0;
    std::size_t n_negative = 0;
    std::vector<std::string> topics_skipped; // fewer than 6 texts
};

// Evaluates scorers as rankers against aggregated human labels. Relevance is
// 1 when an item is plausible and has stance pro or con, else 0. Pearson runs
// over all labeled texts; top/bottom-3 counts only over topics with at least
// 6 texts. Stance scorers contribute their absolute value. Scoring context is
// the text's prompt.
RankEvalReport rank_eval(const std::vector<GeneratedText>& gts,
                         const std::vector<const Scorer*>& scorers);

// Word-set Jaccard overlap between text and context.
class LexicalOverlapScorer final : public Scorer {
public:
    explicit LexicalOverlapScorer(ScorerKind kind = ScorerKind::claim_detection) : kind_(kind) {}
    std::string name() const override { return "lexical_overlap"; }
    ScorerKind kind() const override { return kind_; }
    double score(const std::string& text, const std::string& context) const override;

private:
    ScorerKind kind_;
};

// Type-token ratio: distinct words over words.
class WordDiversityScorer final : public Scorer {
public:
    std::string name() const override { return "word_diversity"; }
    ScorerKind kind() const override { return ScorerKind::quality; }
    double score(const std::string& text, const std::string& context) const override;
};

// Signed cue-word balance: (support cues - oppose cues) / cue total.
class StanceCueScorer final : public Scorer {
public:
    std::string name() const override { return "stance_cue"; }
    ScorerKind kind() const override { return ScorerKind::stance; }
    double score(const std::string& text, const std::string& context) const override;
};

// Cosine over character 3-gram counts; 1.0 on identical strings.
class CharNgramCosineScorer final : public Scorer {
public:
    std::string name() const override { return "char_ngram_cosine"; }
    ScorerKind kind() const override { return ScorerKind::sts; }
    double score(const std::string& text, const std::string& context) const override;
};

// Logistic regression over hashed word and bigram features of text and
// context. Trainable on small labeled sets; deterministic given the seed.
class TrainableClassifierScorer final : public Scorer {
public:
    explicit TrainableClassifierScorer(ScorerKind kind = ScorerKind::claim_detection,
                                       std::size_t n_features = 1u << 15);

    std::string name() const override { return "trainable_classifier"; }
    ScorerKind kind() const override { return kind_; }
    double score(const std::string& text, const std::string& context) const override;

    // Examples are (text, context) pairs.
    void fit(const std::vector<std::pair<std::string, std::string>>& positives,
             const std::vector<std::pair<std::string, std::string>>& negatives, int epochs,
             double learning_rate, std::uint64_t seed);

    void save(const std::filesystem::path& path) const;
    static TrainableClassifierScorer load(const std::filesystem::path& path);

private:
    std::vector<std::size_t> features(const std::string& text, const std::string& context) const;

    ScorerKind kind_;
    std::vector<double> weights_;
    double bias_ = 0.0;
};

// Built-in scorer lookup by name; throws on unknown names.
std::unique_ptr<Scorer> make_scorer(std::string_view name);

} // namespace claimgen::scoring
