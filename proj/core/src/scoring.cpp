#include "claimgen/scoring.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>

#include "claimgen/jsonl.hpp"
#include "claimgen/random.hpp"

namespace claimgen::scoring {

ScorerKind scorer_kind_from_string(std::string_view s) {
    if (s == "claim_detection") return ScorerKind::claim_detection;
    if (s == "quality") return ScorerKind::quality;
    if (s == "stance") return ScorerKind::stance;
    if (s == "sts") return ScorerKind::sts;
    throw ParseError("unknown scorer kind: \"" + std::string(s) + "\"");
}

std::string to_string(ScorerKind kind) {
    switch (kind) {
    case ScorerKind::claim_detection: return "claim_detection";
    case ScorerKind::quality: return "quality";
    case ScorerKind::stance: return "stance";
    case ScorerKind::sts: return "sts";
    }
    throw Error("unreachable scorer kind");
}

double absolute_stance(double score) { return std::fabs(score); }

double pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size()) throw Error("pearson: series lengths differ");
    if (xs.size() < 2) throw Error("pearson: need at least two points");
    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mx;
        const double dy = ys[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0)
        throw Error("pearson: correlation undefined on a constant series");
    return sxy / std::sqrt(sxx * syy);
}

namespace {

std::vector<std::string> words_of(const std::string& text) {
    std::vector<std::string> words;
    std::string current;
    for (char c : text) {
        if (std::isalnum(static_cast<unsigned char>(c))) {
            current += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        } else if (!current.empty()) {
            words.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) words.push_back(std::move(current));
    return words;
}

bool relevance_label(const GeneratedText& gt) {
    const AggregatedLabel& l = *gt.labels;
    bool plausible = l.plausible.value_or(false);
    bool has_stance = l.stance && (*l.stance == "pro" || *l.stance == "con");
    return plausible && has_stance;
}

double scorer_value(const Scorer& scorer, const GeneratedText& gt) {
    double v = scorer.score(gt.text, gt.prompt_used);
    return scorer.kind() == ScorerKind::stance ? absolute_stance(v) : v;
}

} // namespace

RankEvalReport rank_eval(const std::vector<GeneratedText>& gts,
                         const std::vector<const Scorer*>& scorers) {
    if (gts.empty()) throw Error("rank_eval: no texts");
    for (const auto& gt : gts)
        if (!gt.labels) throw Error("rank_eval: text \"" + gt.id + "\" has no aggregated labels");

    RankEvalReport report;
    std::vector<double> labels;
    labels.reserve(gts.size());
    for (const auto& gt : gts) {
        bool pos = relevance_label(gt);
        labels.push_back(pos ? 1.0 : 0.0);
        if (pos) ++report.n_positive;
        else ++report.n_negative;
    }

    std::map<std::string, std::vector<std::size_t>> by_topic;
    for (std::size_t i = 0; i < gts.size(); ++i) by_topic[gts[i].topic_id].push_back(i);
    for (const auto& [topic_id, indices] : by_topic)
        if (indices.size() < 6) report.topics_skipped.push_back(topic_id);

    for (const Scorer* scorer : scorers) {
        std::vector<double> scores;
        scores.reserve(gts.size());
        for (const auto& gt : gts) scores.push_back(scorer_value(*scorer, gt));

        report.pearson_by_scorer[scorer->name()] = pearson(scores, labels);

        TopBottom tb;
        for (const auto& [topic_id, indices] : by_topic) {
            if (indices.size() < 6) continue;
            std::vector<std::size_t> order = indices;
            std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                if (scores[a] != scores[b]) return scores[a] > scores[b];
                return gts[a].id < gts[b].id;
            });
            for (std::size_t i = 0; i < 3; ++i) {
                if (labels[order[i]] == 1.0) ++tb.top;
                if (labels[order[order.size() - 1 - i]] == 1.0) ++tb.bottom;
            }
        }
        report.top_bottom_by_scorer[scorer->name()] = tb;
    }
    return report;
}

double LexicalOverlapScorer::score(const std::string& text, const std::string& context) const {
    auto a = words_of(text);
    auto b = words_of(context);
    std::set<std::string> sa(a.begin(), a.end());
    std::set<std::string> sb(b.begin(), b.end());
    if (sa.empty() && sb.empty()) return 0.0;
    std::size_t common = 0;
    for (const auto& w : sa) common += sb.count(w);
    return static_cast<double>(common) / static_cast<double>(sa.size() + sb.size() - common);
}

double WordDiversityScorer::score(const std::string& text, const std::string&) const {
    auto words = words_of(text);
    if (words.empty()) return 0.0;
    std::set<std::string> distinct(words.begin(), words.end());
    return static_cast<double>(distinct.size()) / static_cast<double>(words.size());
}

double StanceCueScorer::score(const std::string& text, const std::string&) const {
    static const std::set<std::string> support = {"should",  "support", "benefit", "benefits",
                                                  "improve", "improves", "good",   "right",
                                                  "helps",   "necessary"};
    static const std::set<std::string> oppose = {"not",   "no",     "never", "against", "ban",
                                                 "bans",  "harm",   "harms", "bad",     "wrong",
                                                 "oppose", "cannot"};
    int s = 0, o = 0;
    for (const auto& w : words_of(text)) {
        if (support.count(w)) ++s;
        if (oppose.count(w)) ++o;
    }
    if (s + o == 0) return 0.0;
    return static_cast<double>(s - o) / static_cast<double>(s + o);
}

double CharNgramCosineScorer::score(const std::string& text, const std::string& context) const {
    if (text == context) return 1.0;
    auto grams = [](const std::string& s) {
        std::map<std::string, double> counts;
        if (s.size() < 3) {
            if (!s.empty()) ++counts[s];
            return counts;
        }
        for (std::size_t i = 0; i + 3 <= s.size(); ++i) ++counts[s.substr(i, 3)];
        return counts;
    };
    auto a = grams(text);
    auto b = grams(context);
    if (a.empty() || b.empty()) return 0.0;
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (const auto& [g, c] : a) {
        na += c * c;
        auto it = b.find(g);
        if (it != b.end()) dot += c * it->second;
    }
    for (const auto& [g, c] : b) nb += c * c;
    return dot / std::sqrt(na * nb);
}

TrainableClassifierScorer::TrainableClassifierScorer(ScorerKind kind, std::size_t n_features)
    : kind_(kind), weights_(n_features, 0.0) {
    if (n_features == 0 || (n_features & (n_features - 1)) != 0)
        throw ScorerError("classifier feature count must be a power of two");
}

std::vector<std::size_t> TrainableClassifierScorer::features(const std::string& text,
                                                             const std::string& context) const {
    const std::size_t mask = weights_.size() - 1;
    std::vector<std::size_t> idx;
    auto add = [&](std::string_view token) { idx.push_back(rng::fnv1a(token) & mask); };
    auto text_words = words_of(text);
    for (std::size_t i = 0; i < text_words.size(); ++i) {
        add(text_words[i]);
        if (i + 1 < text_words.size()) add(text_words[i] + "\x1f" + text_words[i + 1]);
    }
    for (const auto& w : words_of(context)) add("ctx\x1f" + w);
    return idx;
}

double TrainableClassifierScorer::score(const std::string& text, const std::string& context) const {
    double z = bias_;
    for (std::size_t i : features(text, context)) z += weights_[i];
    return 1.0 / (1.0 + std::exp(-z));
}

void TrainableClassifierScorer::fit(
    const std::vector<std::pair<std::string, std::string>>& positives,
    const std::vector<std::pair<std::string, std::string>>& negatives, int epochs,
    double learning_rate, std::uint64_t seed) {
    if (positives.empty() || negatives.empty())
        throw ScorerError("classifier fit needs both positive and negative examples");
    if (epochs < 1) throw ScorerError("classifier fit needs epochs >= 1");

    struct Example {
        std::vector<std::size_t> idx;
        double label;
    };
    std::vector<Example> examples;
    examples.reserve(positives.size() + negatives.size());
    for (const auto& [t, c] : positives) examples.push_back({features(t, c), 1.0});
    for (const auto& [t, c] : negatives) examples.push_back({features(t, c), 0.0});

    rng::Engine engine(seed);
    for (int epoch = 0; epoch < epochs; ++epoch) {
        auto order = rng::sample_without_replacement(engine, examples.size(), examples.size());
        for (std::size_t e : order) {
            const Example& ex = examples[e];
            double z = bias_;
            for (std::size_t i : ex.idx) z += weights_[i];
            double p = 1.0 / (1.0 + std::exp(-z));
            double g = learning_rate * (ex.label - p);
            bias_ += g;
            for (std::size_t i : ex.idx) weights_[i] += g;
        }
    }
}

void TrainableClassifierScorer::save(const std::filesystem::path& path) const {
    json j{{"kind", to_string(kind_)},
           {"n_features", weights_.size()},
           {"bias", bias_},
           {"weights", json::object()}};
    for (std::size_t i = 0; i < weights_.size(); ++i)
        if (weights_[i] != 0.0) j["weights"][std::to_string(i)] = weights_[i];
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write scorer file: " + path.string());
    out << j.dump(2) << '\n';
}

TrainableClassifierScorer TrainableClassifierScorer::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open scorer file: " + path.string());
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) throw ParseError("malformed scorer file: " + path.string());
    TrainableClassifierScorer scorer(scorer_kind_from_string(j.at("kind").get<std::string>()),
                                     j.at("n_features").get<std::size_t>());
    scorer.bias_ = j.at("bias").get<double>();
    for (const auto& [i, w] : j.at("weights").items())
        scorer.weights_.at(std::stoul(i)) = w.get<double>();
    return scorer;
}

std::unique_ptr<Scorer> make_scorer(std::string_view name) {
    if (name == "lexical_overlap") return std::make_unique<LexicalOverlapScorer>();
    if (name == "word_diversity") return std::make_unique<WordDiversityScorer>();
    if (name == "stance_cue") return std::make_unique<StanceCueScorer>();
    if (name == "char_ngram_cosine") return std::make_unique<CharNgramCosineScorer>();
    if (name == "trainable_classifier") return std::make_unique<TrainableClassifierScorer>();
    throw ParseError("unknown scorer: \"" + std::string(name) + "\"");
}

} // namespace claimgen::scoring
