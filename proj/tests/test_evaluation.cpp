#include "doctest.h"

#include <cmath>

#include "claimgen/evaluation.hpp"
#include "claimgen/toy_lm.hpp"
#include "testutil.hpp"

using namespace claimgen;
using eval::EvalItem;
using eval::PerplexityMode;
using lm::ToyLm;

namespace {

std::vector<TrainingSequence> training_pairs(int n) {
    static const char* nouns[] = {"parks", "buses", "schools", "clinics", "libraries",
                                  "museums", "bridges", "canals", "stadiums", "harbors"};
    std::vector<TrainingSequence> sequences;
    lm::ToyLmOptions options;
    for (int i = 0; i < n; ++i) {
        TrainingSequence s;
        std::string noun = nouns[i % 10];
        s.prompt = "We should fund " + noun + " tier" + std::to_string(i);
        s.completion = "public " + noun + " improve city life level" + std::to_string(i);
        s.rendered = s.prompt + options.delimiter + s.completion + options.eos_marker;
        sequences.push_back(std::move(s));
    }
    return sequences;
}

std::vector<EvalItem> items_of(const std::vector<TrainingSequence>& sequences) {
    std::vector<EvalItem> items;
    for (const auto& s : sequences) items.push_back({s.prompt, s.completion});
    return items;
}

} // namespace

TEST_CASE("perplexity of a uniform model equals the vocabulary size") {
    ToyLm model = ToyLm::uniform({"alpha", "beta", "gamma", "delta"});
    const double V = static_cast<double>(model.vocab_size());
    std::vector<EvalItem> items{{"c1", "alpha beta"}, {"c2", "gamma delta alpha"}};
    CHECK(eval::perplexity(model, items, PerplexityMode::pooled) ==
          doctest::Approx(V).epsilon(1e-9));
    CHECK(eval::perplexity(model, items, PerplexityMode::per_claim_mean) ==
          doctest::Approx(V).epsilon(1e-9));
    CHECK_THROWS_AS(eval::perplexity(model, {}), Error);
}

TEST_CASE("pooled and per-claim perplexity differ on uneven items") {
    // One long easy item and one short hard item pull the two modes apart.
    auto sequences = training_pairs(4);
    ToyLm model = ToyLm::from_sequences(sequences);
    lm::fine_tune(model, sequences, 40);
    std::vector<EvalItem> items{
        {sequences[0].prompt, sequences[0].completion}, // memorized, long
        {sequences[1].prompt, "zzz"},                   // unseen token, short
    };
    double pooled = eval::perplexity(model, items, PerplexityMode::pooled);
    double per_claim = eval::perplexity(model, items, PerplexityMode::per_claim_mean);
    CHECK(pooled != doctest::Approx(per_claim).epsilon(1e-6));
    CHECK(pooled >= 1.0);
    CHECK(per_claim >= 1.0);
}

TEST_CASE("perplexity drops once the model memorizes the items") {
    auto sequences = training_pairs(6);
    ToyLm model = ToyLm::from_sequences(sequences);
    auto items = items_of(sequences);
    double before = eval::perplexity(model, items);
    lm::fine_tune(model, sequences, 60);
    double after = eval::perplexity(model, items);
    CHECK(after < before);
    CHECK(after >= 1.0);
}

TEST_CASE("prefix ranking is perfect on a memorized set and zero for a blind model") {
    auto sequences = training_pairs(12);
    ToyLm model = ToyLm::from_sequences(sequences);
    lm::fine_tune(model, sequences, 120);
    auto items = items_of(sequences);
    std::vector<std::string> pool;
    for (const auto& s : sequences) pool.push_back(s.prompt);

    CHECK(eval::prefix_ranking_accuracy(model, items, pool, 9, 17) == doctest::Approx(1.0));

    // A model that never looks at the condition ties every comparison, and
    // ties count as failures.
    testutil::ConditionBlindModel blind;
    CHECK(eval::prefix_ranking_accuracy(blind, items, pool, 9, 17) == 0.0);
}

TEST_CASE("prefix ranking rejects an undersized condition pool") {
    auto sequences = training_pairs(4);
    ToyLm model = ToyLm::from_sequences(sequences);
    auto items = items_of(sequences);
    std::vector<std::string> pool;
    for (const auto& s : sequences) pool.push_back(s.prompt);
    CHECK_THROWS_WITH_AS(eval::prefix_ranking_accuracy(model, items, pool, 9, 0),
                         doctest::Contains("pool"), Error);
}

TEST_CASE("sampled_statistic fixtures") {
    SUBCASE("constant values give a zero-spread statistic") {
        auto st = eval::sampled_statistic({2.5, 2.5, 2.5}, 10, 2, 0);
        CHECK(st.mean == doctest::Approx(2.5));
        CHECK(st.stddev == doctest::Approx(0.0));
    }
    SUBCASE("sample size at or above the population uses the full set") {
        auto st = eval::sampled_statistic({1.0, 2.0, 3.0}, 10, 100, 0);
        CHECK(st.mean == doctest::Approx(2.0));
        CHECK(st.stddev == doctest::Approx(0.0));
    }
    SUBCASE("deterministic per seed") {
        std::vector<double> values;
        for (int i = 0; i < 50; ++i) values.push_back(0.01 * i);
        auto a = eval::sampled_statistic(values, 10, 20, 7);
        auto b = eval::sampled_statistic(values, 10, 20, 7);
        CHECK(a.mean == b.mean);
        CHECK(a.stddev == b.stddev);
        auto c = eval::sampled_statistic(values, 10, 20, 8);
        CHECK(a.mean != doctest::Approx(c.mean).epsilon(1e-12));
    }
    SUBCASE("empty population is an error") {
        CHECK_THROWS_AS(eval::sampled_statistic({}, 10, 5, 0), Error);
    }
}

TEST_CASE("eval_report fills all four metrics on a healthy run") {
    auto sequences = training_pairs(12);
    ToyLm model = ToyLm::from_sequences(sequences);
    lm::fine_tune(model, sequences, 60);

    std::vector<GeneratedText> gts;
    for (int i = 0; i < 8; ++i) {
        GeneratedText gt;
        gt.id = "g" + std::to_string(i);
        gt.topic_id = "t";
        gt.prompt_used = "We should fund parks tier0";
        gt.raw = gt.text = "good plan with support number" + std::to_string(i);
        gt.token_count = whitespace_token_count(gt.text);
        gts.push_back(std::move(gt));
    }

    scoring::WordDiversityScorer quality;
    scoring::StanceCueScorer stance;
    eval::EvalConfig config;
    config.sample_size = 6;
    config.seed = 5;
    auto report = eval::eval_report(model, gts, {&quality, &stance}, items_of(sequences), config);

    REQUIRE(report.perplexity.stat.has_value());
    CHECK(report.perplexity.stat->mean >= 1.0);
    CHECK(report.perplexity.stat->stddev >= 0.0);
    REQUIRE(report.prefix_rank_acc.stat.has_value());
    CHECK(report.prefix_rank_acc.stat->mean >= 0.0);
    CHECK(report.prefix_rank_acc.stat->mean <= 1.0);
    REQUIRE(report.pred_quality.stat.has_value());
    CHECK(report.pred_quality.stat->mean >= 0.0);
    CHECK(report.pred_quality.stat->mean <= 1.0);
    REQUIRE(report.pred_stance_abs.stat.has_value());
    CHECK(report.pred_stance_abs.stat->mean >= 0.0);
    CHECK(report.n_eval_items == 12);
    CHECK(report.n_texts == 8);

    SUBCASE("the report is reproducible for a fixed seed") {
        auto again =
            eval::eval_report(model, gts, {&quality, &stance}, items_of(sequences), config);
        CHECK(again.perplexity.stat->mean == report.perplexity.stat->mean);
        CHECK(again.prefix_rank_acc.stat->mean == report.prefix_rank_acc.stat->mean);
        CHECK(again.pred_quality.stat->mean == report.pred_quality.stat->mean);
    }
}

TEST_CASE("eval_report records per-metric failures instead of throwing") {
    auto sequences = training_pairs(4); // pool of 4 cannot host 9 distractors
    ToyLm model = ToyLm::from_sequences(sequences);

    std::vector<GeneratedText> gts(1);
    gts[0].id = "g0";
    gts[0].text = "some words";
    gts[0].token_count = 2;

    auto report = eval::eval_report(model, gts, {}, items_of(sequences), {});
    CHECK(report.perplexity.stat.has_value());
    CHECK_FALSE(report.prefix_rank_acc.stat.has_value());
    CHECK(report.prefix_rank_acc.error.find("pool") != std::string::npos);
    // No quality/stance scorer and no stored scores: recorded, not thrown.
    CHECK_FALSE(report.pred_quality.stat.has_value());
    CHECK(report.pred_quality.error.find("g0") != std::string::npos);
    CHECK_FALSE(report.pred_stance_abs.stat.has_value());
}

TEST_CASE("stored scores win over the fallback scorer") {
    auto sequences = training_pairs(4);
    ToyLm model = ToyLm::from_sequences(sequences);
    std::vector<GeneratedText> gts(3);
    for (int i = 0; i < 3; ++i) {
        gts[i].id = "g" + std::to_string(i);
        gts[i].text = "identical text everywhere";
        gts[i].token_count = 3;
        gts[i].quality_score = 0.25;
        gts[i].stance_score = -0.5;
    }
    auto report = eval::eval_report(model, gts, {}, items_of(sequences), {});
    REQUIRE(report.pred_quality.stat.has_value());
    CHECK(report.pred_quality.stat->mean == doctest::Approx(0.25));
    REQUIRE(report.pred_stance_abs.stat.has_value());
    CHECK(report.pred_stance_abs.stat->mean == doctest::Approx(0.5)); // absolute value
}
