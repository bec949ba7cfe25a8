// Acceptance gates for the claim-generation pipeline. Each numbered check
// prints one pass/fail line with its runtime; the process exits nonzero if
// any check fails. Checks that shell out to the CLI read its path from the
// CLAIMGEN_TOOL environment variable (set by the test harness).

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "claimgen/annotation.hpp"
#include "claimgen/corpus.hpp"
#include "claimgen/evaluation.hpp"
#include "claimgen/jsonl.hpp"
#include "claimgen/lm.hpp"
#include "claimgen/novelty.hpp"
#include "claimgen/pipeline.hpp"
#include "claimgen/random.hpp"
#include "claimgen/scoring.hpp"
#include "claimgen/text_clean.hpp"
#include "claimgen/toy_lm.hpp"
#include "testutil.hpp"

using namespace claimgen;
namespace fs = std::filesystem;

namespace {

// ---------------------------------------------------------------- harness

struct Checker {
    std::vector<std::string> failures;

    void expect(bool ok, const std::string& message) {
        if (!ok) failures.push_back(message);
    }
};

int g_failed = 0;

void run_criterion(int number, const char* label, const std::function<void(Checker&)>& body) {
    Checker c;
    auto t0 = std::chrono::steady_clock::now();
    try {
        body(c);
    } catch (const std::exception& e) {
        c.failures.push_back(std::string("unexpected exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.failures.empty()) {
        std::printf("[PASS] %d. %s (%.2fs)\n", number, label, secs);
    } else {
        ++g_failed;
        std::printf("[FAIL] %d. %s (%.2fs)\n", number, label, secs);
        std::size_t shown = std::min<std::size_t>(c.failures.size(), 5);
        for (std::size_t i = 0; i < shown; ++i)
            std::printf("       - %s\n", c.failures[i].c_str());
        if (c.failures.size() > shown)
            std::printf("       - (%zu more)\n", c.failures.size() - shown);
    }
    std::fflush(stdout);
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

// Deterministic pseudo-score in [0, 1) keyed on the text alone.
double hash_unit(const std::string& text) {
    return static_cast<double>(rng::splitmix64(rng::fnv1a(text)) >> 11) * 0x1.0p-53;
}

class HashQualityScorer final : public scoring::Scorer {
public:
    std::string name() const override { return "hash_quality"; }
    scoring::ScorerKind kind() const override { return scoring::ScorerKind::quality; }
    double score(const std::string& text, const std::string&) const override {
        return hash_unit(text);
    }
};

std::vector<std::string> words_of(const std::vector<Topic>& topics) {
    std::vector<std::string> vocabulary;
    std::set<std::string> seen;
    for (const auto& t : topics) {
        std::istringstream in(t.text);
        std::string w;
        while (in >> w)
            if (seen.insert(w).second) vocabulary.push_back(w);
    }
    return vocabulary;
}

// ------------------------------------------------- 1. quality filter count

void check_quality_filter(Checker& c) {
    testutil::TempDir dir;
    fs::path csv;
    if (const char* real = std::getenv("CLAIMGEN_RANK30K"); real && *real) {
        csv = real;
    } else {
        // Synthetic export with the published shape: 30,497 rows of which
        // exactly 10,669 score strictly above 0.9, with ties parked exactly
        // at the threshold to prove the comparison is strict.
        std::string data = "argument,topic,WA,stance_WA\n";
        data.reserve(32u << 20);
        char row[160];
        int id = 0;
        auto add = [&](double wa) {
            std::snprintf(row, sizeof(row), "argument %d,topic %d,%.8f,%s\n", id, id % 96, wa,
                          id % 2 ? "0.8" : "-0.8");
            data += row;
            ++id;
        };
        for (int i = 0; i < 10669; ++i) add(0.9005 + 9e-8 * i);
        for (int i = 0; i < 800; ++i) add(0.9);
        for (int i = 0; i < 19028; ++i) add((i % 9000) * 1e-4);
        csv = dir.write("rank30k.csv", data);
    }

    auto t0 = std::chrono::steady_clock::now();
    auto claims =
        corpus::load_claims(csv, corpus::ClaimFormat::csv, nullptr, corpus::CsvColumns::rank30k());
    auto filtered = corpus::filter_by_quality(claims, 0.9);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    c.expect(claims.size() == 30497,
             "expected 30497 rows in the export, loaded " + std::to_string(claims.size()));
    c.expect(filtered.kept.size() == 10669,
             "expected exactly 10669 records above 0.9, got " +
                 std::to_string(filtered.kept.size()));
    for (const auto& claim : filtered.kept) {
        if (!claim.quality_score || !(*claim.quality_score > 0.9)) {
            c.expect(false, "kept a record at or below the 0.9 threshold");
            break;
        }
    }
    c.expect(secs < 10.0, "load+filter took " + fmt(secs) + "s, limit is 10s");
}

// ---------------------------------------------- 2. pipeline count and rank

void check_pipeline_arithmetic(Checker& c) {
    auto t0 = std::chrono::steady_clock::now();

    auto topics = testutil::make_topics(96, Split::test);
    auto model = lm::ToyLm::uniform(words_of(topics), {});
    lm::SamplingConfig sampling; // stock top_k=40, temperature=0.7, 50 tokens
    sampling.seed = 2024;
    HashQualityScorer scorer;

    auto run = pipeline::run_pipeline(model, topics, scorer, 20, 7, sampling);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    c.expect(run.outputs.size() == 96 * 20,
             "expected 1920 candidates, got " + std::to_string(run.outputs.size()));
    c.expect(run.topic_errors.empty(), "generation failed for some topics");
    c.expect(run.selection.failed_topics.empty(), "selection failed for some topics");
    c.expect(run.selection.selected_ids.size() == 672,
             "expected exactly 672 selected texts, got " +
                 std::to_string(run.selection.selected_ids.size()));

    // Recompute each topic's pool (non-empty, first occurrence of each text)
    // and check the selection against it from scratch.
    std::map<std::string, std::vector<const GeneratedText*>> by_topic;
    for (const auto& gt : run.outputs) by_topic[gt.topic_id].push_back(&gt);

    for (const auto& [topic_id, gts] : by_topic) {
        std::vector<const GeneratedText*> pool;
        std::set<std::string> seen;
        for (const auto* gt : gts)
            if (!gt->text.empty() && seen.insert(gt->text).second) pool.push_back(gt);

        std::size_t n_selected = 0;
        double selected_sum = 0.0, pool_sum = 0.0;
        for (const auto* gt : pool) {
            double s = hash_unit(gt->text);
            pool_sum += s;
            if (run.selection.selected_ids.count(gt->id)) {
                ++n_selected;
                selected_sum += s;
            }
        }
        if (n_selected != 7) {
            c.expect(false, topic_id + ": expected 7 selected, got " + std::to_string(n_selected));
            continue;
        }
        double mean_selected = selected_sum / 7.0;
        double mean_pool = pool_sum / static_cast<double>(pool.size());
        if (!(mean_selected >= mean_pool - 1e-12))
            c.expect(false, topic_id + ": mean selected " + fmt(mean_selected) +
                                " below pool mean " + fmt(mean_pool));

        // The selected set must be exactly the score-descending top 7.
        std::vector<const GeneratedText*> order = pool;
        std::sort(order.begin(), order.end(), [](const GeneratedText* a, const GeneratedText* b) {
            double sa = hash_unit(a->text), sb = hash_unit(b->text);
            if (sa != sb) return sa > sb;
            return a->id < b->id;
        });
        for (std::size_t i = 0; i < 7; ++i)
            if (!run.selection.selected_ids.count(order[i]->id)) {
                c.expect(false, topic_id + ": top-7 text " + order[i]->id + " not selected");
                break;
            }
    }
    c.expect(secs < 120.0, "pipeline took " + fmt(secs) + "s, limit is 120s");
}

// --------------------------------------------------- 3. memorization sanity

std::vector<TrainingSequence> memorization_pairs(std::size_t n) {
    static const char* subjects[] = {"harbor",  "orchard", "tram",    "library", "granary",
                                     "aquifer", "foundry", "theater", "garden",  "bridge"};
    lm::ToyLmOptions opts;
    std::vector<TrainingSequence> sequences;
    for (std::size_t i = 0; i < n; ++i) {
        const char* subject = subjects[i % 10];
        TrainingSequence s;
        s.prompt = "We should restore the " + std::string(subject) + " site" + std::to_string(i);
        s.completion = "mark" + std::to_string(i) + " the " + subject +
                       " anchors daily life in the district";
        s.rendered = s.prompt + opts.delimiter + s.completion + opts.eos_marker;
        sequences.push_back(std::move(s));
    }
    return sequences;
}

std::vector<eval::EvalItem> items_of(const std::vector<TrainingSequence>& sequences) {
    std::vector<eval::EvalItem> items;
    for (const auto& s : sequences) items.push_back({s.prompt, s.completion});
    return items;
}

void check_memorization(Checker& c) {
    auto t0 = std::chrono::steady_clock::now();

    auto sequences = memorization_pairs(50);
    auto untrained = lm::ToyLm::from_sequences(sequences);
    auto trained = lm::ToyLm::from_sequences(sequences);
    lm::fine_tune(trained, sequences, 2000);

    auto items = items_of(sequences);
    double ppl_before = eval::perplexity(untrained, items);
    double ppl_after = eval::perplexity(trained, items);
    c.expect(ppl_after < ppl_before, "perplexity did not drop: " + fmt(ppl_before) + " -> " +
                                         fmt(ppl_after));

    std::vector<std::string> pool;
    for (const auto& s : sequences) pool.push_back(s.prompt);
    double pr = eval::prefix_ranking_accuracy(trained, items, pool, 9, 77);
    c.expect(pr >= 0.9, "prefix ranking accuracy " + fmt(pr) + " below 0.9");

    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c.expect(secs < 600.0, "memorization run took " + fmt(secs) + "s, limit is 600s");
}

// -------------------------------------------------------- 4. metric identities

// Applies a strictly increasing map to another backend's log-probabilities.
// The map is pinned to non-positive outputs on non-positive inputs so the
// scoring contract still holds.
class MonotoneWrapped final : public lm::LanguageModel {
public:
    MonotoneWrapped(lm::LanguageModel& base, double a, double b, double c)
        : base_(base), a_(a), b_(b), c_(c) {}

    std::string id() const override { return base_.id() + "+monotone"; }
    bool can_finetune() const override { return false; }
    bool can_score() const override { return true; }
    void train(const std::vector<TrainingSequence>&, int) override {
        throw BackendError("monotone wrapper cannot train");
    }
    std::string sample(const std::string&, const lm::SamplingConfig&) override {
        throw BackendError("monotone wrapper cannot sample");
    }
    double score(const std::string& condition, const std::string& text) override {
        return transform(base_.score(condition, text));
    }
    std::vector<lm::TokenScore> token_scores(const std::string& condition,
                                             const std::string& text) override {
        auto scores = base_.token_scores(condition, text);
        for (auto& s : scores) s.log_prob = transform(s.log_prob);
        return scores;
    }
    std::size_t count_tokens(const std::string& text) const override {
        return base_.count_tokens(text);
    }
    const std::string& delimiter() const override { return base_.delimiter(); }
    const std::string& eos_marker() const override { return base_.eos_marker(); }

private:
    double transform(double x) const { return a_ * x - b_ + c_ * std::atan(x); }

    lm::LanguageModel& base_;
    double a_, b_, c_;
};

void check_metric_identities(Checker& c) {
    // Perplexity identity: an untrained model is uniform over its vocabulary,
    // so every token costs exactly log(V) and perplexity is exactly V.
    auto uniform = lm::ToyLm::uniform(
        {"rivers", "carry", "trade", "floods", "harm", "farms", "dams", "cost", "towns", "grow"},
        {});
    double v = static_cast<double>(uniform.vocab_size());
    std::vector<eval::EvalItem> uniform_items{
        {"We value rivers", "rivers carry trade"},
        {"We fear floods", "floods harm farms and unknown-word towns"},
        {"We audit dams", "dams cost"},
    };
    for (auto mode : {eval::PerplexityMode::pooled, eval::PerplexityMode::per_claim_mean}) {
        double ppl = eval::perplexity(uniform, uniform_items, mode);
        if (!(std::abs(ppl - v) / v <= 1e-6))
            c.expect(false, "uniform perplexity " + fmt(ppl) + " differs from vocab size " +
                                fmt(v) + " beyond 1e-6 relative");
    }

    // Ranking invariance: prefix ranking only compares scores, so any
    // strictly increasing transform of the log-probabilities must leave the
    // accuracy untouched. 100 random transforms, zero tolerance.
    auto sequences = memorization_pairs(20);
    auto model = lm::ToyLm::from_sequences(sequences);
    lm::fine_tune(model, sequences, 600);
    auto items = items_of(sequences);
    std::vector<std::string> pool;
    for (const auto& s : sequences) pool.push_back(s.prompt);

    rng::Engine engine(4242);
    int violations = 0;
    for (int trial = 0; trial < 100; ++trial) {
        double a = 0.25 + 4.0 * rng::unit_real(engine);
        double b = 2.0 * rng::unit_real(engine);
        double k = 2.0 * rng::unit_real(engine);
        MonotoneWrapped wrapped(model, a, b, k);
        std::uint64_t seed = rng::splitmix64(1000 + static_cast<std::uint64_t>(trial));
        double base_pr = eval::prefix_ranking_accuracy(model, items, pool, 9, seed);
        double wrapped_pr = eval::prefix_ranking_accuracy(wrapped, items, pool, 9, seed);
        if (base_pr != wrapped_pr) ++violations;
    }
    c.expect(violations == 0, std::to_string(violations) +
                                  " of 100 monotone transforms changed prefix ranking accuracy");
}

// --------------------------------------------- 5. aggregation oracle match

struct OracleLabel {
    bool insufficient = false;
    std::optional<bool> plausible;
    double fraction = 0.0;
    std::optional<std::string> stance;
    std::optional<std::string> factual;
};

OracleLabel oracle_plausibility(std::size_t t, std::size_t f) {
    OracleLabel o;
    std::size_t n = t + f;
    if (n < 5) {
        o.insufficient = true;
        return o;
    }
    o.fraction = static_cast<double>(t) / static_cast<double>(n);
    o.plausible = o.fraction >= 0.7;
    return o;
}

OracleLabel oracle_stance(std::size_t p, std::size_t k, std::size_t o) {
    OracleLabel label;
    std::size_t n = p + k + o;
    if (n < 5) {
        label.insufficient = true;
        return label;
    }
    std::size_t best = std::max({p, k, o});
    int winners = (p == best) + (k == best) + (o == best);
    if (winners > 1) label.stance = "none";
    else if (p == best) label.stance = "pro";
    else if (k == best) label.stance = "con";
    else label.stance = "none";
    return label;
}

OracleLabel oracle_factual(std::size_t f, std::size_t o) {
    OracleLabel label;
    std::size_t n = f + o;
    if (n < 5) {
        label.insufficient = true;
        return label;
    }
    if (f != o && static_cast<double>(std::max(f, o)) / static_cast<double>(n) >= 0.7)
        label.factual = (f > o) ? "factual" : "opinion";
    return label;
}

annot::Judgment vote(const std::string& item, annot::Task task, const std::string& value, int n) {
    annot::Judgment j;
    j.annotator_id = "a" + std::to_string(n);
    j.item_id = item;
    j.task = task;
    j.value = value;
    return j;
}

void check_aggregation_oracle(Checker& c) {
    using annot::Task;

    // Every vote pattern of one to seven annotators per item, pushed through
    // the real aggregation in batches of ten items and compared field by
    // field against the independent oracle above.
    struct Pattern {
        std::vector<std::pair<std::string, std::size_t>> votes; // value -> count
        OracleLabel expected;
    };

    auto run_batches = [&](Task task, const std::vector<Pattern>& patterns,
                           const char* task_name) {
        for (std::size_t start = 0; start < patterns.size(); start += 10) {
            std::size_t end = std::min(start + 10, patterns.size());
            std::vector<annot::Judgment> judgments;
            std::map<std::string, const Pattern*> by_item;
            for (std::size_t i = start; i < end; ++i) {
                char item[16];
                std::snprintf(item, sizeof(item), "i%03zu", i);
                by_item[item] = &patterns[i];
                int annotator = 0;
                for (const auto& [value, count] : patterns[i].votes)
                    for (std::size_t r = 0; r < count; ++r)
                        judgments.push_back(vote(item, task, value, annotator++));
            }
            std::vector<AggregatedLabel> labels;
            if (task == Task::plausibility) labels = annot::aggregate_plausibility(judgments);
            else if (task == Task::stance) labels = annot::aggregate_stance(judgments);
            else labels = annot::aggregate_factual(judgments);

            if (labels.size() != by_item.size()) {
                c.expect(false, std::string(task_name) + ": batch returned " +
                                    std::to_string(labels.size()) + " labels for " +
                                    std::to_string(by_item.size()) + " items");
                return;
            }
            for (const auto& label : labels) {
                const Pattern& p = *by_item.at(label.item_id);
                const OracleLabel& want = p.expected;
                std::string where = std::string(task_name) + " " + label.item_id;
                if (label.insufficient != want.insufficient) {
                    c.expect(false, where + ": insufficient mismatch");
                    continue;
                }
                if (label.plausible != want.plausible)
                    c.expect(false, where + ": plausible mismatch");
                if (task == Task::plausibility && label.plausible_fraction != want.fraction)
                    c.expect(false, where + ": fraction mismatch");
                if (label.stance != want.stance)
                    c.expect(false, where + ": stance mismatch, got " +
                                        label.stance.value_or("(unset)") + " want " +
                                        want.stance.value_or("(unset)"));
                if (label.factual != want.factual)
                    c.expect(false, where + ": factual mismatch, got " +
                                        label.factual.value_or("(unset)") + " want " +
                                        want.factual.value_or("(unset)"));
            }
        }
    };

    std::vector<Pattern> plausibility;
    for (std::size_t n = 1; n <= 7; ++n)
        for (std::size_t t = 0; t <= n; ++t)
            plausibility.push_back({{{"true", t}, {"false", n - t}}, oracle_plausibility(t, n - t)});
    run_batches(Task::plausibility, plausibility, "plausibility");

    std::vector<Pattern> stance;
    for (std::size_t n = 1; n <= 7; ++n)
        for (std::size_t p = 0; p <= n; ++p)
            for (std::size_t k = 0; p + k <= n; ++k)
                stance.push_back({{{"pro", p}, {"con", k}, {"none", n - p - k}},
                                  oracle_stance(p, k, n - p - k)});
    run_batches(Task::stance, stance, "stance");

    std::vector<Pattern> factual;
    for (std::size_t n = 1; n <= 7; ++n)
        for (std::size_t f = 0; f <= n; ++f)
            factual.push_back({{{"factual", f}, {"opinion", n - f}}, oracle_factual(f, n - f)});
    run_batches(Task::factual, factual, "factual");

    // The named edge case: a 3:3:1 split is a tie for the lead and resolves
    // to none even though "none" itself got the fewest votes.
    std::vector<annot::Judgment> tie;
    for (int i = 0; i < 3; ++i) tie.push_back(vote("edge", annot::Task::stance, "pro", i));
    for (int i = 0; i < 3; ++i) tie.push_back(vote("edge", annot::Task::stance, "con", 3 + i));
    tie.push_back(vote("edge", annot::Task::stance, "none", 6));
    auto edge = annot::aggregate_stance(tie);
    c.expect(edge.size() == 1 && edge[0].stance == std::optional<std::string>("none"),
             "3:3:1 stance split did not resolve to none");
}

// --------------------------------------------------------- 6. kappa checks

void check_kappa(Checker& c) {
    using V = std::vector<std::string>;
    auto near = [](double a, double b) { return std::abs(a - b) <= 1e-9; };

    c.expect(near(annot::cohen_kappa(V{"T", "F", "T", "F"}, V{"T", "F", "T", "F"}), 1.0),
             "identical labelings must score kappa 1.0");
    c.expect(near(annot::cohen_kappa(V{"T", "T", "F", "F"}, V{"T", "F", "T", "F"}), 0.0),
             "chance-level agreement must score kappa 0.0");
    c.expect(near(annot::cohen_kappa(V{"T", "T", "T", "F"}, V{"T", "T", "F", "F"}), 0.5),
             "the 3/4-agreement fixture must score kappa 0.5");

    static const char* alphabet[] = {"w", "x", "y", "z"};
    rng::Engine engine(99);
    int violations = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        std::size_t n = 2 + rng::bounded(engine, 39);
        std::size_t k = 2 + rng::bounded(engine, 3);
        V a(n), b(n);
        for (std::size_t i = 0; i < n; ++i) {
            a[i] = alphabet[rng::bounded(engine, k)];
            b[i] = alphabet[rng::bounded(engine, k)];
        }
        double ab = annot::cohen_kappa(a, b);
        double ba = annot::cohen_kappa(b, a);
        bool ok = std::abs(ab - ba) <= 1e-12 && ab <= 1.0 + 1e-9 && ab >= -1.0 - 1e-9 &&
                  std::abs(annot::cohen_kappa(a, a) - 1.0) <= 1e-12;
        if (!ok) ++violations;
    }
    c.expect(violations == 0,
             std::to_string(violations) + " of 1000 random vectors broke symmetry or range");
}

// ------------------------------------------------------ 7. cleaning contract

// Random UTF-8 over several codepoint bands, salted with the characters the
// cleaner is supposed to strip.
std::string random_unicode(rng::Engine& engine) {
    std::string s;
    std::size_t length = rng::bounded(engine, 61);
    for (std::size_t i = 0; i < length; ++i) {
        char32_t cp = 0;
        switch (rng::bounded(engine, 6)) {
        case 0: cp = 0x20 + static_cast<char32_t>(rng::bounded(engine, 0x5F)); break; // printable
        case 1: cp = static_cast<char32_t>(1 + rng::bounded(engine, 0x1F)); break;    // control
        case 2: cp = 0x80 + static_cast<char32_t>(rng::bounded(engine, 0x80)); break; // latin-1
        case 3: cp = 0x100 + static_cast<char32_t>(rng::bounded(engine, 0x2F00)); break;
        case 4: cp = 0x10000 + static_cast<char32_t>(rng::bounded(engine, 0x1000)); break;
        case 5: cp = "()'`\t\n"[rng::bounded(engine, 6)]; break;
        }
        if (cp < 0x80) {
            s += static_cast<char>(cp);
        } else if (cp < 0x800) {
            s += static_cast<char>(0xC0 | (cp >> 6));
            s += static_cast<char>(0x80 | (cp & 0x3F));
        } else if (cp < 0x10000) {
            s += static_cast<char>(0xE0 | (cp >> 12));
            s += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
            s += static_cast<char>(0x80 | (cp & 0x3F));
        } else {
            s += static_cast<char>(0xF0 | (cp >> 18));
            s += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
            s += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
            s += static_cast<char>(0x80 | (cp & 0x3F));
        }
    }
    return s;
}

bool clean_output_ok(const std::string& cleaned) {
    if (!cleaned.empty() && (cleaned.front() == ' ' || cleaned.back() == ' ')) return false;
    char prev = '\0';
    for (unsigned char ch : cleaned) {
        if (ch >= 0x80) return false;                  // non-ASCII
        if (ch < 0x20 || ch == 0x7f) return false;     // control
        if (ch == '(' || ch == ')') return false;      // parentheses
        if (ch == '\'' || ch == '`') return false;     // quotes
        if (ch == ' ' && prev == ' ') return false;    // collapsed runs only
        prev = static_cast<char>(ch);
    }
    return true;
}

void check_cleaning(Checker& c) {
    rng::Engine engine(7777);
    int violations = 0;
    for (int i = 0; i < 10000; ++i) {
        std::string raw = random_unicode(engine);
        std::string cleaned = lm::clean_text(raw);
        bool ok = cleaned.size() <= raw.size() && clean_output_ok(cleaned) &&
                  lm::clean_text(cleaned) == cleaned;
        if (!ok) ++violations;
    }
    c.expect(violations == 0,
             std::to_string(violations) + " of 10000 random strings broke the cleaning contract");
}

// ------------------------------------------------------ 8. novelty behavior

// Similarity from a deterministic hash of the text pair.
class HashSimScorer final : public scoring::Scorer {
public:
    std::string name() const override { return "hash_sim"; }
    scoring::ScorerKind kind() const override { return scoring::ScorerKind::sts; }
    double score(const std::string& text, const std::string& context) const override {
        return static_cast<double>(
                   rng::splitmix64(rng::fnv1a(text) ^ rng::splitmix64(rng::fnv1a(context))) >> 11) *
               0x1.0p-53;
    }
};

GeneratedText bare_text(std::string id, std::string topic, std::string text) {
    GeneratedText gt;
    gt.id = std::move(id);
    gt.topic_id = std::move(topic);
    gt.prompt_used = "prompt";
    gt.raw = text;
    gt.text = std::move(text);
    gt.token_count = 1;
    return gt;
}

void check_novelty(Checker& c) {
    HashSimScorer sim;
    int violations = 0;
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<ClaimRecord> claims;
        std::vector<GeneratedText> gts;
        for (int t = 0; t < 3; ++t) {
            std::string topic = "t" + std::to_string(t);
            for (int i = 0; i < 4; ++i)
                claims.push_back(testutil::make_claim(
                    topic, "claim " + std::to_string(trial) + " " + topic + " " +
                               std::to_string(i)));
            for (int i = 0; i < 8; ++i)
                gts.push_back(bare_text(topic + "#" + std::to_string(i), topic,
                                        "gen " + std::to_string(trial) + " " + topic + " " +
                                            std::to_string(i)));
        }
        auto corpus_claims = novelty::index_corpus(claims);
        std::size_t previous = gts.size() + 1;
        for (int step = 0; step <= 10; ++step) {
            auto report =
                novelty::match_claims(gts, corpus_claims, sim, 0.1 * static_cast<double>(step));
            std::size_t matches = 0;
            for (const auto& m : report.results) matches += m.is_match ? 1 : 0;
            if (matches > previous) ++violations;
            previous = matches;
        }
    }
    c.expect(violations == 0,
             std::to_string(violations) + " threshold steps increased the match count");

    // Rate arithmetic on fixed counts: 20 hits out of 169 attempts.
    class FixtureSim final : public scoring::Scorer {
    public:
        std::string name() const override { return "fixture_sim"; }
        scoring::ScorerKind kind() const override { return scoring::ScorerKind::sts; }
        double score(const std::string& text, const std::string&) const override {
            return text.find("dup") != std::string::npos ? 0.9 : 0.5;
        }
    } fixture_sim;

    std::vector<ClaimRecord> base{testutil::make_claim("t1", "the reference claim")};
    auto corpus_claims = novelty::index_corpus(base);
    std::vector<GeneratedText> gts;
    for (int i = 0; i < 169; ++i) {
        std::string text = (i < 20 ? "dup " : "new ") + std::to_string(i);
        gts.push_back(bare_text("g" + std::to_string(i), "t1", text));
    }
    auto report = novelty::match_claims(gts, corpus_claims, fixture_sim, 0.75);
    double rate = novelty::novelty_rate(report);
    c.expect(report.results.size() == 169,
             "expected 169 attempts, got " + std::to_string(report.results.size()));
    c.expect(std::abs(rate - (1.0 - 20.0 / 169.0)) <= 1e-12,
             "novelty rate " + fmt(rate) + " is not 1 - 20/169");
    c.expect(std::abs(rate - 0.8817) <= 1e-4,
             "novelty rate " + fmt(rate) + " outside 0.8817 +/- 1e-4");
}

// ------------------------------------------------- 9. artifact determinism

int run_cli(const std::string& tool, const std::vector<std::string>& args,
            const fs::path& log_dir) {
    static int n = 0;
    auto quote = [](const std::string& s) {
        std::string q = "'";
        for (char ch : s) q += (ch == '\'') ? std::string("'\\''") : std::string(1, ch);
        return q + "'";
    };
    std::string log = (log_dir / ("cli" + std::to_string(n++) + ".log")).string();
    std::string cmd = quote(tool);
    for (const auto& a : args) cmd += " " + quote(a);
    cmd += " > " + quote(log) + " 2>&1";
    int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void check_determinism(Checker& c) {
    const char* tool = std::getenv("CLAIMGEN_TOOL");
    if (!tool || !*tool) {
        c.expect(false, "CLAIMGEN_TOOL is not set; cannot drive the binary");
        return;
    }

    testutil::TempDir dir;
    dir.write("topics.jsonl",
              R"({"id":"t1","text":"We should fund city parks","split":"train"})" "\n"
              R"({"id":"t2","text":"We should ban street ads","split":"train"})" "\n"
              R"({"id":"t3","text":"We should subsidize night trains","split":"test"})" "\n"
              R"({"id":"t4","text":"We should expand bike lanes","split":"test"})" "\n");
    dir.write("claims.jsonl",
              R"({"topic_id":"t1","text":"parks give children room to play","quality_score":0.95,"source":"other"})" "\n"
              R"({"topic_id":"t1","text":"green space cools summer streets","quality_score":0.92,"source":"other"})" "\n"
              R"({"topic_id":"t2","text":"street ads distract drivers","quality_score":0.97,"source":"other"})" "\n"
              R"({"topic_id":"t2","text":"billboards crowd out public art","quality_score":0.93,"source":"other"})" "\n");
    dir.write("external.jsonl",
              R"({"topic_id":"transit","text":"trains connect distant towns","source":"other"})" "\n"
              R"({"topic_id":"transit","text":"rail beats driving on cost","source":"other"})" "\n");
    dir.write("corpus.jsonl",
              R"({"topic_id":"t3","text":"night trains replace short flights","source":"other"})" "\n"
              R"({"topic_id":"t4","text":"bike lanes calm city traffic","source":"other"})" "\n");
    {
        std::string judgments;
        for (const char* item : {"t3#000", "t4#001"}) {
            for (int a = 0; a < 6; ++a) {
                json p{{"annotator_id", "b" + std::to_string(a)},
                       {"item_id", item},
                       {"task", "plausibility"},
                       {"value", a < 5 ? "true" : "false"},
                       {"is_test_question", false}};
                json s{{"annotator_id", "b" + std::to_string(a)},
                       {"item_id", item},
                       {"task", "stance"},
                       {"value", a < 4 ? "pro" : "none"},
                       {"is_test_question", false}};
                judgments += p.dump() + "\n" + s.dump() + "\n";
            }
        }
        dir.write("judgments.jsonl", judgments);
    }

    json config{{"seed", 7},
                {"paths",
                 {{"topics", dir.file("topics.jsonl").string()},
                  {"claims", dir.file("claims.jsonl").string()},
                  {"external_claims", dir.file("external.jsonl").string()},
                  {"corpus", dir.file("corpus.jsonl").string()},
                  {"judgments", dir.file("judgments.jsonl").string()}}},
                {"pipeline", {{"n_per_topic", 6}, {"k_selected", 2}, {"scorer", "word_diversity"}}},
                {"finetune_steps", 60}};
    std::string config_path = dir.write("config.json", config.dump()).string();

    const char* sequence[] = {"prepare", "finetune", "generate", "rank", "aggregate", "novelty"};
    for (const char* out : {"out1", "out2"}) {
        for (const char* sub : sequence) {
            int rc = run_cli(tool, {sub, "-c", config_path, "-o", dir.file(out).string()}, dir.path());
            if (rc != 0) {
                c.expect(false, std::string(sub) + " exited " + std::to_string(rc) + " in " + out);
                return;
            }
        }
    }

    const char* artifacts[] = {"topics_prepared.jsonl", "claims_filtered.jsonl",
                               "sequences.jsonl",       "external_eval.jsonl",
                               "gts.jsonl",             "gts_ranked.jsonl",
                               "labels.jsonl",          "matches.jsonl"};
    for (const char* name : artifacts) {
        std::string a = testutil::read_file(dir.file(std::string("out1/") + name));
        std::string b = testutil::read_file(dir.file(std::string("out2/") + name));
        if (a.empty()) c.expect(false, std::string(name) + " is empty or missing");
        else if (a != b) c.expect(false, std::string(name) + " differs between identical runs");
    }
}

} // namespace

int main() {
    std::printf("acceptance checks\n");
    run_criterion(1, "strict quality filter keeps exactly 10669 of the 30497-row export",
                  check_quality_filter);
    run_criterion(2, "pipeline selects exactly 672 texts, 7 per topic, ranked by score",
                  check_pipeline_arithmetic);
    run_criterion(3, "memorized backend ranks prefixes >= 0.9 and lowers perplexity",
                  check_memorization);
    run_criterion(4, "uniform perplexity equals vocab size; ranking survives monotone maps",
                  check_metric_identities);
    run_criterion(5, "crowd aggregation matches a brute-force oracle on all small vote patterns",
                  check_aggregation_oracle);
    run_criterion(6, "kappa fixtures match hand-computed values; symmetry and range hold",
                  check_kappa);
    run_criterion(7, "text cleaning is idempotent and class-exclusive on random Unicode",
                  check_cleaning);
    run_criterion(8, "novelty matching is monotone in threshold and its rate arithmetic is exact",
                  check_novelty);
    run_criterion(9, "subcommand reruns produce byte-identical JSONL artifacts",
                  check_determinism);

    if (g_failed == 0) std::printf("all 9 criteria passed\n");
    else std::printf("%d of 9 criteria FAILED\n", g_failed);
    return g_failed == 0 ? 0 : 1;
}
