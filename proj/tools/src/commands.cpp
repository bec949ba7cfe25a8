#include "commands.hpp"

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <set>
#include <sstream>

#include "claimgen/annotation.hpp"
#include "claimgen/artifact.hpp"
#include "claimgen/corpus.hpp"
#include "claimgen/evaluation.hpp"
#include "claimgen/novelty.hpp"
#include "claimgen/pipeline.hpp"
#include "claimgen/scoring.hpp"
#include "claimgen/toy_lm.hpp"

namespace claimgen::cli {

namespace fs = std::filesystem;

namespace {

std::vector<Topic> load_topics_file(const fs::path& path) {
    std::vector<Topic> topics;
    jsonl::for_each(path, [&](const json& j, std::size_t lineno) {
        try {
            topics.push_back(topic_from_json(j));
        } catch (const std::exception& e) {
            throw ParseError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    });
    return topics;
}

AspectTable load_aspect_table(const fs::path& path) {
    std::vector<AspectEntry> entries;
    jsonl::for_each(path, [&](const json& j, std::size_t) {
        entries.push_back(aspect_entry_from_json(j));
    });
    return AspectTable(std::move(entries));
}

// Topics for generation and evaluation: the prepared artifact when this
// output directory has one, the configured raw file otherwise.
std::vector<Topic> input_topics(const Context& ctx) {
    fs::path prepared = ctx.out / "topics_prepared.jsonl";
    if (fs::exists(prepared)) return load_topics_file(prepared);
    if (ctx.config.paths.topics.empty())
        throw ConfigError("paths.topics is required (no prepared topics found in output_dir)");
    return load_topics_file(ctx.config.paths.topics);
}

std::vector<Topic> topics_for_split(std::vector<Topic> topics, const std::string& split) {
    if (split == "all") return topics;
    std::vector<Topic> out;
    Split wanted = split_from_string(split);
    for (auto& t : topics)
        if (t.split == wanted) out.push_back(std::move(t));
    return out;
}

lm::ToyLmOptions toy_options(const config::RunConfig& c) {
    lm::ToyLmOptions o;
    o.delimiter = c.corpus_config.options.delimiter;
    o.eos_marker = c.corpus_config.options.eos_marker;
    return o;
}

// "toy" loads the fine-tuned model file; "toy-uniform" builds an untrained
// model whose vocabulary is collected from the given seed texts.
lm::ToyLm make_backend(const Context& ctx, const std::vector<std::string>& vocab_texts) {
    const auto& c = ctx.config;
    if (c.backend == "toy") {
        fs::path path = c.paths.model.empty() ? ctx.out / "model.json" : fs::path(c.paths.model);
        if (!fs::exists(path))
            throw ConfigError("paths.model: no model file at " + path.string() +
                              " (run finetune first or use backend \"toy-uniform\")");
        return lm::ToyLm::load(path);
    }
    std::vector<std::string> vocabulary;
    std::set<std::string> seen;
    for (const auto& text : vocab_texts) {
        std::istringstream words(text);
        std::string w;
        while (words >> w)
            if (seen.insert(w).second) vocabulary.push_back(w);
    }
    return lm::ToyLm::uniform(std::move(vocabulary), toy_options(c));
}

pipeline::Framing make_framing(const Context& ctx, AspectTable& aspects_storage) {
    pipeline::Framing framing;
    framing.mode = ctx.config.pipeline.framing;
    framing.options = ctx.config.corpus_config.options;
    if (framing.mode == corpus::FramingMode::aspect) {
        if (ctx.config.paths.aspect_table.empty())
            throw ConfigError("paths.aspect_table is required under aspect framing");
        aspects_storage = load_aspect_table(ctx.config.paths.aspect_table);
        framing.aspects = &aspects_storage;
        framing.aspect = ctx.config.pipeline.aspect;
    }
    return framing;
}

std::vector<GeneratedText> load_gts(const fs::path& path) {
    std::vector<GeneratedText> gts;
    jsonl::for_each(path, [&](const json& j, std::size_t lineno) {
        try {
            gts.push_back(generated_text_from_json(j));
        } catch (const std::exception& e) {
            throw ParseError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    });
    return gts;
}

void write_manifest(const Context& ctx, const std::string& command,
                    const std::map<std::string, std::string>& inputs,
                    const std::map<std::string, std::int64_t>& counts) {
    artifact::write_json(ctx.out / (command + "_manifest.json"),
                         artifact::make_manifest(command, inputs, config::to_json(ctx.config),
                                                 counts, ctx.config.seed));
}

} // namespace

int cmd_prepare(const Context& ctx) {
    const auto& c = ctx.config;
    if (c.paths.topics.empty()) throw ConfigError("paths.topics is required for prepare");

    std::map<std::string, std::string> inputs{{"topics", c.paths.topics}};
    std::map<std::string, std::int64_t> counts;

    std::vector<Topic> topics = load_topics_file(c.paths.topics);
    counts["topics"] = static_cast<std::int64_t>(topics.size());

    if (!c.paths.wiki_lookup.empty()) {
        inputs["wiki_lookup"] = c.paths.wiki_lookup;
        auto lookup = corpus::load_wiki_lookup(c.paths.wiki_lookup);
        auto mapped = corpus::apply_wiki_lookup(topics, lookup, c.corpus_config.drop_unmapped);
        topics = std::move(mapped.topics);
        counts["wiki_mapped"] = static_cast<std::int64_t>(mapped.mapped);
        counts["wiki_unmapped"] = static_cast<std::int64_t>(mapped.unmapped);
        counts["wiki_dropped"] = static_cast<std::int64_t>(mapped.dropped);
    }

    auto split_report = corpus::split_topics(topics, c.corpus_config.exclusions);
    topics = std::move(split_report.topics);
    counts["excluded_from_eval"] = static_cast<std::int64_t>(split_report.excluded.size());
    if (split_report.empty_eval_warning)
        std::cerr << "warning: dev and test splits are both empty after exclusions\n";

    std::vector<json> topic_rows;
    for (const auto& t : topics) topic_rows.push_back(to_json(t));
    artifact::write_jsonl(ctx.out / "topics_prepared.jsonl", topic_rows);

    if (!c.paths.claims.empty()) {
        inputs["claims"] = c.paths.claims;
        corpus::CsvColumns columns;
        if (c.corpus_config.csv_preset == "rank30k") columns = corpus::CsvColumns::rank30k();
        else if (!c.corpus_config.csv_preset.empty())
            throw ConfigError("corpus.csv_preset must be \"rank30k\" or empty");
        auto claims = corpus::load_claims(c.paths.claims, c.corpus_config.format, nullptr, columns);
        counts["claims_loaded"] = static_cast<std::int64_t>(claims.size());

        auto filtered = corpus::filter_by_quality(claims, c.thresholds.quality_filter);
        counts["claims_kept"] = static_cast<std::int64_t>(filtered.kept.size());
        counts["claims_dropped_unscored"] = static_cast<std::int64_t>(filtered.dropped_unscored);
        counts["claims_dropped_below"] = static_cast<std::int64_t>(filtered.dropped_below);

        std::vector<json> claim_rows;
        for (const auto& cl : filtered.kept) claim_rows.push_back(to_json(cl));
        artifact::write_jsonl(ctx.out / "claims_filtered.jsonl", claim_rows);

        // Training sequences: filtered claims whose topics are in the train
        // split. Eval-split claims never reach a sequence.
        TopicRegistry registry(topics);
        std::vector<ClaimRecord> train_claims;
        for (const auto& cl : filtered.kept)
            if (registry.at(cl.topic_id).split == Split::train) train_claims.push_back(cl);

        AspectTable aspects;
        const AspectTable* aspects_ptr = nullptr;
        if (c.pipeline.framing == corpus::FramingMode::aspect) {
            if (c.paths.aspect_table.empty())
                throw ConfigError("paths.aspect_table is required under aspect framing");
            inputs["aspect_table"] = c.paths.aspect_table;
            aspects = load_aspect_table(c.paths.aspect_table);
            aspects_ptr = &aspects;
        }
        auto sequences =
            corpus::build_training_sequences(train_claims, registry, c.pipeline.framing,
                                             c.corpus_config.options, aspects_ptr,
                                             c.pipeline.aspect);
        counts["sequences"] = static_cast<std::int64_t>(sequences.size());

        std::vector<json> sequence_rows;
        for (const auto& s : sequences) sequence_rows.push_back(to_json(s));
        artifact::write_jsonl(ctx.out / "sequences.jsonl", sequence_rows);
    }

    if (!c.paths.external_claims.empty()) {
        inputs["external_claims"] = c.paths.external_claims;
        // External evaluation set: raw (topic, claim) rows whose topics are
        // rephrased as policy statements by prepending "We should support ".
        auto raw = corpus::load_claims(c.paths.external_claims, corpus::ClaimFormat::jsonl);
        std::vector<json> items;
        for (const auto& cl : raw)
            items.push_back(json{{"condition", "We should support " + cl.topic_id},
                                 {"text", cl.text}});
        artifact::write_jsonl(ctx.out / "external_eval.jsonl", items);
        counts["external_items"] = static_cast<std::int64_t>(items.size());
    }

    write_manifest(ctx, "prepare", inputs, counts);
    return 0;
}

int cmd_finetune(const Context& ctx) {
    const auto& c = ctx.config;
    fs::path seq_path = c.paths.sequences.empty() ? ctx.out / "sequences.jsonl"
                                                  : fs::path(c.paths.sequences);
    if (!fs::exists(seq_path))
        throw ConfigError("paths.sequences: no sequence file at " + seq_path.string() +
                          " (run prepare first)");

    std::vector<TrainingSequence> sequences;
    jsonl::for_each(seq_path, [&](const json& j, std::size_t) {
        sequences.push_back(training_sequence_from_json(j));
    });

    lm::ToyLm model = lm::ToyLm::from_sequences(sequences, toy_options(c));
    lm::fine_tune(model, sequences, c.finetune_steps);

    fs::path model_path = c.paths.model.empty() ? ctx.out / "model.json" : fs::path(c.paths.model);
    model.save(model_path);

    write_manifest(ctx, "finetune", {{"sequences", seq_path.string()}},
                   {{"sequences", static_cast<std::int64_t>(sequences.size())},
                    {"steps", c.finetune_steps},
                    {"vocab_size", static_cast<std::int64_t>(model.vocab_size())}});
    std::cout << "fine-tuned " << model.id() << " on " << sequences.size() << " sequences, saved "
              << model_path.string() << "\n";
    return 0;
}

int cmd_generate(const Context& ctx) {
    const auto& c = ctx.config;
    auto topics = topics_for_split(input_topics(ctx), c.pipeline.split);
    if (topics.empty())
        throw ConfigError("pipeline.split: no topics in split \"" + c.pipeline.split + "\"");

    std::vector<std::string> vocab_texts;
    for (const auto& t : topics) vocab_texts.push_back(t.text);
    lm::ToyLm model = make_backend(ctx, vocab_texts);

    AspectTable aspects;
    pipeline::Framing framing = make_framing(ctx, aspects);

    lm::SamplingConfig sampling = c.sampling;
    sampling.seed = c.seed;

    std::vector<GeneratedText> gts;
    std::map<std::string, std::string> failures;
    for (const auto& topic : topics) {
        try {
            auto batch =
                pipeline::generate_for_topic(model, topic, c.pipeline.n_per_topic, sampling,
                                             framing);
            gts.insert(gts.end(), std::make_move_iterator(batch.begin()),
                       std::make_move_iterator(batch.end()));
        } catch (const std::exception& e) {
            failures[topic.id] = e.what();
        }
    }
    if (gts.empty()) throw Error("generation produced no texts (all topics failed)");

    std::vector<json> rows;
    for (const auto& gt : gts) rows.push_back(to_json(gt));
    artifact::write_jsonl(ctx.out / "gts.jsonl", rows);

    std::map<std::string, std::int64_t> counts{
        {"topics", static_cast<std::int64_t>(topics.size())},
        {"n_per_topic", c.pipeline.n_per_topic},
        {"texts", static_cast<std::int64_t>(gts.size())},
        {"failed_topics", static_cast<std::int64_t>(failures.size())}};
    write_manifest(ctx, "generate", {{"model", model.id()}}, counts);
    std::cout << "generated " << gts.size() << " texts over " << topics.size() << " topics\n";
    return 0;
}

int cmd_rank(const Context& ctx) {
    const auto& c = ctx.config;
    fs::path gts_path = ctx.out / "gts.jsonl";
    if (!fs::exists(gts_path))
        throw ConfigError("no generated texts at " + gts_path.string() + " (run generate first)");
    auto gts = load_gts(gts_path);

    auto scorer = scoring::make_scorer(c.pipeline.scorer);
    auto selection = pipeline::select_top_k(gts, *scorer, static_cast<std::size_t>(c.pipeline.k_selected));

    std::vector<json> rows;
    for (const auto& gt : gts) {
        json row = to_json(gt);
        row["selected"] = selection.selected_ids.count(gt.id) > 0;
        rows.push_back(std::move(row));
    }
    artifact::write_jsonl(ctx.out / "gts_ranked.jsonl", rows);

    std::map<std::string, std::int64_t> counts{
        {"texts", static_cast<std::int64_t>(gts.size())},
        {"selected", static_cast<std::int64_t>(selection.selected_ids.size())},
        {"duplicates_dropped", static_cast<std::int64_t>(selection.duplicates_dropped)},
        {"empties_dropped", static_cast<std::int64_t>(selection.empties_dropped)},
        {"failed_topics", static_cast<std::int64_t>(selection.failed_topics.size())}};
    write_manifest(ctx, "rank", {{"gts", gts_path.string()}}, counts);
    std::cout << "selected " << selection.selected_ids.size() << " of " << gts.size()
              << " texts (scorer " << scorer->name() << ", k=" << c.pipeline.k_selected << ")\n";
    return 0;
}

namespace {

json stat_to_json(const eval::MetricStat& m) {
    if (m.stat) return json{{"mean", m.stat->mean}, {"stddev", m.stat->stddev}};
    return json{{"error", m.error}};
}

std::string stat_cell(const eval::MetricStat& m) {
    if (!m.stat) return "n/a";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3f +/- %.3f", m.stat->mean, m.stat->stddev);
    return buf;
}

} // namespace

int cmd_evaluate(const Context& ctx) {
    const auto& c = ctx.config;
    fs::path items_path = ctx.out / "external_eval.jsonl";
    if (!fs::exists(items_path))
        throw ConfigError("no evaluation items at " + items_path.string() +
                          " (run prepare with paths.external_claims set)");

    std::vector<eval::EvalItem> items;
    jsonl::for_each(items_path, [&](const json& j, std::size_t) {
        items.push_back({j.at("condition").get<std::string>(), j.at("text").get<std::string>()});
    });

    std::vector<std::string> vocab_texts;
    for (const auto& item : items) {
        vocab_texts.push_back(item.condition);
        vocab_texts.push_back(item.text);
    }
    lm::ToyLm model = make_backend(ctx, vocab_texts);

    std::vector<GeneratedText> gts;
    if (fs::exists(ctx.out / "gts_ranked.jsonl")) gts = load_gts(ctx.out / "gts_ranked.jsonl");
    else if (fs::exists(ctx.out / "gts.jsonl")) gts = load_gts(ctx.out / "gts.jsonl");

    scoring::WordDiversityScorer quality;
    scoring::StanceCueScorer stance;
    std::vector<const scoring::Scorer*> scorers{&quality, &stance};

    eval::EvalConfig eval_config = c.eval;
    eval_config.seed = c.seed;
    auto report = eval::eval_report(model, gts, scorers, items, eval_config);

    json out{{"perplexity", stat_to_json(report.perplexity)},
             {"prefix_rank_acc", stat_to_json(report.prefix_rank_acc)},
             {"pred_quality", stat_to_json(report.pred_quality)},
             {"pred_stance_abs", stat_to_json(report.pred_stance_abs)},
             {"n_samples", report.n_samples},
             {"sample_size", report.sample_size},
             {"seed", report.seed},
             {"n_eval_items", report.n_eval_items},
             {"n_texts", report.n_texts},
             {"model", model.id()},
             {"ppl_mode", eval::to_string(eval_config.ppl_mode)}};
    artifact::write_json(ctx.out / "eval_report.json", out);

    std::cout << "model            PPL                 PR                  P-QU                P-ST\n"
              << model.id() << "  " << stat_cell(report.perplexity) << "  "
              << stat_cell(report.prefix_rank_acc) << "  " << stat_cell(report.pred_quality)
              << "  " << stat_cell(report.pred_stance_abs) << "\n";

    write_manifest(ctx, "evaluate", {{"items", items_path.string()}, {"model", model.id()}},
                   {{"items", static_cast<std::int64_t>(items.size())},
                    {"texts", static_cast<std::int64_t>(gts.size())}});
    return 0;
}

int cmd_aggregate(const Context& ctx) {
    const auto& c = ctx.config;
    if (c.paths.judgments.empty()) throw ConfigError("paths.judgments is required for aggregate");
    auto judgments = annot::load_judgments(c.paths.judgments);

    std::map<annot::Task, double> thresholds{
        {annot::Task::plausibility, c.thresholds.annotator_plausibility},
        {annot::Task::stance, c.thresholds.annotator_stance}};
    auto filtered = annot::filter_annotators(judgments, thresholds);

    std::size_t min_judgments = static_cast<std::size_t>(c.annotation.min_judgments);
    auto plausibility =
        annot::aggregate_plausibility(filtered.kept, c.thresholds.plausibility, min_judgments);
    auto stance = annot::aggregate_stance(filtered.kept, min_judgments);
    auto factual = annot::aggregate_factual(filtered.kept, c.thresholds.factual, min_judgments);
    auto labels = annot::merge_labels(plausibility, stance, factual);

    std::vector<json> rows;
    std::int64_t insufficient = 0;
    for (const auto& l : labels) {
        rows.push_back(to_json(l));
        if (l.insufficient) ++insufficient;
    }
    artifact::write_jsonl(ctx.out / "labels.jsonl", rows);

    json kappa = json::object();
    for (auto task : {annot::Task::plausibility, annot::Task::stance, annot::Task::factual}) {
        auto k = annot::mean_annotator_kappa(
            filtered.kept, task, static_cast<std::size_t>(c.annotation.kappa_min_common),
            static_cast<std::size_t>(c.annotation.kappa_min_partners));
        kappa[annot::to_string(task)] = k ? json(*k) : json(nullptr);
    }
    json filter_stats = json::object();
    for (const auto& [task, per_annotator] : filtered.by_task) {
        std::int64_t removed = 0, unchecked = 0;
        for (const auto& [annotator, acc] : per_annotator) {
            removed += acc.removed ? 1 : 0;
            unchecked += acc.unchecked ? 1 : 0;
        }
        filter_stats[task] = {{"annotators", per_annotator.size()},
                              {"removed", removed},
                              {"unchecked", unchecked}};
    }
    artifact::write_json(ctx.out / "aggregate_report.json",
                         json{{"kappa", kappa},
                              {"annotator_filter", filter_stats},
                              {"judgments_in", judgments.size()},
                              {"judgments_removed", filtered.n_removed_judgments},
                              {"items", labels.size()},
                              {"items_insufficient", insufficient}});

    write_manifest(ctx, "aggregate", {{"judgments", c.paths.judgments}},
                   {{"judgments", static_cast<std::int64_t>(judgments.size())},
                    {"removed", static_cast<std::int64_t>(filtered.n_removed_judgments)},
                    {"items", static_cast<std::int64_t>(labels.size())},
                    {"insufficient", insufficient}});
    std::cout << "aggregated " << labels.size() << " items from " << judgments.size()
              << " judgments (" << filtered.n_removed_judgments << " removed by quality control)\n";
    return 0;
}

int cmd_novelty(const Context& ctx) {
    const auto& c = ctx.config;
    fs::path gts_path = ctx.out / "gts_ranked.jsonl";
    if (!fs::exists(gts_path)) gts_path = ctx.out / "gts.jsonl";
    if (!fs::exists(gts_path))
        throw ConfigError("no generated texts in " + ctx.out.string() + " (run generate first)");
    if (c.paths.corpus.empty()) throw ConfigError("paths.corpus is required for novelty");

    // Matching runs over the selected texts when a ranked file marks any;
    // otherwise over everything in the file.
    std::vector<GeneratedText> gts;
    bool any_selected = false;
    jsonl::for_each(gts_path, [&](const json& j, std::size_t) {
        if (j.value("selected", false)) any_selected = true;
    });
    jsonl::for_each(gts_path, [&](const json& j, std::size_t) {
        if (!any_selected || j.value("selected", false))
            gts.push_back(generated_text_from_json(j));
    });

    auto corpus_claims =
        novelty::index_corpus(corpus::load_claims(c.paths.corpus, corpus::ClaimFormat::jsonl));
    scoring::CharNgramCosineScorer sts;
    auto matches = novelty::match_claims(gts, corpus_claims, sts, c.thresholds.sts_match);
    double rate = novelty::novelty_rate(matches);

    std::vector<json> rows;
    std::int64_t n_matches = 0;
    for (const auto& m : matches.results) {
        rows.push_back(json{{"gt_id", m.gt_id},
                            {"best_claim_id", m.best_claim_id},
                            {"similarity", m.similarity},
                            {"is_match", m.is_match}});
        if (m.is_match) ++n_matches;
    }
    artifact::write_jsonl(ctx.out / "matches.jsonl", rows);

    json report{{"threshold", matches.threshold},
                {"attempted", matches.results.size()},
                {"matches", n_matches},
                {"skipped", matches.skipped.size()},
                {"novelty_rate", rate}};

    if (!c.paths.judgments.empty()) {
        auto judgments = annot::load_judgments(c.paths.judgments);
        std::map<std::string, novelty::VoteCounts> votes;
        for (const auto& jd : judgments) {
            if (jd.is_test_question) continue;
            if (jd.task == annot::Task::plausibility && jd.value == "true")
                ++votes[jd.item_id].plausibility;
            if (jd.task == annot::Task::stance && jd.value != "none") ++votes[jd.item_id].stance;
        }
        try {
            auto [rho_p, rho_s] = novelty::vote_correlation(matches, votes);
            report["vote_correlation"] = {{"plausibility", rho_p}, {"stance", rho_s}};
        } catch (const std::exception& e) {
            report["vote_correlation"] = {{"error", e.what()}};
        }

        auto preferences = novelty::preference_summary(judgments);
        if (preferences.n_pairs > 0)
            report["preference"] = {{"generated", preferences.generated},
                                    {"corpus", preferences.corpus},
                                    {"tie", preferences.tie},
                                    {"pairs", preferences.n_pairs}};
    }
    artifact::write_json(ctx.out / "novelty_report.json", report);

    write_manifest(ctx, "novelty",
                   {{"gts", gts_path.string()}, {"corpus", c.paths.corpus}},
                   {{"attempted", static_cast<std::int64_t>(matches.results.size())},
                    {"matches", n_matches},
                    {"skipped", static_cast<std::int64_t>(matches.skipped.size())}});
    std::printf("novelty rate %.4f (%lld/%zu matched at %.2f)\n", rate,
                static_cast<long long>(n_matches), matches.results.size(), matches.threshold);
    return 0;
}

int cmd_report(const Context& ctx) {
    // Formats what earlier subcommands wrote; computes nothing new.
    std::ostringstream out;
    bool found = false;

    fs::path eval_path = ctx.out / "eval_report.json";
    if (fs::exists(eval_path)) {
        found = true;
        json e = artifact::read_json(eval_path);
        auto cell = [&](const char* key) -> std::string {
            const json& m = e.at(key);
            if (m.contains("error")) return "n/a";
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.3f +/- %.3f", m["mean"].get<double>(),
                          m["stddev"].get<double>());
            return buf;
        };
        out << "== Model metrics ==\n"
            << "model: " << e.value("model", std::string{"?"}) << "\n"
            << "  perplexity      " << cell("perplexity") << "\n"
            << "  prefix ranking  " << cell("prefix_rank_acc") << "\n"
            << "  pred. quality   " << cell("pred_quality") << "\n"
            << "  pred. |stance|  " << cell("pred_stance_abs") << "\n"
            << "  (" << e.value("n_samples", 0) << " samples of " << e.value("sample_size", 0)
            << ", seed " << e.value("seed", 0) << ")\n\n";
    }

    fs::path rank_path = ctx.out / "rank_manifest.json";
    if (fs::exists(rank_path)) {
        found = true;
        json r = artifact::read_json(rank_path);
        const json& counts = r.at("counts");
        out << "== Selection ==\n"
            << "  texts " << counts.value("texts", 0) << ", selected "
            << counts.value("selected", 0) << ", duplicates dropped "
            << counts.value("duplicates_dropped", 0) << ", empties dropped "
            << counts.value("empties_dropped", 0) << "\n\n";
    }

    fs::path labels_path = ctx.out / "labels.jsonl";
    if (fs::exists(labels_path)) {
        found = true;
        std::size_t n = 0, plausible = 0, pro = 0, con = 0, none = 0, factual = 0, opinion = 0;
        jsonl::for_each(labels_path, [&](const json& j, std::size_t) {
            ++n;
            if (j.value("plausible", false)) ++plausible;
            std::string stance = j.value("stance", std::string{});
            if (stance == "pro") ++pro;
            else if (stance == "con") ++con;
            else if (stance == "none") ++none;
            std::string f = j.value("factual", std::string{});
            if (f == "factual") ++factual;
            else if (f == "opinion") ++opinion;
        });
        out << "== Labels ==\n"
            << "  items " << n << ", plausible " << plausible << ", stance pro/con/none " << pro
            << "/" << con << "/" << none << ", factual/opinion " << factual << "/" << opinion
            << "\n\n";
    }

    fs::path novelty_path = ctx.out / "novelty_report.json";
    if (fs::exists(novelty_path)) {
        found = true;
        json nv = artifact::read_json(novelty_path);
        out << "== Novelty ==\n"
            << "  matched " << nv.value("matches", 0) << " of " << nv.value("attempted", 0)
            << " at threshold " << nv.value("threshold", 0.0) << ", novelty rate "
            << nv.value("novelty_rate", 0.0) << "\n";
        if (nv.contains("vote_correlation") && !nv["vote_correlation"].contains("error"))
            out << "  similarity vs votes: plausibility rho "
                << nv["vote_correlation"].value("plausibility", 0.0) << ", stance rho "
                << nv["vote_correlation"].value("stance", 0.0) << "\n";
        if (nv.contains("preference"))
            out << "  preference generated/corpus/tie: " << nv["preference"].value("generated", 0)
                << "/" << nv["preference"].value("corpus", 0) << "/"
                << nv["preference"].value("tie", 0) << " over "
                << nv["preference"].value("pairs", 0) << " pairs\n";
        out << "\n";
    }

    if (!found)
        throw ConfigError("no artifacts found in " + ctx.out.string() +
                          " (run other subcommands first)");

    artifact::atomic_write(ctx.out / "report.txt", out.str());
    std::cout << out.str();
    return 0;
}

} // namespace claimgen::cli
