#include "claimgen/config.hpp"

#include <fstream>

namespace claimgen::config {

void RunConfig::validate() const {
    std::vector<std::string> violations;
    auto check_unit = [&](double v, const char* field) {
        if (v < 0.0 || v > 1.0)
            violations.push_back(std::string(field) + " must be in [0,1], got " +
                                 std::to_string(v));
    };

    if (backend != "toy" && backend != "toy-uniform")
        violations.push_back("backend must be \"toy\" or \"toy-uniform\", got \"" + backend +
                             "\"");
    if (sampling.top_k < 1) violations.push_back("sampling.top_k must be >= 1");
    if (!(sampling.temperature > 0.0)) violations.push_back("sampling.temperature must be > 0");
    if (sampling.max_new_tokens < 1) violations.push_back("sampling.max_new_tokens must be >= 1");
    if (pipeline.n_per_topic < 1) violations.push_back("pipeline.n_per_topic must be >= 1");
    if (pipeline.k_selected < 1) violations.push_back("pipeline.k_selected must be >= 1");
    if (pipeline.scorer.empty()) violations.push_back("pipeline.scorer must name a scorer");
    if (pipeline.framing == corpus::FramingMode::aspect && pipeline.aspect.empty())
        violations.push_back("pipeline.aspect must name an aspect under aspect framing");
    if (pipeline.split != "train" && pipeline.split != "dev" && pipeline.split != "test" &&
        pipeline.split != "all")
        violations.push_back("pipeline.split must be train, dev, test, or all");
    check_unit(thresholds.quality_filter, "thresholds.quality_filter");
    check_unit(thresholds.plausibility, "thresholds.plausibility");
    check_unit(thresholds.factual, "thresholds.factual");
    check_unit(thresholds.sts_match, "thresholds.sts_match");
    check_unit(thresholds.annotator_plausibility, "thresholds.annotator_plausibility");
    check_unit(thresholds.annotator_stance, "thresholds.annotator_stance");
    if (annotation.min_judgments < 1) violations.push_back("annotation.min_judgments must be >= 1");
    if (annotation.kappa_min_common < 1)
        violations.push_back("annotation.kappa_min_common must be >= 1");
    if (annotation.kappa_min_partners < 1)
        violations.push_back("annotation.kappa_min_partners must be >= 1");
    if (eval.n_samples < 1) violations.push_back("eval.n_samples must be >= 1");
    if (eval.sample_size < 1) violations.push_back("eval.sample_size must be >= 1");
    if (eval.n_distractors < 1) violations.push_back("eval.n_distractors must be >= 1");
    if (finetune_steps < 1) violations.push_back("finetune_steps must be >= 1");
    if (corpus_config.options.delimiter.empty())
        violations.push_back("corpus.delimiter must be non-empty");
    if (corpus_config.options.eos_marker.empty())
        violations.push_back("corpus.eos_marker must be non-empty");

    if (!violations.empty()) throw ConfigError(violations);
}

namespace {

void apply_override(json& root, const std::string& assignment) {
    auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ConfigError("override must look like path.to.key=value, got \"" + assignment +
                          "\"");
    std::string path = assignment.substr(0, eq);
    std::string value = assignment.substr(eq + 1);

    json* node = &root;
    std::size_t start = 0;
    for (;;) {
        auto dot = path.find('.', start);
        std::string key = path.substr(start, dot == std::string::npos ? dot : dot - start);
        if (key.empty())
            throw ConfigError("override path has an empty segment: \"" + path + "\"");
        if (dot == std::string::npos) {
            json parsed = json::parse(value, nullptr, false);
            (*node)[key] = parsed.is_discarded() ? json(value) : parsed;
            return;
        }
        node = &(*node)[key];
        start = dot + 1;
    }
}

template <typename T>
void get_to_if(const json& j, const char* key, T& out) {
    if (j.contains(key) && !j[key].is_null()) j[key].get_to(out);
}

} // namespace

RunConfig config_from_json(json j, const std::vector<std::string>& overrides) {
    for (const auto& o : overrides) apply_override(j, o);

    RunConfig c;
    if (j.contains("paths")) {
        const json& p = j["paths"];
        get_to_if(p, "claims", c.paths.claims);
        get_to_if(p, "topics", c.paths.topics);
        get_to_if(p, "aspect_table", c.paths.aspect_table);
        get_to_if(p, "wiki_lookup", c.paths.wiki_lookup);
        get_to_if(p, "judgments", c.paths.judgments);
        get_to_if(p, "corpus", c.paths.corpus);
        get_to_if(p, "external_claims", c.paths.external_claims);
        get_to_if(p, "model", c.paths.model);
        get_to_if(p, "sequences", c.paths.sequences);
        get_to_if(p, "output_dir", c.paths.output_dir);
    }
    get_to_if(j, "backend", c.backend);
    if (j.contains("sampling")) {
        const json& s = j["sampling"];
        get_to_if(s, "top_k", c.sampling.top_k);
        get_to_if(s, "temperature", c.sampling.temperature);
        get_to_if(s, "max_new_tokens", c.sampling.max_new_tokens);
    }
    if (j.contains("pipeline")) {
        const json& p = j["pipeline"];
        get_to_if(p, "n_per_topic", c.pipeline.n_per_topic);
        get_to_if(p, "k_selected", c.pipeline.k_selected);
        get_to_if(p, "scorer", c.pipeline.scorer);
        if (p.contains("framing"))
            c.pipeline.framing = corpus::framing_mode_from_string(p["framing"].get<std::string>());
        get_to_if(p, "aspect", c.pipeline.aspect);
        get_to_if(p, "split", c.pipeline.split);
    }
    if (j.contains("thresholds")) {
        const json& t = j["thresholds"];
        get_to_if(t, "quality_filter", c.thresholds.quality_filter);
        get_to_if(t, "plausibility", c.thresholds.plausibility);
        get_to_if(t, "factual", c.thresholds.factual);
        get_to_if(t, "sts_match", c.thresholds.sts_match);
        get_to_if(t, "annotator_plausibility", c.thresholds.annotator_plausibility);
        get_to_if(t, "annotator_stance", c.thresholds.annotator_stance);
    }
    if (j.contains("annotation")) {
        const json& a = j["annotation"];
        get_to_if(a, "min_judgments", c.annotation.min_judgments);
        get_to_if(a, "kappa_min_common", c.annotation.kappa_min_common);
        get_to_if(a, "kappa_min_partners", c.annotation.kappa_min_partners);
    }
    if (j.contains("eval")) {
        const json& e = j["eval"];
        get_to_if(e, "n_samples", c.eval.n_samples);
        get_to_if(e, "sample_size", c.eval.sample_size);
        get_to_if(e, "n_distractors", c.eval.n_distractors);
        if (e.contains("ppl_mode"))
            c.eval.ppl_mode = eval::perplexity_mode_from_string(e["ppl_mode"].get<std::string>());
    }
    if (j.contains("corpus")) {
        const json& k = j["corpus"];
        get_to_if(k, "delimiter", c.corpus_config.options.delimiter);
        get_to_if(k, "eos_marker", c.corpus_config.options.eos_marker);
        get_to_if(k, "fws_separator", c.corpus_config.options.fws_separator);
        get_to_if(k, "aspect_separator", c.corpus_config.options.aspect_separator);
        if (k.contains("format"))
            c.corpus_config.format = corpus::claim_format_from_string(k["format"].get<std::string>());
        get_to_if(k, "csv_preset", c.corpus_config.csv_preset);
        get_to_if(k, "drop_unmapped", c.corpus_config.drop_unmapped);
        if (k.contains("exclusions"))
            for (const auto& id : k["exclusions"]) c.corpus_config.exclusions.insert(id.get<std::string>());
    }
    get_to_if(j, "finetune_steps", c.finetune_steps);
    get_to_if(j, "seed", c.seed);

    c.eval.seed = c.seed;
    c.sampling.seed = c.seed;
    c.validate();
    return c;
}

RunConfig load_config(const std::filesystem::path& path,
                      const std::vector<std::string>& overrides) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) throw ConfigError("config file is not valid JSON: " + path.string());
    try {
        return config_from_json(std::move(j), overrides);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string(e.what()));
    }
}

json to_json(const RunConfig& c) {
    json exclusions = json::array();
    for (const auto& id : c.corpus_config.exclusions) exclusions.push_back(id);
    return json{
        {"paths",
         {{"claims", c.paths.claims},
          {"topics", c.paths.topics},
          {"aspect_table", c.paths.aspect_table},
          {"wiki_lookup", c.paths.wiki_lookup},
          {"judgments", c.paths.judgments},
          {"corpus", c.paths.corpus},
          {"external_claims", c.paths.external_claims},
          {"model", c.paths.model},
          {"sequences", c.paths.sequences},
          {"output_dir", c.paths.output_dir}}},
        {"backend", c.backend},
        {"sampling",
         {{"top_k", c.sampling.top_k},
          {"temperature", c.sampling.temperature},
          {"max_new_tokens", c.sampling.max_new_tokens}}},
        {"pipeline",
         {{"n_per_topic", c.pipeline.n_per_topic},
          {"k_selected", c.pipeline.k_selected},
          {"scorer", c.pipeline.scorer},
          {"framing", corpus::to_string(c.pipeline.framing)},
          {"aspect", c.pipeline.aspect},
          {"split", c.pipeline.split}}},
        {"thresholds",
         {{"quality_filter", c.thresholds.quality_filter},
          {"plausibility", c.thresholds.plausibility},
          {"factual", c.thresholds.factual},
          {"sts_match", c.thresholds.sts_match},
          {"annotator_plausibility", c.thresholds.annotator_plausibility},
          {"annotator_stance", c.thresholds.annotator_stance}}},
        {"annotation",
         {{"min_judgments", c.annotation.min_judgments},
          {"kappa_min_common", c.annotation.kappa_min_common},
          {"kappa_min_partners", c.annotation.kappa_min_partners}}},
        {"eval",
         {{"n_samples", c.eval.n_samples},
          {"sample_size", c.eval.sample_size},
          {"n_distractors", c.eval.n_distractors},
          {"ppl_mode", eval::to_string(c.eval.ppl_mode)}}},
        {"corpus",
         {{"delimiter", c.corpus_config.options.delimiter},
          {"eos_marker", c.corpus_config.options.eos_marker},
          {"fws_separator", c.corpus_config.options.fws_separator},
          {"aspect_separator", c.corpus_config.options.aspect_separator},
          {"format", c.corpus_config.format == corpus::ClaimFormat::jsonl ? "jsonl" : "csv"},
          {"csv_preset", c.corpus_config.csv_preset},
          {"drop_unmapped", c.corpus_config.drop_unmapped},
          {"exclusions", exclusions}}},
        {"finetune_steps", c.finetune_steps},
        {"seed", c.seed}};
}

} // namespace claimgen::config
