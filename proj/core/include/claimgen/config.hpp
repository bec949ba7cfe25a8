#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "claimgen/corpus.hpp"
#include "claimgen/evaluation.hpp"
#include "claimgen/jsonl.hpp"
#include "claimgen/lm.hpp"

namespace claimgen::config {

struct Paths {
    std::string claims;
    std::string topics;
    std::string aspect_table;
    std::string wiki_lookup;
    std::string judgments;
    std::string corpus;          // curated claims for novelty matching
    std::string external_claims; // raw (topic, claim) set for evaluation
    std::string model;
    std::string sequences;
    std::string output_dir = ".";
};

struct PipelineConfig {
    int n_per_topic = 20;
    int k_selected = 7;
    std::string scorer = "lexical_overlap";
    corpus::FramingMode framing = corpus::FramingMode::none;
    std::string aspect;
    std::string split = "test"; // which topics generation runs on
};

struct Thresholds {
    double quality_filter = 0.9;
    double plausibility = 0.7;
    double factual = 0.7;
    double sts_match = 0.75;
    double annotator_plausibility = 0.75;
    double annotator_stance = 0.80;
};

struct AnnotationConfig {
    int min_judgments = 5;
    int kappa_min_common = 50;
    int kappa_min_partners = 5;
};

struct CorpusConfig {
    corpus::CorpusOptions options;
    corpus::ClaimFormat format = corpus::ClaimFormat::jsonl;
    std::string csv_preset; // "" or "rank30k"
    bool drop_unmapped = false;
    std::set<std::string> exclusions; // topic ids forced out of dev/test
};

struct RunConfig {
    Paths paths;
    std::string backend = "toy"; // "toy" loads paths.model; "toy-uniform" builds fresh
    lm::SamplingConfig sampling;       // top_k=40, temperature=0.7, max_new_tokens=50
    PipelineConfig pipeline;           // n_per_topic=20, k_selected=7
    Thresholds thresholds;
    AnnotationConfig annotation;
    eval::EvalConfig eval;             // n_samples=10, sample_size=100, n_distractors=9
    CorpusConfig corpus_config;
    int finetune_steps = 2000;
    std::uint64_t seed = 0;

    // Collects every violated field into one ConfigError.
    void validate() const;
};

// Parses the JSON config file, applies dotted-path overrides ("a.b.c=value",
// values parsed as JSON with a bare-string fallback), then validates.
RunConfig load_config(const std::filesystem::path& path,
                      const std::vector<std::string>& overrides = {});

// In-memory variant used by load_config and tests.
RunConfig config_from_json(json j, const std::vector<std::string>& overrides = {});

// The effective configuration, for manifests.
json to_json(const RunConfig& config);

} // namespace claimgen::config
