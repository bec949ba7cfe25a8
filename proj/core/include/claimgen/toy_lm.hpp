#pragma once

// Deterministic trainable backend for tests and offline runs.
//
// Whitespace tokenizer, interpolated backoff over three count tables:
// exact-context memorization (condition + generated prefix), bigram, and
// unigram, with a uniform floor over the vocabulary. Untrained, every token
// has probability 1/V, which makes perplexity identities exact; trained to
// memorization, greedy continuation reproduces training completions.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "claimgen/lm.hpp"

namespace claimgen::lm {

struct ToyLmOptions {
    std::string delimiter = "\n[CLAIM]\n";
    std::string eos_marker = "<|endoftext|>";
    double memory_weight = 0.9;  // exact (condition, prefix) continuations
    double bigram_weight = 0.6;  // previous-token continuations
    double unigram_weight = 0.8; // corpus token frequencies
};

class ToyLm final : public LanguageModel {
public:
    // Vocabulary ids 0 and 1 are reserved for <unk> and the end marker; the
    // given words follow in list order. Duplicate words are an error.
    explicit ToyLm(std::vector<std::string> vocabulary, ToyLmOptions options = {});

    // Untrained model: every token scores exactly 1/vocab_size().
    static ToyLm uniform(std::vector<std::string> vocabulary, ToyLmOptions options = {});

    // Vocabulary collected from the sequences' prompts and completions.
    static ToyLm from_sequences(const std::vector<TrainingSequence>& sequences,
                                ToyLmOptions options = {});

    std::string id() const override;
    bool can_finetune() const override { return true; }
    bool can_score() const override { return true; }

    void train(const std::vector<TrainingSequence>& sequences, int steps) override;
    std::string sample(const std::string& prompt, const SamplingConfig& config) override;
    double score(const std::string& condition, const std::string& text) override;
    std::vector<TokenScore> token_scores(const std::string& condition,
                                         const std::string& text) override;
    std::size_t count_tokens(const std::string& text) const override;
    const std::string& delimiter() const override { return options_.delimiter; }
    const std::string& eos_marker() const override { return options_.eos_marker; }

    // Words plus the two reserved ids; the uniform floor is 1/vocab_size().
    std::size_t vocab_size() const { return words_.size(); }
    std::size_t train_steps() const { return train_steps_; }

    void save(const std::filesystem::path& path) const;
    static ToyLm load(const std::filesystem::path& path);

private:
    using TokenId = std::uint32_t;
    static constexpr TokenId kUnk = 0;
    static constexpr TokenId kEos = 1;

    std::vector<TokenId> token_ids(std::string_view text) const;
    std::string memory_key(const std::string& condition, const std::vector<TokenId>& prefix) const;
    // Next-token distribution given condition and already-emitted prefix.
    std::vector<double> next_token_probs(const std::string& condition,
                                         const std::vector<TokenId>& prefix,
                                         TokenId prev) const;
    void observe(const std::string& condition, const std::vector<TokenId>& completion);

    ToyLmOptions options_;
    std::vector<std::string> words_; // id -> token text
    std::map<std::string, TokenId> vocab_;
    std::map<std::string, std::map<TokenId, std::uint64_t>> memory_;
    std::map<TokenId, std::map<TokenId, std::uint64_t>> bigram_;
    std::map<TokenId, std::uint64_t> unigram_;
    std::uint64_t unigram_total_ = 0;
    std::size_t train_steps_ = 0;
};

} // namespace claimgen::lm
