#pragma once

// Shared test fixtures: scratch directories, small corpora, and minimal backends.

#include <unistd.h>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "claimgen/lm.hpp"
#include "claimgen/types.hpp"

namespace testutil {

namespace fs = std::filesystem;

// Unique scratch directory, removed on destruction.
class TempDir {
public:
    TempDir() {
        static std::atomic<unsigned> counter{0};
        path_ = fs::temp_directory_path() /
                ("claimgen_test_" + std::to_string(::getpid()) + "_" +
                 std::to_string(counter.fetch_add(1)));
        fs::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const fs::path& path() const { return path_; }
    fs::path file(const std::string& name) const { return path_ / name; }

    fs::path write(const std::string& name, const std::string& content) const {
        fs::path p = path_ / name;
        std::ofstream out(p, std::ios::binary);
        out << content;
        return p;
    }

private:
    fs::path path_;
};

inline std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline claimgen::Topic make_topic(std::string id, std::string text,
                                  claimgen::Split split = claimgen::Split::train) {
    claimgen::Topic t;
    t.id = std::move(id);
    t.text = std::move(text);
    t.split = split;
    return t;
}

inline claimgen::ClaimRecord make_claim(std::string topic_id, std::string text,
                                        std::optional<double> quality = std::nullopt) {
    claimgen::ClaimRecord c;
    c.topic_id = std::move(topic_id);
    c.text = std::move(text);
    c.quality_score = quality;
    return c;
}

// A clutch of distinct train-split topics named t0, t1, ...
inline std::vector<claimgen::Topic> make_topics(int n,
                                                claimgen::Split split = claimgen::Split::train) {
    static const char* subjects[] = {"solar power",    "night trains",  "city parks",
                                     "free textbooks", "bike lanes",    "rural clinics",
                                     "open data",      "school meals",  "quiet zones",
                                     "repair shops",   "river ferries", "public saunas"};
    std::vector<claimgen::Topic> topics;
    for (int i = 0; i < n; ++i) {
        std::string subject = std::string(subjects[i % 12]) + " plan" + std::to_string(i);
        topics.push_back(make_topic("t" + std::to_string(i), "We should fund " + subject, split));
    }
    return topics;
}

// Minimal scorable backend whose log-prob depends only on string lengths,
// never on the condition. Every prefix-ranking comparison ties on it.
class ConditionBlindModel final : public claimgen::lm::LanguageModel {
public:
    std::string id() const override { return "test/condition-blind"; }
    bool can_finetune() const override { return false; }
    bool can_score() const override { return true; }
    void train(const std::vector<claimgen::TrainingSequence>&, int) override {
        throw claimgen::BackendError("condition-blind model cannot train");
    }
    std::string sample(const std::string&, const claimgen::lm::SamplingConfig&) override {
        throw claimgen::BackendError("condition-blind model cannot sample");
    }
    double score(const std::string&, const std::string& text) override {
        return -0.1 * static_cast<double>(text.size());
    }
    std::vector<claimgen::lm::TokenScore> token_scores(const std::string&,
                                                       const std::string& text) override {
        return {{text, score("", text)}};
    }
    std::size_t count_tokens(const std::string& text) const override {
        return claimgen::whitespace_token_count(text);
    }
    const std::string& delimiter() const override { return delimiter_; }
    const std::string& eos_marker() const override { return eos_; }

private:
    std::string delimiter_ = "\n[CLAIM]\n";
    std::string eos_ = "<|endoftext|>";
};

} // namespace testutil
