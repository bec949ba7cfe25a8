#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "claimgen/error.hpp"

namespace claimgen {

enum class Split { train, dev, test };

enum class ClaimSource { rank30k, ce, ln, retrieved, other };

enum class StanceLabel { pro, con };

std::string to_string(Split s);
std::string to_string(ClaimSource s);
std::string to_string(StanceLabel s);
Split split_from_string(std::string_view s);
ClaimSource claim_source_from_string(std::string_view s);
StanceLabel stance_label_from_string(std::string_view s);

// A debatable policy statement, e.g. "We should ban lotteries".
struct Topic {
    std::string id;
    std::string text;
    std::optional<std::string> wiki_title;
    std::optional<std::string> fws; // first sentence of the topic's Wikipedia page
    Split split = Split::train;

    // text non-empty; fws requires wiki_title
    void validate() const;
};

// A human-authored claim tied to a topic.
struct ClaimRecord {
    std::string topic_id;
    std::string text;
    std::optional<double> quality_score; // in [0,1]
    std::optional<StanceLabel> stance;
    ClaimSource source = ClaimSource::other;

    void validate() const;
};

// One (prompt, completion) pair rendered as a single training sequence.
struct TrainingSequence {
    std::string prompt;
    std::string completion;
    std::string rendered; // prompt + delimiter + completion + end marker
};

struct AspectEntry {
    std::string aspect;
    std::vector<std::string> wiki_titles;
    std::string framing_sentence;
};

// Aspect names are unique; framing sentences non-empty.
class AspectTable {
public:
    AspectTable() = default;
    explicit AspectTable(std::vector<AspectEntry> entries);

    const AspectEntry* find(std::string_view aspect) const;
    const AspectEntry& at(std::string_view aspect) const; // throws Error on unknown aspect
    const std::vector<AspectEntry>& entries() const { return entries_; }

private:
    std::vector<AspectEntry> entries_;
};

// Crowd labels aggregated for one item. Task-specific fields stay unset
// until that task has been aggregated for the item.
struct AggregatedLabel {
    std::string item_id;
    std::optional<bool> plausible;
    double plausible_fraction = 0.0;
    std::optional<std::string> stance;  // "pro" | "con" | "none"
    std::optional<std::string> factual; // "factual" | "opinion"
    std::map<std::string, int> n_judgments; // per task name
    bool insufficient = false; // below the per-item judgment minimum
};

// One model output for a topic prompt.
struct GeneratedText {
    std::string id;
    std::string topic_id;
    std::string prompt_used;
    std::string raw;
    std::string text;            // cleaned raw
    std::size_t token_count = 0; // whitespace tokens of text
    std::optional<double> cd_score;
    std::optional<double> quality_score; // in [0,1]
    std::optional<double> stance_score;  // signed
    std::optional<AggregatedLabel> labels;
};

std::size_t whitespace_token_count(std::string_view text);

// Topic lookup by id. Construction rejects duplicate ids.
class TopicRegistry {
public:
    TopicRegistry() = default;
    explicit TopicRegistry(std::vector<Topic> topics);

    const Topic* find(const std::string& id) const;
    const Topic& at(const std::string& id) const; // throws Error on unknown id
    const std::vector<Topic>& topics() const { return topics_; }
    std::size_t size() const { return topics_.size(); }

private:
    std::vector<Topic> topics_;
    std::map<std::string, std::size_t> index_;
};

} // namespace claimgen
