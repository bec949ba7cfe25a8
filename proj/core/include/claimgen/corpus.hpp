#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "claimgen/types.hpp"

namespace claimgen::corpus {

enum class ClaimFormat { jsonl, csv };

ClaimFormat claim_format_from_string(std::string_view s);

// Column mapping for CSV claim files. Header names are matched exactly.
struct CsvColumns {
    std::string text = "text";
    std::string topic = "topic_id";
    std::optional<std::string> quality;     // column parsed as a real in [0,1]
    std::optional<std::string> stance;      // signed real; sign decides pro/con
    ClaimSource source = ClaimSource::other;

    // Layout of the public quality-ranked argument export.
    static CsvColumns rank30k();
};

// When a topic registry is supplied, claims referencing unknown topics are an
// error. Rows with empty text are rejected with their line numbers.
std::vector<ClaimRecord> load_claims(const std::filesystem::path& path, ClaimFormat format,
                                     const TopicRegistry* topics = nullptr,
                                     const CsvColumns& columns = {});

struct QualityFilterResult {
    std::vector<ClaimRecord> kept;
    std::size_t dropped_unscored = 0;
    std::size_t dropped_below = 0; // includes ties at the threshold (strict >)
};

// Keeps records whose quality_score is strictly greater than threshold.
QualityFilterResult filter_by_quality(const std::vector<ClaimRecord>& claims, double threshold);

// Marker strings used when rendering prompts and training sequences.
struct CorpusOptions {
    std::string delimiter = "\n[CLAIM]\n"; // between prompt and completion
    std::string eos_marker = "<|endoftext|>";
    std::string fws_separator = " ";  // between framing sentence and topic text
    std::string aspect_separator = "\n"; // between topic text and aspect sentence
};

struct FramedPrompt {
    std::string text;
    bool framed = false; // false when the topic had no framing sentence to use
};

// Prepends the topic's first-Wikipedia-sentence when present.
FramedPrompt frame_topic_fws(const Topic& topic, const CorpusOptions& options = {});

// Appends the aspect's framing sentence after the topic text. Throws on an
// aspect name missing from the table.
std::string frame_claim_aspect(const Topic& topic, const AspectTable& aspects,
                               std::string_view aspect_name, const CorpusOptions& options = {});

enum class FramingMode { none, fws, aspect };

FramingMode framing_mode_from_string(std::string_view s);
std::string to_string(FramingMode mode);

// Conditioning prompt for one topic under the given framing mode.
std::string build_prompt(const Topic& topic, FramingMode framing,
                         const CorpusOptions& options = {}, const AspectTable* aspects = nullptr,
                         std::string_view aspect_name = {});

// One sequence per claim: prompt per framing mode, completion = claim text,
// rendered = prompt + delimiter + completion + eos marker. Aspect framing
// requires an aspect table and an aspect name.
std::vector<TrainingSequence> build_training_sequences(
    const std::vector<ClaimRecord>& claims, const TopicRegistry& topics, FramingMode framing,
    const CorpusOptions& options = {}, const AspectTable* aspects = nullptr,
    std::string_view aspect_name = {});

struct SplitReport {
    std::vector<Topic> topics;          // with final split assignments
    std::vector<std::string> excluded;  // ids moved out of dev/test
    bool empty_eval_warning = false;    // dev and test both ended up empty
};

// Moves excluded topics out of dev/test into train. Every exclusion id must
// name a known topic.
SplitReport split_topics(const std::vector<Topic>& topics, const std::set<std::string>& exclusions);

struct WikiLookupEntry {
    std::string topic_text;
    std::string wiki_title;
    std::string first_sentence;
};

// Reads a lookup file of {"topic_text","wiki_title","first_sentence"} rows.
std::vector<WikiLookupEntry> load_wiki_lookup(const std::filesystem::path& path);

struct WikiLookupReport {
    std::vector<Topic> topics;
    std::size_t mapped = 0;
    std::size_t unmapped = 0; // kept unframed, or dropped when drop_unmapped
    std::size_t dropped = 0;
};

// Fills wiki_title/fws on topics whose text appears in the lookup. Topics
// absent from the lookup are kept unframed unless drop_unmapped is set.
WikiLookupReport apply_wiki_lookup(const std::vector<Topic>& topics,
                                   const std::vector<WikiLookupEntry>& lookup,
                                   bool drop_unmapped = false);

std::vector<Topic> filter_to_split(const std::vector<Topic>& topics, Split split);

} // namespace claimgen::corpus
