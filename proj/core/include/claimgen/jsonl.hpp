#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "claimgen/types.hpp"

namespace claimgen {

using json = nlohmann::json;

namespace jsonl {

// Calls fn(object, line_number) per non-empty line; line numbers are 1-based.
// Throws ParseError with the line number on malformed JSON.
void for_each(const std::filesystem::path& path,
              const std::function<void(const json&, std::size_t)>& fn);

std::vector<json> read_all(const std::filesystem::path& path);

// One compact object per line, keys in sorted order. Not atomic; see
// artifact.hpp for the write-then-rename variant used by the CLI.
void write_all(const std::filesystem::path& path, const std::vector<json>& rows);

std::string render(const std::vector<json>& rows);

} // namespace jsonl

// JSON adapters for the domain types. Optional fields are omitted when
// absent and accepted as missing or null on input.
json to_json(const Topic& t);
Topic topic_from_json(const json& j);

json to_json(const ClaimRecord& c);
ClaimRecord claim_from_json(const json& j);

json to_json(const TrainingSequence& s);
TrainingSequence training_sequence_from_json(const json& j);

json to_json(const AspectEntry& e);
AspectEntry aspect_entry_from_json(const json& j);

json to_json(const AggregatedLabel& l);
AggregatedLabel aggregated_label_from_json(const json& j);

json to_json(const GeneratedText& g);
// Validates the stored invariants: text == clean_text(raw) and
// token_count == whitespace token count of text.
GeneratedText generated_text_from_json(const json& j);

} // namespace claimgen
