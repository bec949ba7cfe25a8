#include "claimgen/jsonl.hpp"

#include <fstream>

#include "claimgen/text_clean.hpp"

namespace claimgen {

namespace jsonl {

void for_each(const std::filesystem::path& path,
              const std::function<void(const json&, std::size_t)>& fn) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file: " + path.string());
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        json obj = json::parse(line, nullptr, false);
        if (obj.is_discarded())
            throw ParseError(path.string() + ":" + std::to_string(lineno) +
                             ": malformed JSON line");
        fn(obj, lineno);
    }
}

std::vector<json> read_all(const std::filesystem::path& path) {
    std::vector<json> rows;
    for_each(path, [&](const json& j, std::size_t) { rows.push_back(j); });
    return rows;
}

std::string render(const std::vector<json>& rows) {
    std::string out;
    for (const auto& row : rows) {
        out += row.dump();
        out += '\n';
    }
    return out;
}

void write_all(const std::filesystem::path& path, const std::vector<json>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write file: " + path.string());
    out << render(rows);
    if (!out) throw Error("write failed: " + path.string());
}

} // namespace jsonl

namespace {

// Missing and null are both treated as absent.
const json* field(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return nullptr;
    return &*it;
}

std::string require_string(const json& j, const char* key, const char* what) {
    const json* f = field(j, key);
    if (!f || !f->is_string())
        throw ParseError(std::string(what) + ": missing or non-string field \"" + key + "\"");
    return f->get<std::string>();
}

std::optional<double> optional_number(const json& j, const char* key, const char* what) {
    const json* f = field(j, key);
    if (!f) return std::nullopt;
    if (!f->is_number())
        throw ParseError(std::string(what) + ": field \"" + key + "\" is not a number");
    return f->get<double>();
}

std::optional<std::string> optional_string(const json& j, const char* key, const char* what) {
    const json* f = field(j, key);
    if (!f) return std::nullopt;
    if (!f->is_string())
        throw ParseError(std::string(what) + ": field \"" + key + "\" is not a string");
    return f->get<std::string>();
}

} // namespace

json to_json(const Topic& t) {
    json j{{"id", t.id}, {"text", t.text}, {"split", to_string(t.split)}};
    if (t.wiki_title) j["wiki_title"] = *t.wiki_title;
    if (t.fws) j["fws"] = *t.fws;
    return j;
}

Topic topic_from_json(const json& j) {
    Topic t;
    t.id = require_string(j, "id", "topic");
    t.text = require_string(j, "text", "topic");
    t.wiki_title = optional_string(j, "wiki_title", "topic");
    t.fws = optional_string(j, "fws", "topic");
    t.split = split_from_string(require_string(j, "split", "topic"));
    t.validate();
    return t;
}

json to_json(const ClaimRecord& c) {
    json j{{"topic_id", c.topic_id}, {"text", c.text}, {"source", to_string(c.source)}};
    if (c.quality_score) j["quality_score"] = *c.quality_score;
    if (c.stance) j["stance"] = to_string(*c.stance);
    return j;
}

ClaimRecord claim_from_json(const json& j) {
    ClaimRecord c;
    c.topic_id = require_string(j, "topic_id", "claim");
    c.text = require_string(j, "text", "claim");
    c.quality_score = optional_number(j, "quality_score", "claim");
    if (auto s = optional_string(j, "stance", "claim")) c.stance = stance_label_from_string(*s);
    c.source = claim_source_from_string(require_string(j, "source", "claim"));
    return c;
}

json to_json(const TrainingSequence& s) {
    return json{{"prompt", s.prompt}, {"completion", s.completion}, {"rendered", s.rendered}};
}

TrainingSequence training_sequence_from_json(const json& j) {
    TrainingSequence s;
    s.prompt = require_string(j, "prompt", "sequence");
    s.completion = require_string(j, "completion", "sequence");
    s.rendered = require_string(j, "rendered", "sequence");
    return s;
}

json to_json(const AspectEntry& e) {
    return json{{"aspect", e.aspect},
                {"wiki_titles", e.wiki_titles},
                {"framing_sentence", e.framing_sentence}};
}

AspectEntry aspect_entry_from_json(const json& j) {
    AspectEntry e;
    e.aspect = require_string(j, "aspect", "aspect");
    e.framing_sentence = require_string(j, "framing_sentence", "aspect");
    if (const json* f = field(j, "wiki_titles")) {
        if (!f->is_array()) throw ParseError("aspect: field \"wiki_titles\" is not an array");
        for (const auto& t : *f) e.wiki_titles.push_back(t.get<std::string>());
    }
    return e;
}

json to_json(const AggregatedLabel& l) {
    json j{{"item_id", l.item_id},
           {"plausible_fraction", l.plausible_fraction},
           {"n_judgments", l.n_judgments},
           {"insufficient", l.insufficient}};
    if (l.plausible) j["plausible"] = *l.plausible;
    if (l.stance) j["stance"] = *l.stance;
    if (l.factual) j["factual"] = *l.factual;
    return j;
}

AggregatedLabel aggregated_label_from_json(const json& j) {
    AggregatedLabel l;
    l.item_id = require_string(j, "item_id", "label");
    if (const json* f = field(j, "plausible")) l.plausible = f->get<bool>();
    if (const json* f = field(j, "plausible_fraction")) l.plausible_fraction = f->get<double>();
    l.stance = optional_string(j, "stance", "label");
    l.factual = optional_string(j, "factual", "label");
    if (const json* f = field(j, "n_judgments"))
        l.n_judgments = f->get<std::map<std::string, int>>();
    if (const json* f = field(j, "insufficient")) l.insufficient = f->get<bool>();
    return l;
}

json to_json(const GeneratedText& g) {
    json j{{"id", g.id},
           {"topic_id", g.topic_id},
           {"prompt_used", g.prompt_used},
           {"raw", g.raw},
           {"text", g.text},
           {"token_count", g.token_count}};
    if (g.cd_score) j["cd_score"] = *g.cd_score;
    if (g.quality_score) j["quality_score"] = *g.quality_score;
    if (g.stance_score) j["stance_score"] = *g.stance_score;
    if (g.labels) j["labels"] = to_json(*g.labels);
    return j;
}

GeneratedText generated_text_from_json(const json& j) {
    GeneratedText g;
    g.id = require_string(j, "id", "generated text");
    g.topic_id = require_string(j, "topic_id", "generated text");
    g.prompt_used = require_string(j, "prompt_used", "generated text");
    g.raw = require_string(j, "raw", "generated text");
    g.text = require_string(j, "text", "generated text");
    if (const json* f = field(j, "token_count")) g.token_count = f->get<std::size_t>();
    g.cd_score = optional_number(j, "cd_score", "generated text");
    g.quality_score = optional_number(j, "quality_score", "generated text");
    g.stance_score = optional_number(j, "stance_score", "generated text");
    if (const json* f = field(j, "labels")) g.labels = aggregated_label_from_json(*f);

    if (g.text != lm::clean_text(g.raw))
        throw ParseError("generated text \"" + g.id + "\": text is not the cleaned raw text");
    if (g.token_count != whitespace_token_count(g.text))
        throw ParseError("generated text \"" + g.id + "\": token_count mismatch");
    return g;
}

} // namespace claimgen
