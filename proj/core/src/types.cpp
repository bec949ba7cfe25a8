#include "claimgen/types.hpp"

#include <cctype>

namespace claimgen {

std::string to_string(Split s) {
    switch (s) {
    case Split::train: return "train";
    case Split::dev: return "dev";
    case Split::test: return "test";
    }
    throw Error("invalid Split value");
}

std::string to_string(ClaimSource s) {
    switch (s) {
    case ClaimSource::rank30k: return "rank30k";
    case ClaimSource::ce: return "ce";
    case ClaimSource::ln: return "ln";
    case ClaimSource::retrieved: return "retrieved";
    case ClaimSource::other: return "other";
    }
    throw Error("invalid ClaimSource value");
}

std::string to_string(StanceLabel s) {
    return s == StanceLabel::pro ? "pro" : "con";
}

Split split_from_string(std::string_view s) {
    if (s == "train") return Split::train;
    if (s == "dev") return Split::dev;
    if (s == "test") return Split::test;
    throw ParseError("unknown split: \"" + std::string(s) + "\"");
}

ClaimSource claim_source_from_string(std::string_view s) {
    if (s == "rank30k") return ClaimSource::rank30k;
    if (s == "ce") return ClaimSource::ce;
    if (s == "ln") return ClaimSource::ln;
    if (s == "retrieved") return ClaimSource::retrieved;
    if (s == "other") return ClaimSource::other;
    throw ParseError("unknown claim source: \"" + std::string(s) + "\"");
}

StanceLabel stance_label_from_string(std::string_view s) {
    if (s == "pro") return StanceLabel::pro;
    if (s == "con") return StanceLabel::con;
    throw ParseError("unknown stance label: \"" + std::string(s) + "\"");
}

void Topic::validate() const {
    if (text.empty()) throw Error("topic \"" + id + "\": text is empty");
    if (fws && !wiki_title)
        throw Error("topic \"" + id + "\": fws present without wiki_title");
}

void ClaimRecord::validate() const {
    if (text.empty()) throw Error("claim for topic \"" + topic_id + "\": text is empty");
    if (quality_score && (*quality_score < 0.0 || *quality_score > 1.0))
        throw Error("claim for topic \"" + topic_id + "\": quality_score outside [0,1]");
}

AspectTable::AspectTable(std::vector<AspectEntry> entries) : entries_(std::move(entries)) {
    std::map<std::string_view, int> seen;
    for (const auto& e : entries_) {
        if (e.framing_sentence.empty())
            throw Error("aspect \"" + e.aspect + "\": framing sentence is empty");
        if (++seen[e.aspect] > 1)
            throw Error("duplicate aspect name: \"" + e.aspect + "\"");
    }
}

const AspectEntry* AspectTable::find(std::string_view aspect) const {
    for (const auto& e : entries_)
        if (e.aspect == aspect) return &e;
    return nullptr;
}

const AspectEntry& AspectTable::at(std::string_view aspect) const {
    const AspectEntry* e = find(aspect);
    if (!e) throw Error("unknown aspect: \"" + std::string(aspect) + "\"");
    return *e;
}

std::size_t whitespace_token_count(std::string_view text) {
    std::size_t n = 0;
    bool in_token = false;
    for (unsigned char c : text) {
        if (std::isspace(c)) {
            in_token = false;
        } else if (!in_token) {
            in_token = true;
            ++n;
        }
    }
    return n;
}

TopicRegistry::TopicRegistry(std::vector<Topic> topics) : topics_(std::move(topics)) {
    for (std::size_t i = 0; i < topics_.size(); ++i) {
        topics_[i].validate();
        auto [it, inserted] = index_.emplace(topics_[i].id, i);
        if (!inserted) throw Error("duplicate topic id: \"" + topics_[i].id + "\"");
    }
}

const Topic* TopicRegistry::find(const std::string& id) const {
    auto it = index_.find(id);
    return it == index_.end() ? nullptr : &topics_[it->second];
}

const Topic& TopicRegistry::at(const std::string& id) const {
    const Topic* t = find(id);
    if (!t) throw Error("unknown topic id: \"" + id + "\"");
    return *t;
}

} // namespace claimgen
