#include "claimgen/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "claimgen/jsonl.hpp"

namespace claimgen::corpus {

ClaimFormat claim_format_from_string(std::string_view s) {
    if (s == "jsonl") return ClaimFormat::jsonl;
    if (s == "csv") return ClaimFormat::csv;
    throw ParseError("unknown claim format: \"" + std::string(s) + "\"");
}

CsvColumns CsvColumns::rank30k() {
    CsvColumns c;
    c.text = "argument";
    c.topic = "topic";
    c.quality = "WA";
    c.stance = "stance_WA";
    c.source = ClaimSource::rank30k;
    return c;
}

namespace {

struct CsvRow {
    std::vector<std::string> fields;
    std::size_t line = 0; // physical line the row starts on
};

// RFC 4180: quoted fields may contain commas, doubled quotes, and newlines.
std::vector<CsvRow> parse_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file: " + path.string());
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    std::vector<CsvRow> rows;
    CsvRow row;
    row.line = 1;
    std::string f;
    bool quoted = false;
    bool row_has_data = false;
    std::size_t line = 1;

    auto end_field = [&] {
        row.fields.push_back(std::move(f));
        f.clear();
    };
    auto end_row = [&] {
        end_field();
        rows.push_back(std::move(row));
        row = CsvRow{};
        row.line = line;
        row_has_data = false;
    };

    for (std::size_t i = 0; i < data.size(); ++i) {
        char c = data[i];
        if (c == '\n') ++line;
        if (quoted) {
            if (c == '"') {
                if (i + 1 < data.size() && data[i + 1] == '"') {
                    f += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                f += c;
            }
            continue;
        }
        switch (c) {
        case '"':
            quoted = true;
            row_has_data = true;
            break;
        case ',':
            end_field();
            row_has_data = true;
            break;
        case '\r':
            break;
        case '\n':
            if (row_has_data || !f.empty() || !row.fields.empty()) end_row();
            else row.line = line;
            break;
        default:
            f += c;
            row_has_data = true;
        }
    }
    if (quoted)
        throw ParseError(path.string() + ": unterminated quoted field at end of file");
    if (row_has_data || !f.empty() || !row.fields.empty()) end_row();
    return rows;
}

double parse_real(const std::string& s, const std::filesystem::path& path, std::size_t line,
                  const std::string& column) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw ParseError(path.string() + ":" + std::to_string(line) + ": column \"" + column +
                         "\" is not a number: \"" + s + "\"");
    return v;
}

std::vector<ClaimRecord> load_claims_csv(const std::filesystem::path& path,
                                         const CsvColumns& columns) {
    auto rows = parse_csv(path);
    if (rows.empty()) throw ParseError(path.string() + ": empty CSV file");

    const auto& header = rows.front().fields;
    auto column_index = [&](const std::string& name) -> std::size_t {
        auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end())
            throw ParseError(path.string() + ": missing CSV column \"" + name + "\"");
        return static_cast<std::size_t>(it - header.begin());
    };

    std::size_t text_col = column_index(columns.text);
    std::size_t topic_col = column_index(columns.topic);
    std::optional<std::size_t> quality_col, stance_col;
    if (columns.quality) quality_col = column_index(*columns.quality);
    if (columns.stance) stance_col = column_index(*columns.stance);

    std::vector<ClaimRecord> claims;
    claims.reserve(rows.size() - 1);
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.fields.size() != header.size())
            throw ParseError(path.string() + ":" + std::to_string(row.line) + ": expected " +
                             std::to_string(header.size()) + " fields, got " +
                             std::to_string(row.fields.size()));
        ClaimRecord c;
        c.text = row.fields[text_col];
        c.topic_id = row.fields[topic_col];
        c.source = columns.source;
        if (quality_col && !row.fields[*quality_col].empty())
            c.quality_score = parse_real(row.fields[*quality_col], path, row.line, *columns.quality);
        if (stance_col && !row.fields[*stance_col].empty()) {
            double s = parse_real(row.fields[*stance_col], path, row.line, *columns.stance);
            if (s > 0) c.stance = StanceLabel::pro;
            else if (s < 0) c.stance = StanceLabel::con;
        }
        claims.push_back(std::move(c));
    }
    return claims;
}

void check_rows(const std::filesystem::path& path, const std::vector<ClaimRecord>& claims,
                const std::vector<std::size_t>& lines, const TopicRegistry* topics) {
    std::vector<std::string> bad;
    for (std::size_t i = 0; i < claims.size(); ++i) {
        const auto& c = claims[i];
        std::string where = path.string() + ":" + std::to_string(lines[i]);
        if (c.text.empty()) bad.push_back(where + ": empty claim text");
        else if (c.quality_score && (*c.quality_score < 0.0 || *c.quality_score > 1.0))
            bad.push_back(where + ": quality_score out of [0,1]");
        else if (topics && !topics->find(c.topic_id))
            bad.push_back(where + ": unknown topic_id \"" + c.topic_id + "\"");
    }
    if (bad.empty()) return;
    std::string msg = "rejected " + std::to_string(bad.size()) + " claim row(s):";
    for (const auto& b : bad) msg += "\n  " + b;
    throw ParseError(msg);
}

} // namespace

std::vector<ClaimRecord> load_claims(const std::filesystem::path& path, ClaimFormat format,
                                     const TopicRegistry* topics, const CsvColumns& columns) {
    std::vector<ClaimRecord> claims;
    std::vector<std::size_t> lines;
    if (format == ClaimFormat::jsonl) {
        jsonl::for_each(path, [&](const json& j, std::size_t lineno) {
            ClaimRecord c;
            c.topic_id = j.value("topic_id", std::string{});
            c.text = j.value("text", std::string{});
            if (j.contains("quality_score") && !j["quality_score"].is_null())
                c.quality_score = j["quality_score"].get<double>();
            if (j.contains("stance") && !j["stance"].is_null())
                c.stance = stance_label_from_string(j["stance"].get<std::string>());
            c.source = claim_source_from_string(j.value("source", std::string{"other"}));
            claims.push_back(std::move(c));
            lines.push_back(lineno);
        });
    } else {
        claims = load_claims_csv(path, columns);
        lines.resize(claims.size());
        // CSV rows may span lines; report by record order instead.
        for (std::size_t i = 0; i < lines.size(); ++i) lines[i] = i + 2;
    }
    check_rows(path, claims, lines, topics);
    return claims;
}

QualityFilterResult filter_by_quality(const std::vector<ClaimRecord>& claims, double threshold) {
    if (threshold < 0.0 || threshold > 1.0)
        throw Error("quality threshold out of [0,1]: " + std::to_string(threshold));
    QualityFilterResult result;
    for (const auto& c : claims) {
        if (!c.quality_score) ++result.dropped_unscored;
        else if (*c.quality_score > threshold) result.kept.push_back(c);
        else ++result.dropped_below;
    }
    return result;
}

FramedPrompt frame_topic_fws(const Topic& topic, const CorpusOptions& options) {
    if (!topic.fws) return {topic.text, false};
    return {*topic.fws + options.fws_separator + topic.text, true};
}

std::string frame_claim_aspect(const Topic& topic, const AspectTable& aspects,
                               std::string_view aspect_name, const CorpusOptions& options) {
    const AspectEntry& entry = aspects.at(aspect_name);
    return topic.text + options.aspect_separator + entry.framing_sentence;
}

FramingMode framing_mode_from_string(std::string_view s) {
    if (s == "none") return FramingMode::none;
    if (s == "fws") return FramingMode::fws;
    if (s == "aspect") return FramingMode::aspect;
    throw ParseError("unknown framing mode: \"" + std::string(s) + "\"");
}

std::string to_string(FramingMode mode) {
    switch (mode) {
    case FramingMode::none: return "none";
    case FramingMode::fws: return "fws";
    case FramingMode::aspect: return "aspect";
    }
    throw Error("unreachable framing mode");
}

std::string build_prompt(const Topic& topic, FramingMode framing, const CorpusOptions& options,
                         const AspectTable* aspects, std::string_view aspect_name) {
    switch (framing) {
    case FramingMode::none:
        return topic.text;
    case FramingMode::fws:
        return frame_topic_fws(topic, options).text;
    case FramingMode::aspect:
        if (!aspects) throw Error("aspect framing requires an aspect table");
        return frame_claim_aspect(topic, *aspects, aspect_name, options);
    }
    throw Error("unreachable framing mode");
}

std::vector<TrainingSequence> build_training_sequences(
    const std::vector<ClaimRecord>& claims, const TopicRegistry& topics, FramingMode framing,
    const CorpusOptions& options, const AspectTable* aspects, std::string_view aspect_name) {
    std::vector<TrainingSequence> sequences;
    sequences.reserve(claims.size());
    for (const auto& c : claims) {
        const Topic& topic = topics.at(c.topic_id);
        TrainingSequence s;
        s.prompt = build_prompt(topic, framing, options, aspects, aspect_name);
        s.completion = c.text;
        if (s.prompt.find(options.delimiter) != std::string::npos ||
            s.completion.find(options.delimiter) != std::string::npos)
            throw Error("delimiter \"" + options.delimiter +
                        "\" occurs inside a prompt or claim for topic \"" + topic.id + "\"");
        s.rendered = s.prompt + options.delimiter + s.completion + options.eos_marker;
        sequences.push_back(std::move(s));
    }
    return sequences;
}

SplitReport split_topics(const std::vector<Topic>& topics, const std::set<std::string>& exclusions) {
    std::set<std::string> known;
    for (const auto& t : topics) known.insert(t.id);
    for (const auto& id : exclusions)
        if (!known.count(id)) throw Error("excluded topic id is unknown: \"" + id + "\"");

    SplitReport report;
    report.topics = topics;
    std::size_t n_eval = 0;
    for (auto& t : report.topics) {
        if (t.split != Split::train && exclusions.count(t.id)) {
            t.split = Split::train;
            report.excluded.push_back(t.id);
        }
        if (t.split != Split::train) ++n_eval;
    }
    report.empty_eval_warning = (n_eval == 0);
    return report;
}

std::vector<WikiLookupEntry> load_wiki_lookup(const std::filesystem::path& path) {
    std::vector<WikiLookupEntry> entries;
    jsonl::for_each(path, [&](const json& j, std::size_t lineno) {
        WikiLookupEntry e;
        e.topic_text = j.value("topic_text", std::string{});
        e.wiki_title = j.value("wiki_title", std::string{});
        e.first_sentence = j.value("first_sentence", std::string{});
        if (e.topic_text.empty() || e.wiki_title.empty())
            throw ParseError(path.string() + ":" + std::to_string(lineno) +
                             ": lookup row needs topic_text and wiki_title");
        entries.push_back(std::move(e));
    });
    return entries;
}

WikiLookupReport apply_wiki_lookup(const std::vector<Topic>& topics,
                                   const std::vector<WikiLookupEntry>& lookup,
                                   bool drop_unmapped) {
    std::map<std::string, const WikiLookupEntry*> by_text;
    for (const auto& e : lookup) by_text[e.topic_text] = &e;

    WikiLookupReport report;
    for (const auto& t : topics) {
        auto it = by_text.find(t.text);
        if (it == by_text.end()) {
            ++report.unmapped;
            if (drop_unmapped) ++report.dropped;
            else report.topics.push_back(t);
            continue;
        }
        Topic mapped = t;
        mapped.wiki_title = it->second->wiki_title;
        if (!it->second->first_sentence.empty()) mapped.fws = it->second->first_sentence;
        ++report.mapped;
        report.topics.push_back(std::move(mapped));
    }
    return report;
}

std::vector<Topic> filter_to_split(const std::vector<Topic>& topics, Split split) {
    std::vector<Topic> out;
    for (const auto& t : topics)
        if (t.split == split) out.push_back(t);
    return out;
}

} // namespace claimgen::corpus
