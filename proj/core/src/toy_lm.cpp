#include "claimgen/toy_lm.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>

#include "claimgen/error.hpp"
#include "claimgen/jsonl.hpp"
#include "claimgen/random.hpp"

namespace claimgen::lm {

namespace {

std::vector<std::string> split_tokens(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            if (!current.empty()) {
                tokens.push_back(std::move(current));
                current.clear();
            }
        } else {
            current += c;
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

} // namespace

ToyLm::ToyLm(std::vector<std::string> vocabulary, ToyLmOptions options)
    : options_(std::move(options)) {
    words_ = {"<unk>", options_.eos_marker};
    vocab_[words_[kUnk]] = kUnk;
    vocab_[words_[kEos]] = kEos;
    for (auto& w : vocabulary) {
        if (vocab_.count(w)) throw Error("toy-lm vocabulary has duplicate word: \"" + w + "\"");
        vocab_[w] = static_cast<TokenId>(words_.size());
        words_.push_back(std::move(w));
    }
}

ToyLm ToyLm::uniform(std::vector<std::string> vocabulary, ToyLmOptions options) {
    return ToyLm(std::move(vocabulary), std::move(options));
}

ToyLm ToyLm::from_sequences(const std::vector<TrainingSequence>& sequences, ToyLmOptions options) {
    std::vector<std::string> vocabulary;
    std::map<std::string, bool> seen;
    auto add = [&](std::string_view text) {
        for (auto& w : split_tokens(text)) {
            if (w == options.eos_marker || w == "<unk>" || seen.count(w)) continue;
            seen[w] = true;
            vocabulary.push_back(std::move(w));
        }
    };
    for (const auto& s : sequences) {
        add(s.prompt);
        add(s.completion);
    }
    return ToyLm(std::move(vocabulary), std::move(options));
}

std::string ToyLm::id() const {
    return "toy-lm/v" + std::to_string(words_.size()) + "/s" + std::to_string(train_steps_);
}

std::vector<ToyLm::TokenId> ToyLm::token_ids(std::string_view text) const {
    std::vector<TokenId> ids;
    for (const auto& w : split_tokens(text)) {
        auto it = vocab_.find(w);
        ids.push_back(it == vocab_.end() ? kUnk : it->second);
    }
    return ids;
}

std::string ToyLm::memory_key(const std::string& condition,
                              const std::vector<TokenId>& prefix) const {
    std::string key = condition;
    key += '\x1f';
    for (TokenId id : prefix) {
        key += std::to_string(id);
        key += ' ';
    }
    return key;
}

void ToyLm::observe(const std::string& condition, const std::vector<TokenId>& completion) {
    std::vector<TokenId> prefix;
    for (std::size_t i = 0; i <= completion.size(); ++i) {
        TokenId next = (i < completion.size()) ? completion[i] : kEos;
        TokenId prev = prefix.empty() ? kEos : prefix.back();
        ++memory_[memory_key(condition, prefix)][next];
        ++bigram_[prev][next];
        ++unigram_[next];
        ++unigram_total_;
        if (i < completion.size()) prefix.push_back(next);
    }
}

void ToyLm::train(const std::vector<TrainingSequence>& sequences, int steps) {
    if (sequences.empty()) throw Error("toy-lm train: empty sequence list");
    if (steps < 1) throw Error("toy-lm train: steps must be >= 1");
    for (const auto& s : sequences) {
        if (s.rendered != s.prompt + options_.delimiter + s.completion + options_.eos_marker)
            throw BackendError("training sequence was rendered with different markers than "
                               "this model uses (delimiter/end marker mismatch)");
        // New completion words extend the vocabulary; prompts stay opaque
        // conditioning strings and never enter it.
        for (auto& w : split_tokens(s.completion)) {
            if (!vocab_.count(w)) {
                vocab_[w] = static_cast<TokenId>(words_.size());
                words_.push_back(std::move(w));
            }
        }
    }
    for (int step = 0; step < steps; ++step) {
        const auto& s = sequences[static_cast<std::size_t>(step) % sequences.size()];
        observe(s.prompt, token_ids(s.completion));
    }
    train_steps_ += static_cast<std::size_t>(steps);
}

std::vector<double> ToyLm::next_token_probs(const std::string& condition,
                                            const std::vector<TokenId>& prefix,
                                            TokenId prev) const {
    const std::size_t V = words_.size();
    const double uniform = 1.0 / static_cast<double>(V);
    std::vector<double> probs(V, uniform);

    if (unigram_total_ > 0) {
        const double w = options_.unigram_weight;
        for (auto& p : probs) p = (1.0 - w) * uniform;
        for (const auto& [id, count] : unigram_)
            probs[id] += w * static_cast<double>(count) / static_cast<double>(unigram_total_);
    }

    if (auto bi = bigram_.find(prev); bi != bigram_.end()) {
        const double w = options_.bigram_weight;
        std::uint64_t total = 0;
        for (const auto& [id, count] : bi->second) total += count;
        for (auto& p : probs) p *= (1.0 - w);
        for (const auto& [id, count] : bi->second)
            probs[id] += w * static_cast<double>(count) / static_cast<double>(total);
    }

    if (auto mem = memory_.find(memory_key(condition, prefix)); mem != memory_.end()) {
        const double w = options_.memory_weight;
        std::uint64_t total = 0;
        for (const auto& [id, count] : mem->second) total += count;
        for (auto& p : probs) p *= (1.0 - w);
        for (const auto& [id, count] : mem->second)
            probs[id] += w * static_cast<double>(count) / static_cast<double>(total);
    }

    return probs;
}

std::string ToyLm::sample(const std::string& prompt, const SamplingConfig& config) {
    config.validate();
    rng::Engine engine(rng::splitmix64(config.seed.value_or(0)) ^ rng::fnv1a(prompt));

    std::vector<TokenId> generated;
    std::string out;
    TokenId prev = kEos;
    for (int step = 0; step < config.max_new_tokens; ++step) {
        std::vector<double> probs = next_token_probs(prompt, generated, prev);

        // <unk> is a scoring bucket, not a word; it is never emitted.
        std::vector<TokenId> candidates;
        candidates.reserve(probs.size() - 1);
        for (TokenId id = 1; id < probs.size(); ++id) candidates.push_back(id);
        std::stable_sort(candidates.begin(), candidates.end(), [&](TokenId a, TokenId b) {
            if (probs[a] != probs[b]) return probs[a] > probs[b];
            return a < b;
        });
        if (candidates.size() > static_cast<std::size_t>(config.top_k))
            candidates.resize(static_cast<std::size_t>(config.top_k));

        double total = 0.0;
        std::vector<double> weights(candidates.size());
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            weights[i] = std::pow(probs[candidates[i]], 1.0 / config.temperature);
            total += weights[i];
        }
        double u = rng::unit_real(engine) * total;
        TokenId picked = candidates.back();
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            if (u < weights[i]) {
                picked = candidates[i];
                break;
            }
            u -= weights[i];
        }

        if (picked == kEos) break;
        if (!out.empty()) out += ' ';
        out += words_[picked];
        generated.push_back(picked);
        prev = picked;
    }
    return out;
}

double ToyLm::score(const std::string& condition, const std::string& text) {
    double sum = 0.0;
    for (const auto& ts : token_scores(condition, text)) sum += ts.log_prob;
    return sum;
}

std::vector<TokenScore> ToyLm::token_scores(const std::string& condition,
                                            const std::string& text) {
    std::vector<TokenScore> scores;
    std::vector<TokenId> prefix;
    TokenId prev = kEos;
    for (const auto& w : split_tokens(text)) {
        auto it = vocab_.find(w);
        TokenId id = (it == vocab_.end()) ? kUnk : it->second;
        std::vector<double> probs = next_token_probs(condition, prefix, prev);
        scores.push_back({w, std::log(probs[id])});
        prefix.push_back(id);
        prev = id;
    }
    return scores;
}

std::size_t ToyLm::count_tokens(const std::string& text) const {
    return whitespace_token_count(text);
}

void ToyLm::save(const std::filesystem::path& path) const {
    json j;
    j["kind"] = "toy-lm";
    j["options"] = {{"delimiter", options_.delimiter},
                    {"eos_marker", options_.eos_marker},
                    {"memory_weight", options_.memory_weight},
                    {"bigram_weight", options_.bigram_weight},
                    {"unigram_weight", options_.unigram_weight}};
    j["words"] = words_;
    j["train_steps"] = train_steps_;

    json memory = json::object();
    for (const auto& [key, dist] : memory_) {
        json d = json::object();
        for (const auto& [id, count] : dist) d[std::to_string(id)] = count;
        memory[key] = std::move(d);
    }
    j["memory"] = std::move(memory);

    json bigram = json::object();
    for (const auto& [prev, dist] : bigram_) {
        json d = json::object();
        for (const auto& [id, count] : dist) d[std::to_string(id)] = count;
        bigram[std::to_string(prev)] = std::move(d);
    }
    j["bigram"] = std::move(bigram);

    json unigram = json::object();
    for (const auto& [id, count] : unigram_) unigram[std::to_string(id)] = count;
    j["unigram"] = std::move(unigram);

    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw Error("cannot write model file: " + tmp.string());
        out << j.dump(2) << '\n';
        if (!out) throw Error("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

ToyLm ToyLm::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open model file: " + path.string());
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded() || j.value("kind", std::string{}) != "toy-lm")
        throw ParseError("not a toy-lm model file: " + path.string());

    ToyLmOptions options;
    const json& o = j.at("options");
    options.delimiter = o.at("delimiter").get<std::string>();
    options.eos_marker = o.at("eos_marker").get<std::string>();
    options.memory_weight = o.at("memory_weight").get<double>();
    options.bigram_weight = o.at("bigram_weight").get<double>();
    options.unigram_weight = o.at("unigram_weight").get<double>();

    std::vector<std::string> words = j.at("words").get<std::vector<std::string>>();
    if (words.size() < 2 || words[kEos] != options.eos_marker)
        throw ParseError("corrupt toy-lm vocabulary: " + path.string());
    ToyLm model(std::vector<std::string>(words.begin() + 2, words.end()), options);

    for (const auto& [key, dist] : j.at("memory").items())
        for (const auto& [id, count] : dist.items())
            model.memory_[key][static_cast<TokenId>(std::stoul(id))] =
                count.get<std::uint64_t>();
    for (const auto& [prev, dist] : j.at("bigram").items())
        for (const auto& [id, count] : dist.items())
            model.bigram_[static_cast<TokenId>(std::stoul(prev))]
                         [static_cast<TokenId>(std::stoul(id))] = count.get<std::uint64_t>();
    for (const auto& [id, count] : j.at("unigram").items()) {
        std::uint64_t c = count.get<std::uint64_t>();
        model.unigram_[static_cast<TokenId>(std::stoul(id))] = c;
        model.unigram_total_ += c;
    }
    model.train_steps_ = j.value("train_steps", std::size_t{0});
    return model;
}

} // namespace claimgen::lm
