#include "claimgen/annotation.hpp"

#include <algorithm>
#include <set>

namespace claimgen::annot {

Task task_from_string(std::string_view s) {
    if (s == "plausibility") return Task::plausibility;
    if (s == "stance") return Task::stance;
    if (s == "factual") return Task::factual;
    if (s == "preference") return Task::preference;
    throw ParseError("unknown task: \"" + std::string(s) + "\"");
}

std::string to_string(Task task) {
    switch (task) {
    case Task::plausibility: return "plausibility";
    case Task::stance: return "stance";
    case Task::factual: return "factual";
    case Task::preference: return "preference";
    }
    throw Error("unreachable task");
}

namespace {

const std::vector<std::string>& value_domain(Task task) {
    static const std::vector<std::string> plausibility = {"true", "false"};
    static const std::vector<std::string> stance = {"pro", "con", "none"};
    static const std::vector<std::string> factual = {"factual", "opinion"};
    static const std::vector<std::string> preference = {"generated", "corpus", "tie"};
    switch (task) {
    case Task::plausibility: return plausibility;
    case Task::stance: return stance;
    case Task::factual: return factual;
    case Task::preference: return preference;
    }
    throw Error("unreachable task");
}

} // namespace

void Judgment::validate() const {
    if (annotator_id.empty()) throw Error("judgment: empty annotator_id");
    if (item_id.empty()) throw Error("judgment: empty item_id");
    const auto& domain = value_domain(task);
    auto in_domain = [&](const std::string& v) {
        return std::find(domain.begin(), domain.end(), v) != domain.end();
    };
    if (!in_domain(value))
        throw Error("judgment: value \"" + value + "\" is not valid for task " + to_string(task));
    if (is_test_question != gold_value.has_value())
        throw Error("judgment: gold_value must be present exactly on test questions");
    if (gold_value && !in_domain(*gold_value))
        throw Error("judgment: gold_value \"" + *gold_value + "\" is not valid for task " +
                    to_string(task));
}

json to_json(const Judgment& j) {
    json out{{"annotator_id", j.annotator_id},
             {"item_id", j.item_id},
             {"task", to_string(j.task)},
             {"value", j.value},
             {"is_test_question", j.is_test_question}};
    if (j.gold_value) out["gold_value"] = *j.gold_value;
    return out;
}

Judgment judgment_from_json(const json& j) {
    Judgment out;
    out.annotator_id = j.at("annotator_id").get<std::string>();
    out.item_id = j.at("item_id").get<std::string>();
    out.task = task_from_string(j.at("task").get<std::string>());
    out.value = j.at("value").get<std::string>();
    out.is_test_question = j.value("is_test_question", false);
    if (j.contains("gold_value") && !j["gold_value"].is_null())
        out.gold_value = j["gold_value"].get<std::string>();
    out.validate();
    return out;
}

std::vector<Judgment> load_judgments(const std::filesystem::path& path) {
    std::vector<Judgment> judgments;
    jsonl::for_each(path, [&](const json& j, std::size_t lineno) {
        try {
            judgments.push_back(judgment_from_json(j));
        } catch (const std::exception& e) {
            throw ParseError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    });
    return judgments;
}

FilterReport filter_annotators(const std::vector<Judgment>& judgments,
                               const std::map<Task, double>& thresholds) {
    for (const auto& [task, threshold] : thresholds)
        if (threshold < 0.0 || threshold > 1.0)
            throw Error("annotator threshold for " + to_string(task) + " out of [0,1]");

    FilterReport report;
    std::map<std::pair<Task, std::string>, AnnotatorAccuracy> acc;
    for (const auto& j : judgments) {
        auto& a = acc[{j.task, j.annotator_id}];
        if (j.is_test_question) {
            ++a.n_test;
            if (j.value == *j.gold_value) ++a.n_correct;
        }
    }
    for (auto& [key, a] : acc) {
        auto threshold = thresholds.find(key.first);
        if (a.n_test == 0) {
            a.unchecked = true;
            continue;
        }
        a.accuracy = static_cast<double>(a.n_correct) / static_cast<double>(a.n_test);
        if (threshold != thresholds.end() && a.accuracy < threshold->second) a.removed = true;
    }

    for (const auto& j : judgments) {
        if (acc[{j.task, j.annotator_id}].removed) ++report.n_removed_judgments;
        else report.kept.push_back(j);
    }
    for (const auto& [key, a] : acc) report.by_task[to_string(key.first)][key.second] = a;
    return report;
}

namespace {

// item id -> value -> count, over real (non-test) judgments of one task.
std::map<std::string, std::map<std::string, std::size_t>> tally(
    const std::vector<Judgment>& judgments, Task task) {
    std::map<std::string, std::map<std::string, std::size_t>> counts;
    for (const auto& j : judgments) {
        if (j.task != task || j.is_test_question) continue;
        ++counts[j.item_id][j.value];
    }
    return counts;
}

std::size_t total(const std::map<std::string, std::size_t>& votes) {
    std::size_t n = 0;
    for (const auto& [value, count] : votes) n += count;
    return n;
}

} // namespace

std::vector<AggregatedLabel> aggregate_plausibility(const std::vector<Judgment>& judgments,
                                                    double threshold,
                                                    std::size_t min_judgments) {
    if (threshold < 0.0 || threshold > 1.0) throw Error("plausibility threshold out of [0,1]");
    std::vector<AggregatedLabel> labels;
    for (const auto& [item_id, votes] : tally(judgments, Task::plausibility)) {
        AggregatedLabel label;
        label.item_id = item_id;
        std::size_t n = total(votes);
        label.n_judgments["plausibility"] = static_cast<int>(n);
        if (n < min_judgments) {
            label.insufficient = true;
        } else {
            std::size_t positives = votes.count("true") ? votes.at("true") : 0;
            label.plausible_fraction = static_cast<double>(positives) / static_cast<double>(n);
            label.plausible = label.plausible_fraction >= threshold;
        }
        labels.push_back(std::move(label));
    }
    return labels;
}

std::vector<AggregatedLabel> aggregate_stance(const std::vector<Judgment>& judgments,
                                              std::size_t min_judgments) {
    std::vector<AggregatedLabel> labels;
    for (const auto& [item_id, votes] : tally(judgments, Task::stance)) {
        AggregatedLabel label;
        label.item_id = item_id;
        std::size_t n = total(votes);
        label.n_judgments["stance"] = static_cast<int>(n);
        if (n < min_judgments) {
            label.insufficient = true;
        } else {
            std::size_t best = 0;
            for (const auto& [value, count] : votes) best = std::max(best, count);
            std::size_t winners = 0;
            std::string winner;
            for (const auto& [value, count] : votes) {
                if (count == best) {
                    ++winners;
                    winner = value;
                }
            }
            label.stance = (winners == 1) ? winner : "none";
        }
        labels.push_back(std::move(label));
    }
    return labels;
}

std::vector<AggregatedLabel> aggregate_factual(const std::vector<Judgment>& judgments,
                                               double threshold, std::size_t min_judgments) {
    if (threshold < 0.0 || threshold > 1.0) throw Error("factual threshold out of [0,1]");
    std::vector<AggregatedLabel> labels;
    for (const auto& [item_id, votes] : tally(judgments, Task::factual)) {
        AggregatedLabel label;
        label.item_id = item_id;
        std::size_t n = total(votes);
        label.n_judgments["factual"] = static_cast<int>(n);
        if (n < min_judgments) {
            label.insufficient = true;
        } else {
            std::size_t best = 0;
            std::size_t winners = 0;
            std::string winner;
            for (const auto& [value, count] : votes) {
                if (count > best) {
                    best = count;
                    winners = 1;
                    winner = value;
                } else if (count == best) {
                    ++winners;
                }
            }
            if (winners == 1 &&
                static_cast<double>(best) / static_cast<double>(n) >= threshold)
                label.factual = winner;
        }
        labels.push_back(std::move(label));
    }
    return labels;
}

std::vector<AggregatedLabel> merge_labels(const std::vector<AggregatedLabel>& plausibility,
                                          const std::vector<AggregatedLabel>& stance,
                                          const std::vector<AggregatedLabel>& factual) {
    std::map<std::string, AggregatedLabel> merged;
    for (const auto& l : plausibility) merged[l.item_id] = l;
    for (const auto& l : stance) {
        auto& m = merged[l.item_id];
        m.item_id = l.item_id;
        m.n_judgments["stance"] = l.n_judgments.at("stance");
        m.insufficient = m.insufficient || l.insufficient;
        if (l.stance && m.plausible.value_or(false)) m.stance = l.stance;
    }
    for (const auto& l : factual) {
        auto& m = merged[l.item_id];
        m.item_id = l.item_id;
        m.n_judgments["factual"] = l.n_judgments.at("factual");
        m.insufficient = m.insufficient || l.insufficient;
        m.factual = l.factual;
    }
    std::vector<AggregatedLabel> out;
    out.reserve(merged.size());
    for (auto& [id, label] : merged) out.push_back(std::move(label));
    return out;
}

double cohen_kappa(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    if (a.empty()) throw Error("cohen_kappa: empty label vectors");
    if (a.size() != b.size()) throw Error("cohen_kappa: label vectors differ in length");

    const double n = static_cast<double>(a.size());
    double p_o = 0.0;
    std::map<std::string, std::size_t> ca, cb;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == b[i]) p_o += 1.0;
        ++ca[a[i]];
        ++cb[b[i]];
    }
    p_o /= n;
    double p_e = 0.0;
    for (const auto& [label, count] : ca) {
        auto it = cb.find(label);
        if (it != cb.end())
            p_e += (static_cast<double>(count) / n) * (static_cast<double>(it->second) / n);
    }
    if (p_e == 1.0) return 1.0;
    return (p_o - p_e) / (1.0 - p_e);
}

std::optional<double> mean_annotator_kappa(const std::vector<Judgment>& judgments, Task task,
                                           std::size_t min_common, std::size_t min_partners) {
    // annotator -> item -> value; a repeated judgment keeps the last value.
    std::map<std::string, std::map<std::string, std::string>> by_annotator;
    for (const auto& j : judgments)
        if (j.task == task) by_annotator[j.annotator_id][j.item_id] = j.value;

    std::vector<std::string> annotators;
    for (const auto& [id, items] : by_annotator) annotators.push_back(id);

    std::map<std::string, std::vector<std::string>> partners;
    for (std::size_t i = 0; i < annotators.size(); ++i) {
        for (std::size_t k = i + 1; k < annotators.size(); ++k) {
            const auto& ai = by_annotator[annotators[i]];
            const auto& ak = by_annotator[annotators[k]];
            std::size_t common = 0;
            for (const auto& [item, value] : ai) common += ak.count(item);
            if (common >= min_common) {
                partners[annotators[i]].push_back(annotators[k]);
                partners[annotators[k]].push_back(annotators[i]);
            }
        }
    }

    std::vector<double> per_annotator;
    for (const auto& id : annotators) {
        auto it = partners.find(id);
        if (it == partners.end() || it->second.size() < min_partners) continue;
        const auto& mine = by_annotator[id];
        double sum = 0.0;
        for (const auto& partner : it->second) {
            const auto& theirs = by_annotator[partner];
            std::vector<std::string> va, vb;
            for (const auto& [item, value] : mine) {
                auto shared = theirs.find(item);
                if (shared != theirs.end()) {
                    va.push_back(value);
                    vb.push_back(shared->second);
                }
            }
            sum += cohen_kappa(va, vb);
        }
        per_annotator.push_back(sum / static_cast<double>(it->second.size()));
    }

    if (per_annotator.empty()) return std::nullopt;
    double mean = 0.0;
    for (double k : per_annotator) mean += k;
    return mean / static_cast<double>(per_annotator.size());
}

} // namespace claimgen::annot
