#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "claimgen/jsonl.hpp"
#include "claimgen/types.hpp"

namespace claimgen::annot {

enum class Task { plausibility, stance, factual, preference };

Task task_from_string(std::string_view s);
std::string to_string(Task task);

// Canonical judgment values per task:
//   plausibility: "true" | "false"
//   stance:       "pro" | "con" | "none"
//   factual:      "factual" | "opinion"
//   preference:   "generated" | "corpus" | "tie"
struct Judgment {
    std::string annotator_id;
    std::string item_id;
    Task task = Task::plausibility;
    std::string value;
    bool is_test_question = false;
    std::optional<std::string> gold_value;

    // Value in the task's domain; gold_value present iff is_test_question.
    void validate() const;
};

json to_json(const Judgment& j);
Judgment judgment_from_json(const json& j);
std::vector<Judgment> load_judgments(const std::filesystem::path& path);

struct AnnotatorAccuracy {
    std::size_t n_test = 0;
    std::size_t n_correct = 0;
    double accuracy = 0.0;
    bool removed = false;
    bool unchecked = false; // no test questions seen for this task
};

struct FilterReport {
    std::vector<Judgment> kept;
    // task name -> annotator -> accuracy record
    std::map<std::string, std::map<std::string, AnnotatorAccuracy>> by_task;
    std::size_t n_removed_judgments = 0;
};

// Per task, an annotator whose test-question accuracy is strictly below the
// task's threshold loses all their judgments for that task. Annotators with
// no test questions are kept and flagged. Tasks without a threshold entry
// are not filtered.
FilterReport filter_annotators(const std::vector<Judgment>& judgments,
                               const std::map<Task, double>& thresholds);

// Aggregations skip test questions and count only real items. Items with
// fewer than min_judgments judgments come back flagged insufficient, to be
// excluded downstream. Results are ordered by item id.

std::vector<AggregatedLabel> aggregate_plausibility(const std::vector<Judgment>& judgments,
                                                    double threshold = 0.7,
                                                    std::size_t min_judgments = 5);

// Strict plurality over {pro, con, none}; any tie for the top count -> none.
std::vector<AggregatedLabel> aggregate_stance(const std::vector<Judgment>& judgments,
                                              std::size_t min_judgments = 5);

// factual/opinion only when one value reaches >= threshold of the item's
// judgments; otherwise the item stays unlabeled.
std::vector<AggregatedLabel> aggregate_factual(const std::vector<Judgment>& judgments,
                                               double threshold = 0.7,
                                               std::size_t min_judgments = 5);

// Folds per-task labels into one record per item. Stance is attached only to
// items the plausibility pass labeled plausible.
std::vector<AggregatedLabel> merge_labels(const std::vector<AggregatedLabel>& plausibility,
                                          const std::vector<AggregatedLabel>& stance,
                                          const std::vector<AggregatedLabel>& factual);

// (p_o - p_e) / (1 - p_e); both-constant-and-equal vectors (p_e == 1) are
// defined as 1. Throws on empty or mismatched inputs.
double cohen_kappa(const std::vector<std::string>& a, const std::vector<std::string>& b);

// Mean over qualifying annotators of their mean pairwise kappa. A partner
// counts when the pair shares >= min_common items for the task; an annotator
// qualifies with >= min_partners such partners. No qualifying annotator ->
// nullopt.
std::optional<double> mean_annotator_kappa(const std::vector<Judgment>& judgments, Task task,
                                           std::size_t min_common = 50,
                                           std::size_t min_partners = 5);

} // namespace claimgen::annot
