#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "exitpoll/classifier.hpp"
#include "exitpoll/corpus.hpp"
#include "exitpoll/index.hpp"
#include "exitpoll/rng.hpp"

namespace exitpoll {

/// Rank-1 diagnostics for one label.
struct LabelMetrics {
    double precision = 0.0;       // correct rank-1 predictions of the label / all of them; 0 if never predicted
    double recall = 0.0;          // documents carrying it whose rank-1 label is it / support
    std::size_t support = 0;      // test documents whose true set contains the label
    std::size_t predicted = 0;    // rank-1 predictions of the label
    std::size_t true_positives = 0;

    bool operator==(const LabelMetrics&) const = default;
};

/// A prediction counts as correct when the predicted label belongs to the
/// document's true label set. Abstentions count as misses.
struct EvalReport {
    Scheme scheme = Scheme::WeightedQuorum;
    std::size_t k = 1;
    std::size_t n_test = 0;
    std::size_t n_abstained = 0;
    double top1_accuracy = 0.0;
    double topk_hit_rate = 0.0;
    std::map<Label, LabelMetrics> per_label;
    double macro_recall = 0.0;  // mean recall over labels with support > 0

    friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

/// Folds per-document predictions (parallel to `test`) into a report.
EvalReport summarize(const Corpus& test, std::span<const Prediction> predictions, Scheme scheme,
                     std::size_t k);

/// Classifies every test document, document i with seed derive_seed(seed, i).
/// Throws Error on an empty test corpus.
EvalReport evaluate(const Index& index, const LabelStats& stats, const Corpus& test, Scheme scheme,
                    std::size_t k = 1, const SearchConfig& config = {}, std::uint64_t seed = 0,
                    Execution execution = Execution::Parallel);

/// Reports for naive, weighted and boosted, in that order.
std::vector<EvalReport> compare_schemes(const Index& index, const LabelStats& stats,
                                        const Corpus& test, std::size_t k = 1,
                                        const SearchConfig& config = {}, std::uint64_t seed = 0,
                                        Execution execution = Execution::Parallel);

std::string to_json(const EvalReport& report);
std::string to_json(const std::vector<EvalReport>& reports);

/// Summary lines followed by one aligned row per label.
std::string to_table(const EvalReport& report);

}  // namespace exitpoll
