#include "exitpoll/eval.hpp"

#include <algorithm>
#include <exception>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "exitpoll/error.hpp"

namespace exitpoll {

namespace {

nlohmann::ordered_json report_json(const EvalReport& r) {
    nlohmann::ordered_json j;
    j["scheme"] = scheme_name(r.scheme);
    j["k"] = r.k;
    j["n_test"] = r.n_test;
    j["n_abstained"] = r.n_abstained;
    j["top1_accuracy"] = r.top1_accuracy;
    j["topk_hit_rate"] = r.topk_hit_rate;
    j["macro_recall"] = r.macro_recall;
    j["correct_means"] = "predicted label is a member of the true label set";
    auto& labels = j["per_label"] = nlohmann::ordered_json::object();
    for (const auto& [label, m] : r.per_label)
        labels[label.name()] = {{"precision", m.precision},
                                {"recall", m.recall},
                                {"support", m.support},
                                {"predicted", m.predicted}};
    return j;
}

double ratio(std::size_t num, std::size_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

EvalReport summarize(const Corpus& test, std::span<const Prediction> predictions, Scheme scheme,
                     std::size_t k) {
    if (test.empty()) throw Error("cannot evaluate an empty test corpus");
    if (predictions.size() != test.size()) throw Error("one prediction per test document required");

    EvalReport r;
    r.scheme = scheme;
    r.k = k;
    r.n_test = test.size();
    std::size_t top1 = 0, topk = 0;
    for (std::size_t i = 0; i < test.size(); ++i) {
        const auto& doc = test[i];
        const auto& p = predictions[i];
        for (const auto& l : doc.labels) ++r.per_label[l].support;
        if (p.abstained || p.ranked.empty()) {
            ++r.n_abstained;
            continue;
        }
        const auto& first = p.ranked.front().label;
        auto& m = r.per_label[first];
        ++m.predicted;
        if (doc.has_label(first)) {
            ++top1;
            ++m.true_positives;
        }
        const auto depth = std::min(k, p.ranked.size());
        if (std::any_of(p.ranked.begin(), p.ranked.begin() + static_cast<std::ptrdiff_t>(depth),
                        [&](const ScoredLabel& s) { return doc.has_label(s.label); }))
            ++topk;
    }
    r.top1_accuracy = ratio(top1, r.n_test);
    r.topk_hit_rate = ratio(topk, r.n_test);

    double recall_sum = 0.0;
    std::size_t supported = 0;
    for (auto& [label, m] : r.per_label) {
        m.precision = ratio(m.true_positives, m.predicted);
        m.recall = ratio(m.true_positives, m.support);
        if (m.support > 0) {
            recall_sum += m.recall;
            ++supported;
        }
    }
    r.macro_recall = supported ? recall_sum / static_cast<double>(supported) : 0.0;
    return r;
}

EvalReport evaluate(const Index& index, const LabelStats& stats, const Corpus& test, Scheme scheme,
                    std::size_t k, const SearchConfig& config, std::uint64_t seed,
                    Execution execution) {
    if (test.empty()) throw Error("cannot evaluate an empty test corpus");
    if (k < 1) throw Error("k must be at least 1");
    config.validate();

    std::vector<Prediction> predictions(test.size());
    const auto n = static_cast<std::int64_t>(test.size());
    auto classify_one = [&](std::int64_t i) {
        predictions[i] = classify(index, stats, test[i].text, scheme, k, config,
                                  derive_seed(seed, static_cast<std::uint64_t>(i)));
    };
    if (execution == Execution::Parallel) {
        // Exceptions must not escape the parallel region; the first is rethrown.
        std::exception_ptr error;
#pragma omp parallel for schedule(dynamic, 8)
        for (std::int64_t i = 0; i < n; ++i) {
            try {
                classify_one(i);
            } catch (...) {
#pragma omp critical
                if (!error) error = std::current_exception();
            }
        }
        if (error) std::rethrow_exception(error);
    } else {
        for (std::int64_t i = 0; i < n; ++i) classify_one(i);
    }
    return summarize(test, predictions, scheme, k);
}

std::vector<EvalReport> compare_schemes(const Index& index, const LabelStats& stats,
                                        const Corpus& test, std::size_t k,
                                        const SearchConfig& config, std::uint64_t seed,
                                        Execution execution) {
    std::vector<EvalReport> reports;
    for (auto scheme : {Scheme::NaiveMajority, Scheme::WeightedQuorum, Scheme::BoostedQuorum})
        reports.push_back(evaluate(index, stats, test, scheme, k, config, seed, execution));
    return reports;
}

std::string to_json(const EvalReport& report) { return report_json(report).dump(); }

std::string to_json(const std::vector<EvalReport>& reports) {
    auto j = nlohmann::ordered_json::array();
    for (const auto& r : reports) j.push_back(report_json(r));
    return j.dump();
}

std::string to_table(const EvalReport& r) {
    int width = 5;
    for (const auto& [label, m] : r.per_label)
        width = std::max(width, static_cast<int>(label.name().size()));

    std::ostringstream out;
    out << std::fixed << std::setprecision(4);
    out << "scheme          " << scheme_name(r.scheme) << '\n'
        << "test documents  " << r.n_test << " (abstained " << r.n_abstained << ")\n"
        << "top-1 accuracy  " << r.top1_accuracy << '\n'
        << "top-" << r.k << " hit rate  " << r.topk_hit_rate << '\n'
        << "macro recall    " << r.macro_recall << '\n';
    out << std::left << std::setw(width) << "label" << std::right << "  " << std::setw(9)
        << "precision" << "  " << std::setw(9) << "recall" << "  " << std::setw(7) << "support"
        << '\n';
    for (const auto& [label, m] : r.per_label) {
        out << std::left << std::setw(width) << label.name() << std::right << "  "
            << std::setw(9) << m.precision << "  " << std::setw(9) << m.recall << "  "
            << std::setw(7) << m.support << '\n';
    }
    return out.str();
}

}  // namespace exitpoll
