#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "exitpoll/corpus.hpp"
#include "exitpoll/index.hpp"

namespace exitpoll {

/// The search results for one query: N(t) in poll terms.
struct Neighborhood {
    std::vector<SearchHit> hits;  // non-decreasing distance, each in [0, 1)
    std::string query_text;
};

enum class Scheme { NaiveMajority, WeightedQuorum, BoostedQuorum };

/// "naive", "weighted", "boosted".
std::string_view scheme_name(Scheme scheme) noexcept;
Scheme parse_scheme(std::string_view name);

struct ScoredLabel {
    Label label;
    double score = 0.0;

    friend bool operator==(const ScoredLabel&, const ScoredLabel&) = default;
};

struct Prediction {
    std::vector<ScoredLabel> ranked;  // non-increasing score, each label in `plausible`
    Scheme scheme = Scheme::WeightedQuorum;
    bool abstained = false;           // set iff the neighborhood was empty
    std::vector<Label> plausible;     // sorted

    friend bool operator==(const Prediction&, const Prediction&) = default;
};

/// Union of the neighbors' label sets, sorted.
std::vector<Label> plausible_labels(const Neighborhood& neighborhood);

/// Votes are raw counts of neighbors carrying each label; distances are ignored.
Prediction naive_majority(const Neighborhood& neighborhood, std::size_t k, std::uint64_t seed = 0);

/// W(label) = sum over neighbors carrying the label of (1 - distance).
Prediction weighted_quorum(const Neighborhood& neighborhood, std::size_t k, std::uint64_t seed = 0);

/// W_B(label) = W(label) / p(label), with p the label's corpus prior.
/// Throws Error naming any neighborhood label that `stats` does not know.
Prediction boosted_quorum(const Neighborhood& neighborhood, const LabelStats& stats, std::size_t k,
                          std::uint64_t seed = 0);

/// Search, then vote with the chosen scheme. Empty neighborhoods abstain.
Prediction classify(const Index& index, const LabelStats& stats, std::string_view query,
                    Scheme scheme, std::size_t k = 1, const SearchConfig& config = {},
                    std::uint64_t seed = 0);

/// Same pipeline, voting over an already retrieved neighborhood.
Prediction vote(const Neighborhood& neighborhood, const LabelStats& stats, Scheme scheme,
                std::size_t k, std::uint64_t seed);

/// {"scheme":..,"abstained":..,"ranked":[{"label":..,"score":..}],"plausible":[..]}
std::string to_json(const Prediction& prediction);

}  // namespace exitpoll
