#include "exitpoll/classifier.hpp"

#include <algorithm>
#include <map>
#include <set>

#include <json.hpp>

#include "exitpoll/error.hpp"
#include "exitpoll/rng.hpp"

namespace exitpoll {

namespace {

void require_k(std::size_t k) {
    if (k < 1) throw Error("k must be at least 1");
}

Prediction abstain(Scheme scheme) {
    Prediction p;
    p.scheme = scheme;
    p.abstained = true;
    return p;
}

// Orders by score descending. Equal scores (exact comparison) form tie
// groups whose order is a seeded shuffle; the full ranking is computed
// before truncation so shorter top-k lists are prefixes of longer ones.
Prediction rank(const std::map<Label, double>& scores, const Neighborhood& neighborhood,
                Scheme scheme, std::size_t k, std::uint64_t seed) {
    Prediction p;
    p.scheme = scheme;
    p.plausible = plausible_labels(neighborhood);
    p.ranked.reserve(scores.size());
    for (const auto& [label, score] : scores) p.ranked.push_back({label, score});

    std::stable_sort(p.ranked.begin(), p.ranked.end(),
                     [](const ScoredLabel& a, const ScoredLabel& b) { return a.score > b.score; });
    Engine engine{seed};
    for (auto first = p.ranked.begin(); first != p.ranked.end();) {
        auto last = std::find_if(first, p.ranked.end(),
                                 [&](const ScoredLabel& s) { return s.score != first->score; });
        if (last - first > 1) std::shuffle(first, last, engine);
        first = last;
    }
    if (p.ranked.size() > k) p.ranked.resize(k);
    return p;
}

std::map<Label, double> quorum(const Neighborhood& neighborhood) {
    std::map<Label, double> w;
    for (const auto& hit : neighborhood.hits)
        for (const auto& label : hit.document->labels) w[label] += 1.0 - hit.distance;
    return w;
}

}  // namespace

std::string_view scheme_name(Scheme scheme) noexcept {
    switch (scheme) {
        case Scheme::NaiveMajority: return "naive";
        case Scheme::WeightedQuorum: return "weighted";
        case Scheme::BoostedQuorum: return "boosted";
    }
    return "unknown";
}

Scheme parse_scheme(std::string_view name) {
    if (name == "naive") return Scheme::NaiveMajority;
    if (name == "weighted") return Scheme::WeightedQuorum;
    if (name == "boosted") return Scheme::BoostedQuorum;
    throw Error("unknown scheme '" + std::string(name) + "' (expected naive, weighted or boosted)");
}

std::vector<Label> plausible_labels(const Neighborhood& neighborhood) {
    std::set<Label> all;
    for (const auto& hit : neighborhood.hits)
        all.insert(hit.document->labels.begin(), hit.document->labels.end());
    return {all.begin(), all.end()};
}

Prediction naive_majority(const Neighborhood& neighborhood, std::size_t k, std::uint64_t seed) {
    require_k(k);
    if (neighborhood.hits.empty()) return abstain(Scheme::NaiveMajority);
    std::map<Label, double> counts;
    for (const auto& hit : neighborhood.hits)
        for (const auto& label : hit.document->labels) counts[label] += 1.0;
    return rank(counts, neighborhood, Scheme::NaiveMajority, k, seed);
}

Prediction weighted_quorum(const Neighborhood& neighborhood, std::size_t k, std::uint64_t seed) {
    require_k(k);
    if (neighborhood.hits.empty()) return abstain(Scheme::WeightedQuorum);
    return rank(quorum(neighborhood), neighborhood, Scheme::WeightedQuorum, k, seed);
}

Prediction boosted_quorum(const Neighborhood& neighborhood, const LabelStats& stats, std::size_t k,
                          std::uint64_t seed) {
    require_k(k);
    if (neighborhood.hits.empty()) return abstain(Scheme::BoostedQuorum);
    auto scores = quorum(neighborhood);
    for (auto& [label, w] : scores) w /= stats.prior(label);
    return rank(scores, neighborhood, Scheme::BoostedQuorum, k, seed);
}

Prediction vote(const Neighborhood& neighborhood, const LabelStats& stats, Scheme scheme,
                std::size_t k, std::uint64_t seed) {
    switch (scheme) {
        case Scheme::NaiveMajority: return naive_majority(neighborhood, k, seed);
        case Scheme::WeightedQuorum: return weighted_quorum(neighborhood, k, seed);
        case Scheme::BoostedQuorum: return boosted_quorum(neighborhood, stats, k, seed);
    }
    throw Error("unknown scheme");
}

Prediction classify(const Index& index, const LabelStats& stats, std::string_view query,
                    Scheme scheme, std::size_t k, const SearchConfig& config,
                    std::uint64_t seed) {
    require_k(k);
    Neighborhood n{search(index, query, config), std::string(query)};
    return vote(n, stats, scheme, k, seed);
}

std::string to_json(const Prediction& prediction) {
    nlohmann::ordered_json j;
    j["scheme"] = scheme_name(prediction.scheme);
    j["abstained"] = prediction.abstained;
    auto& ranked = j["ranked"] = nlohmann::ordered_json::array();
    for (const auto& s : prediction.ranked) {
        nlohmann::ordered_json entry;
        entry["label"] = s.label.name();
        if (prediction.scheme == Scheme::NaiveMajority)
            entry["score"] = static_cast<std::uint64_t>(s.score);
        else
            entry["score"] = s.score;
        ranked.push_back(std::move(entry));
    }
    auto& plausible = j["plausible"] = nlohmann::ordered_json::array();
    for (const auto& l : prediction.plausible) plausible.push_back(l.name());
    return j.dump();
}

}  // namespace exitpoll
