#pragma once

// Hand-rolled generators for the property tests.

#include <algorithm>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "exitpoll/classifier.hpp"
#include "exitpoll/corpus.hpp"

namespace exitpoll::testing {

using Rng = std::mt19937_64;

inline std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

/// Text of `n` words drawn from a vocabulary of `vocab` short words.
inline std::string random_text(Rng& rng, std::size_t n, std::size_t vocab) {
    std::string text;
    for (std::size_t i = 0; i < n; ++i) {
        if (i) text += (uniform(rng, 0, 4) == 0) ? ", " : " ";
        text += "w" + std::to_string(uniform(rng, 0, vocab - 1));
    }
    return text;
}

inline std::vector<Label> random_labels(Rng& rng, std::size_t pool) {
    std::vector<Label> all;
    for (std::size_t i = 0; i < pool; ++i) all.emplace_back("L" + std::to_string(i));
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(uniform(rng, 1, std::min<std::size_t>(3, pool)));
    return all;
}

/// Corpus of 1..max_docs documents with 0..max_tokens words each.
inline Corpus random_corpus(Rng& rng, std::size_t max_docs, std::size_t max_tokens,
                            std::size_t vocab, std::size_t label_pool = 5) {
    std::vector<Document> docs;
    const auto n = uniform(rng, 1, max_docs);
    for (std::size_t i = 0; i < n; ++i)
        docs.push_back({"d" + std::to_string(i), random_text(rng, uniform(rng, 0, max_tokens), vocab),
                        random_labels(rng, label_pool)});
    return Corpus{std::move(docs)};
}

/// Owns the documents a neighborhood's hits point at.
struct RandomNeighborhood {
    std::vector<std::unique_ptr<Document>> documents;
    Neighborhood neighborhood;

    void append(std::vector<Label> labels, double distance) {
        documents.push_back(std::make_unique<Document>(
            Document{"h" + std::to_string(documents.size()), "", std::move(labels)}));
        neighborhood.hits.push_back({documents.size() - 1, documents.back().get(), distance});
    }
};

/// Distances are multiples of 1/1024 so score sums are exact.
inline double dyadic_distance(Rng& rng) { return static_cast<double>(uniform(rng, 0, 1023)) / 1024.0; }

inline RandomNeighborhood random_neighborhood(Rng& rng, std::size_t max_hits, std::size_t label_pool,
                                              bool zero_distance = false) {
    RandomNeighborhood r;
    const auto n = uniform(rng, 1, max_hits);
    std::vector<double> d(n);
    for (auto& x : d) x = zero_distance ? 0.0 : dyadic_distance(rng);
    std::sort(d.begin(), d.end());
    for (double x : d) r.append(random_labels(rng, label_pool), x);
    return r;
}

/// Stats over `pool` labels; when `uniform_prior` every label gets the same count.
inline LabelStats random_stats(Rng& rng, std::size_t pool, bool uniform_prior) {
    const auto n_docs = uniform(rng, 5, 500);
    const auto common = uniform(rng, 1, n_docs);
    std::map<Label, std::size_t> f;
    for (std::size_t i = 0; i < pool; ++i)
        f[Label{"L" + std::to_string(i)}] = uniform_prior ? common : uniform(rng, 1, n_docs);
    return LabelStats::from_counts(n_docs, f);
}

}  // namespace exitpoll::testing
