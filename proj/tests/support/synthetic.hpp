#pragma once

// Mixing specs for the synthetic benchmarks. Mirrors tools/make_config.py.

#include <string>

#include "exitpoll/generator.hpp"

namespace exitpoll::testing {

inline LabelGeneratorSpec uniform_source(const std::string& label, std::vector<std::string> vocab) {
    LabelGeneratorSpec s;
    s.label = Label{label};
    s.token_weights.assign(vocab.size(), 1.0);
    s.vocabulary = std::move(vocab);
    return s;
}

/// 10 labels with disjoint 50-token vocabularies, single-label, no noise.
inline MixingSpec separable_spec(std::size_t n_labels = 10, std::size_t vocab = 50,
                                 std::size_t tokens_per_label = 20) {
    MixingSpec m;
    for (std::size_t i = 0; i < n_labels; ++i) {
        std::vector<std::string> words;
        for (std::size_t j = 0; j < vocab; ++j)
            words.push_back("l" + std::to_string(i) + "w" + std::to_string(j));
        m.specs.push_back(uniform_source("L" + std::to_string(i), std::move(words)));
        m.label_bias[m.specs.back().label] = 1.0;
    }
    m.tokens_per_label = tokens_per_label;
    return m;
}

/// Two labels whose 50-token vocabularies share 30 tokens (60%), picked 9:1.
inline MixingSpec biased_spec(double major_bias = 9.0, double minor_bias = 1.0,
                              std::size_t tokens_per_label = 8) {
    std::vector<std::string> common;
    for (int j = 0; j < 30; ++j) common.push_back("c" + std::to_string(j));
    MixingSpec m;
    for (std::string name : {"major", "minor"}) {
        auto words = common;
        for (int j = 0; j < 20; ++j) words.push_back(name + std::to_string(j));
        m.specs.push_back(uniform_source(name, std::move(words)));
    }
    m.label_bias[Label{"major"}] = major_bias;
    m.label_bias[Label{"minor"}] = minor_bias;
    m.tokens_per_label = tokens_per_label;
    return m;
}

}  // namespace exitpoll::testing
