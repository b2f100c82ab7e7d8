#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "exitpoll/corpus.hpp"
#include "exitpoll/rng.hpp"

namespace exitpoll {

/// Stochastic text source for one label: tokens drawn i.i.d. from a
/// weighted vocabulary.
struct LabelGeneratorSpec {
    Label label;
    std::vector<std::string> vocabulary;  // distinct, non-empty
    std::vector<double> token_weights;    // positive, parallel to vocabulary

    void validate() const;
};

/// Control surface of the synthetic corpus generator.
struct MixingSpec {
    std::vector<LabelGeneratorSpec> specs;
    std::vector<std::string> shared_vocabulary;  // background tokens present in every document
    std::vector<double> shared_weights;
    double noise_fraction = 0.0;                 // share of tokens drawn from shared_vocabulary, in [0, 1)
    std::size_t tokens_per_label = 1;
    std::vector<double> labels_per_document{1.0};  // entry i = P(i + 1 labels)
    std::map<Label, double> label_bias;            // relative odds of picking a label

    void validate() const;
};

std::vector<std::string> generate_label_text(const LabelGeneratorSpec& spec, std::size_t n_tokens,
                                             Engine& engine);

/// Concatenates all parts with the shared tokens, shuffles the token order
/// and joins with single spaces. The token multiset is preserved exactly.
std::string mix(const std::vector<std::vector<std::string>>& parts,
                const std::vector<std::string>& shared, Engine& engine);

/// Number of background tokens added to a document with `label_tokens`
/// label-specific tokens: round(noise * label_tokens / (1 - noise)).
std::size_t shared_token_count(double noise_fraction, std::size_t label_tokens);

/// Generates document `ordinal` in isolation; its engine is derived from
/// (seed, ordinal) only.
Document generate_document(const MixingSpec& mixing, std::size_t ordinal, std::uint64_t seed);

/// Documents "synth-0" .. "synth-<n-1>". Output does not depend on `execution`.
Corpus generate_corpus(const MixingSpec& mixing, std::size_t n_documents, std::uint64_t seed,
                       Execution execution = Execution::Parallel);

MixingSpec load_mixing_spec(std::istream& in);
MixingSpec load_mixing_spec_file(const std::string& path);
void save_mixing_spec(std::ostream& out, const MixingSpec& mixing);

}  // namespace exitpoll
