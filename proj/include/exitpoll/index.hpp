#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "exitpoll/corpus.hpp"
#include "exitpoll/tokenizer.hpp"

namespace exitpoll {

struct SearchConfig {
    double cutoff = 0.7;           // strict: hits satisfy distance < cutoff, 0 < cutoff <= 1
    std::size_t max_results = 50;  // >= 1

    void validate() const;
};

/// A retrieved neighbor. `document` points into the searched index's corpus
/// and stays valid for the lifetime of that index.
struct SearchHit {
    std::size_t ordinal = 0;
    const Document* document = nullptr;
    double distance = 1.0;  // in [0, 1]
};

struct Posting {
    std::uint32_t document;
    std::uint32_t term_frequency;

    friend bool operator==(const Posting&, const Posting&) = default;
};

struct IndexFile;

/// Inverted tf-idf index over a corpus. Immutable after construction, so
/// concurrent searches need no synchronization.
///
/// Term weight is tf * idf with tf the raw in-document count and
/// idf = ln(1 + N / df). Terms unseen at build time weigh ln(1 + N).
class Index {
public:
    const Corpus& corpus() const noexcept { return corpus_; }
    const TokenizerConfig& tokenizer() const noexcept { return tokenizer_; }
    std::size_t size() const noexcept { return corpus_.size(); }
    std::size_t vocabulary_size() const noexcept { return terms_.size(); }

    /// Terms in lexicographic order; a term's position is its id.
    const std::vector<std::string>& terms() const noexcept { return terms_; }
    std::span<const Posting> postings(std::size_t term_id) const { return postings_[term_id]; }
    double doc_norm_sq(std::size_t ordinal) const { return doc_norms_sq_[ordinal]; }

    /// idf of a term, or the unseen-term weight when it was never indexed.
    double idf(std::string_view term) const;
    double unseen_idf() const noexcept { return unseen_idf_; }
    /// Term id, or -1 when unseen.
    std::ptrdiff_t term_id(std::string_view term) const;

    friend Index build_index(Corpus, const TokenizerConfig&,
                             const std::unordered_map<std::string, double>*);
    friend void save_index(std::ostream&, const Index&, const LabelStats&);
    friend IndexFile load_index(std::istream&);

private:
    Corpus corpus_;
    TokenizerConfig tokenizer_;
    std::vector<std::string> terms_;
    std::unordered_map<std::string, std::uint32_t> term_ids_;
    std::vector<double> idf_;
    std::vector<std::vector<Posting>> postings_;
    std::vector<double> doc_norms_sq_;
    double unseen_idf_ = 0.0;
};

/// Builds the index. Throws Error on an empty corpus. When `frozen_idf` is
/// given, terms found in it take that idf instead of the computed one.
Index build_index(Corpus corpus, const TokenizerConfig& config = {},
                  const std::unordered_map<std::string, double>* frozen_idf = nullptr);

/// tf-idf weighted term vector, keyed and ordered by term text.
struct TermVector {
    std::vector<std::pair<std::string, double>> weights;
    double norm_sq = 0.0;  // squared Euclidean norm
};

TermVector weigh(const Index& index, std::span<const std::string> tokens);

/// 1 - cosine of the two tf-idf vectors under the index's idf table,
/// clamped to [0, 1]; 1 when either vector is zero.
double distance(const Index& index, std::span<const std::string> tokens_a,
                std::span<const std::string> tokens_b);

/// Candidate enumeration through the postings lists. Returns hits with
/// distance < cutoff, ascending by (distance, ordinal), truncated.
std::vector<SearchHit> search(const Index& index, std::string_view query,
                              const SearchConfig& config = {});

/// Scores every document with `distance` directly. Reference for `search`.
std::vector<SearchHit> brute_force_search(const Corpus& corpus, const Index& index,
                                          std::string_view query,
                                          const SearchConfig& config = {});

/// Persisted index plus the label statistics of the indexed corpus.
struct IndexFile {
    Index index;
    LabelStats stats;
};

/// Layout: a magic line "EXITPOLL-INDEX <version>" followed by one JSON document.
void save_index(std::ostream& out, const Index& index, const LabelStats& stats);
IndexFile load_index(std::istream& in);
void save_index_file(const std::string& path, const Index& index, const LabelStats& stats);
IndexFile load_index_file(const std::string& path);

}  // namespace exitpoll
