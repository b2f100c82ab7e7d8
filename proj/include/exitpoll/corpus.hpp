#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace exitpoll {

/// Opaque, case-sensitive label token. Equality is byte equality.
class Label {
public:
    Label() = default;
    /// Throws Error if the name is empty or contains a line break.
    explicit Label(std::string name);

    const std::string& name() const noexcept { return name_; }

    friend bool operator==(const Label&, const Label&) = default;
    friend auto operator<=>(const Label&, const Label&) = default;

private:
    std::string name_;
};

struct Document {
    std::string id;
    std::string text;
    std::vector<Label> labels;  // non-empty, distinct, in source order

    bool has_label(const Label& label) const noexcept;
};

/// Ordered collection of labeled documents with unique ids.
class Corpus {
public:
    Corpus() = default;
    /// Validates id uniqueness and non-empty label sets; throws Error otherwise.
    explicit Corpus(std::vector<Document> documents);

    const std::vector<Document>& documents() const noexcept { return documents_; }
    const std::vector<Label>& label_vocabulary() const noexcept { return vocabulary_; }
    std::size_t size() const noexcept { return documents_.size(); }
    bool empty() const noexcept { return documents_.empty(); }
    const Document& operator[](std::size_t i) const { return documents_[i]; }

private:
    std::vector<Document> documents_;
    std::vector<Label> vocabulary_;  // sorted union of all document labels
};

/// Per-label document frequencies and priors p = f / N.
struct LabelStats {
    std::size_t n_documents = 0;
    std::map<Label, std::size_t> frequencies;
    std::map<Label, double> priors;

    /// Builds stats from raw counts. Throws if N is zero, a count is zero,
    /// or a count exceeds N.
    static LabelStats from_counts(std::size_t n_documents,
                                  const std::map<Label, std::size_t>& frequencies);

    /// Throws Error naming the label when it is absent.
    double prior(const Label& label) const;
};

enum class CorpusFormat { Jsonl, Csv };

/// Accepts "jsonl" or "csv".
CorpusFormat parse_corpus_format(std::string_view tag);

/// Reads a corpus. Malformed records throw Error citing the 1-based line.
Corpus load_corpus(std::istream& source, CorpusFormat format);
Corpus load_corpus_file(const std::string& path, CorpusFormat format);

/// One `{"id","text","labels"}` object per line.
void write_jsonl(const Corpus& corpus, std::ostream& out);

LabelStats label_stats(const Corpus& corpus);

struct CorpusSplit {
    Corpus train;
    Corpus test;
};

/// Seeded disjoint partition; |test| = round(fraction * N) clamped to [1, N-1].
/// Both halves keep the original relative document order.
CorpusSplit split_corpus(const Corpus& corpus, double test_fraction, std::uint64_t seed);

}  // namespace exitpoll
