#include "exitpoll/index.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>

#include <json.hpp>

#include "exitpoll/error.hpp"

namespace exitpoll {

namespace {

constexpr std::string_view kMagic = "EXITPOLL-INDEX";
constexpr int kFormatVersion = 1;

// Takes squared norms: sqrt(s * s) == s exactly, so a vector against itself
// gives cosine 1 and distance 0 without rounding slop.
double cosine_distance(double dot, double norm_sq_a, double norm_sq_b) {
    if (norm_sq_a == 0.0 || norm_sq_b == 0.0) return 1.0;
    return std::clamp(1.0 - dot / std::sqrt(norm_sq_a * norm_sq_b), 0.0, 1.0);
}

bool hit_order(const SearchHit& a, const SearchHit& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    return a.ordinal < b.ordinal;
}

void finish(std::vector<SearchHit>& hits, const SearchConfig& config) {
    if (hits.size() > config.max_results) {
        std::partial_sort(hits.begin(), hits.begin() + static_cast<std::ptrdiff_t>(config.max_results),
                          hits.end(), hit_order);
        hits.resize(config.max_results);
    } else {
        std::sort(hits.begin(), hits.end(), hit_order);
    }
}

}  // namespace

void SearchConfig::validate() const {
    if (!(cutoff > 0.0 && cutoff <= 1.0)) throw Error("cutoff must lie in (0, 1]");
    if (max_results < 1) throw Error("max_results must be at least 1");
}

double Index::idf(std::string_view term) const {
    auto id = term_id(term);
    return id < 0 ? unseen_idf_ : idf_[static_cast<std::size_t>(id)];
}

std::ptrdiff_t Index::term_id(std::string_view term) const {
    auto it = term_ids_.find(std::string(term));
    return it == term_ids_.end() ? -1 : static_cast<std::ptrdiff_t>(it->second);
}

Index build_index(Corpus corpus, const TokenizerConfig& config,
                  const std::unordered_map<std::string, double>* frozen_idf) {
    if (corpus.empty()) throw Error("cannot index an empty corpus");
    config.validate();

    Index index;
    index.corpus_ = std::move(corpus);
    index.tokenizer_ = config;
    const auto& docs = index.corpus_.documents();
    const auto n = static_cast<std::int64_t>(docs.size());

    std::vector<std::vector<std::string>> tokens(docs.size());
#pragma omp parallel for schedule(dynamic, 64)
    for (std::int64_t i = 0; i < n; ++i) tokens[i] = tokenize(docs[i].text, config);

    std::vector<std::map<std::string, std::uint32_t>> counts(docs.size());
    std::map<std::string, std::uint32_t> df;
    for (std::size_t i = 0; i < docs.size(); ++i) {
        for (const auto& t : tokens[i]) ++counts[i][t];
        for (const auto& [t, c] : counts[i]) ++df[t];
    }

    const auto n_docs = static_cast<double>(docs.size());
    index.terms_.reserve(df.size());
    index.idf_.reserve(df.size());
    for (const auto& [term, d] : df) {
        index.term_ids_.emplace(term, static_cast<std::uint32_t>(index.terms_.size()));
        index.terms_.push_back(term);
        double idf = std::log(1.0 + n_docs / static_cast<double>(d));
        if (frozen_idf) {
            if (auto it = frozen_idf->find(term); it != frozen_idf->end()) idf = it->second;
        }
        index.idf_.push_back(idf);
    }
    index.unseen_idf_ = std::log(1.0 + n_docs);

    index.postings_.resize(index.terms_.size());
    for (std::size_t i = 0; i < docs.size(); ++i)
        for (const auto& [term, c] : counts[i])
            index.postings_[index.term_ids_.at(term)].push_back({static_cast<std::uint32_t>(i), c});

    index.doc_norms_sq_.resize(docs.size());
#pragma omp parallel for schedule(dynamic, 64)
    for (std::int64_t i = 0; i < n; ++i) index.doc_norms_sq_[i] = weigh(index, tokens[i]).norm_sq;

    return index;
}

TermVector weigh(const Index& index, std::span<const std::string> tokens) {
    std::map<std::string_view, std::uint32_t> counts;
    for (const auto& t : tokens) ++counts[t];

    TermVector v;
    v.weights.reserve(counts.size());
    double sum_sq = 0.0;
    for (const auto& [term, c] : counts) {
        double w = static_cast<double>(c) * index.idf(term);
        sum_sq += w * w;
        v.weights.emplace_back(std::string(term), w);
    }
    v.norm_sq = sum_sq;
    return v;
}

double distance(const Index& index, std::span<const std::string> tokens_a,
                std::span<const std::string> tokens_b) {
    auto a = weigh(index, tokens_a);
    auto b = weigh(index, tokens_b);
    double dot = 0.0;
    auto ia = a.weights.begin();
    auto ib = b.weights.begin();
    while (ia != a.weights.end() && ib != b.weights.end()) {
        if (ia->first < ib->first) {
            ++ia;
        } else if (ib->first < ia->first) {
            ++ib;
        } else {
            dot += ia->second * ib->second;
            ++ia;
            ++ib;
        }
    }
    return cosine_distance(dot, a.norm_sq, b.norm_sq);
}

std::vector<SearchHit> search(const Index& index, std::string_view query,
                              const SearchConfig& config) {
    config.validate();
    const auto tokens = tokenize(query, index.tokenizer());
    const auto q = weigh(index, tokens);
    if (q.norm_sq == 0.0) return {};

    // Accumulation runs in term order so each document's dot product sums
    // the same terms in the same order as `distance`.
    std::vector<double> dot(index.size(), 0.0);
    std::vector<std::uint32_t> touched;
    std::vector<bool> seen(index.size(), false);
    for (const auto& [term, wq] : q.weights) {
        auto id = index.term_id(term);
        if (id < 0) continue;
        const double idf = index.idf(term);
        for (const auto& p : index.postings(static_cast<std::size_t>(id))) {
            if (!seen[p.document]) {
                seen[p.document] = true;
                touched.push_back(p.document);
            }
            dot[p.document] += wq * (static_cast<double>(p.term_frequency) * idf);
        }
    }

    std::vector<SearchHit> hits;
    for (auto ordinal : touched) {
        double d = cosine_distance(dot[ordinal], q.norm_sq, index.doc_norm_sq(ordinal));
        if (d < config.cutoff) hits.push_back({ordinal, &index.corpus()[ordinal], d});
    }
    finish(hits, config);
    return hits;
}

std::vector<SearchHit> brute_force_search(const Corpus& corpus, const Index& index,
                                          std::string_view query,
                                          const SearchConfig& config) {
    config.validate();
    const auto q = tokenize(query, index.tokenizer());
    std::vector<SearchHit> hits;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        double d = distance(index, q, tokenize(corpus[i].text, index.tokenizer()));
        if (d < config.cutoff) hits.push_back({i, &corpus[i], d});
    }
    finish(hits, config);
    return hits;
}

void save_index(std::ostream& out, const Index& index, const LabelStats& stats) {
    using nlohmann::json;
    json j;
    j["tokenizer"] = {{"lowercase", index.tokenizer_.lowercase},
                      {"min_token_length", index.tokenizer_.min_token_length},
                      {"stopwords", index.tokenizer_.stopwords}};
    auto& docs = j["documents"] = json::array();
    for (const auto& d : index.corpus_.documents()) {
        json labels = json::array();
        for (const auto& l : d.labels) labels.push_back(l.name());
        docs.push_back({{"id", d.id}, {"text", d.text}, {"labels", std::move(labels)}});
    }
    j["terms"] = index.terms_;
    j["idf"] = index.idf_;
    j["unseen_idf"] = index.unseen_idf_;
    auto& postings = j["postings"] = json::array();
    for (const auto& list : index.postings_) {
        json flat = json::array();
        for (const auto& p : list) {
            flat.push_back(p.document);
            flat.push_back(p.term_frequency);
        }
        postings.push_back(std::move(flat));
    }
    j["doc_norms_sq"] = index.doc_norms_sq_;
    json freqs = json::object();
    for (const auto& [label, f] : stats.frequencies) freqs[label.name()] = f;
    j["stats"] = {{"n_documents", stats.n_documents}, {"frequencies", std::move(freqs)}};

    out << kMagic << ' ' << kFormatVersion << '\n' << j.dump() << '\n';
    if (!out) throw Error("failed to write index");
}

IndexFile load_index(std::istream& in) {
    using nlohmann::json;
    std::string header;
    if (!std::getline(in, header) ||
        header != std::string(kMagic) + ' ' + std::to_string(kFormatVersion))
        throw Error("not an index file (bad magic header or unsupported version)");

    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw Error(std::string("corrupt index: ") + e.what());
    }

    try {
        Index index;
        const auto& tok = j.at("tokenizer");
        index.tokenizer_.lowercase = tok.at("lowercase").get<bool>();
        index.tokenizer_.min_token_length = tok.at("min_token_length").get<std::size_t>();
        index.tokenizer_.stopwords = tok.at("stopwords").get<std::set<std::string>>();

        std::vector<Document> docs;
        for (const auto& d : j.at("documents")) {
            Document doc{d.at("id").get<std::string>(), d.at("text").get<std::string>(), {}};
            for (const auto& l : d.at("labels")) doc.labels.emplace_back(l.get<std::string>());
            docs.push_back(std::move(doc));
        }
        index.corpus_ = Corpus{std::move(docs)};
        const std::size_t n = index.corpus_.size();

        index.terms_ = j.at("terms").get<std::vector<std::string>>();
        index.idf_ = j.at("idf").get<std::vector<double>>();
        index.unseen_idf_ = j.at("unseen_idf").get<double>();
        index.doc_norms_sq_ = j.at("doc_norms_sq").get<std::vector<double>>();
        const auto& postings = j.at("postings");
        if (index.idf_.size() != index.terms_.size() || postings.size() != index.terms_.size() ||
            index.doc_norms_sq_.size() != n)
            throw Error("corrupt index: inconsistent table sizes");

        for (std::size_t t = 0; t < index.terms_.size(); ++t) {
            index.term_ids_.emplace(index.terms_[t], static_cast<std::uint32_t>(t));
            const auto flat = postings[t].get<std::vector<std::uint32_t>>();
            if (flat.size() % 2 != 0) throw Error("corrupt index: odd postings list");
            auto& list = index.postings_.emplace_back();
            for (std::size_t k = 0; k < flat.size(); k += 2) {
                if (flat[k] >= n) throw Error("corrupt index: posting refers to unknown document");
                list.push_back({flat[k], flat[k + 1]});
            }
        }

        std::map<Label, std::size_t> freqs;
        for (const auto& [name, f] : j.at("stats").at("frequencies").items())
            freqs.emplace(Label{name}, f.get<std::size_t>());
        auto stats = LabelStats::from_counts(j.at("stats").at("n_documents").get<std::size_t>(), freqs);
        return IndexFile{std::move(index), std::move(stats)};
    } catch (const json::exception& e) {
        throw Error(std::string("corrupt index: ") + e.what());
    }
}

void save_index_file(const std::string& path, const Index& index, const LabelStats& stats) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    save_index(out, index, stats);
}

IndexFile load_index_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open index file '" + path + "'");
    return load_index(in);
}

}  // namespace exitpoll
