#include "exitpoll/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <set>
#include <unordered_set>

#include <json.hpp>

#include "exitpoll/error.hpp"
#include "exitpoll/rng.hpp"

namespace exitpoll {

namespace {

[[noreturn]] void fail_at(std::size_t line, const std::string& what) {
    throw Error("line " + std::to_string(line) + ": " + what);
}

void strip_cr(std::string& line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
}

bool is_blank(const std::string& line) {
    return std::all_of(line.begin(), line.end(),
                       [](unsigned char c) { return c == ' ' || c == '\t'; });
}

std::vector<Label> make_labels(const std::vector<std::string>& names, std::size_t line) {
    if (names.empty()) fail_at(line, "labels must contain at least one label");
    std::vector<Label> labels;
    labels.reserve(names.size());
    for (const auto& name : names) {
        if (name.empty()) fail_at(line, "empty label");
        if (name.find_first_of("\r\n") != std::string::npos)
            fail_at(line, "label contains a line break");
        Label label{name};
        if (std::find(labels.begin(), labels.end(), label) != labels.end())
            fail_at(line, "duplicate label '" + name + "'");
        labels.push_back(std::move(label));
    }
    return labels;
}

Document parse_jsonl_record(const std::string& line, std::size_t line_no) {
    nlohmann::json record;
    try {
        record = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
        fail_at(line_no, std::string("invalid JSON: ") + e.what());
    }
    if (!record.is_object()) fail_at(line_no, "record is not a JSON object");

    auto id = record.find("id");
    if (id == record.end() || !id->is_string()) fail_at(line_no, "missing string field \"id\"");
    auto text = record.find("text");
    if (text == record.end() || !text->is_string())
        fail_at(line_no, "missing string field \"text\"");
    auto labels = record.find("labels");
    if (labels == record.end() || !labels->is_array())
        fail_at(line_no, "missing array field \"labels\"");

    std::vector<std::string> names;
    for (const auto& l : *labels) {
        if (!l.is_string()) fail_at(line_no, "labels must be strings");
        names.push_back(l.get<std::string>());
    }
    return Document{id->get<std::string>(), text->get<std::string>(), make_labels(names, line_no)};
}

// RFC 4180 field splitting. Returns false while a quoted field is still open.
bool split_csv(const std::string& record, std::vector<std::string>& fields) {
    fields.assign(1, {});
    bool quoted = false;
    for (std::size_t i = 0; i < record.size(); ++i) {
        char c = record[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < record.size() && record[i + 1] == '"') {
                    fields.back() += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                fields.back() += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.emplace_back();
        } else {
            fields.back() += c;
        }
    }
    return !quoted;
}

std::vector<std::string> split_pipe(const std::string& s) {
    std::vector<std::string> out;
    if (s.empty()) return out;
    std::size_t start = 0;
    for (;;) {
        auto bar = s.find('|', start);
        out.push_back(s.substr(start, bar - start));
        if (bar == std::string::npos) break;
        start = bar + 1;
    }
    return out;
}

std::vector<Document> read_jsonl(std::istream& in) {
    std::vector<Document> docs;
    std::unordered_set<std::string> ids;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        strip_cr(line);
        if (is_blank(line)) continue;
        auto doc = parse_jsonl_record(line, line_no);
        if (!ids.insert(doc.id).second) fail_at(line_no, "duplicate id '" + doc.id + "'");
        docs.push_back(std::move(doc));
    }
    if (in.bad()) throw Error("I/O error while reading corpus");
    return docs;
}

std::vector<Document> read_csv(std::istream& in) {
    std::vector<Document> docs;
    std::unordered_set<std::string> ids;
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> fields;

    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        strip_cr(line);
        std::size_t record_line = line_no;
        std::string record = line;
        while (!split_csv(record, fields)) {
            if (!std::getline(in, line)) fail_at(record_line, "unterminated quoted field");
            ++line_no;
            strip_cr(line);
            record += '\n';
            record += line;
        }
        if (!header_seen) {
            if (fields != std::vector<std::string>{"id", "text", "labels"})
                fail_at(record_line, "expected header \"id,text,labels\"");
            header_seen = true;
            continue;
        }
        if (is_blank(record)) continue;
        if (fields.size() != 3)
            fail_at(record_line, "expected 3 fields, found " + std::to_string(fields.size()));
        Document doc{fields[0], fields[1], make_labels(split_pipe(fields[2]), record_line)};
        if (!ids.insert(doc.id).second) fail_at(record_line, "duplicate id '" + doc.id + "'");
        docs.push_back(std::move(doc));
    }
    if (in.bad()) throw Error("I/O error while reading corpus");
    return docs;
}

}  // namespace

Label::Label(std::string name) : name_(std::move(name)) {
    if (name_.empty()) throw Error("label name must be non-empty");
    if (name_.find_first_of("\r\n") != std::string::npos)
        throw Error("label name must not contain line breaks");
}

bool Document::has_label(const Label& label) const noexcept {
    return std::find(labels.begin(), labels.end(), label) != labels.end();
}

Corpus::Corpus(std::vector<Document> documents) : documents_(std::move(documents)) {
    std::unordered_set<std::string> ids;
    std::set<Label> vocabulary;
    for (const auto& doc : documents_) {
        if (!ids.insert(doc.id).second) throw Error("duplicate document id '" + doc.id + "'");
        if (doc.labels.empty()) throw Error("document '" + doc.id + "' has no labels");
        std::set<Label> distinct(doc.labels.begin(), doc.labels.end());
        if (distinct.size() != doc.labels.size())
            throw Error("document '" + doc.id + "' repeats a label");
        vocabulary.insert(doc.labels.begin(), doc.labels.end());
    }
    vocabulary_.assign(vocabulary.begin(), vocabulary.end());
}

LabelStats LabelStats::from_counts(std::size_t n_documents,
                                   const std::map<Label, std::size_t>& frequencies) {
    if (n_documents == 0) throw Error("label statistics need at least one document");
    LabelStats stats;
    stats.n_documents = n_documents;
    stats.frequencies = frequencies;
    for (const auto& [label, f] : frequencies) {
        if (f == 0 || f > n_documents)
            throw Error("frequency of '" + label.name() + "' out of range");
        stats.priors.emplace(label, static_cast<double>(f) / static_cast<double>(n_documents));
    }
    return stats;
}

double LabelStats::prior(const Label& label) const {
    auto it = priors.find(label);
    if (it == priors.end()) throw Error("label '" + label.name() + "' missing from label statistics");
    return it->second;
}

CorpusFormat parse_corpus_format(std::string_view tag) {
    if (tag == "jsonl") return CorpusFormat::Jsonl;
    if (tag == "csv") return CorpusFormat::Csv;
    throw Error("unknown corpus format '" + std::string(tag) + "' (expected jsonl or csv)");
}

Corpus load_corpus(std::istream& source, CorpusFormat format) {
    if (!source) throw Error("corpus stream is not readable");
    auto docs = format == CorpusFormat::Jsonl ? read_jsonl(source) : read_csv(source);
    return Corpus{std::move(docs)};
}

Corpus load_corpus_file(const std::string& path, CorpusFormat format) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open corpus file '" + path + "'");
    try {
        return load_corpus(in, format);
    } catch (const Error& e) {
        throw Error(path + ": " + e.what());
    }
}

void write_jsonl(const Corpus& corpus, std::ostream& out) {
    for (const auto& doc : corpus.documents()) {
        nlohmann::ordered_json record;
        record["id"] = doc.id;
        record["text"] = doc.text;
        auto& labels = record["labels"] = nlohmann::ordered_json::array();
        for (const auto& l : doc.labels) labels.push_back(l.name());
        out << record.dump() << '\n';
    }
}

LabelStats label_stats(const Corpus& corpus) {
    if (corpus.empty()) throw Error("cannot compute label statistics of an empty corpus");
    std::map<Label, std::size_t> counts;
    for (const auto& doc : corpus.documents())
        for (const auto& label : doc.labels) ++counts[label];
    return LabelStats::from_counts(corpus.size(), counts);
}

CorpusSplit split_corpus(const Corpus& corpus, double test_fraction, std::uint64_t seed) {
    const std::size_t n = corpus.size();
    if (n < 2) throw Error("corpus needs at least 2 documents to split");
    if (!(test_fraction > 0.0 && test_fraction < 1.0))
        throw Error("test fraction must lie strictly between 0 and 1");

    auto n_test = static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(n)));
    n_test = std::clamp<std::size_t>(n_test, 1, n - 1);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Engine engine{seed};
    std::shuffle(order.begin(), order.end(), engine);

    std::vector<bool> in_test(n, false);
    for (std::size_t i = 0; i < n_test; ++i) in_test[order[i]] = true;

    std::vector<Document> train, test;
    for (std::size_t i = 0; i < n; ++i)
        (in_test[i] ? test : train).push_back(corpus[i]);
    return {Corpus{std::move(train)}, Corpus{std::move(test)}};
}

}  // namespace exitpoll
