#include "exitpoll/generator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <set>

#include <json.hpp>

#include "exitpoll/error.hpp"

namespace exitpoll {

namespace {

void check_weights(const std::vector<double>& weights, std::size_t expected, const std::string& what) {
    if (weights.size() != expected)
        throw Error(what + ": " + std::to_string(weights.size()) + " weights for " +
                    std::to_string(expected) + " tokens");
    for (double w : weights)
        if (!(w > 0.0) || !std::isfinite(w)) throw Error(what + ": weights must be positive");
}

void check_distinct(const std::vector<std::string>& tokens, const std::string& what) {
    std::set<std::string> seen;
    for (const auto& t : tokens) {
        if (t.empty()) throw Error(what + ": empty token");
        if (!seen.insert(t).second) throw Error(what + ": duplicate token '" + t + "'");
    }
}

std::vector<std::string> draw(const std::vector<std::string>& vocabulary,
                              const std::vector<double>& weights, std::size_t n, Engine& engine) {
    std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
    std::vector<std::string> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(vocabulary[pick(engine)]);
    return out;
}

std::vector<double> weights_or_uniform(const nlohmann::json& j, const char* key, std::size_t n) {
    if (!j.contains(key)) return std::vector<double>(n, 1.0);
    return j.at(key).get<std::vector<double>>();
}

}  // namespace

void LabelGeneratorSpec::validate() const {
    const std::string what = "generator for label '" + label.name() + "'";
    if (vocabulary.empty()) throw Error(what + ": empty vocabulary");
    check_distinct(vocabulary, what);
    check_weights(token_weights, vocabulary.size(), what);
}

void MixingSpec::validate() const {
    if (specs.empty()) throw Error("mixing spec needs at least one label");
    std::set<Label> labels;
    for (const auto& s : specs) {
        s.validate();
        if (!labels.insert(s.label).second) throw Error("duplicate label '" + s.label.name() + "'");
    }
    if (!(noise_fraction >= 0.0 && noise_fraction < 1.0))
        throw Error("noise_fraction must lie in [0, 1)");
    if (!shared_vocabulary.empty()) {
        check_distinct(shared_vocabulary, "shared vocabulary");
        check_weights(shared_weights, shared_vocabulary.size(), "shared vocabulary");
    } else if (noise_fraction > 0.0) {
        throw Error("noise_fraction > 0 requires a shared vocabulary");
    }
    if (tokens_per_label < 1) throw Error("tokens_per_label must be at least 1");

    if (labels_per_document.empty() || labels_per_document.size() > specs.size())
        throw Error("labels_per_document must have between 1 and " + std::to_string(specs.size()) +
                    " entries");
    double total = 0.0;
    for (double p : labels_per_document) {
        if (!(p >= 0.0)) throw Error("labels_per_document probabilities must be non-negative");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-9) throw Error("labels_per_document must sum to 1");

    for (const auto& s : specs) {
        auto it = label_bias.find(s.label);
        if (it == label_bias.end()) throw Error("label_bias has no entry for '" + s.label.name() + "'");
        if (!(it->second > 0.0) || !std::isfinite(it->second))
            throw Error("label_bias for '" + s.label.name() + "' must be positive");
    }
    for (const auto& [label, w] : label_bias)
        if (!labels.contains(label)) throw Error("label_bias names unknown label '" + label.name() + "'");
}

std::vector<std::string> generate_label_text(const LabelGeneratorSpec& spec, std::size_t n_tokens,
                                             Engine& engine) {
    if (n_tokens < 1) throw Error("n_tokens must be at least 1");
    return draw(spec.vocabulary, spec.token_weights, n_tokens, engine);
}

std::string mix(const std::vector<std::vector<std::string>>& parts,
                const std::vector<std::string>& shared, Engine& engine) {
    std::vector<std::string_view> tokens;
    for (const auto& part : parts) tokens.insert(tokens.end(), part.begin(), part.end());
    tokens.insert(tokens.end(), shared.begin(), shared.end());
    if (tokens.empty()) throw Error("mix needs at least one token");
    std::shuffle(tokens.begin(), tokens.end(), engine);

    std::string text;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i) text += ' ';
        text += tokens[i];
    }
    return text;
}

std::size_t shared_token_count(double noise_fraction, std::size_t label_tokens) {
    return static_cast<std::size_t>(
        std::llround(noise_fraction * static_cast<double>(label_tokens) / (1.0 - noise_fraction)));
}

Document generate_document(const MixingSpec& mixing, std::size_t ordinal, std::uint64_t seed) {
    Engine engine = make_engine(seed, ordinal);

    std::discrete_distribution<std::size_t> count_dist(mixing.labels_per_document.begin(),
                                                       mixing.labels_per_document.end());
    const std::size_t n_labels = count_dist(engine) + 1;

    // Weighted draw without replacement over the remaining labels.
    std::vector<double> bias;
    bias.reserve(mixing.specs.size());
    for (const auto& s : mixing.specs) bias.push_back(mixing.label_bias.at(s.label));
    std::vector<std::size_t> chosen;
    for (std::size_t i = 0; i < n_labels; ++i) {
        std::discrete_distribution<std::size_t> pick(bias.begin(), bias.end());
        auto c = pick(engine);
        chosen.push_back(c);
        bias[c] = 0.0;
    }
    std::sort(chosen.begin(), chosen.end());

    Document doc;
    doc.id = "synth-" + std::to_string(ordinal);
    std::vector<std::vector<std::string>> parts;
    for (auto c : chosen) {
        const auto& spec = mixing.specs[c];
        doc.labels.push_back(spec.label);
        parts.push_back(generate_label_text(spec, mixing.tokens_per_label, engine));
    }
    std::vector<std::string> shared;
    if (auto n_shared = shared_token_count(mixing.noise_fraction, n_labels * mixing.tokens_per_label))
        shared = draw(mixing.shared_vocabulary, mixing.shared_weights, n_shared, engine);
    doc.text = mix(parts, shared, engine);
    return doc;
}

Corpus generate_corpus(const MixingSpec& mixing, std::size_t n_documents, std::uint64_t seed,
                       Execution execution) {
    if (n_documents < 1) throw Error("n_documents must be at least 1");
    mixing.validate();
    std::vector<Document> docs(n_documents);
    const auto n = static_cast<std::int64_t>(n_documents);
    if (execution == Execution::Parallel) {
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < n; ++i)
            docs[i] = generate_document(mixing, static_cast<std::size_t>(i), seed);
    } else {
        for (std::int64_t i = 0; i < n; ++i)
            docs[i] = generate_document(mixing, static_cast<std::size_t>(i), seed);
    }
    return Corpus{std::move(docs)};
}

MixingSpec load_mixing_spec(std::istream& in) {
    using nlohmann::json;
    MixingSpec m;
    try {
        json j = json::parse(in);
        for (const auto& s : j.at("labels")) {
            LabelGeneratorSpec spec;
            spec.label = Label{s.at("label").get<std::string>()};
            spec.vocabulary = s.at("vocabulary").get<std::vector<std::string>>();
            spec.token_weights = weights_or_uniform(s, "weights", spec.vocabulary.size());
            m.specs.push_back(std::move(spec));
        }
        m.shared_vocabulary = j.value("shared_vocabulary", std::vector<std::string>{});
        m.shared_weights = weights_or_uniform(j, "shared_weights", m.shared_vocabulary.size());
        m.noise_fraction = j.value("noise_fraction", 0.0);
        m.tokens_per_label = j.at("tokens_per_label").get<std::size_t>();
        m.labels_per_document = j.value("labels_per_document", std::vector<double>{1.0});
        for (const auto& s : m.specs) m.label_bias[s.label] = 1.0;
        if (j.contains("label_bias")) {
            for (const auto& [name, w] : j.at("label_bias").items())
                m.label_bias[Label{name}] = w.get<double>();
        }
    } catch (const json::exception& e) {
        throw Error(std::string("invalid mixing spec: ") + e.what());
    }
    m.validate();
    return m;
}

MixingSpec load_mixing_spec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open mixing spec '" + path + "'");
    try {
        return load_mixing_spec(in);
    } catch (const Error& e) {
        throw Error(path + ": " + e.what());
    }
}

void save_mixing_spec(std::ostream& out, const MixingSpec& mixing) {
    nlohmann::ordered_json j;
    auto& labels = j["labels"] = nlohmann::ordered_json::array();
    for (const auto& s : mixing.specs)
        labels.push_back({{"label", s.label.name()},
                          {"vocabulary", s.vocabulary},
                          {"weights", s.token_weights}});
    j["shared_vocabulary"] = mixing.shared_vocabulary;
    j["shared_weights"] = mixing.shared_weights;
    j["noise_fraction"] = mixing.noise_fraction;
    j["tokens_per_label"] = mixing.tokens_per_label;
    j["labels_per_document"] = mixing.labels_per_document;
    auto& bias = j["label_bias"] = nlohmann::ordered_json::object();
    for (const auto& [label, w] : mixing.label_bias) bias[label.name()] = w;
    out << j.dump(2) << '\n';
}

}  // namespace exitpoll
