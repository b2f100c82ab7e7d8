// exitpoll: search-based multi-label text classification.
//
//   exitpoll generate <spec.json> -n <docs> --seed <s> -o <corpus.jsonl>
//   exitpoll index    <corpus> -o <index> [--holdout <test.jsonl> --test-fraction <f>]
//   exitpoll classify <index> [<query>|-] [--batch <file>]
//   exitpoll evaluate <index> <test-corpus> [--scheme all] [--json]
//   exitpoll stats    <corpus>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "exitpoll/classifier.hpp"
#include "exitpoll/corpus.hpp"
#include "exitpoll/error.hpp"
#include "exitpoll/eval.hpp"
#include "exitpoll/generator.hpp"
#include "exitpoll/index.hpp"

namespace {

using namespace exitpoll;

struct SearchFlags {
    double cutoff = 0.7;
    std::size_t max_results = 50;
    std::size_t k = 1;
    std::uint64_t seed = 0;
    std::string scheme = "weighted";

    SearchConfig config() const { return {cutoff, max_results}; }
};

void add_search_flags(CLI::App* cmd, SearchFlags& f, bool allow_all) {
    cmd->add_option("--cutoff", f.cutoff, "Strict distance cutoff in (0, 1]")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cmd->add_option("--max-results", f.max_results, "Neighbors retrieved per query")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--k", f.k, "Number of ranked labels")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--seed", f.seed, "Tie-break seed")->capture_default_str();
    std::vector<std::string> schemes{"naive", "weighted", "boosted"};
    if (allow_all) schemes.push_back("all");
    cmd->add_option("--scheme", f.scheme, "Voting scheme")
        ->check(CLI::IsMember(schemes))
        ->capture_default_str();
}

std::string read_all(std::istream& in) {
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::set<std::string> read_stopwords(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open stopword file '" + path + "'");
    std::set<std::string> words;
    std::string w;
    while (in >> w) words.insert(w);
    return words;
}

int cmd_generate(const std::string& spec_path, std::size_t n, std::uint64_t seed,
                 const std::string& out_path) {
    auto mixing = load_mixing_spec_file(spec_path);
    auto corpus = generate_corpus(mixing, n, seed);
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw Error("cannot open '" + out_path + "' for writing");
    write_jsonl(corpus, out);
    if (!out) throw Error("failed writing '" + out_path + "'");
    std::cout << corpus.size() << " documents\n";
    return 0;
}

struct IndexFlags {
    std::string corpus_path;
    std::string format = "jsonl";
    std::string out_path;
    std::size_t min_token_length = 2;
    bool keep_case = false;
    std::string stopwords_path;
    std::string holdout_path;
    double test_fraction = 0.2;
    std::uint64_t seed = 0;
};

int cmd_index(const IndexFlags& f) {
    TokenizerConfig tok;
    tok.lowercase = !f.keep_case;
    tok.min_token_length = f.min_token_length;
    if (!f.stopwords_path.empty()) tok.stopwords = read_stopwords(f.stopwords_path);

    auto corpus = load_corpus_file(f.corpus_path, parse_corpus_format(f.format));
    if (!f.holdout_path.empty()) {
        auto split = split_corpus(corpus, f.test_fraction, f.seed);
        std::ofstream out(f.holdout_path, std::ios::binary);
        if (!out) throw Error("cannot open '" + f.holdout_path + "' for writing");
        write_jsonl(split.test, out);
        std::cout << split.test.size() << " documents held out\n";
        corpus = std::move(split.train);
    }
    auto stats = label_stats(corpus);
    auto index = build_index(std::move(corpus), tok);
    save_index_file(f.out_path, index, stats);
    std::cout << index.size() << " documents\n" << index.vocabulary_size() << " terms\n";
    return 0;
}

int cmd_classify(const std::string& index_path, const std::string& query,
                 const std::string& batch_path, const SearchFlags& f) {
    auto file = load_index_file(index_path);
    const auto scheme = parse_scheme(f.scheme);
    auto run = [&](const std::string& text) {
        return to_json(classify(file.index, file.stats, text, scheme, f.k, f.config(), f.seed));
    };

    if (!batch_path.empty()) {
        std::ifstream in(batch_path);
        if (!in) throw Error("cannot open query file '" + batch_path + "'");
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            std::cout << run(line) << '\n';
        }
        return 0;
    }
    std::string text = query;
    if (query.empty() || query == "-") text = read_all(std::cin);
    std::cout << run(text) << '\n';
    return 0;
}

int cmd_evaluate(const std::string& index_path, const std::string& test_path,
                 const std::string& format, const SearchFlags& f, bool json) {
    auto file = load_index_file(index_path);
    auto test = load_corpus_file(test_path, parse_corpus_format(format));
    if (test.empty()) throw Error("test corpus '" + test_path + "' is empty");

    std::vector<EvalReport> reports;
    if (f.scheme == "all") {
        reports = compare_schemes(file.index, file.stats, test, f.k, f.config(), f.seed);
    } else {
        reports.push_back(evaluate(file.index, file.stats, test, parse_scheme(f.scheme), f.k,
                                   f.config(), f.seed));
    }
    if (json) {
        std::cout << (f.scheme == "all" ? to_json(reports) : to_json(reports.front())) << '\n';
    } else {
        for (std::size_t i = 0; i < reports.size(); ++i) {
            if (i) std::cout << '\n';
            std::cout << to_table(reports[i]);
        }
    }
    return 0;
}

int cmd_stats(const std::string& corpus_path, const std::string& format, bool json) {
    auto corpus = load_corpus_file(corpus_path, parse_corpus_format(format));
    auto stats = label_stats(corpus);

    std::vector<std::pair<Label, std::size_t>> rows(stats.frequencies.begin(),
                                                    stats.frequencies.end());
    std::stable_sort(rows.begin(), rows.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    if (json) {
        nlohmann::ordered_json j;
        j["n_documents"] = stats.n_documents;
        auto& labels = j["labels"] = nlohmann::ordered_json::array();
        for (const auto& [label, f] : rows)
            labels.push_back({{"label", label.name()}, {"frequency", f}, {"prior", stats.priors.at(label)}});
        std::cout << j.dump() << '\n';
        return 0;
    }
    std::cout << "documents\t" << stats.n_documents << '\n';
    std::cout << std::fixed << std::setprecision(3);
    for (const auto& [label, f] : rows)
        std::cout << label.name() << '\t' << f << '\t' << stats.priors.at(label) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Search-based multi-label text classification"};
    app.require_subcommand(1);

    std::string spec_path, gen_out;
    std::size_t gen_n = 0;
    std::uint64_t gen_seed = 0;
    auto* gen = app.add_subcommand("generate", "Generate a synthetic labeled corpus (jsonl)");
    gen->add_option("spec", spec_path, "Mixing spec JSON file")->required();
    gen->add_option("-n,--documents", gen_n, "Number of documents")->required()->check(CLI::PositiveNumber);
    gen->add_option("--seed", gen_seed, "Root seed")->capture_default_str();
    gen->add_option("-o,--out", gen_out, "Output corpus path")->required();

    IndexFlags ix;
    auto* idx = app.add_subcommand("index", "Build and persist a search index with label statistics");
    idx->add_option("corpus", ix.corpus_path, "Corpus file")->required();
    idx->add_option("-o,--out", ix.out_path, "Index output path")->required();
    idx->add_option("--format", ix.format, "Corpus format")
        ->check(CLI::IsMember({"jsonl", "csv"}))
        ->capture_default_str();
    idx->add_option("--min-token-length", ix.min_token_length, "Shortest kept token")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    idx->add_flag("--keep-case", ix.keep_case, "Do not lowercase tokens");
    idx->add_option("--stopwords", ix.stopwords_path, "Whitespace-separated stopword file");
    auto* holdout = idx->add_option("--holdout", ix.holdout_path,
                                    "Split the corpus and write the test part here (jsonl)");
    idx->add_option("--test-fraction", ix.test_fraction, "Held-out fraction")
        ->check(CLI::Range(0.0, 1.0))
        ->needs(holdout)
        ->capture_default_str();
    idx->add_option("--seed", ix.seed, "Split seed")->capture_default_str();

    SearchFlags cf;
    std::string cls_index, cls_query, cls_batch;
    auto* cls = app.add_subcommand("classify", "Classify a query text (argument, or stdin with -)");
    cls->add_option("index", cls_index, "Index file")->required();
    cls->add_option("query", cls_query, "Query text, or - for stdin");
    cls->add_option("--batch", cls_batch, "File of queries, one per line; emits JSON lines");
    add_search_flags(cls, cf, false);

    SearchFlags ef;
    std::string ev_index, ev_test, ev_format = "jsonl";
    bool ev_json = false;
    auto* ev = app.add_subcommand("evaluate", "Evaluate against a labeled test corpus");
    ev->add_option("index", ev_index, "Index file")->required();
    ev->add_option("test", ev_test, "Test corpus")->required();
    ev->add_option("--format", ev_format, "Test corpus format")
        ->check(CLI::IsMember({"jsonl", "csv"}))
        ->capture_default_str();
    ev->add_flag("--json", ev_json, "Emit JSON instead of a table");
    add_search_flags(ev, ef, true);

    std::string st_corpus, st_format = "jsonl";
    bool st_json = false;
    auto* st = app.add_subcommand("stats", "Print label frequencies and priors");
    st->add_option("corpus", st_corpus, "Corpus file")->required();
    st->add_option("--format", st_format, "Corpus format")
        ->check(CLI::IsMember({"jsonl", "csv"}))
        ->capture_default_str();
    st->add_flag("--json", st_json, "Emit JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*gen) return cmd_generate(spec_path, gen_n, gen_seed, gen_out);
        if (*idx) return cmd_index(ix);
        if (*cls) return cmd_classify(cls_index, cls_query, cls_batch, cf);
        if (*ev) return cmd_evaluate(ev_index, ev_test, ev_format, ef, ev_json);
        if (*st) return cmd_stats(st_corpus, st_format, st_json);
    } catch (const Error& e) {
        std::cerr << "exitpoll: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "exitpoll: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
