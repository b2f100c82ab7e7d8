#include "exitpoll/corpus.hpp"

#include <gtest/gtest.h>

#include <numeric>
#include <set>
#include <sstream>

#include "exitpoll/error.hpp"
#include "support/random_inputs.hpp"

namespace exitpoll {
namespace {

Corpus from_jsonl(const std::string& text) {
    std::istringstream in(text);
    return load_corpus(in, CorpusFormat::Jsonl);
}

Corpus from_csv(const std::string& text) {
    std::istringstream in(text);
    return load_corpus(in, CorpusFormat::Csv);
}

std::string load_error(const std::string& text, CorpusFormat format) {
    std::istringstream in(text);
    try {
        load_corpus(in, format);
    } catch (const Error& e) {
        return e.what();
    }
    return "";
}

Corpus labeled(const std::vector<std::vector<std::string>>& label_sets) {
    std::vector<Document> docs;
    for (std::size_t i = 0; i < label_sets.size(); ++i) {
        Document d{"d" + std::to_string(i), "text", {}};
        for (const auto& l : label_sets[i]) d.labels.emplace_back(l);
        docs.push_back(std::move(d));
    }
    return Corpus{std::move(docs)};
}

TEST(Label, RejectsEmptyAndMultiline) {
    EXPECT_THROW(Label{""}, Error);
    EXPECT_THROW(Label{"a\nb"}, Error);
    EXPECT_NE(Label{"Net"}, Label{"net"});
}

TEST(LoadCorpus, ThreeJsonlRecords) {
    auto c = from_jsonl(R"({"id":"1","text":"printer jam","labels":["hw"]}
{"id":"2","text":"vpn down","labels":["net","urgent"]}
{"id":"3","text":"toner","labels":["hw"]}
)");
    ASSERT_EQ(c.size(), 3u);
    EXPECT_EQ(c[1].id, "2");
    EXPECT_EQ(c[1].labels, (std::vector<Label>{Label{"net"}, Label{"urgent"}}));
    EXPECT_EQ(c.label_vocabulary(), (std::vector<Label>{Label{"hw"}, Label{"net"}, Label{"urgent"}}));
}

TEST(LoadCorpus, MissingLabelsCitesLine) {
    auto msg = load_error(R"({"id":"1","text":"a","labels":["x"]}
{"id":"2","text":"b"}
)",
                          CorpusFormat::Jsonl);
    EXPECT_NE(msg.find("line 2"), std::string::npos) << msg;
}

TEST(LoadCorpus, EmptyStream) {
    auto c = from_jsonl("");
    EXPECT_TRUE(c.empty());
    EXPECT_TRUE(c.label_vocabulary().empty());
}

TEST(LoadCorpus, MalformedRecords) {
    EXPECT_NE(load_error(R"({"id":"1","labels":["x"]})", CorpusFormat::Jsonl).find("line 1"),
              std::string::npos);
    EXPECT_NE(load_error(R"({"id":"1","text":"a","labels":[]})", CorpusFormat::Jsonl).find("line 1"),
              std::string::npos);
    auto dup = load_error("{\"id\":\"1\",\"text\":\"a\",\"labels\":[\"x\"]}\n"
                          "{\"id\":\"1\",\"text\":\"b\",\"labels\":[\"y\"]}\n",
                          CorpusFormat::Jsonl);
    EXPECT_NE(dup.find("line 2"), std::string::npos);
    EXPECT_NE(dup.find("duplicate id"), std::string::npos);
    EXPECT_NE(load_error("not json\n", CorpusFormat::Jsonl).find("line 1"), std::string::npos);
    EXPECT_NE(load_error(R"({"id":"1","text":"a","labels":["x","x"]})", CorpusFormat::Jsonl), "");
}

TEST(LoadCorpus, AcceptsCrLf) {
    auto c = from_jsonl("{\"id\":\"1\",\"text\":\"a\",\"labels\":[\"x\"]}\r\n\r\n"
                        "{\"id\":\"2\",\"text\":\"b\",\"labels\":[\"y\"]}\r\n");
    EXPECT_EQ(c.size(), 2u);
}

TEST(LoadCorpus, Csv) {
    auto c = from_csv("id,text,labels\r\n"
                      "1,\"disk full, again\",storage|urgent\r\n"
                      "2,\"say \"\"hi\"\"\",chat\n"
                      "3,\"two\nlines\",chat\n");
    ASSERT_EQ(c.size(), 3u);
    EXPECT_EQ(c[0].text, "disk full, again");
    EXPECT_EQ(c[0].labels, (std::vector<Label>{Label{"storage"}, Label{"urgent"}}));
    EXPECT_EQ(c[1].text, "say \"hi\"");
    EXPECT_EQ(c[2].text, "two\nlines");
}

TEST(LoadCorpus, CsvErrors) {
    EXPECT_NE(load_error("id,body,labels\n", CorpusFormat::Csv).find("line 1"), std::string::npos);
    EXPECT_NE(load_error("id,text,labels\n1,a,x\n2,b,\n", CorpusFormat::Csv).find("line 3"),
              std::string::npos);
    EXPECT_NE(load_error("id,text,labels\n1,a\n", CorpusFormat::Csv).find("line 2"),
              std::string::npos);
}

TEST(LoadCorpus, UnknownFormat) {
    EXPECT_THROW(parse_corpus_format("xml"), Error);
    EXPECT_EQ(parse_corpus_format("csv"), CorpusFormat::Csv);
}

TEST(LoadCorpus, JsonlRoundTrip) {
    auto c = from_jsonl(R"({"id":"é1","text":"tab\there \"q\"","labels":["A","b c"]})");
    std::ostringstream out;
    write_jsonl(c, out);
    auto again = from_jsonl(out.str());
    ASSERT_EQ(again.size(), 1u);
    EXPECT_EQ(again[0].id, c[0].id);
    EXPECT_EQ(again[0].text, c[0].text);
    EXPECT_EQ(again[0].labels, c[0].labels);
}

TEST(LabelStats, CountsDocuments) {
    auto s = label_stats(labeled({{"A"}, {"A"}, {"B"}}));
    EXPECT_EQ(s.n_documents, 3u);
    EXPECT_EQ(s.frequencies.at(Label{"A"}), 2u);
    EXPECT_EQ(s.frequencies.at(Label{"B"}), 1u);
    EXPECT_EQ(s.priors.at(Label{"A"}), 2.0 / 3.0);
    EXPECT_EQ(s.priors.at(Label{"B"}), 1.0 / 3.0);
}

TEST(LabelStats, MultiLabelPriorsMayExceedOne) {
    auto s = label_stats(labeled({{"A", "B"}}));
    EXPECT_EQ(s.n_documents, 1u);
    EXPECT_EQ(s.prior(Label{"A"}), 1.0);
    EXPECT_EQ(s.prior(Label{"B"}), 1.0);
    double sum = 0;
    for (const auto& [l, p] : s.priors) sum += p;
    EXPECT_EQ(sum, 2.0);
}

TEST(LabelStats, EmptyCorpusThrows) {
    EXPECT_THROW(label_stats(Corpus{}), Error);
    EXPECT_THROW(LabelStats::from_counts(0, {}), Error);
    EXPECT_THROW(LabelStats::from_counts(2, {{Label{"A"}, 3}}), Error);
    EXPECT_THROW(label_stats(labeled({{"A"}})).prior(Label{"Z"}), Error);
}

TEST(LabelStats, AssignmentsCountedOnceAndOrderFree) {
    testing::Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        auto c = testing::random_corpus(rng, 40, 5, 10);
        auto s = label_stats(c);
        std::size_t assignments = 0;
        for (const auto& d : c.documents()) assignments += d.labels.size();
        std::size_t total = 0;
        for (const auto& [l, f] : s.frequencies) {
            total += f;
            EXPECT_LE(f, s.n_documents);
            EXPECT_EQ(s.priors.at(l), static_cast<double>(f) / static_cast<double>(s.n_documents));
        }
        EXPECT_EQ(total, assignments);

        auto docs = c.documents();
        std::shuffle(docs.begin(), docs.end(), rng);
        auto shuffled = label_stats(Corpus{docs});
        EXPECT_EQ(shuffled.frequencies, s.frequencies);
        EXPECT_EQ(shuffled.priors, s.priors);
    }
}

std::set<std::string> ids(const Corpus& c) {
    std::set<std::string> out;
    for (const auto& d : c.documents()) out.insert(d.id);
    return out;
}

TEST(SplitCorpus, EightTwo) {
    auto c = labeled({{"A"}, {"A"}, {"B"}, {"B"}, {"C"}, {"A"}, {"B"}, {"C"}, {"C"}, {"A"}});
    auto split = split_corpus(c, 0.2, 7);
    EXPECT_EQ(split.train.size(), 8u);
    EXPECT_EQ(split.test.size(), 2u);
    auto train = ids(split.train), test = ids(split.test);
    std::set<std::string> both;
    std::set_intersection(train.begin(), train.end(), test.begin(), test.end(),
                          std::inserter(both, both.begin()));
    EXPECT_TRUE(both.empty());
    train.insert(test.begin(), test.end());
    EXPECT_EQ(train, ids(c));

    auto again = split_corpus(c, 0.2, 7);
    EXPECT_EQ(ids(again.test), ids(split.test));
    EXPECT_EQ(ids(again.train), ids(split.train));
}

TEST(SplitCorpus, ClampsToOneEach) {
    auto split = split_corpus(labeled({{"A"}, {"B"}}), 0.01, 3);
    EXPECT_EQ(split.train.size(), 1u);
    EXPECT_EQ(split.test.size(), 1u);
    split = split_corpus(labeled({{"A"}, {"B"}, {"C"}}), 0.99, 3);
    EXPECT_EQ(split.train.size(), 1u);
}

TEST(SplitCorpus, Errors) {
    EXPECT_THROW(split_corpus(labeled({{"A"}}), 0.5, 0), Error);
    EXPECT_THROW(split_corpus(labeled({{"A"}, {"B"}}), 0.0, 0), Error);
    EXPECT_THROW(split_corpus(labeled({{"A"}, {"B"}}), 1.0, 0), Error);
}

TEST(SplitCorpus, PartitionForEverySeed) {
    testing::Rng rng(5);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        auto c = testing::random_corpus(rng, 60, 3, 10);
        if (c.size() < 2) continue;
        auto split = split_corpus(c, 0.3, seed);
        EXPECT_EQ(split.train.size() + split.test.size(), c.size());
        auto all = ids(split.train);
        auto test_ids = ids(split.test);
        all.insert(test_ids.begin(), test_ids.end());
        EXPECT_EQ(all, ids(c));
    }
}

}  // namespace
}  // namespace exitpoll
