#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "smellcast/content.hpp"
#include "smellcast/errors.hpp"

using namespace smellcast;

namespace {

ContentCorpus corpus(const std::string& text) {
  std::istringstream in(text);
  return parse_corpus(in, "test.bags");
}

TokenBag random_bag(std::mt19937_64& rng) {
  TokenBag b;
  const char* vocab[] = {"sql", "read", "write", "node", "tree", "parse", "emit", "log"};
  for (auto* t : vocab)
    if (rng() % 2) b.add(t, 1 + rng() % 9);
  return b;
}

}  // namespace

TEST(Corpus, Empty) {
  EXPECT_EQ(corpus("").node_count(), 0u);
  EXPECT_EQ(corpus("#version 3\n").version_id(), "3");
}

TEST(Corpus, OneBag) {
  auto c = corpus("bag org.db comments\n  sql 2\n  read 1\n");
  EXPECT_EQ(c.node_count(), 1u);
  EXPECT_EQ(c.bag("org.db", Channel::Comments).total(), 3u);
  EXPECT_TRUE(c.bag("org.db", Channel::Fields).empty());
  EXPECT_TRUE(c.bag("elsewhere", Channel::Comments).empty());
}

TEST(Corpus, UnknownChannelListsValidOnes) {
  try {
    corpus("bag a imports\n  x 1\n");
    FAIL();
  } catch (const ParseError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("imports"), std::string::npos);
    EXPECT_NE(msg.find("method_usage"), std::string::npos);
    EXPECT_EQ(e.line(), 1u);
  }
}

TEST(Corpus, BadCounts) {
  EXPECT_THROW(corpus("bag a fields\n  x -1\n"), ParseError);
  EXPECT_THROW(corpus("bag a fields\n  x 0\n"), ParseError);
  EXPECT_THROW(corpus("bag a fields\n  x many\n"), ParseError);
}

TEST(Corpus, LowercasesAndMerges) {
  auto c = corpus("bag a fields\n  Name 1\n\nbag a fields\n  name 2\n");
  EXPECT_EQ(c.bag("a", Channel::Fields).count("name"), 3u);
}

TEST(Corpus, WriteParseRoundTrip) {
  std::mt19937_64 rng(4);
  ContentCorpus c("7");
  for (const char* n : {"a", "a.b", "c"})
    for (auto ch : kAllChannels) {
      auto b = random_bag(rng);
      if (!b.empty()) c.add(n, ch, b);
    }
  std::ostringstream out;
  write_corpus(out, c);
  EXPECT_EQ(corpus(out.str()), c);
}

TEST(TokenBagTest, RejectsBadTokens) {
  TokenBag b;
  EXPECT_THROW(b.add("", 1), ArgumentError);
  EXPECT_THROW(b.add("Upper", 1), ArgumentError);
  EXPECT_THROW(b.add("x", 0), ArgumentError);
}

TEST(PackageBag, Hierarchy) {
  ContentCorpus c;
  c.add("a.b", Channel::Fields, {{"x", 1}});
  c.add("a.b.c", Channel::Fields, {{"x", 2}, {"y", 1}});
  c.add("a.bc", Channel::Fields, {{"z", 5}});
  EXPECT_EQ(package_bag(c, "a.b", Channel::Fields, true), (TokenBag{{"x", 3}, {"y", 1}}));
  EXPECT_EQ(package_bag(c, "a.b", Channel::Fields, false), (TokenBag{{"x", 1}}));
  EXPECT_TRUE(package_bag(c, "q", Channel::Fields, true).empty());
}

TEST(PackageBag, FlatCorpusIgnoresHierarchyFlag) {
  std::mt19937_64 rng(8);
  ContentCorpus c;
  for (const char* n : {"alpha", "beta", "gamma"}) c.add(n, Channel::Methods, random_bag(rng));
  for (const char* n : {"alpha", "beta", "gamma"})
    EXPECT_EQ(package_bag(c, n, Channel::Methods, true), package_bag(c, n, Channel::Methods, false));
}

TEST(Cosine, Cases) {
  TokenBag ab{{"a", 1}, {"b", 1}}, ac{{"a", 1}, {"c", 1}}, d{{"d", 4}};
  EXPECT_NEAR(cosine_similarity(ab, ac), 0.5, 1e-12);
  EXPECT_EQ(cosine_similarity(ab, d), 0.0);
  EXPECT_EQ(cosine_similarity(ab, TokenBag{}), 0.0);
  EXPECT_NEAR(cosine_similarity(ab, ab), 1.0, 1e-12);
}

TEST(Cosine, SymmetricScaleInvariantBounded) {
  std::mt19937_64 rng(12);
  for (int round = 0; round < 200; ++round) {
    auto a = random_bag(rng), b = random_bag(rng);
    const double s = cosine_similarity(a, b);
    EXPECT_EQ(s, cosine_similarity(b, a));
    EXPECT_GE(s, 0.0);
    EXPECT_LE(s, 1.0);
    TokenBag scaled;
    const auto k = 1 + rng() % 7;
    for (const auto& [t, c] : a.counts()) scaled.add(t, c * k);
    EXPECT_NEAR(cosine_similarity(scaled, b), s, 1e-12);
  }
}

TEST(Tokenize, Identifiers) {
  EXPECT_EQ(tokenize_identifier("readSQLTable"), (std::vector<std::string>{"read", "sql", "table"}));
  EXPECT_EQ(tokenize_identifier("max_row_count2"), (std::vector<std::string>{"max", "row", "count"}));
  EXPECT_EQ(tokenize_identifier("x_42_ok"), (std::vector<std::string>{"ok"}));
  EXPECT_TRUE(tokenize_identifier("").empty());
}
