// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <set>

#include "corpusrefine/corpus.hpp"
#include "support/oracles.hpp"

using namespace corpusrefine;

namespace {

std::filesystem::path write_csv(const std::string& name, const std::string& text) {
  static auto dir = oracle::temp_dir("corpus");
  auto p = dir / name;
  oracle::write_text(p, text);
  return p;
}

}  // namespace

// ---- CSV ----

TEST(Csv, QuotedFieldsWithCommasNewlinesAndEscapedQuotes) {
  auto t = csv::parse("id,abstract\n1,\"a, b\"\n2,\"line one\nline two\"\n3,\"say \"\"hi\"\"\"\n");
  ASSERT_EQ(t.rows.size(), 3u);
  EXPECT_EQ(t.rows[0][1], "a, b");
  EXPECT_EQ(t.rows[1][1], "line one\nline two");
  EXPECT_EQ(t.rows[2][1], "say \"hi\"");
  EXPECT_EQ(t.row_numbers[2], 3u);
}

TEST(Csv, CrlfAndMissingTrailingNewline) {
  auto t = csv::parse("a,b\r\n1,2\r\n3,4");
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.rows[1][1], "4");
  EXPECT_EQ(t.header[1], "b");
}

TEST(Csv, WrongFieldCountIsRecordedOrThrownInStrictMode) {
  const std::string text = "a,b\n1,2\n3\n4,5\n";
  auto t = csv::parse(text);
  EXPECT_EQ(t.rows.size(), 2u);
  ASSERT_EQ(t.issues.size(), 1u);
  EXPECT_EQ(t.issues[0].row, 2u);
  EXPECT_THROW(csv::parse(text, true), DataError);
}

TEST(Csv, UnterminatedQuoteIsAnIssue) {
  auto t = csv::parse("a,b\n1,\"oops\n");
  EXPECT_TRUE(t.rows.empty());
  EXPECT_EQ(t.issues.size(), 1u);
}

TEST(Csv, EmptyInputHasNoHeader) { EXPECT_THROW(csv::parse(""), DataError); }

TEST(Csv, FormatRoundTrip) {
  csv::Row row{"plain", "with,comma", "with \"quote\"", "multi\nline", ""};
  auto t = csv::parse("h1,h2,h3,h4,h5\n" + csv::format_row(row));
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_EQ(t.rows[0], row);
}

// ---- load_corpus ----

TEST(LoadCorpus, SkipsEmptyAbstractsAndCountsThem) {
  auto p = write_csv("three.csv", "id,abstract\nd1,First text\nd2,\nd3,Third text\n");
  auto set = load_corpus(p.string());
  ASSERT_EQ(set.size(), 2u);
  EXPECT_EQ(set.skipped_empty, 1u);
  EXPECT_EQ(set.documents[0].id, "d1");
  EXPECT_EQ(set.documents[1].id, "d3");
  EXPECT_EQ(set.source_path, p.string());
}

TEST(LoadCorpus, HeaderOnlyGivesEmptySet) {
  auto p = write_csv("header.csv", "id,abstract\n");
  auto set = load_corpus(p.string());
  EXPECT_TRUE(set.empty());
}

TEST(LoadCorpus, RowNumberIdWithoutIdColumnAndCustomTextColumn) {
  auto p = write_csv("noid.csv", "title,body\nx,alpha\ny,beta\n");
  CorpusOptions o;
  o.text_column = "body";
  auto set = load_corpus(p.string(), o);
  ASSERT_EQ(set.size(), 2u);
  EXPECT_EQ(set.documents[0].id, "1");
  EXPECT_EQ(set.documents[1].id, "2");
  EXPECT_EQ(set.documents[1].text, "beta");
}

TEST(LoadCorpus, Errors) {
  EXPECT_THROW(load_corpus("/nonexistent/corpus.csv"), DataError);
  auto missing = write_csv("nocol.csv", "id,text\n1,a\n");
  EXPECT_THROW(load_corpus(missing.string()), DataError);
  auto dup = write_csv("dup.csv", "id,abstract\na,x\na,y\n");
  EXPECT_THROW(load_corpus(dup.string()), DataError);
  auto bad = write_csv("bad.csv", "id,abstract\n1,ok\n2,too,many\n");
  auto set = load_corpus(bad.string());
  EXPECT_EQ(set.size(), 1u);
  ASSERT_EQ(set.malformed.size(), 1u);
  EXPECT_EQ(set.malformed[0].row, 2u);
  CorpusOptions strict;
  strict.strict = true;
  EXPECT_THROW(load_corpus(bad.string(), strict), DataError);
}

// ---- preprocess ----

TEST(Preprocess, StopwordsDroppedElementsKept) {
  EXPECT_EQ(preprocess("The Pt and Pd alloys"), (TokenList{"Pt", "Pd", "alloys"}));
}

TEST(Preprocess, EmptyText) { EXPECT_TRUE(preprocess("").empty()); }

TEST(Preprocess, LicenseRemovedBeforeSplitting) {
  const std::string text = "\xC2\xA9 2023 CC-BY license. Conductivity of Ru films";
  EXPECT_EQ(preprocess(text), (TokenList{"conductivity", "Ru", "films"}));
  Preprocessor custom(resources::element_set(), resources::stopword_set(), {"\xC2\xA9.*license\\."});
  EXPECT_EQ(custom(text), (TokenList{"conductivity", "Ru", "films"}));
}

TEST(Preprocess, ElementCaseSensitivity) {
  EXPECT_EQ(preprocess("He said he measured He"), (TokenList{"He", "said", "measured", "He"}));
  EXPECT_EQ(preprocess("CO and Co"), (TokenList{"co", "Co"}));
}

TEST(Preprocess, SingleCharactersAndPunctuation) {
  EXPECT_EQ(preprocess("x = 5 ; C , N"), (TokenList{"C", "N"}));
  EXPECT_EQ(preprocess("--- ... !!!"), TokenList{});
}

TEST(Preprocess, FormulasStaySingleTokens) {
  EXPECT_EQ(preprocess("AgPdPt thin-film"), (TokenList{"agpdpt", "thin", "film"}));
}

TEST(Preprocess, UnicodeLettersAreWordCharacters) {
  EXPECT_EQ(preprocess("Über Ωmega résumé"), (TokenList{"über", "ωmega", "résumé"}));
}

TEST(Preprocess, CommonLicenseStatements) {
  EXPECT_EQ(preprocess("Good film. Copyright \xC2\xA9 2022 Elsevier B.V. All rights reserved."),
            (TokenList{"good", "film"}));
  EXPECT_EQ(preprocess("Good film. This is an open access article under the CC BY license."),
            (TokenList{"good", "film"}));
  EXPECT_EQ(preprocess("Good film. (c) 2020 Published by Elsevier B.V. Ni layer."), (TokenList{"good", "film", "Ni", "layer"}));
}

TEST(Preprocess, IdempotentOnItsOwnOutput) {
  std::mt19937_64 gen(11);
  const std::vector<std::string> pool = {
      "The", "Pt", "pt", "Ag", "AG", "conductivity", "Dielectric", "of", "a", "x", "(c)", "2020", "©",
      "Copyright", "by", "Elsevier.", "All", "rights", "reserved.", "Published", "licensed", "under", "CC",
      "open", "access", "article", "In", "in", "He", "he", "Über", "H2O", "thin-film", "%", "5.3", "--", "Ωmega"};
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1), len(0, 30);
  for (int trial = 0; trial < 500; ++trial) {
    std::string text;
    for (std::size_t i = 0, n = len(gen); i < n; ++i) text += pool[pick(gen)] + (i % 7 == 6 ? ". " : " ");
    TokenList once = preprocess(text);
    EXPECT_EQ(preprocess(text::join(once)), once) << text;
    for (const auto& t : once) EXPECT_FALSE(t.empty());
  }
}

TEST(Preprocess, OutputHasNoStopwords) {
  auto stop = resources::stopword_set();
  for (const auto& t : preprocess("It is what it is, and they were there for the measurement of Au films"))
    EXPECT_EQ(stop.count(t), 0u) << t;
}

// ---- vocabulary ----

TEST(Vocabulary, CountsAndOrder) {
  auto v = build_vocabulary(std::vector<TokenList>{{"a", "b", "a"}}, 1);
  EXPECT_EQ(v.index("a"), 0u);
  EXPECT_EQ(v.index("b"), 1u);
  EXPECT_EQ(v.count(0), 2u);
  EXPECT_EQ(v.count(1), 1u);
}

TEST(Vocabulary, MinCountThreshold) {
  auto v = build_vocabulary(std::vector<TokenList>{{"a", "b", "a"}}, 2);
  EXPECT_EQ(v.size(), 1u);
  EXPECT_TRUE(v.contains("a"));
  EXPECT_FALSE(v.contains("b"));
  EXPECT_THROW(v.index("b"), OutOfVocabulary);
}

TEST(Vocabulary, TiesAreLexicographic) {
  auto v = build_vocabulary(std::vector<TokenList>{{"zeta", "alpha", "mid"}}, 1);
  EXPECT_EQ(v.tokens(), (std::vector<std::string>{"alpha", "mid", "zeta"}));
}

TEST(Vocabulary, EmptyIsAnError) {
  EXPECT_THROW(build_vocabulary(std::vector<TokenList>{{"a"}}, 2), DataError);
  EXPECT_THROW(build_vocabulary(std::vector<TokenList>{}, 1), DataError);
}

TEST(Vocabulary, IndicesAreABijection) {
  std::mt19937_64 gen(5);
  std::vector<TokenList> docs(20);
  for (auto& d : docs)
    for (int i = 0; i < 30; ++i) d.push_back("t" + std::to_string(gen() % 40));
  for (std::uint64_t mc : {1u, 2u, 3u}) {
    auto v = build_vocabulary(docs, mc);
    std::set<std::size_t> seen;
    for (std::size_t i = 0; i < v.size(); ++i) {
      EXPECT_EQ(v.index(v.token(i)), i);
      EXPECT_GE(v.count(i), mc);
      if (i) EXPECT_LE(v.count(i), v.count(i - 1));
      seen.insert(v.index(v.token(i)));
    }
    EXPECT_EQ(seen.size(), v.size());
  }
}

// ---- bundled resources ----

TEST(Resources, ElementTable) {
  auto e = resources::element_set();
  EXPECT_EQ(e.size(), 118u);
  for (const char* s : {"H", "He", "Pt", "Pd", "Ag", "Ru", "Og", "Zr", "Hf", "Cu"}) EXPECT_TRUE(e.count(s)) << s;
  EXPECT_FALSE(resources::is_element("pt"));
  EXPECT_FALSE(resources::is_element("Xx"));
}

TEST(Resources, StopwordsAreLowercaseAndNonEmpty) {
  auto s = resources::stopword_set();
  EXPECT_EQ(s.size(), resources::kStopwords.size());
  for (auto w : resources::kStopwords) {
    EXPECT_FALSE(w.empty());
    EXPECT_EQ(text::lowercase(w), std::string(w));
  }
  EXPECT_TRUE(s.count("the"));
}

TEST(Resources, LicensePatternsCompile) { EXPECT_NO_THROW(Preprocessor()); }

TEST(Resources, BadPatternIsAConfigError) {
  EXPECT_THROW(Preprocessor(resources::element_set(), resources::stopword_set(), {"("}), ConfigError);
}

TEST(Resources, LoadListSkipsCommentsAndBlanks) {
  auto p = write_csv("list.txt", "# comment\nalpha\n\n  beta  \n");
  EXPECT_EQ(resources::load_list(p.string()), (std::vector<std::string>{"alpha", "beta"}));
}
