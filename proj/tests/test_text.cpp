#include <string>
#include <vector>

#include "doctest.h"
#include "referee/errors.hpp"
#include "referee/hashing.hpp"
#include "referee/text.hpp"
#include "test_support.hpp"

using namespace referee;
using test_support::fails_with;
using test_support::paper_text;

namespace {

bool structurally_equal(const SurveyPaper& a, const SurveyPaper& b) {
  if (a.id != b.id || a.prompt_id != b.prompt_id || a.title != b.title ||
      a.abstract != b.abstract || a.front_matter_extra != b.front_matter_extra) {
    return false;
  }
  if (a.sections.size() != b.sections.size()) return false;
  for (std::size_t i = 0; i < a.sections.size(); ++i) {
    if (a.sections[i].heading != b.sections[i].heading) return false;
    if (a.sections[i].body != b.sections[i].body) return false;
  }
  if (a.references.size() != b.references.size()) return false;
  for (std::size_t i = 0; i < a.references.size(); ++i) {
    if (a.references[i].raw != b.references[i].raw) return false;
  }
  return true;
}

}  // namespace

TEST_SUITE("text") {

TEST_CASE("parse extracts front matter, sections and references") {
  const std::string doc = paper_text(
      "paper-x", "prompt-x", "A Title: With Colon",
      {{"Abstract", "First point. Second point."}, {"Methods", "We measure things."}},
      {"[1] Doe, J. (2020). A fine result. ICML.", "[2] Roe, R. (2021). Another. KDD."},
      {{"note", "extra value"}});
  SurveyPaper p = parse_paper(doc);
  CHECK(p.id == "paper-x");
  CHECK(p.prompt_id == "prompt-x");
  CHECK(p.title == "A Title: With Colon");  // value keeps colons after the first
  CHECK(p.abstract == "First point. Second point.");
  REQUIRE(p.sections.size() == 1);
  CHECK(p.sections[0].heading == "Methods");
  REQUIRE(p.references.size() == 2);
  CHECK(p.references[0].title == "A fine result");
  CHECK(p.front_matter_extra.at("note") == "extra value");
  CHECK(p.raw == doc);
}

TEST_CASE("parse accepts CRLF line endings") {
  std::string doc = paper_text("p", "", "T", {{"Abstract", "Some words here."}});
  std::string crlf;
  for (char c : doc) {
    if (c == '\n') crlf += "\r\n";
    else crlf += c;
  }
  SurveyPaper p = parse_paper(crlf);
  CHECK(p.id == "p");
  CHECK(p.abstract == "Some words here.");
}

TEST_CASE("parse failure codes") {
  CHECK(fails_with(Err::MissingFrontMatter, [] { parse_paper("# Abstract\nhi\n"); }));
  CHECK(fails_with(Err::MissingFrontMatter,
                   [] { parse_paper("---\nid: x\ntitle: t\n# never closed\n"); }));
  CHECK(fails_with(Err::MissingFrontMatter,
                   [] { parse_paper("---\ntitle: t\n---\n\n# Abstract\nbody\n"); }));
  CHECK(fails_with(Err::MissingTitle,
                   [] { parse_paper("---\nid: x\n---\n\n# Abstract\nbody\n"); }));
  CHECK(fails_with(Err::MissingAbstract,
                   [] { parse_paper("---\nid: x\ntitle: t\n---\n\n# Intro\nbody\n"); }));
  CHECK(fails_with(Err::MissingAbstract,
                   [] { parse_paper("---\nid: x\ntitle: t\n---\n\n# Abstract\n\n"); }));
}

TEST_CASE("canonical_serialize is a fixed point of parse-then-serialize") {
  const std::string messy =
      "---\r\nid: paper-y\r\ntitle:   Spaced Out \r\nseed: 7\r\n---\r\n"
      "stray prose outside any section\r\n"
      "\r\n# Abstract\r\n\r\nBody line one.\r\nBody line two.\r\n\r\n"
      "# References\r\n[1] Foo, B. (2019). Bar. KDD.\r\n\r\n# End\r\nDone here.\r\n";
  SurveyPaper p1 = parse_paper(messy);
  std::string s1 = canonical_serialize(p1);
  SurveyPaper p2 = parse_paper(s1);
  std::string s2 = canonical_serialize(p2);
  CHECK(s1 == s2);
  CHECK(structurally_equal(p1, p2));
}

TEST_CASE("serialize round-trips randomly generated papers") {
  SplitMixRng rng(2024);
  const std::vector<std::string> vocab = {"alpha", "beta", "gamma", "delta",
                                          "epsilon", "zeta", "eta", "theta"};
  auto sentence = [&](std::size_t n) {
    std::string out;
    for (std::size_t i = 0; i < n; ++i) {
      if (i) out += ' ';
      out += vocab[rng.below(vocab.size())];
    }
    out += '.';
    return out;
  };
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<std::pair<std::string, std::string>> sections;
    sections.emplace_back("Abstract", sentence(5 + rng.below(10)));
    std::size_t extra = rng.below(4);
    for (std::size_t s = 0; s < extra; ++s) {
      sections.emplace_back("Part " + std::to_string(s), sentence(3 + rng.below(12)));
    }
    std::vector<std::string> refs;
    std::size_t n_refs = rng.below(5);
    for (std::size_t r = 0; r < n_refs; ++r) {
      refs.push_back("[" + std::to_string(r + 1) + "] Doe, J. (2020). " +
                     sentence(4) + " KDD.");
    }
    std::string doc = paper_text("paper-" + std::to_string(trial), "", "Title", sections, refs);
    SurveyPaper p1 = parse_paper(doc);
    SurveyPaper p2 = parse_paper(canonical_serialize(p1));
    CHECK(structurally_equal(p1, p2));
    CHECK(canonical_serialize(p1) == canonical_serialize(p2));
  }
}

TEST_CASE("conclusion is found case-insensitively and stays a section") {
  SurveyPaper p = parse_paper(paper_text(
      "p", "", "T", {{"Abstract", "A."}, {"CONCLUSION", "The end."}}));
  REQUIRE(p.conclusion() != nullptr);
  CHECK(p.conclusion()->body == "The end.");
  CHECK(p.sections.size() == 1);  // still part of the body
  CHECK(p.body_text() == "The end.");
  SurveyPaper q = parse_paper(paper_text("q", "", "T", {{"Abstract", "A."}}));
  CHECK(q.conclusion() == nullptr);
}

TEST_CASE("word_count spans title, abstract, bodies and raw references") {
  SurveyPaper p = parse_paper(paper_text(
      "p", "", "Two words",
      {{"Abstract", "three little words"}, {"Body", "four more words here"}},
      {"[1] five words in this one."}));
  // 2 + 3 + 4 + 6 whitespace-delimited words
  CHECK(word_count(p) == 15);
  CHECK(whitespace_word_count("  leading and trailing  ") == 3);
  CHECK(whitespace_word_count("") == 0);
}

TEST_CASE("validate_length flags only papers beyond the limit") {
  SurveyPaper p = parse_paper(paper_text("p", "", "T", {{"Abstract", "one two three"}}));
  LengthCheck at_limit = validate_length(p, 4);  // title 1 + abstract 3
  CHECK(at_limit.ok);
  CHECK(at_limit.actual == 4);
  CHECK(at_limit.limit == 4);
  LengthCheck over = validate_length(p, 3);
  CHECK_FALSE(over.ok);
}

TEST_CASE("sentence segmentation honors abbreviations and single letters") {
  auto s = segment_sentences("We cite Smith et al. 2020. Next sentence here.");
  REQUIRE(s.size() == 2);
  CHECK(s[0] == "We cite Smith et al. 2020.");
  auto t = segment_sentences("What now? Yes! Done.");
  CHECK(t.size() == 3);
  auto u = segment_sentences("Named after J. Doe. It stuck.");
  REQUIRE(u.size() == 2);  // "J." does not split
  CHECK(u[0] == "Named after J. Doe.");
  CHECK(segment_sentences("no terminator at all").size() == 1);
  CHECK(segment_sentences("").empty());
}

TEST_CASE("tokenize lowercases and splits on non-alphanumerics") {
  auto tokens = tokenize("Hello, WORLD 42 -- what's left?");
  std::vector<std::string> expected = {"hello", "world", "42", "what", "s", "left"};
  CHECK(tokens == expected);
  CHECK(tokenize("!!!").empty());
}

TEST_CASE("tokenize is idempotent over its own output") {
  auto tokens = tokenize("Some Mixed-Case text, with 3 numbers 42 7!");
  std::string joined;
  for (const auto& t : tokens) {
    if (!joined.empty()) joined += ' ';
    joined += t;
  }
  CHECK(tokenize(joined) == tokens);
}

TEST_CASE("syllable counts for known words") {
  CHECK(count_syllables("cat") == 1);
  CHECK(count_syllables("table") == 2);       // consonant + le keeps the group
  CHECK(count_syllables("strength") == 1);
  CHECK(count_syllables("purple") == 2);
  CHECK(count_syllables("unicorns") == 3);
  CHECK(count_syllables("nine") == 1);        // trailing silent e
  CHECK(count_syllables("happy") == 2);       // y as vowel
  CHECK(count_syllables("consequently") == 4);
  CHECK(count_syllables("the") == 1);         // floor at one
  CHECK(fails_with(Err::EmptyWord, [] { count_syllables(""); }));
}

TEST_CASE("text_stats on a crafted ten-word sentence") {
  TextStats stats = text_stats("the cat sat on a mat with nine purple unicorns.");
  CHECK(stats.words == 10);
  CHECK(stats.sentences == 1);
  CHECK(stats.syllables == 13);
  CHECK(stats.tokens.size() == 10);
}

TEST_CASE("text_stats never reports zero sentences for non-empty text") {
  TextStats stats = text_stats("fragment without terminator");
  CHECK(stats.words == 3);
  CHECK(stats.sentences == 1);
}

}  // TEST_SUITE
