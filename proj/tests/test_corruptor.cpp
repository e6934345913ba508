#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "referee/corpus.hpp"
#include "referee/corruptor.hpp"
#include "referee/errors.hpp"
#include "referee/scorers.hpp"
#include "test_support.hpp"

using namespace referee;
using test_support::TempDir;
using test_support::corpus_dir;
using test_support::fails_with;

namespace {

// Fixtures shared by the corruption tests: the shipped corpus supplies a
// real paper, its original, the title-search index, lexicon and donors.
struct Rig {
  Corpus corpus = load_corpus(corpus_dir());
  ScholarIndex scholar = ScholarIndex::load(corpus.scholar_path());
  Lexicon lexicon = Lexicon::load(corpus.lexicon_path());
  Corruptor corruptor{&scholar, &lexicon,
                      DonorPool::load_directory(corpus.donors_dir())};
  Providers providers{test_support::fixture_config()};

  const SurveyPaper& paper() const { return corpus.goods.at(0); }
  const SurveyPaper* original() const {
    const Prompt* prompt = corpus.find_prompt(paper().prompt_id);
    REQUIRE(prompt != nullptr);
    return corpus.originals.find(prompt->source_paper_id);
  }
  CorruptionSpec spec(const std::string& target) const {
    CorruptionSpec s;
    s.target = target;
    s.seed = 7;
    return s;
  }
};

bool sections_equal(const SurveyPaper& a, const SurveyPaper& b) {
  if (a.sections.size() != b.sections.size()) return false;
  for (std::size_t i = 0; i < a.sections.size(); ++i) {
    if (a.sections[i].heading != b.sections[i].heading ||
        a.sections[i].body != b.sections[i].body) {
      return false;
    }
  }
  return true;
}

bool refs_equal(const SurveyPaper& a, const SurveyPaper& b) {
  if (a.references.size() != b.references.size()) return false;
  for (std::size_t i = 0; i < a.references.size(); ++i) {
    if (a.references[i].raw != b.references[i].raw) return false;
  }
  return true;
}

}  // namespace

TEST_SUITE("corruptor") {

TEST_CASE("donor pool loads prose blocks and reference entries") {
  DonorPool pool = DonorPool::load_directory(corpus_dir() / "donors");
  CHECK(pool.blocks.size() >= 10);
  CHECK(pool.reference_entries.size() >= 6);
  CHECK_FALSE(pool.words().empty());
  CHECK(fails_with(Err::IoError, [] { DonorPool::load_directory("/nonexistent/donors"); }));
}

TEST_CASE("corruption stamps provenance and re-serializes canonically") {
  Rig rig;
  SurveyPaper bad = rig.corruptor.corrupt(rig.paper(), rig.spec("clarity"));
  CHECK(bad.id == rig.paper().id + "--clarity");
  CHECK(bad.front_matter_extra.at("corrupted_from") == rig.paper().id);
  CHECK(bad.front_matter_extra.at("target") == "clarity");
  CHECK(bad.front_matter_extra.at("seed") == "7");
  CHECK(bad.raw == canonical_serialize(bad));
  SurveyPaper reparsed = parse_paper(bad.raw);
  CHECK(reparsed.id == bad.id);
  CHECK(reparsed.front_matter_extra.at("target") == "clarity");
}

TEST_CASE("the same spec always produces the same bytes") {
  Rig rig;
  for (const char* target : kCriterionNames) {
    SurveyPaper once = rig.corruptor.corrupt(rig.paper(), rig.spec(target), rig.original());
    SurveyPaper twice = rig.corruptor.corrupt(rig.paper(), rig.spec(target), rig.original());
    CHECK(once.raw == twice.raw);
  }
  SurveyPaper seed7 = rig.corruptor.corrupt(rig.paper(), rig.spec("clarity"));
  CorruptionSpec other = rig.spec("clarity");
  other.seed = 8;
  SurveyPaper seed8 = rig.corruptor.corrupt(rig.paper(), other);
  CHECK(seed7.raw != seed8.raw);
}

TEST_CASE("relevance corruption touches only title and abstract") {
  Rig rig;
  SurveyPaper bad = rig.corruptor.corrupt(rig.paper(), rig.spec("relevance"));
  CHECK(bad.title != rig.paper().title);
  CHECK(bad.abstract != rig.paper().abstract);
  CHECK(sections_equal(bad, rig.paper()));
  CHECK(refs_equal(bad, rig.paper()));

  const Prompt* prompt = rig.corpus.find_prompt(rig.paper().prompt_id);
  double good_rel = score_relevance(rig.providers, rig.paper(), *prompt)
                        .sub_scores.at("title_abstract");
  double bad_rel = score_relevance(rig.providers, bad, *prompt)
                       .sub_scores.at("title_abstract");
  CHECK(bad_rel < good_rel);
}

TEST_CASE("contribution corruption strips matching references and the conclusion") {
  Rig rig;
  const SurveyPaper* original = rig.original();
  REQUIRE(original != nullptr);
  SurveyPaper bad = rig.corruptor.corrupt(rig.paper(), rig.spec("contribution"), original);
  CHECK(bad.title == rig.paper().title);
  CHECK(bad.abstract == rig.paper().abstract);

  OverlapResult before = citation_overlap(rig.paper().references, original->references);
  OverlapResult after = citation_overlap(bad.references, original->references);
  CHECK(before.coverage == 1.0);
  CHECK(after.coverage == 0.0);

  REQUIRE(bad.conclusion() != nullptr);
  CHECK(bad.conclusion()->body != rig.paper().conclusion()->body);
}

TEST_CASE("contribution corruption without an original deletes every reference") {
  Rig rig;
  SurveyPaper bad = rig.corruptor.corrupt(rig.paper(), rig.spec("contribution"), nullptr);
  CHECK(bad.references.empty());
}

TEST_CASE("soundness corruption displaces the chosen fraction of titles") {
  Rig rig;
  const SurveyPaper& good = rig.paper();
  const std::size_t n = good.references.size();
  REQUIRE(n == 8);
  SurveyPaper bad = rig.corruptor.corrupt(good, rig.spec("soundness"));
  CHECK(bad.title == good.title);
  CHECK(bad.abstract == good.abstract);
  CHECK(sections_equal(bad, good));
  REQUIRE(bad.references.size() == n);

  // intensity 0.5 over 8 references: exactly ceil(4) mutated.
  std::size_t changed = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Reference& b = bad.references[i];
    if (b.normalized_title != good.references[i].normalized_title) {
      ++changed;
      CHECK(rig.scholar.best_match(b.normalized_title).similarity <
            kLookupSimilarityThreshold);
    } else {
      CHECK(rig.scholar.best_match(b.normalized_title).similarity >=
            kLookupSimilarityThreshold);
    }
  }
  CHECK(changed == 4);

  double correctness = score_soundness(rig.providers, bad).sub_scores.at("correctness");
  CHECK(correctness == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("intensity controls how many references are displaced") {
  Rig rig;
  CorruptionSpec gentle = rig.spec("soundness");
  gentle.intensity = 0.125;  // ceil(1) of 8
  SurveyPaper bad = rig.corruptor.corrupt(rig.paper(), gentle);
  std::size_t changed = 0;
  for (std::size_t i = 0; i < bad.references.size(); ++i) {
    if (bad.references[i].normalized_title != rig.paper().references[i].normalized_title) {
      ++changed;
    }
  }
  CHECK(changed == 1);
}

TEST_CASE("clarity corruption degrades readability but not the references") {
  Rig rig;
  const SurveyPaper& good = rig.paper();
  SurveyPaper bad = rig.corruptor.corrupt(good, rig.spec("clarity"));
  CHECK(bad.title == good.title);
  CHECK(refs_equal(bad, good));

  TextStats before = text_stats(good.abstract + "\n\n" + good.body_text());
  TextStats after = text_stats(bad.abstract + "\n\n" + bad.body_text());
  CHECK(after.sentences < before.sentences);  // comma splices merge sentences
  double syll_before = static_cast<double>(before.syllables) / before.words;
  double syll_after = static_cast<double>(after.syllables) / after.words;
  CHECK(syll_after > syll_before);  // polysyllabic fillers

  double good_clarity = score_clarity(good).value;
  double bad_clarity = score_clarity(bad).value;
  CHECK(bad_clarity < good_clarity);
}

TEST_CASE("responsibility corruption injects flagged tokens only into prose") {
  Rig rig;
  const SurveyPaper& good = rig.paper();
  SurveyPaper bad = rig.corruptor.corrupt(good, rig.spec("responsibility"));
  CHECK(bad.title == good.title);
  CHECK(refs_equal(bad, good));

  CHECK(rig.providers.toxicity(good.abstract + " " + good.body_text()) == 0.0);
  CHECK(rig.providers.toxicity(bad.abstract + " " + bad.body_text()) > 0.0);

  double good_resp = score_responsibility(rig.providers, good).value;
  double bad_resp = score_responsibility(rig.providers, bad).value;
  CHECK(bad_resp < good_resp);
}

TEST_CASE("corruption rejects bad targets, intensities and missing fixtures") {
  Rig rig;
  CorruptionSpec unknown = rig.spec("novelty");
  CHECK(fails_with(Err::UnknownTarget, [&] { rig.corruptor.corrupt(rig.paper(), unknown); }));

  CorruptionSpec zero = rig.spec("soundness");
  zero.intensity = 0.0;
  CHECK(fails_with(Err::ConfigError, [&] { rig.corruptor.corrupt(rig.paper(), zero); }));
  CorruptionSpec above = rig.spec("soundness");
  above.intensity = 1.25;
  CHECK(fails_with(Err::ConfigError, [&] { rig.corruptor.corrupt(rig.paper(), above); }));

  Corruptor bare(nullptr, nullptr, DonorPool{});
  CHECK(fails_with(Err::DonorPoolEmpty,
                   [&] { bare.corrupt(rig.paper(), rig.spec("relevance")); }));
  CHECK(fails_with(Err::FixtureMissing,
                   [&] { bare.corrupt(rig.paper(), rig.spec("soundness")); }));
  CHECK(fails_with(Err::LexiconMissing,
                   [&] { bare.corrupt(rig.paper(), rig.spec("responsibility")); }));
}

TEST_CASE("pair ids are stable functions of paper, target and seed") {
  std::string a = contrast_pair_id("paper-001", "clarity", 42);
  CHECK(a.size() == 16);
  CHECK(a == contrast_pair_id("paper-001", "clarity", 42));
  CHECK(a != contrast_pair_id("paper-001", "clarity", 43));
  CHECK(a != contrast_pair_id("paper-001", "soundness", 42));
  CHECK(a != contrast_pair_id("paper-002", "clarity", 42));
}

TEST_CASE("make_pair_corpus builds one sorted pair per paper and target") {
  Rig rig;
  std::vector<GoodEntry> goods = good_entries(rig.corpus);
  goods.resize(4);
  std::vector<std::string> targets = {"clarity", "responsibility"};
  std::vector<ContrastPair> pairs = make_pair_corpus(rig.corruptor, goods, targets, 42);
  REQUIRE(pairs.size() == 8);
  std::set<std::string> ids;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    CHECK(ids.insert(pairs[i].pair_id).second);
    if (i > 0) CHECK(pairs[i - 1].pair_id < pairs[i].pair_id);
    REQUIRE(pairs[i].targets.size() == 1);
    CHECK(pairs[i].bad.id == pairs[i].good.id + "--" + pairs[i].targets[0]);
    CHECK(pairs[i].pair_id ==
          contrast_pair_id(pairs[i].good.id, pairs[i].targets[0], 42));
  }
}

}  // TEST_SUITE
