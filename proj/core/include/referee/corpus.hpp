#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "referee/contrastive.hpp"
#include "referee/corruptor.hpp"

namespace referee {

// An on-disk evaluation corpus:
//   prompts/*.json           {"id","text","source_paper_id"}
//   good/*.md                clean papers, one per prompt
//   bad/*.md                 corrupted papers with provenance front matter
//   originals/*.md           source surveys for reference coverage
//   fixtures/scholar.json    title-search fixture
//   fixtures/lexicon.txt     flagged-token lexicon
//   donors/*.md              off-topic donor material
// bad/, originals/ and donors/ may be absent.
struct Corpus {
  std::filesystem::path root;
  std::vector<Prompt> prompts;       // sorted by id
  std::vector<SurveyPaper> goods;    // sorted by id
  std::vector<SurveyPaper> bads;     // sorted by id
  OriginalIndex originals;
  bool originals_present = false;

  const Prompt* find_prompt(const std::string& id) const;
  const SurveyPaper* find_good(const std::string& id) const;

  std::filesystem::path scholar_path() const { return root / "fixtures" / "scholar.json"; }
  std::filesystem::path lexicon_path() const { return root / "fixtures" / "lexicon.txt"; }
  std::filesystem::path donors_dir() const { return root / "donors"; }
};

// One prompt from a {"id","text","source_paper_id"} JSON file.
// Errors: IoError, ConfigError.
Prompt load_prompt_file(const std::filesystem::path& path);

// Loads and validates a corpus: prompt ids and paper ids must be unique,
// prompts must have non-empty text, and every good paper must name a known
// prompt. Errors: IoError, ConfigError, plus paper parse errors.
Corpus load_corpus(const std::filesystem::path& root);

// Joins each good paper with its prompt and, when present, the original
// named by the prompt. Pointers into `corpus.originals` stay valid as long
// as the corpus does.
std::vector<GoodEntry> good_entries(const Corpus& corpus);

// Rebuilds contrast pairs from the provenance stamped into bad papers.
// Bad papers without provenance are ignored; provenance naming an unknown
// good paper or prompt is a ConfigError. Result is sorted by pair_id.
std::vector<ContrastPair> collect_pairs(const Corpus& corpus);

}  // namespace referee
