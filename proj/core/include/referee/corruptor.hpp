#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "referee/contrastive.hpp"
#include "referee/hashing.hpp"
#include "referee/providers.hpp"
#include "referee/text.hpp"

namespace referee {

// Off-topic material used as replacement text: prose paragraphs and raw
// reference entries that the scholar fixture does not know.
struct DonorPool {
  std::vector<std::string> blocks;
  std::vector<std::string> reference_entries;

  // Reads every .md/.txt file in the directory (sorted by name): paragraphs
  // of non-References sections become blocks, References lines become
  // entries. Front matter, if present, is skipped. Errors: IoError.
  static DonorPool load_directory(const std::filesystem::path& dir);

  // All block words in order, whitespace-split.
  std::vector<std::string> words() const;
};

struct CorruptionSpec {
  std::string target;        // one of the five criterion names
  std::uint64_t seed = 0;
  double intensity = 0.5;    // fraction of affected units, in (0,1]
};

inline constexpr double kDefaultCorruptionIntensity = 0.5;

// Deterministic pair id: 16 hex digits of the keyed hash of
// (paper id, target, seed).
std::string contrast_pair_id(const std::string& paper_id, const std::string& target,
                             std::uint64_t seed);

// Damages exactly the document parts that feed one criterion, leaving every
// other part byte-identical, and stamps the result with provenance keys
// (corrupted_from, target, seed). The same inputs always produce the same
// bytes; the corrupted id is "<paper id>--<target>".
//
// Strategies by target:
//   relevance       title and abstract replaced with donor prose
//   contribution    references matching the original deleted (all deleted
//                   when no original is given); conclusion replaced with
//                   donor prose, appended when absent
//   soundness       ceil(intensity * n) reference titles mutated until the
//                   title-search index no longer finds them
//   clarity         sentences merged into comma splices and polysyllabic
//                   fillers injected
//   responsibility  flagged lexicon tokens injected into sentences
class Corruptor {
 public:
  // The index is needed for soundness targets, the lexicon for
  // responsibility targets, the donor pool for relevance and contribution.
  Corruptor(const ScholarIndex* scholar, const Lexicon* lexicon, DonorPool donors);

  const DonorPool& donors() const { return donors_; }

  // Errors: UnknownTarget, ConfigError (intensity outside (0,1]),
  // DonorPoolEmpty, FixtureMissing, LexiconMissing.
  SurveyPaper corrupt(const SurveyPaper& paper, const CorruptionSpec& spec,
                      const SurveyPaper* original = nullptr) const;

 private:
  void corrupt_relevance(SurveyPaper& paper, SplitMixRng& rng) const;
  void corrupt_contribution(SurveyPaper& paper, SplitMixRng& rng,
                            const SurveyPaper* original) const;
  void corrupt_soundness(SurveyPaper& paper, SplitMixRng& rng, double intensity) const;
  void corrupt_clarity(SurveyPaper& paper, SplitMixRng& rng, double intensity) const;
  void corrupt_responsibility(SurveyPaper& paper, SplitMixRng& rng, double intensity) const;

  const ScholarIndex* scholar_;
  const Lexicon* lexicon_;
  DonorPool donors_;
};

// One clean paper with its prompt and, when known, the original survey the
// prompt was derived from.
struct GoodEntry {
  SurveyPaper paper;
  Prompt prompt;
  const SurveyPaper* original = nullptr;
};

// Corrupts every good paper once per target and returns the pairs sorted by
// pair_id. Errors: UnknownTarget plus whatever corrupt() raises; duplicate
// pair ids are a ConfigError.
std::vector<ContrastPair> make_pair_corpus(const Corruptor& corruptor,
                                           const std::vector<GoodEntry>& goods,
                                           const std::vector<std::string>& targets,
                                           std::uint64_t seed,
                                           double intensity = kDefaultCorruptionIntensity);

}  // namespace referee
