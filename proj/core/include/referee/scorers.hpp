#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "referee/providers.hpp"
#include "referee/text.hpp"

namespace referee {

inline constexpr const char* kCriterionNames[5] = {
    "relevance", "contribution", "soundness", "clarity", "responsibility"};

// One review criterion. `value` is the arithmetic mean of the sub-scores;
// every sub-score lies in [0,1]. The map keeps sub-criteria in a fixed order
// so serialization and aggregation are deterministic.
struct CriterionScore {
  std::string name;
  std::map<std::string, double> sub_scores;
  double value = 0.0;
};

CriterionScore make_criterion_score(std::string name,
                                    std::map<std::string, double> sub_scores);

// Cosine similarity. Errors: DimensionMismatch, ZeroVector.
double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b);

// max(0, cosine): negative similarity carries no signal for scoring.
double sim01(const EmbeddingVector& a, const EmbeddingVector& b);

// relevance: title_abstract (prompt vs title+abstract), citations (prompt vs
// concatenated reference titles, omitted when there are no references).
CriterionScore score_relevance(const Providers& providers, const SurveyPaper& paper,
                               const Prompt& prompt);

// contribution: coverage of the original's references (omitted when no
// original is given), abstract_alignment, conclusion_alignment (omitted when
// the paper has no conclusion section).
CriterionScore score_contribution(const Providers& providers, const SurveyPaper& paper,
                                  const SurveyPaper* original);

// soundness: correctness (fraction of references found by lookup),
// citation_relevance (mean sim01 of each reference title vs title+abstract),
// interrelatedness (mean pairwise sim01 among reference titles; all pairs
// when there are at most 20 references, otherwise 200 seeded sample pairs).
// A paper with no references scores 0 on every sub-criterion.
CriterionScore score_soundness(const Providers& providers, const SurveyPaper& paper);

// clarity: readability (Flesch reading ease mapped to [0,1]), sentence
// structure (Gunning fog mapped so fog 6 -> 1 and fog 18 -> 0), lexical
// diversity (distinct/total over the first 1000 tokens). Errors: EmptyBody.
CriterionScore score_clarity(const SurveyPaper& paper);

// responsibility: non_toxicity = 1 - max chunk toxicity over greedy chunks
// of at most 500 tokens, whole sentences preserved.
CriterionScore score_responsibility(const Providers& providers, const SurveyPaper& paper);

// Unweighted mean over exactly the five criteria. Errors: MissingCriterion,
// DuplicateCriterion.
double aggregate_score(std::span<const CriterionScore> scores);

}  // namespace referee
