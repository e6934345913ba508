#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "referee/reviewer.hpp"

namespace referee {

// A good paper, its deliberately corrupted counterpart, and the prompt both
// answer. `targets` lists the criteria the corruption aimed to damage.
struct ContrastPair {
  std::string pair_id;  // 16 hex digits, unique within a corpus
  Prompt prompt;
  SurveyPaper good;
  SurveyPaper bad;
  std::vector<std::string> targets;
};

// One signed difference good - bad for one criterion of one pair.
struct DiffRecord {
  std::string pair_id;
  std::string criterion;  // five names or "overall"
  double diff = 0.0;
  double overall_diff = 0.0;
};

// Fraction of pairs ranked correctly; exact ties count half.
// Errors: EmptyInput.
double meta_contrastive_score(std::span<const double> diffs);

// Percentile by linear interpolation at rank p*(n-1) over a sorted sample.
double percentile(std::span<const double> sorted_values, double p);

struct DistStats {
  std::size_t n = 0;
  double mean = 0.0;
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double p10 = 0.0;
  double p90 = 0.0;
};

DistStats contrastive_stats(std::span<const double> diffs);  // EmptyInput

struct SubsetStats {
  std::vector<double> scores;        // per-subset contrastive scores
  std::vector<std::size_t> sizes;    // block sizes, remainder in the last
  double mean = 0.0;
  double stderr_value = 0.0;         // sample sd of subset scores / sqrt(k)
};

// Splits (pair_id, diff) rows, ordered by pair_id, into n_subsets contiguous
// blocks and scores each. Errors: FewerPairsThanSubsets, EmptyInput.
SubsetStats subset_stderr(std::vector<std::pair<std::string, double>> diffs_by_pair,
                          std::size_t n_subsets);

struct TextFeedbackStats {
  double rating_consistency = 0.0;  // 1 - |justification polarity - overall|
  double respectfulness = 0.0;      // 1 - toxicity(justification)
};

// Judges the review text itself: lexicon polarity of the justification
// against the overall score, and its toxicity. Polarity maps (pos-neg)/
// (pos+neg) into [0,1]; a justification with no polarity words sits at 0.5.
TextFeedbackStats meta_review_text(const Review& review, const Providers& providers);

struct PairOutcome {
  std::string pair_id;
  std::vector<std::string> targets;
  std::optional<Review> good_review;
  std::optional<Review> bad_review;
  std::string error;  // non-empty iff the pair failed and is excluded

  bool ok() const { return error.empty(); }
};

// Reviews both sides of one pair. Reviewer errors are captured, not thrown.
PairOutcome evaluate_pair(Reviewer& reviewer, const ContrastPair& pair);

struct CriterionReport {
  std::string criterion;  // five names, then "overall"
  std::size_t n = 0;
  double contrastive = 0.0;
  double mean_diff = 0.0;
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double p10 = 0.0;
  double p90 = 0.0;
  double stderr_value = 0.0;
  std::vector<double> subset_scores;
  std::vector<std::size_t> subset_sizes;
  // Contrastive score restricted to pairs whose corruption targeted this
  // criterion; absent for "overall" and for criteria no pair targeted.
  std::optional<double> targeted_contrastive;
  std::size_t targeted_n = 0;
};

struct PairFailure {
  std::string pair_id;
  std::string error;
};

struct MetaReport {
  std::string reviewer_id;
  std::size_t n_pairs = 0;    // evaluated successfully
  std::size_t n_subsets = 0;
  std::vector<CriterionReport> criteria;  // always 6 rows
  std::vector<DiffRecord> diffs;          // sorted by (pair_id, criterion)
  std::vector<PairFailure> failures;      // sorted by pair_id
  std::size_t n_reviews = 0;              // reviews behind the text stats
  double mean_rating_consistency = 0.0;
  double mean_respectfulness = 0.0;
};

inline constexpr std::size_t kDefaultSubsets = 15;

// Builds the full report from per-pair outcomes. Outcomes are re-sorted by
// pair_id, so the result does not depend on evaluation order. Failed pairs
// contribute only to `failures`. `text_eval` may be null to skip the
// review-text statistics. Errors: EmptyInput (no pair succeeded),
// FewerPairsThanSubsets.
MetaReport build_meta_report(const std::string& reviewer_id,
                             std::vector<PairOutcome> outcomes, std::size_t n_subsets,
                             const Providers* text_eval);

// Evaluates every pair (parallel when the reviewer allows it and workers >
// 1) and builds the report. Pair order never affects the result.
MetaReport run_contrast(Reviewer& reviewer, const std::vector<ContrastPair>& pairs,
                        std::size_t n_subsets, const Providers* text_eval, int workers);

}  // namespace referee
