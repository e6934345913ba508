#include "referee/contrastive.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <set>
#include <thread>
#include <tuple>

#include "referee/errors.hpp"

namespace referee {
namespace {

const std::set<std::string>& positive_words() {
  static const std::set<std::string> words = {
      "accurate",   "clear",     "coherent",  "comprehensive", "consistent", "convincing",
      "effective",  "excellent", "focused",   "good",          "great",      "insightful",
      "novel",      "precise",   "readable",  "relevant",      "respectful", "rigorous",
      "robust",     "solid",     "sound",     "strong",        "thorough",   "well"};
  return words;
}

const std::set<std::string>& negative_words() {
  static const std::set<std::string> words = {
      "bad",        "confusing",  "deficient", "derivative", "disorganized", "flawed",
      "inaccurate", "inadequate", "incoherent", "irrelevant", "misleading",  "offensive",
      "poor",       "shallow",    "sloppy",     "toxic",      "unclear",     "unconvincing",
      "unsound",    "vague",      "weak"};
  return words;
}

double mean_of(std::span<const double> xs) {
  double sum = 0.0;
  for (double x : xs) sum += x;
  return sum / static_cast<double>(xs.size());
}

std::vector<DiffRecord> pair_diff_records(const PairOutcome& outcome) {
  const Review& good = *outcome.good_review;
  const Review& bad = *outcome.bad_review;
  double overall_diff = good.overall - bad.overall;

  std::vector<DiffRecord> records;
  records.reserve(6);
  for (const char* name : kCriterionNames) {
    DiffRecord rec;
    rec.pair_id = outcome.pair_id;
    rec.criterion = name;
    rec.diff = good.criterion(name).value - bad.criterion(name).value;
    rec.overall_diff = overall_diff;
    records.push_back(std::move(rec));
  }
  records.push_back(DiffRecord{outcome.pair_id, "overall", overall_diff, overall_diff});
  return records;
}

}  // namespace

double meta_contrastive_score(std::span<const double> diffs) {
  if (diffs.empty()) fail(Err::EmptyInput, "contrastive score over zero pairs");
  double credit = 0.0;
  for (double d : diffs) {
    if (d > 0.0) {
      credit += 1.0;
    } else if (d == 0.0) {
      credit += 0.5;
    }
  }
  return credit / static_cast<double>(diffs.size());
}

double percentile(std::span<const double> sorted_values, double p) {
  if (sorted_values.empty()) fail(Err::EmptyInput, "percentile of an empty sample");
  double rank = p * static_cast<double>(sorted_values.size() - 1);
  std::size_t lo = static_cast<std::size_t>(std::floor(rank));
  std::size_t hi = static_cast<std::size_t>(std::ceil(rank));
  if (lo == hi) return sorted_values[lo];
  double frac = rank - static_cast<double>(lo);
  return sorted_values[lo] + frac * (sorted_values[hi] - sorted_values[lo]);
}

DistStats contrastive_stats(std::span<const double> diffs) {
  if (diffs.empty()) fail(Err::EmptyInput, "statistics over zero pairs");
  std::vector<double> sorted(diffs.begin(), diffs.end());
  std::sort(sorted.begin(), sorted.end());

  DistStats stats;
  stats.n = sorted.size();
  stats.mean = mean_of(sorted);
  stats.median = percentile(sorted, 0.5);
  stats.q1 = percentile(sorted, 0.25);
  stats.q3 = percentile(sorted, 0.75);
  stats.p10 = percentile(sorted, 0.10);
  stats.p90 = percentile(sorted, 0.90);
  return stats;
}

SubsetStats subset_stderr(std::vector<std::pair<std::string, double>> diffs_by_pair,
                          std::size_t n_subsets) {
  if (n_subsets == 0) fail(Err::ConfigError, "need at least one subset");
  if (diffs_by_pair.empty()) fail(Err::EmptyInput, "subset statistics over zero pairs");
  if (diffs_by_pair.size() < n_subsets) {
    fail(Err::FewerPairsThanSubsets,
         std::to_string(diffs_by_pair.size()) + " pairs cannot fill " +
             std::to_string(n_subsets) + " subsets");
  }
  std::sort(diffs_by_pair.begin(), diffs_by_pair.end());

  std::size_t n = diffs_by_pair.size();
  std::size_t base = n / n_subsets;

  SubsetStats stats;
  std::size_t offset = 0;
  for (std::size_t s = 0; s < n_subsets; ++s) {
    // The remainder stays in the last block, keeping earlier blocks equal.
    std::size_t size = (s + 1 == n_subsets) ? n - offset : base;
    std::vector<double> block;
    block.reserve(size);
    for (std::size_t i = 0; i < size; ++i) block.push_back(diffs_by_pair[offset + i].second);
    offset += size;
    stats.sizes.push_back(size);
    stats.scores.push_back(meta_contrastive_score(block));
  }

  stats.mean = mean_of(stats.scores);
  if (stats.scores.size() > 1) {
    double acc = 0.0;
    for (double s : stats.scores) acc += (s - stats.mean) * (s - stats.mean);
    double sd = std::sqrt(acc / static_cast<double>(stats.scores.size() - 1));
    stats.stderr_value = sd / std::sqrt(static_cast<double>(stats.scores.size()));
  }
  return stats;
}

TextFeedbackStats meta_review_text(const Review& review, const Providers& providers) {
  std::size_t pos = 0;
  std::size_t neg = 0;
  for (const std::string& tok : tokenize(review.justification)) {
    if (positive_words().count(tok) > 0) ++pos;
    if (negative_words().count(tok) > 0) ++neg;
  }
  double polarity01 = 0.5;
  if (pos + neg > 0) {
    double polarity = (static_cast<double>(pos) - static_cast<double>(neg)) /
                      static_cast<double>(pos + neg);
    polarity01 = (polarity + 1.0) / 2.0;
  }

  TextFeedbackStats stats;
  stats.rating_consistency = 1.0 - std::fabs(polarity01 - review.overall);
  stats.respectfulness = 1.0 - providers.toxicity(review.justification);
  return stats;
}

PairOutcome evaluate_pair(Reviewer& reviewer, const ContrastPair& pair) {
  PairOutcome outcome;
  outcome.pair_id = pair.pair_id;
  outcome.targets = pair.targets;
  try {
    outcome.good_review = reviewer.review(pair.good, pair.prompt);
    outcome.bad_review = reviewer.review(pair.bad, pair.prompt);
  } catch (const std::exception& e) {
    outcome.good_review.reset();
    outcome.bad_review.reset();
    outcome.error = e.what();
  }
  return outcome;
}

MetaReport build_meta_report(const std::string& reviewer_id, std::vector<PairOutcome> outcomes,
                             std::size_t n_subsets, const Providers* text_eval) {
  std::sort(outcomes.begin(), outcomes.end(),
            [](const PairOutcome& a, const PairOutcome& b) { return a.pair_id < b.pair_id; });

  MetaReport report;
  report.reviewer_id = reviewer_id;
  report.n_subsets = n_subsets;

  std::vector<const PairOutcome*> ok;
  for (const PairOutcome& o : outcomes) {
    if (o.ok()) {
      ok.push_back(&o);
    } else {
      report.failures.push_back(PairFailure{o.pair_id, o.error});
    }
  }
  report.n_pairs = ok.size();
  if (ok.empty()) fail(Err::EmptyInput, "no pair was evaluated successfully");

  for (const PairOutcome* o : ok) {
    std::vector<DiffRecord> records = pair_diff_records(*o);
    report.diffs.insert(report.diffs.end(), records.begin(), records.end());
  }
  std::sort(report.diffs.begin(), report.diffs.end(),
            [](const DiffRecord& a, const DiffRecord& b) {
              return std::tie(a.pair_id, a.criterion) < std::tie(b.pair_id, b.criterion);
            });

  std::vector<std::string> row_names(std::begin(kCriterionNames), std::end(kCriterionNames));
  row_names.push_back("overall");

  for (const std::string& name : row_names) {
    CriterionReport row;
    row.criterion = name;

    std::vector<double> diffs;
    std::vector<std::pair<std::string, double>> by_pair;
    std::vector<double> targeted;
    for (const PairOutcome* o : ok) {
      double d = name == "overall"
                     ? o->good_review->overall - o->bad_review->overall
                     : o->good_review->criterion(name).value - o->bad_review->criterion(name).value;
      diffs.push_back(d);
      by_pair.emplace_back(o->pair_id, d);
      if (std::find(o->targets.begin(), o->targets.end(), name) != o->targets.end()) {
        targeted.push_back(d);
      }
    }

    row.n = diffs.size();
    row.contrastive = meta_contrastive_score(diffs);
    DistStats stats = contrastive_stats(diffs);
    row.mean_diff = stats.mean;
    row.median = stats.median;
    row.q1 = stats.q1;
    row.q3 = stats.q3;
    row.p10 = stats.p10;
    row.p90 = stats.p90;

    SubsetStats subsets = subset_stderr(std::move(by_pair), n_subsets);
    row.stderr_value = subsets.stderr_value;
    row.subset_scores = std::move(subsets.scores);
    row.subset_sizes = std::move(subsets.sizes);

    if (!targeted.empty() && name != "overall") {
      row.targeted_contrastive = meta_contrastive_score(targeted);
      row.targeted_n = targeted.size();
    }
    report.criteria.push_back(std::move(row));
  }

  if (text_eval != nullptr) {
    double consistency_sum = 0.0;
    double respect_sum = 0.0;
    std::size_t count = 0;
    for (const PairOutcome* o : ok) {
      for (const Review* r : {&*o->good_review, &*o->bad_review}) {
        TextFeedbackStats stats = meta_review_text(*r, *text_eval);
        consistency_sum += stats.rating_consistency;
        respect_sum += stats.respectfulness;
        ++count;
      }
    }
    report.n_reviews = count;
    if (count > 0) {
      report.mean_rating_consistency = consistency_sum / static_cast<double>(count);
      report.mean_respectfulness = respect_sum / static_cast<double>(count);
    }
  }
  return report;
}

MetaReport run_contrast(Reviewer& reviewer, const std::vector<ContrastPair>& pairs,
                        std::size_t n_subsets, const Providers* text_eval, int workers) {
  std::vector<PairOutcome> outcomes(pairs.size());

  int usable = std::max(1, workers);
  if (!reviewer.concurrent_safe()) usable = 1;
  usable = static_cast<int>(std::min<std::size_t>(usable, std::max<std::size_t>(1, pairs.size())));

  if (usable == 1) {
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      outcomes[i] = evaluate_pair(reviewer, pairs[i]);
    }
  } else {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= pairs.size()) return;
        outcomes[i] = evaluate_pair(reviewer, pairs[i]);
      }
    };
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(usable));
    for (int t = 0; t < usable; ++t) threads.emplace_back(worker);
    for (std::thread& t : threads) t.join();
  }

  return build_meta_report(reviewer.id(), std::move(outcomes), n_subsets, text_eval);
}

}  // namespace referee
