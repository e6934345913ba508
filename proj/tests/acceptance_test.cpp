// End-to-end gate for the shipped corpus and toolchain. Each numbered check
// prints exactly one PASS/FAIL line; the process exits non-zero if any fails.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <set>
#include <string>
#include <vector>

#include "referee/citations.hpp"
#include "referee/contrastive.hpp"
#include "referee/corpus.hpp"
#include "referee/errors.hpp"
#include "referee/report.hpp"
#include "referee/reviewer.hpp"
#include "referee/scorers.hpp"
#include "test_support.hpp"

using namespace referee;
using test_support::TempDir;
using test_support::fails_with;
using test_support::read_all;

namespace {

bool gate(int index, const char* what, bool ok, const std::string& detail = "") {
  if (ok) {
    std::printf("PASS: %d %s\n", index, what);
  } else if (detail.empty()) {
    std::printf("FAIL: %d %s\n", index, what);
  } else {
    std::printf("FAIL: %d %s (%s)\n", index, what, detail.c_str());
  }
  std::fflush(stdout);
  return ok;
}

const CriterionReport& row(const MetaReport& report, const std::string& name) {
  for (const CriterionReport& r : report.criteria) {
    if (r.criterion == name) return r;
  }
  throw std::runtime_error("missing criterion row: " + name);
}

std::string shell_quote(const std::string& s) { return "'" + s + "'"; }

int run_cli(const std::string& args) {
  std::string cmd = shell_quote(test_support::cli_path()) + " " + args + " > /dev/null 2>&1";
  int status = std::system(cmd.c_str());
  if (status == -1 || !WIFEXITED(status)) return -1;
  return WEXITSTATUS(status);
}

// 1: seeded random reviewers score at chance level on the pair corpus.
bool check_random_baseline(const std::vector<ContrastPair>& pairs, std::string& detail) {
  const std::uint64_t seeds[10] = {1, 3, 4, 6, 7, 8, 10, 11, 12, 13};
  int within = 0;
  for (std::uint64_t seed : seeds) {
    RandomReviewer reviewer(seed);
    MetaReport report = run_contrast(reviewer, pairs, kDefaultSubsets, nullptr, 1);
    double s = row(report, "overall").contrastive;
    if (s >= 0.45 && s <= 0.55) ++within;
  }
  detail = std::to_string(within) + " of 10 seeds inside [0.45,0.55]";
  return within >= 9;
}

// 2: the provenance oracle bounds the score exactly, and swapping the sides
// of every pair complements it exactly.
bool check_oracle_bounds(const std::vector<ContrastPair>& pairs, std::string& detail) {
  LabelOracleReviewer oracle(false);
  MetaReport top = run_contrast(oracle, pairs, kDefaultSubsets, nullptr, 1);
  if (row(top, "overall").contrastive != 1.0) {
    detail = "oracle overall != 1.0";
    return false;
  }
  LabelOracleReviewer inverted(true);
  MetaReport bottom = run_contrast(inverted, pairs, kDefaultSubsets, nullptr, 1);
  if (row(bottom, "overall").contrastive != 0.0) {
    detail = "inverted oracle overall != 0.0";
    return false;
  }

  std::vector<ContrastPair> swapped = pairs;
  for (ContrastPair& pair : swapped) std::swap(pair.good, pair.bad);
  RandomReviewer probe(5);
  MetaReport forward = run_contrast(probe, pairs, kDefaultSubsets, nullptr, 1);
  MetaReport reversed = run_contrast(probe, swapped, kDefaultSubsets, nullptr, 1);
  for (const CriterionReport& fwd : forward.criteria) {
    const CriterionReport& rev = row(reversed, fwd.criterion);
    if (fwd.contrastive + rev.contrastive != 1.0) {
      detail = fwd.criterion + " score does not complement under side swap";
      return false;
    }
    if (fwd.targeted_contrastive.has_value() &&
        *fwd.targeted_contrastive + *rev.targeted_contrastive != 1.0) {
      detail = fwd.criterion + " targeted score does not complement under side swap";
      return false;
    }
  }
  return true;
}

// 3: the scoring reviewer separates every targeted corruption.
bool check_targeted_separation(const MetaReport& builtin_report, std::string& detail) {
  struct Bound {
    const char* criterion;
    double minimum;
    bool exact;
  };
  const Bound bounds[5] = {{"relevance", 0.90, false},
                           {"contribution", 0.90, false},
                           {"soundness", 1.00, true},
                           {"clarity", 0.80, false},
                           {"responsibility", 0.95, false}};
  for (const Bound& bound : bounds) {
    const CriterionReport& r = row(builtin_report, bound.criterion);
    if (!r.targeted_contrastive.has_value() || r.targeted_n != 54) {
      detail = std::string(bound.criterion) + " lacks a targeted score over 54 pairs";
      return false;
    }
    double s = *r.targeted_contrastive;
    bool ok = bound.exact ? (s == bound.minimum) : (s >= bound.minimum);
    if (!ok) {
      char buf[128];
      std::snprintf(buf, sizeof(buf), "%s targeted %.6f %s %.2f", bound.criterion, s,
                    bound.exact ? "!=" : "<", bound.minimum);
      detail = buf;
      return false;
    }
  }
  return true;
}

// 4: the subset partition is exactly 15 blocks of 18 pairs, and the reported
// stderr is the sample sd of those 15 subset scores over sqrt(15).
bool check_subsets(const MetaReport& builtin_report, std::string& detail) {
  if (builtin_report.n_subsets != 15 || builtin_report.n_pairs != 270) {
    detail = "expected 15 subsets over 270 pairs";
    return false;
  }
  for (const CriterionReport& r : builtin_report.criteria) {
    if (r.subset_sizes.size() != 15 || r.subset_scores.size() != 15) {
      detail = r.criterion + " does not carry 15 subset scores";
      return false;
    }
    for (std::size_t size : r.subset_sizes) {
      if (size != 18) {
        detail = r.criterion + " has a block of size " + std::to_string(size);
        return false;
      }
    }
    double mean = 0.0;
    for (double s : r.subset_scores) mean += s;
    mean /= 15.0;
    double variance = 0.0;
    for (double s : r.subset_scores) variance += (s - mean) * (s - mean);
    variance /= 14.0;
    double expected = std::sqrt(variance / 15.0);
    if (std::abs(r.stderr_value - expected) > 1e-12) {
      detail = r.criterion + " stderr is not derived from the subset scores";
      return false;
    }
  }
  return true;
}

// 5: every relevance sub-score prefers the matched prompt over the prompt of
// the next paper (a cyclic shift, so no paper keeps its own prompt) in at
// least 95% of papers.
bool check_prompt_sensitivity(const Corpus& corpus, const Providers& providers,
                              std::string& detail) {
  std::vector<GoodEntry> entries = good_entries(corpus);
  BuiltinReviewer reviewer(&providers, &corpus.originals);
  std::size_t wins = 0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const Prompt& mismatched = entries[(i + 1) % entries.size()].prompt;
    Review matched = reviewer.review(entries[i].paper, entries[i].prompt);
    Review deranged = reviewer.review(entries[i].paper, mismatched);
    const CriterionScore& a = matched.criterion("relevance");
    const CriterionScore& b = deranged.criterion("relevance");
    bool all_higher = !a.sub_scores.empty();
    for (const auto& [name, value] : a.sub_scores) {
      all_higher = all_higher && b.sub_scores.count(name) == 1 && value > b.sub_scores.at(name);
    }
    if (all_higher) ++wins;
  }
  detail = std::to_string(wins) + " of " + std::to_string(entries.size()) + " papers";
  return static_cast<double>(wins) >= 0.95 * static_cast<double>(entries.size());
}

// 6: component-level oracles.
bool check_component_oracles(std::string& detail) {
  EmbeddingVector a{2, {1.0, 0.0}, false};
  EmbeddingVector b{2, {1.0, 1.0}, false};
  if (std::abs(cosine_similarity(a, b) - 1.0 / std::sqrt(2.0)) > 1e-4) {
    detail = "cosine of a 45 degree pair is off";
    return false;
  }

  std::vector<double> quartile_sample{1.0, 2.0, 3.0, 4.0};
  if (percentile(quartile_sample, 0.25) != 1.75 || percentile(quartile_sample, 0.75) != 3.25) {
    detail = "interpolated quartiles of [1,2,3,4] are off";
    return false;
  }

  SurveyPaper tiny = test_support::make_paper(
      "oracle-check", "Check", "the cat sat on a mat with nine purple unicorns.");
  double readability = score_clarity(tiny).sub_scores.at("readability");
  if (std::abs(readability * 100.0 - 86.705) > 1e-6) {
    detail = "reading-ease score of the 10/1/13 sentence is off";
    return false;
  }

  std::vector<Reference> paper_refs = {parse_reference("alpha methods", 0),
                                       parse_reference("beta methods", 1),
                                       parse_reference("gamma methods", 2)};
  std::vector<Reference> original_refs = {parse_reference("alpha methods", 0),
                                          parse_reference("beta methods", 1),
                                          parse_reference("delta methods", 2)};
  OverlapResult overlap = citation_overlap(paper_refs, original_refs);
  if (overlap.jaccard != 0.5 || overlap.coverage != 2.0 / 3.0) {
    detail = "citation overlap of a 2-in-4 split is off";
    return false;
  }

  std::vector<double> diffs{0.2, 0.1, 0.0, -0.3};
  if (meta_contrastive_score(diffs) != 0.625) {
    detail = "tie handling is off: 2 wins + 1 tie over 4 must give 0.625";
    return false;
  }
  return true;
}

// 7: consecutive offline runs are byte-identical, both through the CLI and
// in-process with fresh provider state.
bool check_determinism(const Corpus& corpus, const std::vector<ContrastPair>& pairs,
                       const MetaReport& builtin_report, std::string& detail) {
  TempDir tmp;
  std::string base = "contrast --corpus " + shell_quote(test_support::corpus_dir().string()) +
                     " --reviewer random:7 --subsets 15 --workers 1 --out ";
  std::string first_dir = (tmp.path() / "first").string();
  std::string second_dir = (tmp.path() / "second").string();
  if (run_cli(base + shell_quote(first_dir)) != 0 || run_cli(base + shell_quote(second_dir)) != 0) {
    detail = "contrast command failed";
    return false;
  }
  for (const char* name : {"results.json", "table.csv", "boxplot.svg", "manifest.json"}) {
    std::string first = read_all(std::filesystem::path(first_dir) / name);
    if (first.empty() || first != read_all(std::filesystem::path(second_dir) / name)) {
      detail = std::string(name) + " differs between consecutive runs";
      return false;
    }
  }

  Providers fresh(test_support::fixture_config());
  BuiltinReviewer reviewer(&fresh, &corpus.originals);
  MetaReport again = run_contrast(reviewer, pairs, kDefaultSubsets, &fresh, 1);
  RunManifest manifest;
  if (results_json(builtin_report, manifest) != results_json(again, manifest)) {
    detail = "in-process reruns disagree";
    return false;
  }
  return true;
}

// 8: the word limit accepts exactly 2000 words and flags 2001, in-process
// and through the CLI exit code.
bool check_word_limit(std::string& detail) {
  auto build = [](std::size_t filler) {
    std::string body;
    for (std::size_t i = 0; i < filler; ++i) body += "word ";
    return test_support::make_paper("limit-check", "Limit", body);
  };
  std::size_t overhead = word_count(build(1000)) - 1000;
  SurveyPaper at_limit = build(2000 - overhead);
  SurveyPaper over_limit = build(2001 - overhead);
  if (word_count(at_limit) != 2000 || word_count(over_limit) != 2001) {
    detail = "could not construct papers of exactly 2000 and 2001 words";
    return false;
  }
  LengthCheck ok = validate_length(at_limit, 2000);
  LengthCheck violation = validate_length(over_limit, 2000);
  if (!ok.ok || violation.ok || violation.actual != 2001 || violation.limit != 2000) {
    detail = "length validation misjudged the boundary";
    return false;
  }

  TempDir tmp;
  auto prompt = tmp.write("prompt.json", R"({"id": "prompt-limit", "text": "Survey the limit."})");
  auto good_paper = tmp.write("at.md", at_limit.raw);
  auto long_paper = tmp.write("over.md", over_limit.raw);
  std::string base = "score --reviewer random:1 --word-limit 2000 --prompt " +
                     shell_quote(prompt.string()) + " --out ";
  if (run_cli(base + shell_quote((tmp.path() / "at.json").string()) + " --paper " +
              shell_quote(good_paper.string())) != 0) {
    detail = "2000-word paper did not exit 0";
    return false;
  }
  if (run_cli(base + shell_quote((tmp.path() / "over.json").string()) + " --paper " +
              shell_quote(long_paper.string())) != 2) {
    detail = "2001-word paper did not exit 2";
    return false;
  }
  if (read_all(tmp.path() / "at.json").find("\"ok\": true") == std::string::npos ||
      read_all(tmp.path() / "over.json").find("\"ok\": false") == std::string::npos) {
    detail = "review json does not flag the violation";
    return false;
  }
  return true;
}

// 9: external reviewer faults map to distinct errors, and faulty pairs are
// excluded from the statistics while being counted as failures.
bool check_external_faults(const std::vector<ContrastPair>& pairs, std::string& detail) {
  using std::chrono::milliseconds;
  const std::string stub = test_support::stub_path();
  const ContrastPair& sample = pairs.front();

  ExternalProcessReviewer healthy(stub + " ok", milliseconds(10000));
  Review review = healthy.review(sample.good, sample.prompt);
  if (review.scores.size() != 5 || review.overall < 0.0 || review.overall > 1.0 ||
      review.justification.empty()) {
    detail = "well-formed stub output did not produce a full review";
    return false;
  }
  if (!fails_with(Err::ProtocolViolation, [&] {
        ExternalProcessReviewer broken(stub + " missing", milliseconds(10000));
        broken.review(sample.good, sample.prompt);
      })) {
    detail = "a missing criterion was not a protocol violation";
    return false;
  }
  if (!fails_with(Err::ScoreOutOfRange, [&] {
        ExternalProcessReviewer broken(stub + " range", milliseconds(10000));
        broken.review(sample.good, sample.prompt);
      })) {
    detail = "a score of 1.5 was not out of range";
    return false;
  }
  if (!fails_with(Err::ReviewerTimeout, [&] {
        ExternalProcessReviewer silent(stub + " hang", milliseconds(300));
        silent.review(sample.good, sample.prompt);
      })) {
    detail = "a hanging reviewer did not time out";
    return false;
  }

  std::vector<ContrastPair> six(pairs.begin(), pairs.begin() + 6);
  ExternalProcessReviewer flaky(stub + " flaky", milliseconds(10000));
  MetaReport report = run_contrast(flaky, six, 1, nullptr, 1);
  // The stub garbles every third request and the child restarts after each
  // failure, so exactly the 2nd, 4th and 6th pairs fail.
  std::set<std::string> expected = {six[1].pair_id, six[3].pair_id, six[5].pair_id};
  std::set<std::string> failed;
  for (const PairFailure& f : report.failures) failed.insert(f.pair_id);
  if (failed != expected || report.n_pairs != 3) {
    detail = "flaky run did not fail exactly the 2nd, 4th and 6th pairs";
    return false;
  }
  for (const CriterionReport& r : report.criteria) {
    if (r.n != 3) {
      detail = r.criterion + " statistics include failed pairs";
      return false;
    }
  }
  if (report.diffs.size() != 18) {  // 3 surviving pairs x 6 rows
    detail = "diff records include failed pairs";
    return false;
  }
  for (const DiffRecord& d : report.diffs) {
    if (failed.count(d.pair_id) != 0) {
      detail = "a failed pair left diff records behind";
      return false;
    }
  }
  return true;
}

}  // namespace

int main() {
  unsetenv("SOURCE_DATE_EPOCH");  // manifests must be reproducible by default
  bool all_ok = true;
  try {
    Corpus corpus = load_corpus(test_support::corpus_dir());
    Providers providers(test_support::fixture_config());
    std::vector<ContrastPair> pairs = collect_pairs(corpus);
    if (pairs.size() != 270) {
      std::printf("FAIL: 0 corpus does not provide 270 contrast pairs\n");
      return 1;
    }

    std::string detail;
    all_ok &= gate(1, "seeded random reviewers score at chance on the pair corpus",
                   check_random_baseline(pairs, detail), detail);
    all_ok &= gate(2, "the label oracle scores 1.0, inverted 0.0, and side swaps complement",
                   check_oracle_bounds(pairs, detail), detail);

    BuiltinReviewer builtin(&providers, &corpus.originals);
    MetaReport builtin_report = run_contrast(builtin, pairs, kDefaultSubsets, &providers, 1);
    all_ok &= gate(3, "the scoring reviewer separates every targeted corruption",
                   check_targeted_separation(builtin_report, detail), detail);
    all_ok &= gate(4, "subset scores form 15 blocks of 18 and drive the stderr",
                   check_subsets(builtin_report, detail), detail);
    all_ok &= gate(5, "matched prompts beat rotated prompts on every relevance sub-score",
                   check_prompt_sensitivity(corpus, providers, detail), detail);
    all_ok &= gate(6, "component-level oracles hold",
                   check_component_oracles(detail), detail);
    all_ok &= gate(7, "consecutive offline runs are byte-identical",
                   check_determinism(corpus, pairs, builtin_report, detail), detail);
    all_ok &= gate(8, "the word limit accepts 2000 words and flags 2001",
                   check_word_limit(detail), detail);
    all_ok &= gate(9, "external reviewer faults are classified and excluded",
                   check_external_faults(pairs, detail), detail);
  } catch (const std::exception& e) {
    std::printf("FAIL: unexpected error: %s\n", e.what());
    return 1;
  }
  return all_ok ? 0 : 1;
}
