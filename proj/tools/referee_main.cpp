#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "referee/corpus.hpp"
#include "referee/corruptor.hpp"
#include "referee/errors.hpp"
#include "referee/report.hpp"

namespace {

using namespace referee;

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Err::IoError, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Flags shared by every subcommand. Precedence: flag > config file > corpus
// convention > built-in default.
struct CommonOpts {
  std::string config_path;
  std::string corpus_dir;
  std::string scholar_path;
  std::string lexicon_path;
  std::string donors_dir;
  std::string cache_dir;
  int timeout_ms = 0;   // 0 = keep configured value
  int retries = -1;     // -1 = keep configured value
  int workers = -1;     // -1 = keep configured value
};

void add_common_flags(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "JSON run configuration");
  cmd->add_option("--corpus", opts.corpus_dir,
                  "corpus directory; also supplies fixture/lexicon/donor defaults");
  cmd->add_option("--scholar", opts.scholar_path, "title-search fixture (JSON)");
  cmd->add_option("--lexicon", opts.lexicon_path, "flagged-token lexicon (text)");
  cmd->add_option("--donors", opts.donors_dir, "donor material directory");
  cmd->add_option("--cache-dir", opts.cache_dir, "persistent provider cache directory");
  cmd->add_option("--timeout-ms", opts.timeout_ms, "provider timeout in milliseconds");
  cmd->add_option("--retries", opts.retries, "provider retries on failure");
}

RunConfig resolve_config(const CommonOpts& opts) {
  RunConfig rc;
  if (!opts.config_path.empty()) rc = load_run_config(opts.config_path);

  if (!opts.corpus_dir.empty()) {
    std::filesystem::path root(opts.corpus_dir);
    if (rc.providers.scholar_fixture_path.empty()) {
      rc.providers.scholar_fixture_path = (root / "fixtures" / "scholar.json").string();
    }
    if (rc.providers.lexicon_path.empty()) {
      rc.providers.lexicon_path = (root / "fixtures" / "lexicon.txt").string();
    }
    if (rc.donors_dir.empty()) {
      rc.donors_dir = (root / "donors").string();
    }
  }

  if (!opts.scholar_path.empty()) rc.providers.scholar_fixture_path = opts.scholar_path;
  if (!opts.lexicon_path.empty()) rc.providers.lexicon_path = opts.lexicon_path;
  if (!opts.donors_dir.empty()) rc.donors_dir = opts.donors_dir;
  if (!opts.cache_dir.empty()) rc.providers.cache_dir = opts.cache_dir;
  if (opts.timeout_ms > 0) rc.providers.timeout_ms = opts.timeout_ms;
  if (opts.retries >= 0) rc.providers.retries = opts.retries;
  if (opts.workers >= 0) rc.workers = opts.workers;
  return rc;
}

int effective_workers(const RunConfig& rc) {
  if (rc.workers > 0) return rc.workers;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
  } else {
    write_text_file(out_path, content);
  }
}

struct ScoreOpts {
  CommonOpts common;
  std::string paper_path;
  std::string prompt_path;
  std::string original_path;
  std::string reviewer_spec = "builtin";
  std::string out_path;
  int reviewer_timeout_ms = 0;
  std::size_t word_limit = 0;  // 0 = keep configured value
};

int run_score(const ScoreOpts& opts) {
  RunConfig rc = resolve_config(opts.common);
  if (opts.word_limit > 0) rc.word_limit = opts.word_limit;

  std::optional<Corpus> corpus;
  if (!opts.common.corpus_dir.empty()) corpus = load_corpus(opts.common.corpus_dir);

  SurveyPaper paper = parse_paper(read_file(opts.paper_path));

  Prompt prompt;
  if (!opts.prompt_path.empty()) {
    prompt = load_prompt_file(opts.prompt_path);
  } else if (corpus) {
    const Prompt* found = corpus->find_prompt(paper.prompt_id);
    if (found == nullptr) {
      fail(Err::ConfigError,
           "paper " + paper.id + " names no prompt known to the corpus; pass --prompt");
    }
    prompt = *found;
  } else {
    fail(Err::ConfigError, "scoring needs --prompt or --corpus to resolve the prompt");
  }

  OriginalIndex local_originals;
  const OriginalIndex* originals = nullptr;
  bool originals_present = false;
  if (!opts.original_path.empty()) {
    SurveyPaper original = parse_paper(read_file(opts.original_path));
    if (!prompt.source_paper_id.empty() && prompt.source_paper_id != original.id) {
      fail(Err::ConfigError, "--original is " + original.id + " but the prompt names " +
                                 prompt.source_paper_id);
    }
    prompt.source_paper_id = original.id;
    local_originals.add(std::move(original));
    originals = &local_originals;
    originals_present = true;
  } else if (corpus && corpus->originals_present) {
    originals = &corpus->originals;
    originals_present = true;
  }

  Providers providers(rc.providers);
  ReviewerHandle handle = ReviewerHandle::parse(opts.reviewer_spec);
  if (opts.reviewer_timeout_ms > 0) {
    handle.timeout = std::chrono::milliseconds(opts.reviewer_timeout_ms);
  }
  std::unique_ptr<Reviewer> reviewer = make_reviewer(handle, &providers, originals);

  LengthCheck length = validate_length(paper, rc.word_limit);
  Review review = reviewer->review(paper, prompt);

  std::string corpus_fp = corpus ? corpus_fingerprint(opts.common.corpus_dir) : "";
  RunManifest manifest =
      make_manifest(rc.providers, reviewer->id(), corpus_fp, originals_present);
  emit(opts.out_path, review_json(review, length, manifest));

  if (!length.ok) {
    std::cerr << "length violation: " << length.actual << " words exceed the limit of "
              << length.limit << "\n";
    return 2;
  }
  return 0;
}

struct CorruptOpts {
  CommonOpts common;
  std::string paper_path;
  std::string target;
  std::string original_path;
  std::string out_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
  double intensity = 0.0;
  bool intensity_set = false;
};

int run_corrupt(const CorruptOpts& opts) {
  RunConfig rc = resolve_config(opts.common);

  std::optional<Corpus> corpus;
  if (!opts.common.corpus_dir.empty()) corpus = load_corpus(opts.common.corpus_dir);

  SurveyPaper paper = parse_paper(read_file(opts.paper_path));

  std::optional<SurveyPaper> original;
  if (!opts.original_path.empty()) {
    original = parse_paper(read_file(opts.original_path));
  } else if (corpus && corpus->originals_present && !paper.prompt_id.empty()) {
    if (const Prompt* prompt = corpus->find_prompt(paper.prompt_id);
        prompt != nullptr && !prompt->source_paper_id.empty()) {
      if (const SurveyPaper* found = corpus->originals.find(prompt->source_paper_id)) {
        original = *found;
      }
    }
  }

  CorruptionSpec spec;
  spec.target = opts.target;
  spec.seed = opts.seed_set ? opts.seed : rc.seed;
  spec.intensity = opts.intensity_set ? opts.intensity : rc.intensity;

  std::optional<ScholarIndex> scholar;
  if (spec.target == "soundness") {
    if (rc.providers.scholar_fixture_path.empty()) {
      fail(Err::FixtureMissing, "soundness corruption needs --scholar or --corpus");
    }
    scholar = ScholarIndex::load(rc.providers.scholar_fixture_path);
  }
  std::optional<Lexicon> lexicon;
  if (spec.target == "responsibility") {
    if (rc.providers.lexicon_path.empty()) {
      fail(Err::LexiconMissing, "responsibility corruption needs --lexicon or --corpus");
    }
    lexicon = Lexicon::load(rc.providers.lexicon_path);
  }
  DonorPool donors;
  if (spec.target == "relevance" || spec.target == "contribution") {
    if (rc.donors_dir.empty()) {
      fail(Err::DonorPoolEmpty, spec.target + " corruption needs --donors or --corpus");
    }
    donors = DonorPool::load_directory(rc.donors_dir);
  }

  Corruptor corruptor(scholar ? &*scholar : nullptr, lexicon ? &*lexicon : nullptr,
                      std::move(donors));
  SurveyPaper bad = corruptor.corrupt(paper, spec, original ? &*original : nullptr);
  emit(opts.out_path, bad.raw);
  return 0;
}

struct ContrastOpts {
  CommonOpts common;
  std::string reviewer_spec = "builtin";
  std::string out_dir = "contrast-report";
  std::size_t subsets = 0;  // 0 = keep configured value
  std::uint64_t seed = 0;
  bool seed_set = false;
  double intensity = 0.0;
  bool intensity_set = false;
  int reviewer_timeout_ms = 0;
};

int run_contrast(const ContrastOpts& opts) {
  if (opts.common.corpus_dir.empty()) {
    fail(Err::ConfigError, "contrast needs --corpus");
  }
  RunConfig rc = resolve_config(opts.common);
  if (opts.subsets > 0) rc.subsets = opts.subsets;
  if (opts.seed_set) rc.seed = opts.seed;
  if (opts.intensity_set) rc.intensity = opts.intensity;

  Corpus corpus = load_corpus(opts.common.corpus_dir);
  Providers providers(rc.providers);

  std::vector<ContrastPair> pairs = collect_pairs(corpus);
  if (pairs.empty()) {
    // No pre-generated corrupted papers: derive the pairs on the fly.
    if (rc.donors_dir.empty() || !std::filesystem::is_directory(rc.donors_dir)) {
      fail(Err::DonorPoolEmpty,
           "corpus has no bad papers and no donor directory to generate them from");
    }
    Corruptor corruptor(&providers.scholar_index(), &providers.lexicon(),
                        DonorPool::load_directory(rc.donors_dir));
    std::vector<std::string> targets(std::begin(kCriterionNames), std::end(kCriterionNames));
    pairs = make_pair_corpus(corruptor, good_entries(corpus), targets, rc.seed, rc.intensity);
  }

  ReviewerHandle handle = ReviewerHandle::parse(opts.reviewer_spec);
  if (opts.reviewer_timeout_ms > 0) {
    handle.timeout = std::chrono::milliseconds(opts.reviewer_timeout_ms);
  }
  const OriginalIndex* originals = corpus.originals_present ? &corpus.originals : nullptr;
  std::unique_ptr<Reviewer> reviewer = make_reviewer(handle, &providers, originals);

  bool can_judge_text =
      rc.providers.toxicity_mode == ToxicityMode::remote || !rc.providers.lexicon_path.empty();
  MetaReport report = referee::run_contrast(*reviewer, pairs, rc.subsets,
                                             can_judge_text ? &providers : nullptr,
                                             effective_workers(rc));

  RunManifest manifest = make_manifest(rc.providers, reviewer->id(),
                                       corpus_fingerprint(opts.common.corpus_dir),
                                       corpus.originals_present);
  write_contrast_bundle(opts.out_dir, report, manifest);
  std::cout << table_csv(report);
  if (!report.failures.empty()) {
    std::cerr << report.failures.size() << " of " << pairs.size()
              << " pairs failed and were excluded; see results.json\n";
  }
  return 0;
}

struct VerifyRefsOpts {
  CommonOpts common;
  std::string paper_path;
};

int run_verify_refs(const VerifyRefsOpts& opts) {
  RunConfig rc = resolve_config(opts.common);
  SurveyPaper paper = parse_paper(read_file(opts.paper_path));
  Providers providers(rc.providers);

  if (paper.references.empty()) {
    std::cout << "no references\n";
    return 0;
  }
  std::size_t found = 0;
  for (const Reference& ref : paper.references) {
    LookupResult result = providers.lookup_reference(ref);
    if (result.found()) ++found;
    std::cout << (result.found() ? "FOUND   " : "MISSING ") << "[" << ref.index + 1 << "] "
              << ref.title;
    if (result.found() && result.matched_title != ref.title) {
      std::cout << " -> " << result.matched_title;
    }
    std::cout << "\n";
  }
  char ratio[32];
  std::snprintf(ratio, sizeof(ratio), "%.6f",
                static_cast<double>(found) / static_cast<double>(paper.references.size()));
  std::cout << "correctness: " << ratio << " (" << found << "/" << paper.references.size()
            << ")\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"offline review harness for survey papers"};
  app.require_subcommand(1);

  ScoreOpts score_opts;
  CLI::App* score = app.add_subcommand("score", "review one paper against a prompt");
  score->add_option("--paper", score_opts.paper_path, "paper file")->required();
  score->add_option("--prompt", score_opts.prompt_path, "prompt JSON file");
  score->add_option("--original", score_opts.original_path,
                    "original survey for reference coverage");
  score->add_option("--reviewer", score_opts.reviewer_spec,
                    "builtin | random:SEED | cmd:COMMAND | http(s)://URL");
  score->add_option("--out", score_opts.out_path, "write the review here instead of stdout");
  score->add_option("--reviewer-timeout-ms", score_opts.reviewer_timeout_ms,
                    "deadline for external reviewers");
  score->add_option("--word-limit", score_opts.word_limit, "length validation limit");
  add_common_flags(score, score_opts.common);

  CorruptOpts corrupt_opts;
  CLI::App* corrupt = app.add_subcommand("corrupt", "damage one criterion of a paper");
  corrupt->add_option("--paper", corrupt_opts.paper_path, "paper file")->required();
  corrupt->add_option("--target", corrupt_opts.target, "criterion to damage")->required();
  corrupt->add_option("--original", corrupt_opts.original_path,
                      "original survey (contribution targets)");
  corrupt->add_option("--out", corrupt_opts.out_path, "write the corrupted paper here");
  corrupt->add_option("--seed", corrupt_opts.seed, "corruption seed")
      ->each([&](const std::string&) { corrupt_opts.seed_set = true; });
  corrupt->add_option("--intensity", corrupt_opts.intensity, "fraction of affected units (0,1]")
      ->each([&](const std::string&) { corrupt_opts.intensity_set = true; });
  add_common_flags(corrupt, corrupt_opts.common);

  ContrastOpts contrast_opts;
  CLI::App* contrast = app.add_subcommand("contrast", "score a reviewer on good/bad pairs");
  contrast->add_option("--reviewer", contrast_opts.reviewer_spec,
                       "builtin | random:SEED | cmd:COMMAND | http(s)://URL");
  contrast->add_option("--out", contrast_opts.out_dir, "report bundle directory");
  contrast->add_option("--subsets", contrast_opts.subsets, "subsets for the stderr estimate");
  contrast->add_option("--seed", contrast_opts.seed, "seed for on-the-fly pair generation")
      ->each([&](const std::string&) { contrast_opts.seed_set = true; });
  contrast->add_option("--intensity", contrast_opts.intensity,
                       "intensity for on-the-fly pair generation")
      ->each([&](const std::string&) { contrast_opts.intensity_set = true; });
  contrast->add_option("--workers", contrast_opts.common.workers, "parallel review workers");
  contrast->add_option("--reviewer-timeout-ms", contrast_opts.reviewer_timeout_ms,
                       "deadline for external reviewers");
  add_common_flags(contrast, contrast_opts.common);

  VerifyRefsOpts verify_opts;
  CLI::App* verify = app.add_subcommand("verify-refs", "look up every reference of a paper");
  verify->add_option("--paper", verify_opts.paper_path, "paper file")->required();
  add_common_flags(verify, verify_opts.common);

  CLI11_PARSE(app, argc, argv);

  try {
    if (score->parsed()) return run_score(score_opts);
    if (corrupt->parsed()) return run_corrupt(corrupt_opts);
    if (contrast->parsed()) return run_contrast(contrast_opts);
    if (verify->parsed()) return run_verify_refs(verify_opts);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
