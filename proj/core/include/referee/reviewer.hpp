#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "referee/scorers.hpp"

namespace referee {

// A complete review of one paper: the five criterion scores in canonical
// order, their unweighted mean, and a non-empty textual justification.
struct Review {
  std::string paper_id;
  std::string reviewer_id;
  std::vector<CriterionScore> scores;
  double overall = 0.0;
  std::string justification;

  const CriterionScore& criterion(std::string_view name) const;
};

// "relevance: 0.97 (alignment between prompt and content). ..." for each
// criterion in canonical order.
std::string render_justification(const std::vector<CriterionScore>& scores);

// Originals of source papers, keyed by paper id. The scoring reviewer uses
// this to resolve a prompt's source_paper_id for reference coverage.
class OriginalIndex {
 public:
  void add(SurveyPaper paper);
  const SurveyPaper* find(const std::string& id) const;
  std::size_t size() const { return papers_.size(); }

 private:
  std::map<std::string, SurveyPaper> papers_;
};

class Reviewer {
 public:
  virtual ~Reviewer() = default;
  virtual Review review(const SurveyPaper& paper, const Prompt& prompt) = 0;
  virtual std::string id() const = 0;
  // False when requests must be serialized (single-process reviewers).
  virtual bool concurrent_safe() const { return true; }
};

// Deterministic offline reviewer built from the five criterion scorers.
// When the prompt names a source paper present in `originals`, contribution
// gains its reference-coverage sub-score; a named but absent original is an
// error (MissingOriginal). A null index simply omits coverage.
class BuiltinReviewer : public Reviewer {
 public:
  BuiltinReviewer(const Providers* providers, const OriginalIndex* originals);
  Review review(const SurveyPaper& paper, const Prompt& prompt) override;
  std::string id() const override { return "builtin"; }

 private:
  const Providers* providers_;
  const OriginalIndex* originals_;
};

// Seeded uniform scores, keyed by (seed, paper id, criterion, sub-criterion):
// the same paper always receives the same review, and scores do not depend
// on evaluation order.
Review random_review(std::uint64_t seed, const SurveyPaper& paper);

class RandomReviewer : public Reviewer {
 public:
  explicit RandomReviewer(std::uint64_t seed) : seed_(seed) {}
  Review review(const SurveyPaper& paper, const Prompt& prompt) override;
  std::string id() const override { return "random:" + std::to_string(seed_); }

 private:
  std::uint64_t seed_;
};

// Calibration baseline that reads corruption provenance labels instead of
// the content: corrupted papers score 0.1 on every criterion, clean papers
// 0.9 (swapped when inverted). Meta-evaluation of this reviewer bounds the
// contrastive score from above (1.0) and below (0.0 when inverted).
class LabelOracleReviewer : public Reviewer {
 public:
  explicit LabelOracleReviewer(bool inverted = false) : inverted_(inverted) {}
  Review review(const SurveyPaper& paper, const Prompt& prompt) override;
  std::string id() const override { return inverted_ ? "oracle:inverted" : "oracle"; }

 private:
  bool inverted_;
};

// One request line: {"type":"review","paper":{...},"prompt":"..."}. The
// paper object carries id, title, abstract, sections and raw reference
// entries; front-matter extras (corruption provenance) are deliberately
// withheld from external reviewers.
std::string wire_request(const SurveyPaper& paper, const Prompt& prompt);

// Validates a response line strictly: exactly the five criteria, every score
// and the overall inside [0,1] (ScoreOutOfRange), overall equal to the
// criterion mean within 1e-6 and a non-empty text (ProtocolViolation).
// Out-of-contract values are rejected, never clamped.
Review parse_wire_response(const std::string& line, const std::string& paper_id,
                           const std::string& reviewer_id);

inline constexpr std::chrono::milliseconds kDefaultReviewerTimeout{120000};

// Speaks the wire protocol with a spawned subprocess over stdin/stdout,
// newline-delimited JSON, one request at a time. The child is kept alive
// across requests and killed on timeout (ReviewerTimeout); a child that
// exits or writes garbage raises ProtocolViolation. The process is
// respawned on the next request after a failure.
class ExternalProcessReviewer : public Reviewer {
 public:
  explicit ExternalProcessReviewer(
      std::string command, std::chrono::milliseconds timeout = kDefaultReviewerTimeout);
  ~ExternalProcessReviewer() override;

  ExternalProcessReviewer(const ExternalProcessReviewer&) = delete;
  ExternalProcessReviewer& operator=(const ExternalProcessReviewer&) = delete;

  Review review(const SurveyPaper& paper, const Prompt& prompt) override;
  std::string id() const override { return "cmd:" + command_; }
  bool concurrent_safe() const override { return false; }

 private:
  void spawn();
  void terminate_child();

  std::string command_;
  std::chrono::milliseconds timeout_;
  int pid_ = -1;
  int stdin_fd_ = -1;
  int stdout_fd_ = -1;
  std::string buffer_;
};

// POSTs the request line to an HTTP endpoint; the response body is the wire
// response. Timeouts map to ReviewerTimeout, connection failures to
// RemoteUnavailable, any non-200 status to ProtocolViolation.
class HttpReviewer : public Reviewer {
 public:
  explicit HttpReviewer(std::string endpoint,
                        std::chrono::milliseconds timeout = kDefaultReviewerTimeout);
  Review review(const SurveyPaper& paper, const Prompt& prompt) override;
  std::string id() const override { return endpoint_; }

 private:
  std::string endpoint_;
  std::chrono::milliseconds timeout_;
};

// Parsed reviewer selector: builtin | random:SEED | cmd:COMMAND | http(s) URL.
struct ReviewerHandle {
  enum class Kind { builtin, random, command, http };
  Kind kind = Kind::builtin;
  std::uint64_t seed = 0;
  std::string target;  // command line or endpoint
  std::chrono::milliseconds timeout = kDefaultReviewerTimeout;

  static ReviewerHandle parse(std::string_view spec);  // ConfigError
};

// `providers` is required for the builtin kind and ignored otherwise.
std::unique_ptr<Reviewer> make_reviewer(const ReviewerHandle& handle,
                                        const Providers* providers,
                                        const OriginalIndex* originals);

}  // namespace referee
