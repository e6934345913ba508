#pragma once

#include <stdexcept>
#include <string>

namespace referee {

// Every failure the library reports carries one of these codes so callers
// (and tests) can branch on the condition instead of matching message text.
enum class Err {
  // document parsing
  MissingFrontMatter,
  MissingAbstract,
  MissingTitle,
  EmptyWord,
  // providers
  EmptyText,
  RemoteUnavailable,
  LexiconMissing,
  FixtureMissing,
  CompletionDisabled,
  CacheIOError,
  // scoring
  DimensionMismatch,
  ZeroVector,
  EmptyBody,
  MissingOriginal,
  MissingCriterion,
  DuplicateCriterion,
  // external reviewers
  ReviewerTimeout,
  ProtocolViolation,
  ScoreOutOfRange,
  // statistics
  EmptyInput,
  FewerPairsThanSubsets,
  // corruption
  DonorPoolEmpty,
  UnknownTarget,
  // files and configuration
  IoError,
  ConfigError,
};

const char* err_name(Err code);

class Error : public std::runtime_error {
 public:
  Error(Err code, const std::string& message);
  Err code() const { return code_; }

 private:
  Err code_;
};

[[noreturn]] void fail(Err code, const std::string& message);

}  // namespace referee
