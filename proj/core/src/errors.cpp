#include "referee/errors.hpp"

namespace referee {

const char* err_name(Err code) {
  switch (code) {
    case Err::MissingFrontMatter: return "MissingFrontMatter";
    case Err::MissingAbstract: return "MissingAbstract";
    case Err::MissingTitle: return "MissingTitle";
    case Err::EmptyWord: return "EmptyWord";
    case Err::EmptyText: return "EmptyText";
    case Err::RemoteUnavailable: return "RemoteUnavailable";
    case Err::LexiconMissing: return "LexiconMissing";
    case Err::FixtureMissing: return "FixtureMissing";
    case Err::CompletionDisabled: return "CompletionDisabled";
    case Err::CacheIOError: return "CacheIOError";
    case Err::DimensionMismatch: return "DimensionMismatch";
    case Err::ZeroVector: return "ZeroVector";
    case Err::EmptyBody: return "EmptyBody";
    case Err::MissingOriginal: return "MissingOriginal";
    case Err::MissingCriterion: return "MissingCriterion";
    case Err::DuplicateCriterion: return "DuplicateCriterion";
    case Err::ReviewerTimeout: return "ReviewerTimeout";
    case Err::ProtocolViolation: return "ProtocolViolation";
    case Err::ScoreOutOfRange: return "ScoreOutOfRange";
    case Err::EmptyInput: return "EmptyInput";
    case Err::FewerPairsThanSubsets: return "FewerPairsThanSubsets";
    case Err::DonorPoolEmpty: return "DonorPoolEmpty";
    case Err::UnknownTarget: return "UnknownTarget";
    case Err::IoError: return "IoError";
    case Err::ConfigError: return "ConfigError";
  }
  return "UnknownError";
}

Error::Error(Err code, const std::string& message)
    : std::runtime_error(std::string(err_name(code)) + ": " + message), code_(code) {}

void fail(Err code, const std::string& message) { throw Error(code, message); }

}  // namespace referee
